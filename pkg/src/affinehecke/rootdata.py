"""Root data on a pair of dual integer lattices.

A root datum here is purely combinatorial: a lattice ``X = Z^rank``, a dual
lattice ``Y = Z^rank`` joined to it by an explicit unimodular pairing, a
finite set of roots in ``X`` with matching coroots in ``Y``, and a choice of
simple roots.  Everything downstream (affine Weyl groups, Hecke algebras with
unequal parameters, trace generating functions) is built from this data.

Vectors are plain tuples of ints, written in the chosen bases of ``X`` and
``Y``; the pairing of ``x`` with ``y`` is ``x^T P y`` for the integer matrix
``P`` stored on the datum.  The preset table covers the rank-1 and rank-2
cases used throughout the test-suite plus the two parameterised families
("BnCn(n)" with a non-reduced extension, "GLn(n)" with an infinite
length-zero subgroup).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

Vec = tuple[int, ...]

#: Safety bound for root generation: a closure that exceeds this many roots
#: is rejected rather than pursued.
MAX_ROOTS = 1000

PRESET_NAMES = ("A1-weight", "A1-root", "A2", "B2", "C2", "G2", "BnCn(n)", "GLn(n)")


class RootSystemError(ValueError):
    """Raised when input data violate the root-datum axioms."""


# ---------------------------------------------------------------------------
# small integer-vector helpers


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vscale(c: int, a: Vec) -> Vec:
    return tuple(c * x for x in a)


def is_zero(a: Vec) -> bool:
    return all(x == 0 for x in a)


# ---------------------------------------------------------------------------
# the datum itself


@dataclass(frozen=True)
class RootDatum:
    """A based root datum: dual lattices, a pairing, roots and coroots.

    ``pairing`` is the integer matrix ``P`` with ``<x, y> = x^T P y``;
    ``roots[i]`` pairs with ``coroots[i]``.  ``labels_hint`` optionally maps
    generator names (``"s1"``, ..., ``"s0"``) to parameter-class names and is
    carried through from JSON input for the label layer to validate.
    """

    rank: int
    pairing: tuple[Vec, ...]
    simple_roots: tuple[Vec, ...]
    simple_coroots: tuple[Vec, ...]
    roots: tuple[Vec, ...]
    coroots: tuple[Vec, ...]
    name: str = ""
    labels_hint: tuple[tuple[str, str], ...] | None = field(default=None, compare=False)

    def pair(self, x: Vec, y: Vec) -> int:
        """The pairing ``<x, y>`` of ``x`` in X with ``y`` in Y."""
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = self.pairing[i]
                total += xi * sum(p * yj for p, yj in zip(row, y))
        return total

    def coroot_of(self, root: Vec) -> Vec:
        return derive(self).coroot[root]

    def root_of(self, coroot: Vec) -> Vec:
        return derive(self).root[coroot]


# ---------------------------------------------------------------------------
# root generation and validation


def generate_roots(
    simple_roots: tuple[Vec, ...],
    simple_coroots: tuple[Vec, ...],
    pairing: tuple[Vec, ...],
) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """Close a simple system under its own reflections.

    Returns the full root/coroot lists (in a deterministic order), or raises
    :class:`RootSystemError` if the input violates the axioms: mismatched
    lengths, ``<alpha, alpha^vee> != 2``, a non-reduced closure, a closure
    that fails to stabilise, or growth past ``MAX_ROOTS``.
    """
    if len(simple_roots) != len(simple_coroots):
        raise RootSystemError("simple roots and coroots must align")
    rank = len(pairing)
    for a in simple_roots:
        if len(a) != rank:
            raise RootSystemError("simple root of wrong rank")
    for b in simple_coroots:
        if len(b) != rank:
            raise RootSystemError("simple coroot of wrong rank")

    def pair(x: Vec, y: Vec) -> int:
        return sum(x[i] * pairing[i][j] * y[j] for i in range(rank) for j in range(rank))

    for a, b in zip(simple_roots, simple_coroots):
        if pair(a, b) != 2:
            raise RootSystemError(f"<alpha, alpha^vee> = {pair(a, b)} != 2 for {a}")
    # simple roots must be linearly independent
    if _rational_rank([list(a) for a in simple_roots]) != len(simple_roots):
        raise RootSystemError("simple roots are linearly dependent")

    found: dict[Vec, Vec] = {}
    for a, b in zip(simple_roots, simple_coroots):
        if a in found:
            raise RootSystemError("duplicate simple root")
        found[a] = b
    frontier = list(simple_roots)
    while frontier:
        nxt: list[Vec] = []
        for root in frontier:
            coroot = found[root]
            for a, b in zip(simple_roots, simple_coroots):
                n = pair(root, b)
                new_root = vsub(root, vscale(n, a))
                new_coroot = vsub(coroot, vscale(pair(a, coroot), b))
                if new_root in found:
                    if found[new_root] != new_coroot:
                        raise RootSystemError("inconsistent coroot assignment in closure")
                else:
                    found[new_root] = new_coroot
                    nxt.append(new_root)
                if len(found) > MAX_ROOTS:
                    raise RootSystemError("root closure exceeded the safety bound")
        frontier = nxt

    roots = tuple(sorted(found))
    coroots = tuple(found[r] for r in roots)
    root_set = set(roots)
    for r in roots:
        if vneg(r) not in root_set:
            raise RootSystemError("root set is not symmetric")
        if vscale(2, r) in root_set:
            raise RootSystemError("root system is not reduced")
        if pair(r, found[r]) != 2:
            raise RootSystemError("closure produced a bad root/coroot pair")
    # full closure check under all (not just simple) reflections
    for r in roots:
        br = found[r]
        for s in roots:
            if vsub(s, vscale(pair(s, br), r)) not in root_set:
                raise RootSystemError("root set is not closed under its reflections")
    return roots, coroots


def _rational_rank(rows: list[list[int]]) -> int:
    mat = [[Fraction(v) for v in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        mat[rank] = [v * inv for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                c = mat[r][col]
                mat[r] = [v - c * p for v, p in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def make_datum(
    rank: int,
    pairing: list[list[int]],
    simple_roots: list[list[int]],
    simple_coroots: list[list[int]],
    name: str = "",
    labels_hint: dict[str, str] | None = None,
) -> RootDatum:
    """Validate inputs, generate the closure, and assemble a datum."""
    P = tuple(tuple(int(v) for v in row) for row in pairing)
    if len(P) != rank or any(len(row) != rank for row in P):
        raise RootSystemError("pairing matrix must be square of size rank")
    if abs(_int_det(P)) != 1:
        raise RootSystemError("pairing matrix must be unimodular")
    sr = tuple(tuple(int(v) for v in a) for a in simple_roots)
    sc = tuple(tuple(int(v) for v in b) for b in simple_coroots)
    roots, coroots = generate_roots(sr, sc, P)
    hint = tuple(sorted(labels_hint.items())) if labels_hint else None
    datum = RootDatum(rank, P, sr, sc, roots, coroots, name=name, labels_hint=hint)
    derive(datum)  # run the derived checks eagerly
    return datum


def _int_det(mat: tuple[Vec, ...]) -> int:
    n = len(mat)
    if n == 0:
        return 1
    rows = [[Fraction(v) for v in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                c = rows[r][col] * inv
                rows[r] = [v - c * p for v, p in zip(rows[r], rows[col])]
    assert det.denominator == 1
    return int(det)


# ---------------------------------------------------------------------------
# derived collections


@dataclass
class DerivedRoots:
    """Positive systems and the non-reduced extension of a datum.

    ``nonreduced_positive`` lists pairs ``(beta, beta^vee)`` over the positive
    part of the possibly non-reduced extension: every positive root together
    with, for each root whose coroot is divisible by 2 in Y, its double
    ``(2*alpha, alpha^vee / 2)``.  ``r1_positive`` keeps only the
    unmultipliable layer (roots whose double is not a root of the extension).
    """

    positive_roots: tuple[Vec, ...]
    positive_coroots: tuple[Vec, ...]
    coroot: dict[Vec, Vec]
    root: dict[Vec, Vec]
    nonreduced_positive: tuple[tuple[Vec, Vec], ...]
    r1_positive: tuple[tuple[Vec, Vec], ...]
    two_rho: Vec
    two_rho_check: Vec
    _coord_cache: dict[Vec, tuple[Fraction, ...] | None]
    _simple_matrix: list[list[Fraction]]

    def root_coordinates(self, datum: RootDatum, x: Vec) -> tuple[Fraction, ...] | None:
        """Coordinates of ``x`` in the simple-root basis, or None if x is
        outside the rational span of the roots."""
        if x in self._coord_cache:
            return self._coord_cache[x]
        coords = _solve_columns(self._simple_matrix, x)
        self._coord_cache[x] = coords
        return coords


def _solve_columns(cols: list[list[Fraction]], x: Vec) -> tuple[Fraction, ...] | None:
    """Solve ``sum_j c_j * cols[j] = x`` exactly; None if inconsistent."""
    m = len(cols)
    n = len(x) if m == 0 else len(cols[0])
    aug = [[cols[j][i] for j in range(m)] + [Fraction(x[i])] for i in range(n)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(m):
        pivot = next((r for r in range(row, n) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(n):
            if r != row and aug[r][col] != 0:
                c = aug[r][col]
                aug[r] = [v - c * p for v, p in zip(aug[r], aug[row])]
        pivots.append((row, col))
        row += 1
    for r in range(row, n):
        if aug[r][m] != 0:
            return None
    coords = [Fraction(0)] * m
    for r, c in pivots:
        coords[c] = aug[r][m]
    return tuple(coords)


@lru_cache(maxsize=None)
def derive(datum: RootDatum) -> DerivedRoots:
    coroot = dict(zip(datum.roots, datum.coroots))
    root = dict(zip(datum.coroots, datum.roots))
    simple_matrix = [[Fraction(a[i]) for i in range(datum.rank)] for a in datum.simple_roots]
    cols = [[Fraction(a[i]) for i in range(datum.rank)] for a in datum.simple_roots]
    cache: dict[Vec, tuple[Fraction, ...] | None] = {}

    positive = []
    for r in datum.roots:
        coords = _solve_columns(cols, r)
        cache[r] = coords
        if coords is None:
            raise RootSystemError("a root lies outside the span of the simple roots")
        if any(c.denominator != 1 for c in coords):
            raise RootSystemError("a root has non-integral simple-root coordinates")
        if all(c >= 0 for c in coords):
            positive.append(r)
        elif not all(c <= 0 for c in coords):
            raise RootSystemError("a root has mixed-sign simple-root coordinates")
    positive.sort()
    positive_roots = tuple(positive)
    positive_coroots = tuple(coroot[r] for r in positive_roots)

    nonreduced = []
    r1 = []
    for r in positive_roots:
        b = coroot[r]
        nonreduced.append((r, b))
        if all(v % 2 == 0 for v in b):
            half = tuple(v // 2 for v in b)
            nonreduced.append((vscale(2, r), half))
            r1.append((vscale(2, r), half))
        else:
            r1.append((r, b))

    two_rho = (0,) * datum.rank
    for r in positive_roots:
        two_rho = vadd(two_rho, r)
    two_rho_check = (0,) * datum.rank
    for b in positive_coroots:
        two_rho_check = vadd(two_rho_check, b)

    for a, b in zip(datum.simple_roots, datum.simple_coroots):
        if datum.pair(two_rho, b) != 2 or datum.pair(a, two_rho_check) != 2:
            raise RootSystemError("2*rho pairing check failed for a simple root")

    return DerivedRoots(
        positive_roots=positive_roots,
        positive_coroots=positive_coroots,
        coroot=coroot,
        root=root,
        nonreduced_positive=tuple(nonreduced),
        r1_positive=tuple(r1),
        two_rho=two_rho,
        two_rho_check=two_rho_check,
        _coord_cache=cache,
        _simple_matrix=cols,
    )


# ---------------------------------------------------------------------------
# reflections, dominance, decomposition


def reflect(datum: RootDatum, root: Vec, x: Vec) -> Vec:
    """Reflection of ``x`` in X through the root: ``x - <x, a^vee> a``."""
    b = datum.coroot_of(root)
    return vsub(x, vscale(datum.pair(x, b), root))


def coreflect(datum: RootDatum, root: Vec, y: Vec) -> Vec:
    """Reflection of ``y`` in Y through the same root: ``y - <a, y> a^vee``."""
    b = datum.coroot_of(root)
    return vsub(y, vscale(datum.pair(root, y), b))


def is_dominant(datum: RootDatum, x: Vec) -> bool:
    return all(datum.pair(x, b) >= 0 for b in datum.simple_coroots)


def dominant_decomposition(datum: RootDatum, x: Vec) -> tuple[Vec, Vec]:
    """Write ``x = y - z`` with ``y``, ``z`` dominant and ``z`` a minimal
    multiple of the positive-root sum.

    ``z = N * 2rho`` where ``N`` is the smallest non-negative integer making
    ``x + z`` dominant; since ``<2rho, a_i^vee> = 2`` this is a max of
    ceilings over the simple coroots.
    """
    n = 0
    for b in datum.simple_coroots:
        v = datum.pair(x, b)
        if v < 0:
            n = max(n, -(v // 2))  # ceil(-v / 2)
    z = vscale(n, derive(datum).two_rho)
    return vadd(x, z), z


def height(datum: RootDatum, x: Vec) -> Fraction:
    """The pairing ``<x, rho^vee>``: on the root lattice this is the sum of
    the simple-root coefficients."""
    return Fraction(datum.pair(x, derive(datum).two_rho_check), 2)


def in_root_lattice(datum: RootDatum, x: Vec) -> bool:
    coords = derive(datum).root_coordinates(datum, x)
    return coords is not None and all(c.denominator == 1 for c in coords)


def in_negative_cone(datum: RootDatum, x: Vec) -> bool:
    """True when ``-x`` is a non-negative integer combination of simple roots."""
    coords = derive(datum).root_coordinates(datum, x)
    return coords is not None and all(c.denominator == 1 and c <= 0 for c in coords)


# ---------------------------------------------------------------------------
# presets


def build_preset(name: str) -> RootDatum:
    """Construct one of the named presets.

    >>> build_preset("A2").rank
    2

    Recognised names: "A1-weight", "A1-root", "A2", "B2", "C2", "G2",
    "BnCn(n)" and "GLn(n)" for explicit n >= 1 (e.g. "BnCn(2)", "GLn(3)").
    """
    if name == "A1-weight":
        return make_datum(1, [[1]], [[2]], [[1]], name=name)
    if name == "A1-root":
        return make_datum(1, [[1]], [[1]], [[2]], name=name)
    if name == "A2":
        return make_datum(2, [[1, 0], [0, 1]], [[1, 0], [0, 1]], [[2, -1], [-1, 2]], name=name)
    if name == "B2":
        # weight lattice of B2: X = Z f1 + Z f2 with f1 = e1, f2 = (e1+e2)/2,
        # Y = Z(e1-e2) + Z(2 e2); the bases are dual, so the pairing is the
        # identity.  alpha1 = e1 - e2 (long), alpha2 = e2 (short).
        return make_datum(2, [[1, 0], [0, 1]], [[2, -2], [-1, 2]], [[1, 0], [0, 1]], name=name)
    if name == "C2":
        # weight lattice of C2 is Z^2 in standard coordinates;
        # alpha1 = e1 - e2 (short), alpha2 = 2 e2 (long).
        return make_datum(2, [[1, 0], [0, 1]], [[1, -1], [0, 2]], [[1, -1], [0, 1]], name=name)
    if name == "G2":
        # simple-root coordinates; alpha1 short, alpha2 long.
        return make_datum(2, [[1, 0], [0, 1]], [[1, 0], [0, 1]], [[2, -3], [-1, 2]], name=name)
    m = re.fullmatch(r"BnCn\((\d+)\)", name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise RootSystemError("BnCn(n) needs n >= 1")
        simple_roots = []
        simple_coroots = []
        for i in range(n - 1):
            e = [0] * n
            e[i], e[i + 1] = 1, -1
            simple_roots.append(list(e))
            simple_coroots.append(list(e))
        last = [0] * n
        last[n - 1] = 1
        simple_roots.append(last)
        simple_coroots.append([2 * v for v in last])
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return make_datum(n, eye, simple_roots, simple_coroots, name=name)
    m = re.fullmatch(r"GLn\((\d+)\)", name)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise RootSystemError("GLn(n) needs n >= 2")
        simple = []
        for i in range(n - 1):
            e = [0] * n
            e[i], e[i + 1] = 1, -1
            simple.append(list(e))
        eye = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return make_datum(n, eye, simple, simple, name=name)
    raise RootSystemError(f"unknown preset {name!r}; try one of {PRESET_NAMES}")


# ---------------------------------------------------------------------------
# JSON interchange


def datum_to_json(datum: RootDatum) -> str:
    obj = {
        "rank": datum.rank,
        "pairing": [list(row) for row in datum.pairing],
        "simple_roots": [list(a) for a in datum.simple_roots],
        "simple_coroots": [list(b) for b in datum.simple_coroots],
    }
    if datum.labels_hint:
        obj["labels"] = dict(datum.labels_hint)
    if datum.name:
        obj["name"] = datum.name
    return json.dumps(obj, separators=(",", ":")) + "\n"


def datum_from_json(text: str) -> RootDatum:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RootSystemError(f"bad datum JSON: {exc}") from exc
    try:
        rank = int(obj["rank"])
        pairing = obj["pairing"]
        simple_roots = obj["simple_roots"]
        simple_coroots = obj["simple_coroots"]
    except (KeyError, TypeError) as exc:
        raise RootSystemError(f"datum JSON missing field: {exc}") from exc
    labels = obj.get("labels")
    if labels is not None and not isinstance(labels, dict):
        raise RootSystemError("datum JSON 'labels' must be an object")
    return make_datum(
        rank,
        pairing,
        simple_roots,
        simple_coroots,
        name=str(obj.get("name", "")),
        labels_hint=labels,
    )
