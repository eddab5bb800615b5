"""The (extended) affine Weyl group of a root datum.

Elements are written ``w t_x`` with ``w`` in the finite Weyl group and ``t_x``
translation by ``x`` in X, so the product rule is

    (w t_x)(w' t_{x'}) = (w w') t_{w'^{-1}(x) + x'}.

The group acts on X by ``(w t_z)(x) = w(x + z)`` and dually on affine roots
``a = (b, k)`` (a coroot plus an integer level, the affine function
``a(x) = <x, b> + k``) by ``(w t_z)(a) = (w(b), k - <z, b>)``.

Lengths are computed by the closed formula

    l(w t_x) = sum_{a > 0, w(a) < 0} |<x, a^vee> + 1|
             + sum_{a > 0, w(a) > 0} |<x, a^vee>|

(sums over finite positive roots), which agrees with the number of positive
affine roots sent to negative ones; both are implemented and cross-checked in
the tests.  The fundamental affine roots are the simple coroots at level 0
plus, per irreducible component, the minimal coroot at level 1; elements of
length 0 form the subgroup ``Omega``, which ``factor_extended`` peels off
without ever enumerating it (it is infinite for the "GLn(n)" presets).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .rootdata import (
    DerivedRoots,
    RootDatum,
    RootSystemError,
    Vec,
    _solve_columns,
    derive,
    vadd,
    vneg,
    vscale,
)

Matrix = tuple[Vec, ...]

#: Safety cap for finite Weyl group enumeration.
MAX_W0 = 100_000


@dataclass(frozen=True)
class FiniteWeylElem:
    """A finite Weyl group element, stored as its action matrices.

    Equality and hashing use only the X-action matrix ``mx``; the Y-action
    ``my`` is determined by it, and ``word`` (a reduced word in the simple
    reflections, when known) is a cache.
    """

    mx: Matrix
    my: Matrix = field(compare=False)
    word: tuple[int, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self.mx))

    def __hash__(self) -> int:
        return self._hash

    def apply_x(self, x: Vec) -> Vec:
        return tuple(sum(row[j] * x[j] for j in range(len(x))) for row in self.mx)

    def apply_y(self, y: Vec) -> Vec:
        return tuple(sum(row[j] * y[j] for j in range(len(y))) for row in self.my)


@dataclass(frozen=True)
class AffineWeylElem:
    """``fin . t_trans``: a finite part followed by a translation."""

    fin: FiniteWeylElem
    trans: Vec

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.fin, self.trans)))

    def __hash__(self) -> int:
        return self._hash

    def is_translation(self) -> bool:
        return all(all(v == (1 if i == j else 0) for j, v in enumerate(row))
                   for i, row in enumerate(self.fin.mx))


@dataclass(frozen=True)
class AffineRoot:
    """A coroot together with an integer level: the affine function
    ``x -> <x, coroot> + level`` on X."""

    coroot: Vec
    level: int


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _transpose(a: Matrix) -> Matrix:
    return tuple(tuple(row[i] for row in a) for i in range(len(a)))


def _identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _int_inverse(mat: Matrix) -> Matrix:
    """Exact inverse of a unimodular integer matrix."""
    n = len(mat)
    aug = [[Fraction(v) for v in row] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                c = aug[r][col]
                aug[r] = [v - c * p for v, p in zip(aug[r], aug[col])]
    out = []
    for i in range(n):
        row = aug[i][n:]
        assert all(v.denominator == 1 for v in row)
        out.append(tuple(int(v) for v in row))
    return tuple(out)


class AffineWeyl:
    """Context object: the affine Weyl group machinery for one datum."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.derived: DerivedRoots = derive(datum)
        self.rank = datum.rank
        self._p = datum.pairing
        self._p_inv = _int_inverse(self._p)
        self._pos_root_set = frozenset(self.derived.positive_roots)
        self._pos_coroot_set = frozenset(self.derived.positive_coroots)
        self.id_fin = FiniteWeylElem(_identity(self.rank), _identity(self.rank), word=())
        self.identity = AffineWeylElem(self.id_fin, (0,) * self.rank)

        self.simple_reflections: list[FiniteWeylElem] = []
        for i, (a, b) in enumerate(zip(datum.simple_roots, datum.simple_coroots)):
            fin = self._reflection_fin(a, b)
            self.simple_reflections.append(
                FiniteWeylElem(fin.mx, fin.my, word=(i,))
            )

        # fundamental affine roots: simple coroots at level 0, then one
        # minimal coroot at level 1 per irreducible component
        self.fundamental: list[AffineRoot] = [
            AffineRoot(b, 0) for b in datum.simple_coroots
        ]
        self.generator_names: list[str] = [f"s{i + 1}" for i in range(len(datum.simple_roots))]
        self._gen_fins: list[FiniteWeylElem] = list(self.simple_reflections)
        self._gen_shifts: list[Vec] = [(0,) * self.rank] * len(datum.simple_roots)
        for ci, comp in enumerate(self._components()):
            high = self._highest_coroot(comp)
            minimal = vneg(high)
            root = self.derived.root[high]  # root of the highest coroot
            beta = vneg(root)               # root of the minimal coroot
            self.fundamental.append(AffineRoot(minimal, 1))
            self.generator_names.append("s0" if ci == 0 else f"s0_{ci + 1}")
            self._gen_fins.append(self._reflection_fin(beta, minimal))
            self._gen_shifts.append(beta)

        self._fin_inv_cache: dict[Matrix, FiniteWeylElem] = {}
        self._length_cache: dict[AffineWeylElem, int] = {}
        self._word_cache: dict[Matrix, tuple[int, ...]] = {}
        self._factor_cache: dict[AffineWeylElem, tuple[AffineWeylElem, tuple[int, ...]]] = {}
        self._step_cache: dict[tuple[AffineWeylElem, int], tuple[AffineWeylElem, bool]] = {}
        self._w0_list: list[FiniteWeylElem] | None = None

    # -- construction helpers ------------------------------------------------

    def _reflection_fin(self, root: Vec, coroot: Vec) -> FiniteWeylElem:
        n = self.rank
        pb = tuple(sum(self._p[j][k] * coroot[k] for k in range(n)) for j in range(n))
        pta = tuple(sum(self._p[k][j] * root[k] for k in range(n)) for j in range(n))
        mx = tuple(
            tuple((1 if i == j else 0) - root[i] * pb[j] for j in range(n))
            for i in range(n)
        )
        my = tuple(
            tuple((1 if i == j else 0) - coroot[i] * pta[j] for j in range(n))
            for i in range(n)
        )
        return FiniteWeylElem(mx, my)

    def _components(self) -> list[list[int]]:
        m = len(self.datum.simple_roots)
        seen = [False] * m
        comps = []
        for start in range(m):
            if seen[start]:
                continue
            comp = [start]
            seen[start] = True
            queue = [start]
            while queue:
                i = queue.pop()
                for j in range(m):
                    if not seen[j] and (
                        self.datum.pair(self.datum.simple_roots[i], self.datum.simple_coroots[j]) != 0
                    ):
                        seen[j] = True
                        comp.append(j)
                        queue.append(j)
            comps.append(sorted(comp))
        return comps

    def _highest_coroot(self, comp: list[int]) -> Vec:
        cols = [[Fraction(v) for v in self.datum.simple_coroots[i]] for i in range(len(self.datum.simple_coroots))]
        best: Vec | None = None
        best_coords: tuple[Fraction, ...] | None = None
        candidates: list[tuple[Vec, tuple[Fraction, ...]]] = []
        for b in self.derived.positive_coroots:
            coords = _solve_columns(cols, b)
            if coords is None:
                raise RootSystemError("coroot outside span of simple coroots")
            support = {i for i, c in enumerate(coords) if c != 0}
            if support <= set(comp):
                candidates.append((b, coords))
                if best_coords is None or sum(coords) > sum(best_coords):
                    best, best_coords = b, coords
        assert best is not None and best_coords is not None
        for _, coords in candidates:
            if any(c > h for c, h in zip(coords, best_coords)):
                raise RootSystemError("component has no highest coroot")
        return best

    # -- group operations ----------------------------------------------------

    def translation(self, x: Vec) -> AffineWeylElem:
        return AffineWeylElem(self.id_fin, tuple(x))

    def simple_affine(self, i: int) -> AffineWeylElem:
        """The generator attached to the i-th fundamental affine root."""
        return AffineWeylElem(self._gen_fins[i], self._gen_shifts[i])

    def fin_mul(self, a: FiniteWeylElem, b: FiniteWeylElem) -> FiniteWeylElem:
        return FiniteWeylElem(_matmul(a.mx, b.mx), _matmul(a.my, b.my))

    def fin_inv(self, a: FiniteWeylElem) -> FiniteWeylElem:
        cached = self._fin_inv_cache.get(a.mx)
        if cached is not None:
            return cached
        # from  M^T P N = P:  M^{-1} = P^{-T} N^T P^T,  N^{-1} = P^{-1} M^T P
        pt = _transpose(self._p)
        pinv_t = _transpose(self._p_inv)
        mx_inv = _matmul(_matmul(pinv_t, _transpose(a.my)), pt)
        my_inv = _matmul(_matmul(self._p_inv, _transpose(a.mx)), self._p)
        out = FiniteWeylElem(mx_inv, my_inv)
        self._fin_inv_cache[a.mx] = out
        return out

    def multiply(self, g: AffineWeylElem, h: AffineWeylElem) -> AffineWeylElem:
        winv = self.fin_inv(h.fin)
        return AffineWeylElem(
            self.fin_mul(g.fin, h.fin),
            vadd(winv.apply_x(g.trans), h.trans),
        )

    def inverse(self, g: AffineWeylElem) -> AffineWeylElem:
        return AffineWeylElem(self.fin_inv(g.fin), vneg(g.fin.apply_x(g.trans)))

    def act_point(self, g: AffineWeylElem, x: Vec) -> Vec:
        """The affine action on X: ``(w t_z)(x) = w(x + z)``."""
        return g.fin.apply_x(vadd(x, g.trans))

    def act_affine_root(self, g: AffineWeylElem, a: AffineRoot) -> AffineRoot:
        return AffineRoot(
            g.fin.apply_y(a.coroot),
            a.level - self.datum.pair(g.trans, a.coroot),
        )

    def affine_root_positive(self, a: AffineRoot) -> bool:
        if a.level != 0:
            return a.level > 0
        return a.coroot in self._pos_coroot_set

    # -- lengths and descents ------------------------------------------------

    def length(self, g: AffineWeylElem) -> int:
        cached = self._length_cache.get(g)
        if cached is not None:
            return cached
        total = 0
        for alpha in self.derived.positive_roots:
            n = self.datum.pair(g.trans, self.derived.coroot[alpha])
            if g.fin.apply_x(alpha) in self._pos_root_set:
                total += abs(n)
            else:
                total += abs(n + 1)
        self._length_cache[g] = total
        return total

    def inversion_levels(self, g: AffineWeylElem) -> list[AffineRoot]:
        """The positive affine roots sent to negative ones by ``g``."""
        out = []
        pos = self._pos_coroot_set
        for b in self.datum.coroots:
            n = self.datum.pair(g.trans, b)
            lo = 0 if b in pos else 1
            for k in range(lo, n):
                out.append(AffineRoot(b, k))
            if n >= lo and g.fin.apply_y(b) not in pos:
                out.append(AffineRoot(b, n))
        return out

    def right_descent(self, g: AffineWeylElem) -> int | None:
        """Lowest index i with ``l(g s_i) < l(g)``, i.e. ``g(a_i) < 0``."""
        for i, a in enumerate(self.fundamental):
            if not self.affine_root_positive(self.act_affine_root(g, a)):
                return i
        return None

    def mult_gen(self, g: AffineWeylElem, i: int) -> AffineWeylElem:
        """Right multiplication ``g s_i`` by a fundamental generator."""
        return self.gen_step(g, i)[0]

    def descends_right(self, g: AffineWeylElem, i: int) -> bool:
        return self.gen_step(g, i)[1]

    def gen_step(self, g: AffineWeylElem, i: int) -> tuple[AffineWeylElem, bool]:
        """``(g s_i, l(g s_i) < l(g))`` with caching; the single hot step of
        every Hecke-algebra fold."""
        key = (g, i)
        cached = self._step_cache.get(key)
        if cached is not None:
            return cached
        s = self._gen_fins[i]
        gs = AffineWeylElem(
            self.fin_mul(g.fin, s),
            vadd(s.apply_x(g.trans), self._gen_shifts[i]),
        )
        down = not self.affine_root_positive(self.act_affine_root(g, self.fundamental[i]))
        out = (gs, down)
        self._step_cache[key] = out
        self._step_cache[(gs, i)] = (g, not down)
        return out

    def factor_extended(self, g: AffineWeylElem) -> tuple[AffineWeylElem, tuple[int, ...]]:
        """Write ``g = omega . s_{i_1} ... s_{i_k}`` with ``l(omega) = 0`` and
        the word reduced (each step raises the length by one)."""
        cached = self._factor_cache.get(g)
        if cached is not None:
            return cached
        om = g
        rev: list[int] = []
        remaining = self.length(g)
        while True:
            i = self.right_descent(om)
            if i is None:
                break
            rev.append(i)
            om = self.mult_gen(om, i)
            remaining -= 1
            if remaining < 0:
                raise RootSystemError("descent peeling failed to terminate")
        if self.length(om) != 0:
            raise RootSystemError("descent-free element has nonzero length")
        out = om, tuple(reversed(rev))
        self._factor_cache[g] = out
        return out

    # -- finite Weyl group ---------------------------------------------------

    def enumerate_w0(self) -> list[FiniteWeylElem]:
        """All finite Weyl group elements, BFS by length, with reduced words."""
        if self._w0_list is not None:
            return self._w0_list
        start = self.id_fin
        seen: dict[Matrix, FiniteWeylElem] = {start.mx: start}
        order = [start]
        frontier = [start]
        while frontier:
            nxt = []
            for w in frontier:
                for i, s in enumerate(self.simple_reflections):
                    u = self.fin_mul(w, s)
                    if u.mx not in seen:
                        assert w.word is not None
                        uw = FiniteWeylElem(u.mx, u.my, word=w.word + (i,))
                        seen[u.mx] = uw
                        order.append(uw)
                        nxt.append(uw)
                        if len(seen) > MAX_W0:
                            raise RootSystemError("finite Weyl group exceeded the safety cap")
            frontier = nxt
        self._w0_list = order
        for w in order:
            assert w.word is not None
            self._word_cache[w.mx] = w.word
        return order

    def longest_element(self) -> FiniteWeylElem:
        order = self.enumerate_w0()
        return order[-1]

    def finite_length(self, w: FiniteWeylElem) -> int:
        return sum(
            1
            for alpha in self.derived.positive_roots
            if w.apply_x(alpha) not in self._pos_root_set
        )

    def fin_word(self, w: FiniteWeylElem) -> tuple[int, ...]:
        """A reduced word for a finite element (cached)."""
        if w.word is not None:
            return w.word
        cached = self._word_cache.get(w.mx)
        if cached is not None:
            return cached
        rev = []
        cur = w
        while True:
            i = next(
                (
                    i
                    for i, a in enumerate(self.datum.simple_roots)
                    if cur.apply_x(a) not in self._pos_root_set
                ),
                None,
            )
            if i is None:
                break
            rev.append(i)
            cur = self.fin_mul(cur, self.simple_reflections[i])
        if cur.mx != self.id_fin.mx:
            raise RootSystemError("finite word peeling did not reach the identity")
        word = tuple(reversed(rev))
        self._word_cache[w.mx] = word
        return word

    def fin_from_word(self, word: tuple[int, ...]) -> FiniteWeylElem:
        out = self.id_fin
        for i in word:
            out = self.fin_mul(out, self.simple_reflections[i])
        return out

    def as_affine(self, w: FiniteWeylElem) -> AffineWeylElem:
        return AffineWeylElem(w, (0,) * self.rank)

    def omega_elements(self, box: int = 2) -> list[AffineWeylElem]:
        """Length-zero elements whose translation part lies in [-box, box].

        For data whose translation lattice equals the root lattice this is
        just the identity; otherwise each coset meeting the scanned window
        contributes one element.
        """
        points: list[Vec] = [()]
        for _ in range(self.rank):
            points = [p + (c,) for p in points for c in range(-box, box + 1)]
        out = []
        for w in self.enumerate_w0():
            for p in points:
                g = AffineWeylElem(w, p)
                if self.length(g) == 0:
                    out.append(g)
        return out

    def elements_up_to_length(self, lmax: int, omega_box: int = 2) -> list[AffineWeylElem]:
        """All elements of length at most ``lmax`` whose length-zero factor
        lies in the scanned window, ordered BFS by length."""
        order = self.omega_elements(omega_box)
        seen = set(order)
        frontier = list(order)
        for _ in range(lmax):
            nxt = []
            for g in frontier:
                for i in range(len(self.fundamental)):
                    gs, down = self.gen_step(g, i)
                    if not down and gs not in seen:
                        seen.add(gs)
                        order.append(gs)
                        nxt.append(gs)
            frontier = nxt
        return order

    # -- orbits and cosets ---------------------------------------------------

    def orbit(self, x: Vec) -> list[Vec]:
        """The finite Weyl orbit of a lattice point, in a stable order."""
        return sorted({w.apply_x(tuple(x)) for w in self.enumerate_w0()})

    def coset_data(
        self, x: Vec
    ) -> tuple[list[FiniteWeylElem], list[FiniteWeylElem], FiniteWeylElem, FiniteWeylElem]:
        """Stabiliser data for a point ``x`` in X.

        Returns ``(W_x, W^x, w_x, w^x)``: the stabiliser of ``x``, the
        minimal-length coset representatives of ``W0 / W_x``, the longest
        stabiliser element, and ``w^x = w0 w_x``.
        """
        x = tuple(x)
        order = self.enumerate_w0()
        stab = [w for w in order if w.apply_x(x) == x]
        best: dict[Vec, FiniteWeylElem] = {}
        for w in order:  # BFS order: first hit per orbit point is shortest
            key = w.apply_x(x)
            if key not in best:
                best[key] = w
        reps = sorted(best.values(), key=lambda w: (len(self.fin_word(w)), self.fin_word(w)))
        w_x = stab[-1]  # BFS order puts the longest stabiliser element last
        w_up = self.fin_mul(self.longest_element(), w_x)
        return stab, reps, w_x, w_up

    # -- serialization -------------------------------------------------------

    def elem_to_obj(self, g: AffineWeylElem) -> dict:
        return {
            "word": [i + 1 for i in self.fin_word(g.fin)],
            "translation": list(g.trans),
        }

    def elem_from_obj(self, obj: dict) -> AffineWeylElem:
        word = tuple(int(i) - 1 for i in obj.get("word", []))
        trans = tuple(int(v) for v in obj.get("translation", (0,) * self.rank))
        if len(trans) != self.rank:
            raise RootSystemError("translation of wrong rank")
        for i in word:
            if not 0 <= i < len(self.simple_reflections):
                raise RootSystemError("word letter out of range")
        fin = self.fin_from_word(word)
        return AffineWeylElem(fin, trans)
