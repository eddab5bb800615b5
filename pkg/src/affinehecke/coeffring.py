"""Exact coefficient arithmetic: Laurent polynomials and parameter labels.

The Hecke parameters live in a Laurent polynomial ring over Q with one
variable ``v_c`` per conjugacy class ``c`` of affine generators; the class
parameter is ``q_c = v_c^2``, and square roots such as ``delta^{1/2}`` or
``q^{1/2}`` for a halved coroot are honest monomials in the ``v_c``.

Two conjugate generators must carry the same parameter, and conjugacy of
generators is detected through the orbits of their fundamental affine roots:
the orbit of ``(b, k)`` consists of the pairs ``(b', k')`` with ``b'`` in the
finite Weyl orbit of ``±b`` and ``k' = ±k`` modulo ``d``, where ``d = 2``
exactly when ``b`` is divisible by 2 in Y and ``d = 1`` otherwise.

For a divisible-by-2 coroot the two ends of the orbit *swap* values: the
level-parity carrying the finite generator's affine root is labelled with the
affine generator's parameter and vice versa.  This crossing is forced by the
requirement that the multiplicative extension of the labels reproduce
``q(s)`` on every generator (each generator's defining product shifts the
level by one, flipping the parity), and it is what makes the translation
weight ``delta`` come out right on the non-reduced presets.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .rootdata import Vec, vneg
from .weyl import AffineRoot, AffineWeyl, AffineWeylElem, FiniteWeylElem


class ExactDivisionError(ArithmeticError):
    """Raised when a Laurent polynomial division has a remainder."""


class LabelConfigError(ValueError):
    """Raised for label assignments that break conjugacy or parse rules."""


# ---------------------------------------------------------------------------
# sparse Laurent polynomials


def _ratio(c):
    """Normalize a rational scalar: plain int when integral (int arithmetic
    is far cheaper than Fraction in the inner loops), Fraction otherwise."""
    if type(c) is int:
        return c
    f = c if isinstance(c, Fraction) else Fraction(c)
    return f.numerator if f.denominator == 1 else f


class LaurentPoly:
    """A Laurent polynomial: sparse map from exponent vectors to rationals.

    Coefficients are int or Fraction (ints whenever the value is integral);
    the two mix freely and compare/hash equal, so no arithmetic path needs
    to care which representation a coefficient is in.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, variables: tuple[str, ...], terms: dict):
        self.vars = variables
        self.terms = {e: c for e, c in terms.items() if c}

    # -- constructors

    @staticmethod
    def zero(variables: tuple[str, ...]) -> "LaurentPoly":
        return LaurentPoly(variables, {})

    @staticmethod
    def const(variables: tuple[str, ...], c) -> "LaurentPoly":
        return LaurentPoly(variables, {(0,) * len(variables): _ratio(c)})

    @staticmethod
    def one(variables: tuple[str, ...]) -> "LaurentPoly":
        return LaurentPoly.const(variables, 1)

    @staticmethod
    def monomial(variables: tuple[str, ...], exps: tuple[int, ...], c=1) -> "LaurentPoly":
        return LaurentPoly(variables, {tuple(exps): _ratio(c)})

    # -- predicates and views

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return Fraction(next(iter(self.terms.values())))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items())

    # -- ring operations

    def _check(self, other: "LaurentPoly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(self.vars, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            c = _ratio(other)
            return LaurentPoly(self.vars, {e: cc * c for e, cc in self.terms.items()})
        self._check(other)
        if len(self.terms) > len(other.terms):
            big, small = self.terms, other.terms
        else:
            big, small = other.terms, self.terms
        out: dict[tuple[int, ...], Fraction] = {}
        for e2, c2 in small.items():
            for e1, c1 in big.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(key, 0) + c1 * c2
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return LaurentPoly(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            return self.inverse() ** (-n)
        out = LaurentPoly.one(self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit (a single-term polynomial)."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible in the Laurent ring")
        (e, c), = self.terms.items()
        inv = _ratio(Fraction(1, c) if type(c) is int else 1 / c)
        return LaurentPoly(self.vars, {tuple(-x for x in e): inv})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.vars == other.vars
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"{v}^{k}" if k != 1 else v for v, k in zip(self.vars, e) if k
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)

    # -- evaluation

    def evaluate(self, values: dict[str, object]):
        """Evaluate at scalars (Fraction, float or complex) per variable."""
        missing = [v for v in self.vars if v not in values]
        if missing:
            raise ValueError(f"no value for variable(s) {missing}")
        total = None
        for e, c in self.terms.items():
            term = c
            for v, k in zip(self.vars, e):
                if k:
                    term = term * values[v] ** k
            total = term if total is None else total + term
        if total is None:
            sample = next(iter(values.values()), Fraction(0))
            return 0j if isinstance(sample, complex) else Fraction(0)
        return total

    def evaluate_split_sqrt(self, radicand: int) -> tuple[Fraction, Fraction]:
        """Value at ``v = sqrt(radicand)`` for every variable, returned
        exactly as ``(a, b)`` with value ``a + b*sqrt(radicand)``."""
        a = Fraction(0)
        b = Fraction(0)
        for e, c in self.terms.items():
            total = sum(e)
            if total % 2 == 0:
                a += c * Fraction(radicand) ** (total // 2)
            else:
                b += c * Fraction(radicand) ** ((total - 1) // 2)
        return a, b


def radical_sign(a: Fraction, b: Fraction, radicand: int) -> int:
    """Exact sign of ``a + b*sqrt(radicand)``."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    lhs = a * a
    rhs = radicand * b * b
    if a > 0:  # b < 0: positive iff a^2 > r b^2
        return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
    return 1 if rhs > lhs else (-1 if rhs < lhs else 0)


def evaluate(p: LaurentPoly, values: dict[str, object]):
    """Module-level alias for :meth:`LaurentPoly.evaluate`."""
    return p.evaluate(values)


def exact_divide(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``f / g`` in the Laurent ring.

    Works by clearing each argument to an honest polynomial (per-coordinate
    minimal exponents are a valuation, so exactness is preserved) and running
    single-divisor multivariate division in lexicographic order; a domain
    guarantees the leading term of the dividend stays divisible whenever the
    quotient exists.  Raises :class:`ExactDivisionError` otherwise.
    """
    if g.is_zero():
        raise ExactDivisionError("division by zero")
    if f.is_zero():
        return LaurentPoly.zero(f.vars)
    f._check(g)
    nv = len(f.vars)

    def shift_of(p: LaurentPoly) -> tuple[int, ...]:
        return tuple(min(e[i] for e in p.terms) for i in range(nv))

    sf, sg = shift_of(f), shift_of(g)
    fterms = {tuple(a - s for a, s in zip(e, sf)): c for e, c in f.terms.items()}
    gterms = {tuple(a - s for a, s in zip(e, sg)): c for e, c in g.terms.items()}
    glead = max(gterms)
    glead_c = gterms[glead]
    quot: dict[tuple[int, ...], Fraction] = {}
    while fterms:
        flead = max(fterms)
        exp = tuple(a - b for a, b in zip(flead, glead))
        if any(x < 0 for x in exp):
            raise ExactDivisionError("not divisible")
        c = _ratio(Fraction(fterms[flead]) / Fraction(glead_c))
        quot[exp] = c
        for ge, gc in gterms.items():
            key = tuple(a + b for a, b in zip(ge, exp))
            s = fterms.get(key, 0) - c * gc
            if s:
                fterms[key] = s
            else:
                fterms.pop(key, None)
    shift = tuple(a - b for a, b in zip(sf, sg))
    return LaurentPoly(f.vars, {tuple(a + b for a, b in zip(e, shift)): c for e, c in quot.items()})


def poly_to_obj(p: LaurentPoly) -> dict:
    return {
        "vars": list(p.vars),
        "terms": [
            {"exp": list(e), "num": c.numerator, "den": c.denominator}
            for e, c in p.sorted_terms()
        ],
    }


def obj_to_poly(obj: dict) -> LaurentPoly:
    variables = tuple(obj["vars"])
    terms = {
        tuple(int(x) for x in t["exp"]): _ratio(Fraction(int(t["num"]), int(t["den"])))
        for t in obj["terms"]
    }
    return LaurentPoly(variables, terms)


# ---------------------------------------------------------------------------
# parameter labels


class LabelSet:
    """The parameter classes of a datum and every label lookup built on them.

    One Laurent variable per conjugacy class of affine generators; all label
    functions (generator parameters, affine-root labels with the crossed rule
    for coroots divisible by 2, root labels, halved-coroot labels, the
    translation weight ``delta`` and its square root, full products ``q(w)``)
    return monomials or polynomials in those variables.
    """

    def __init__(self, weyl: AffineWeyl):
        self.weyl = weyl
        datum = weyl.datum

        # finite Weyl orbits of coroots (negatives included automatically:
        # each reflection sends its own coroot to its negative)
        self.orbit_id: dict[Vec, int] = {}
        next_id = 0
        for b in datum.coroots:
            if b in self.orbit_id:
                continue
            orbit = {b}
            frontier = [b]
            while frontier:
                cur = frontier.pop()
                for s in weyl.simple_reflections:
                    nxt = s.apply_y(cur)
                    if nxt not in orbit:
                        orbit.add(nxt)
                        frontier.append(nxt)
            if vneg(b) not in orbit:
                orbit |= {vneg(v) for v in orbit}
            for v in orbit:
                self.orbit_id[v] = next_id
            next_id += 1

        def dval(coroot: Vec) -> int:
            return 2 if all(v % 2 == 0 for v in coroot) else 1

        self._dval = dval

        # conjugacy classes of the generators, keyed by (orbit, level mod d)
        keys: list[tuple[int, int]] = []
        for a in weyl.fundamental:
            d = dval(a.coroot)
            keys.append((self.orbit_id[a.coroot], a.level % d))
        class_members: dict[tuple[int, int], list[int]] = {}
        for j, key in enumerate(keys):
            class_members.setdefault(key, []).append(j)
        ordered = sorted(class_members.items(), key=lambda kv: kv[1][0])
        self.class_keys: list[tuple[int, int]] = [k for k, _ in ordered]
        self.class_gens: list[list[int]] = [g for _, g in ordered]
        self._key_to_class: dict[tuple[int, int], int] = {
            k: i for i, k in enumerate(self.class_keys)
        }
        self.gen_class: list[int] = [self._key_to_class[k] for k in keys]

        def var_name(gen_index: int) -> str:
            return "v" + weyl.generator_names[gen_index][1:]

        self.vars: tuple[str, ...] = tuple(var_name(g[0]) for g in self.class_gens)
        self.class_of_gen: dict[str, str] = {
            weyl.generator_names[j]: self.vars[self.gen_class[j]]
            for j in range(len(weyl.fundamental))
        }
        # generator name -> class index, and class index -> parameter monomial
        self.class_of_s: dict[str, int] = {
            weyl.generator_names[j]: self.gen_class[j]
            for j in range(len(weyl.fundamental))
        }
        self.q_of_class: dict[int, LaurentPoly] = {
            i: LaurentPoly.monomial(self.vars, self._unit_exps(i, 2))
            for i in range(len(self.vars))
        }
        # orbits of coroots divisible by 2 carry crossed level labels:
        # orbit -> (class labelling even levels, class labelling odd levels)
        self.special_swap: dict[int, tuple[int, int]] = {}
        for (o, parity) in self.class_keys:
            if (o, 1 - parity) in self._key_to_class and parity == 0:
                self.special_swap[o] = (
                    self._key_to_class[(o, 1)],
                    self._key_to_class[(o, 0)],
                )
        self._q_cache: dict[AffineWeylElem, LaurentPoly] = {}

    # -- basic monomials -----------------------------------------------------

    def _mono(self, exps: tuple[int, ...], c=1) -> LaurentPoly:
        return LaurentPoly.monomial(self.vars, exps, c)

    def one(self) -> LaurentPoly:
        return LaurentPoly.one(self.vars)

    def zero(self) -> LaurentPoly:
        return LaurentPoly.zero(self.vars)

    def const(self, c) -> LaurentPoly:
        return LaurentPoly.const(self.vars, c)

    def _unit_exps(self, cls: int, mult: int) -> tuple[int, ...]:
        return tuple(mult if i == cls else 0 for i in range(len(self.vars)))

    # -- label lookups -------------------------------------------------------

    def q_of_gen(self, j: int) -> LaurentPoly:
        """The parameter ``q(s_j)`` of the j-th fundamental generator."""
        return self._mono(self._unit_exps(self.gen_class[j], 2))

    def v_of_gen(self, j: int) -> LaurentPoly:
        return self._mono(self._unit_exps(self.gen_class[j], 1))

    def affine_label_class(self, coroot: Vec, level: int) -> int:
        """The class whose parameter labels the affine root ``(coroot, level)``."""
        o = self.orbit_id.get(coroot)
        if o is None:
            raise LabelConfigError(f"{coroot} is not a coroot of the datum")
        if self._dval(coroot) == 1:
            key = (o, 0)
        else:
            key = (o, (level + 1) % 2)  # crossed: see the module docstring
        cls = self._key_to_class.get(key)
        if cls is None:
            raise LabelConfigError(f"no generator class for affine root {(coroot, level)}")
        return cls

    def affine_label_half_exps(self, coroot: Vec, level: int) -> tuple[int, ...]:
        """v-exponents of the square root of the affine-root label."""
        return self._unit_exps(self.affine_label_class(coroot, level), 1)

    def affine_label(self, coroot: Vec, level: int) -> LaurentPoly:
        return self._mono(self._unit_exps(self.affine_label_class(coroot, level), 2))

    def root_label_half_exps(self, root: Vec) -> tuple[int, ...] | None:
        """v-exponents of ``q_{beta^vee}^{1/2}`` for ``beta`` in the
        non-reduced extension; None when the label is 1 by convention."""
        der = self.weyl.derived
        if root in der.coroot:  # an honest root of R0
            return self.affine_label_half_exps(der.coroot[root], 0)
        half = tuple(Fraction(v, 2) for v in root)
        if all(h.denominator == 1 for h in half):
            r = tuple(int(h) for h in half)
            if r in der.coroot and all(v % 2 == 0 for v in der.coroot[r]):
                # root = 2r with the coroot of r divisible: label is a quotient
                b = der.coroot[r]
                e1 = self.affine_label_half_exps(b, 1)
                e0 = self.affine_label_half_exps(b, 0)
                return tuple(x - y for x, y in zip(e1, e0))
        return None

    def q_root(self, root: Vec) -> LaurentPoly:
        """Label ``q_{beta^vee}`` of a vector in the non-reduced extension;
        1 whenever ``beta`` is not in it."""
        e = self.root_label_half_exps(root)
        if e is None:
            return self.one()
        return self._mono(tuple(2 * x for x in e))

    def q_root_sqrt(self, root: Vec) -> LaurentPoly:
        e = self.root_label_half_exps(root)
        if e is None:
            return self.one()
        return self._mono(e)

    def q_half(self, root: Vec) -> LaurentPoly:
        """Label of the halved coroot, i.e. the label of ``2*root``."""
        return self.q_root(vscale2(root))

    def q_half_sqrt(self, root: Vec) -> LaurentPoly:
        return self.q_root_sqrt(vscale2(root))

    # -- multiplicative extensions -------------------------------------------

    def q_of_w(self, g: AffineWeylElem) -> LaurentPoly:
        """``q(g)``: the product of affine-root labels, one level up, over
        the inversion set of ``g``.  Always a monomial in the ``v_c``."""
        cached = self._q_cache.get(g)
        if cached is not None:
            return cached
        exps = [0] * len(self.vars)
        for a in self.weyl.inversion_levels(g):
            cls = self.affine_label_class(a.coroot, a.level + 1)
            exps[cls] += 2
        out = self._mono(tuple(exps))
        self._q_cache[g] = out
        return out

    def q_of_word(self, word: tuple[int, ...]) -> LaurentPoly:
        exps = [0] * len(self.vars)
        for i in word:
            exps[self.gen_class[i]] += 2
        return self._mono(tuple(exps))

    def q_of_fin(self, w: FiniteWeylElem) -> LaurentPoly:
        return self.q_of_word(self.weyl.fin_word(w))

    def delta_sqrt(self, x: Vec) -> LaurentPoly:
        """The square root of the translation weight: the monomial with
        v-exponents ``sum_beta <x, beta^vee> * halfexp(q_{beta^vee})`` over
        the positive non-reduced extension."""
        exps = [0] * len(self.vars)
        datum = self.weyl.datum
        for root, coroot in self.weyl.derived.nonreduced_positive:
            n = datum.pair(x, coroot)
            if n:
                half = self.root_label_half_exps(root)
                assert half is not None
                for i, h in enumerate(half):
                    exps[i] += n * h
        return self._mono(tuple(exps))

    def delta(self, x: Vec) -> LaurentPoly:
        return self.delta_sqrt(x) ** 2

    def poincare(self, elems) -> LaurentPoly:
        """Sum of ``q(w)`` over a collection of finite elements."""
        out = self.zero()
        for w in elems:
            out = out + self.q_of_fin(w)
        return out

    # -- numeric assignments -------------------------------------------------

    def formal_values(self) -> None:
        return None

    def numeric_assignment(self, q_values: dict[str, object], mode: str) -> dict[str, object]:
        """Turn per-generator ``q`` values into per-class ``v`` values.

        Keys are generator names ("s1", ..., "s0"); every generator of a class
        must receive the same value and every class must be covered.  In
        ``rational`` mode the values must be positive rationals whose square
        root is exact; ``complex`` mode accepts any positive real and falls
        back to floating point.
        """
        if mode not in ("rational", "complex"):
            raise LabelConfigError(f"unknown mode {mode!r}")
        per_class: dict[int, Fraction] = {}
        names = self.weyl.generator_names
        for key, raw in q_values.items():
            if key not in names:
                raise LabelConfigError(f"unknown generator {key!r}; expected one of {names}")
            q = _parse_rational(raw)
            if q <= 0:
                raise LabelConfigError(f"label for {key} must be positive, got {q}")
            cls = self.gen_class[names.index(key)]
            if cls in per_class and per_class[cls] != q:
                raise LabelConfigError(
                    f"conflicting labels within one conjugacy class (generator {key})"
                )
            per_class[cls] = q
        missing = [self.vars[i] for i in range(len(self.vars)) if i not in per_class]
        if missing:
            raise LabelConfigError(f"no label given for class(es) {missing}")
        out: dict[str, object] = {}
        for i, var in enumerate(self.vars):
            q = per_class[i]
            root = _exact_sqrt(q)
            if root is not None:
                out[var] = root
            elif mode == "rational":
                raise LabelConfigError(
                    f"label {q} for class {var} is not a perfect square; "
                    "rational mode needs exact square roots"
                )
            else:
                out[var] = math.sqrt(float(q))
        return out


def vscale2(root: Vec) -> Vec:
    return tuple(2 * v for v in root)


def _parse_rational(raw) -> Fraction:
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        return Fraction(raw).limit_denominator(10**12)
    if isinstance(raw, str):
        text = raw.strip()
        try:
            if "/" in text:
                num, den = text.split("/", 1)
                return Fraction(int(num), int(den))
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise LabelConfigError(f"cannot parse label value {raw!r}: {exc}") from exc
    raise LabelConfigError(f"cannot parse label value {raw!r}")


def _exact_sqrt(q: Fraction) -> Fraction | None:
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None
