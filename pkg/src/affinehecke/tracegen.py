"""The trace on the Bernstein basis and its generating function.

Two independent computations of tau(theta(x)) live here:

* the direct route — build theta(x) in the Hecke algebra and read off the
  coefficient of the identity (plus a batched variant that shares one
  translation inverse across many x and prunes it to the length window the
  batch can touch);
* the weighted-partition route — a sum over the ways of writing -x as a
  non-negative integer combination of positive roots of the non-reduced
  extension, each partition weighted by a product of per-root, per-
  multiplicity Laurent polynomials d(root; k).

Their agreement is the content of the generating-function identity

    sum_x tau(theta_x) t(-x) = 1 / (q(w0) c(t) c(t^{-1})),

whose numeric truncations `generating_check` evaluates inside the region
|t(alpha)| < delta^{-1/2}(alpha) (all positive roots, strictly).
"""

from __future__ import annotations

from fractions import Fraction

from .bernstein import Bernstein
from .coeffring import ExactDivisionError, LabelSet, LaurentPoly, exact_divide
from .rootdata import Vec, dominant_decomposition, height, vadd, vneg, vscale
from .weyl import FiniteWeylElem


class PoleError(ArithmeticError):
    """A c-function denominator vanished at the given torus point."""


class RegionError(ValueError):
    """The torus point is outside (or on the boundary of) the region where
    the generating series converges."""


class TorusPoint:
    """A multiplicative character of X, given by its values on the standard
    coordinates; values are exact rationals or complex floats."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if any(v == 0 for v in images):
            raise ValueError("torus point values must be nonzero")
        self.images = images

    def value(self, x: Vec):
        out = None
        for v, k in zip(self.images, x):
            if k:
                term = v ** k
                out = term if out is None else out * term
        if out is None:
            return Fraction(1) if self._rational() else complex(1)
        return out

    def _rational(self) -> bool:
        return all(isinstance(v, (int, Fraction)) for v in self.images)

    def inv(self) -> "TorusPoint":
        return TorusPoint(tuple(
            Fraction(1, v) if isinstance(v, int) else 1 / v for v in self.images
        ))

    def conj(self) -> "TorusPoint":
        return TorusPoint(tuple(
            v.conjugate() if isinstance(v, complex) else v for v in self.images
        ))

    def apply_w(self, weyl, w: FiniteWeylElem) -> "TorusPoint":
        """The point w(t), acting by (w t)(x) = t(w^{-1} x)."""
        winv = weyl.fin_inv(w)
        rank = len(self.images)
        units = [tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)]
        return TorusPoint(tuple(self.value(winv.apply_x(e)) for e in units))

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusPoint) and self.images == other.images

    def __repr__(self) -> str:
        return f"TorusPoint{self.images}"


class TraceGen:
    """Trace computations over one Bernstein context.

    ``assignment`` (variable name -> value) makes the numeric operations
    available; formal/symbolic operations ignore it.
    """

    def __init__(self, bernstein: Bernstein, assignment: dict | None = None):
        self.bernstein = bernstein
        self.hecke = bernstein.hecke
        self.labels: LabelSet = bernstein.labels
        self.weyl = bernstein.weyl
        self.datum = bernstein.datum
        self.derived = bernstein.weyl.derived
        self.assignment = assignment
        self._d_cache: dict[tuple[Vec, int], LaurentPoly] = {}
        self._d_value_cache: dict[tuple[Vec, int], object] = {}
        self._root_coords: list[tuple[Vec, tuple[int, ...]]] | None = None

    # -- d coefficients ------------------------------------------------------

    def d_coeff(self, root: Vec, k: int) -> LaurentPoly:
        """The weight of multiplicity k on one positive root of the
        non-reduced extension:

            d(a; k) = (q_{a*} - 1)(q_{a*/2} q_{a*} - 1)(C^k - C^{-k}) / (C^2 - 1)

        with C = q_{a*/2}^{1/2} q_{a*} (a* the coroot); d(a; 0) = 1.  The
        division is carried out exactly in the Laurent ring and a failure is
        a loud error, never a silent approximation.
        """
        if k < 0:
            raise ValueError("multiplicity must be non-negative")
        key = (tuple(root), k)
        cached = self._d_cache.get(key)
        if cached is not None:
            return cached
        labels = self.labels
        if k == 0:
            out = labels.one()
        else:
            q = labels.q_root(root)
            q_half = labels.q_root(vscale(2, root))
            c_mono = labels.q_root_sqrt(vscale(2, root)) * q
            num = (q - labels.one()) * (q_half * q - labels.one()) * (
                c_mono ** k - c_mono ** (-k)
            )
            den = c_mono ** 2 - labels.one()
            try:
                out = exact_divide(num, den)
            except ExactDivisionError as exc:
                raise ExactDivisionError(
                    f"d({root}; {k}) did not divide exactly - label wiring bug"
                ) from exc
        self._d_cache[key] = out
        return out

    def d_value(self, root: Vec, k: int):
        """d(root; k) evaluated at the numeric assignment."""
        key = (tuple(root), k)
        cached = self._d_value_cache.get(key)
        if cached is None:
            cached = self.d_coeff(root, k).evaluate(self._need_assignment())
            self._d_value_cache[key] = cached
        return cached

    # -- partitions ----------------------------------------------------------

    def _positive_roots_with_coords(self) -> list[tuple[Vec, tuple[int, ...]]]:
        if self._root_coords is None:
            out = []
            for root, _coroot in self.derived.nonreduced_positive:
                coords = self.derived.root_coordinates(self.datum, root)
                assert coords is not None and all(c.denominator == 1 for c in coords)
                out.append((root, tuple(int(c) for c in coords)))
            self._root_coords = out
        return self._root_coords

    def partitions(self, target: Vec):
        """All ways of writing the target as a non-negative integer
        combination of the positive non-reduced roots, as maps
        root -> multiplicity; depth-first in a fixed root order."""
        coords = self.derived.root_coordinates(self.datum, tuple(target))
        if coords is None or any(c.denominator != 1 for c in coords):
            return
        rem = tuple(int(c) for c in coords)
        if any(c < 0 for c in rem):
            return
        roots = self._positive_roots_with_coords()

        def dfs(i: int, rem: tuple[int, ...], acc: list[tuple[Vec, int]]):
            if all(v == 0 for v in rem):
                # remaining roots contribute multiplicity zero
                yield dict(acc)
                return
            if i == len(roots):
                return
            root, rc = roots[i]
            bound = min(
                (r // c for r, c in zip(rem, rc) if c > 0), default=0
            )
            for m in range(bound, -1, -1):
                nxt = tuple(r - m * c for r, c in zip(rem, rc))
                if any(v < 0 for v in nxt):
                    continue
                if m:
                    acc.append((root, m))
                yield from dfs(i + 1, nxt, acc)
                if m:
                    acc.pop()

        yield from dfs(0, rem, [])

    def trace_theta_partition(self, x: Vec) -> LaurentPoly:
        """tau(theta(x)) via the weighted partition formula: zero off the
        negative cone, else a sum over partitions of -x."""
        labels = self.labels
        out = labels.zero()
        for pi in self.partitions(vneg(tuple(x))):
            term = labels.one()
            for root, m in pi.items():
                term = term * self.d_coeff(root, m)
            out = out + term
        return out

    def trace_value_partition(self, x: Vec):
        """Numeric tau(theta(x)) through the partition formula."""
        self._need_assignment()
        total = None
        for pi in self.partitions(vneg(tuple(x))):
            term = 1
            for root, m in pi.items():
                term = term * self.d_value(root, m)
            total = term if total is None else total + term
        if total is None:
            return Fraction(0)
        return total

    # -- the direct trace ----------------------------------------------------

    def trace_theta_direct(self, x: Vec) -> LaurentPoly:
        """tau(theta(x)) computed entirely in the Hecke algebra."""
        return self.hecke.tau(self.bernstein.theta(tuple(x)))

    def trace_sweep(self, xs: list[Vec]) -> dict[Vec, LaurentPoly]:
        """Direct traces for a batch of x, sharing one translation inverse.

        Every x is decomposed against a single dominant shift z (a common
        multiple of the sum of positive roots), so all traces are
        coefficients of the one inverse T_{t_z}^{-1}; the inverse fold is
        pruned to the window of target lengths the batch can reach.
        """
        weyl = self.weyl
        labels = self.labels
        datum = self.datum
        xs = [tuple(x) for x in xs]
        if not xs:
            return {}
        n_shift = 0
        for x in xs:
            _y, z = dominant_decomposition(datum, x)
            two_rho = self.derived.two_rho
            idx = next((i for i, v in enumerate(two_rho) if v), None)
            n_here = 0 if idx is None or all(v == 0 for v in z) else z[idx] // two_rho[idx]
            n_shift = max(n_shift, n_here)
        z = vscale(n_shift, self.derived.two_rho)
        targets: dict[Vec, tuple] = {}
        lengths = []
        for x in xs:
            y = vadd(x, z)
            tminus = weyl.translation(vneg(y))
            lengths.append(weyl.length(tminus))
            targets[x] = (y, tminus)
        if all(v == 0 for v in z):
            return {x: self.trace_theta_direct(x) for x in xs}
        window = (min(lengths), max(lengths))
        inv = self.hecke.invert_basis(weyl.translation(z), length_window=window)
        out: dict[Vec, LaurentPoly] = {}
        zfac = labels.delta_sqrt(z)
        for x, (y, tminus) in targets.items():
            c = inv.terms.get(tminus)
            if c is None:
                out[x] = labels.zero()
            else:
                out[x] = labels.delta_sqrt(y) * zfac * c
        return out

    # -- rank-one series cross-check ------------------------------------------

    def d_series_truncation(self, root: Vec, order: int) -> list[LaurentPoly]:
        """Coefficients [d(root;0), ..., d(root;order)] of the generating
        series in u = t(-root)."""
        return [self.d_coeff(root, k) for k in range(order + 1)]

    def inverse_cc_series(self, root: Vec, order: int) -> list[LaurentPoly]:
        """The expansion of 1/(q_{a*} c(a,t) c(a,t^{-1})) in powers of
        u = t(-root), computed by power-series inversion:

            = (1 - Bu)(1 - B^{-1}u) / ((1 - Au)(1 - A^{-1}u))

        with A = q_{a*/2}^{-1/2} q_{a*}^{-1} and B = q_{a*/2}^{-1/2}; the
        scalar prefactor collapses to 1.
        """
        labels = self.labels
        one = labels.one()
        a_mono = (labels.q_root_sqrt(vscale(2, root)) * labels.q_root(root)).inverse()
        b_mono = labels.q_root_sqrt(vscale(2, root)).inverse()
        s_a = a_mono + a_mono.inverse()
        s_b = b_mono + b_mono.inverse()
        # 1/((1-Au)(1-A^{-1}u)) = 1/(1 - s_a u + u^2): linear recurrence
        g = [one, s_a]
        while len(g) < order + 3:
            g.append(s_a * g[-1] - g[-2])
        out = []
        for k in range(order + 1):
            c = g[k]
            if k >= 1:
                c = c - s_b * g[k - 1]
            if k >= 2:
                c = c + g[k - 2]
            out.append(c)
        return out

    # -- numeric c-functions --------------------------------------------------

    def _need_assignment(self) -> dict:
        if self.assignment is None:
            raise ValueError(
                "this operation needs numeric labels; construct TraceGen with "
                "an assignment from LabelSet.numeric_assignment"
            )
        return self.assignment

    def _root_value(self, mono: LaurentPoly):
        return mono.evaluate(self._need_assignment())

    def c_factor(self, root: Vec, t: TorusPoint):
        """One factor of the c-function,

            c(a, t) = (1 - q_{a*/2}^{-1/2} q_{a*}^{-1} t(-a))
                    / (1 - q_{a*/2}^{-1/2} t(-a)),

        for a root of the non-reduced extension (the value is 1 for any
        other vector, matching the convention that absent labels are 1)."""
        root = tuple(root)
        if not self._in_nonreduced(root):
            return Fraction(1)
        asg = self._need_assignment()
        labels = self.labels
        q = labels.q_root(root).evaluate(asg)
        qh_sqrt = labels.q_root_sqrt(vscale(2, root)).evaluate(asg)
        u = t.value(vneg(root))
        num = 1 - u / (qh_sqrt * q)
        den = 1 - u / qh_sqrt
        if den == 0:
            raise PoleError(f"c-function pole at root {root}")
        return num / den

    def _in_nonreduced(self, root: Vec) -> bool:
        for r, _c in self.derived.nonreduced_positive:
            if root == r or root == vneg(r):
                return True
        return False

    def c_full(self, t: TorusPoint, grouping: str = "nr"):
        """The product of c-factors over positive roots.  ``grouping``
        selects an equivalent factorization: "nr" (all positive non-reduced
        roots), "r0" (base roots, doubled partner folded in), "r1" (the
        reduced subsystem of non-divisible scaling)."""
        if grouping == "nr":
            roots = [r for r, _c in self.derived.nonreduced_positive]
        elif grouping == "r0":
            roots = []
            for r in self.derived.positive_roots:
                roots.append(r)
                if self._in_nonreduced(vscale(2, r)):
                    roots.append(vscale(2, r))
        elif grouping == "r1":
            roots = []
            for r, _c in self.derived.r1_positive:
                roots.append(r)
                half = _half_vector(r)
                if half is not None and self._in_nonreduced(half):
                    roots.append(half)
        else:
            raise ValueError(f"unknown grouping {grouping!r}")
        out = None
        for r in roots:
            v = self.c_factor(r, t)
            out = v if out is None else out * v
        return out if out is not None else Fraction(1)

    def q_w0_value(self):
        return self.labels.q_of_fin(self.weyl.longest_element()).evaluate(
            self._need_assignment()
        )

    def delta_sqrt_value(self, x: Vec):
        return self.labels.delta_sqrt(tuple(x)).evaluate(self._need_assignment())

    # -- the generating identity ----------------------------------------------

    def check_region(self, t: TorusPoint) -> None:
        """Require |t(a)| < delta^{-1/2}(a) strictly on every positive root."""
        for alpha in self.derived.positive_roots:
            bound = self.delta_sqrt_value(alpha)
            val = abs(t.value(alpha))
            if not val * bound < 1:
                raise RegionError(
                    f"torus point is outside the convergence region at root "
                    f"{alpha}: |t| = {val}, bound = 1/{bound}"
                )

    def negative_cone_points(self, radius: int) -> list[Vec]:
        """All x in the negative cone with height(-x) <= radius, sorted by
        height then lexicographically."""
        simples = self.datum.simple_roots
        rank = self.datum.rank
        out: list[Vec] = []

        def rec(i: int, budget: int, acc: Vec):
            if i == len(simples):
                out.append(vneg(acc))
                return
            cur = acc
            for m in range(budget + 1):
                if m:
                    cur = vadd(cur, simples[i])
                rec(i + 1, budget - m, cur)

        rec(0, radius, (0,) * rank)
        out.sort(key=lambda x: (height(self.datum, vneg(x)), x))
        return out

    def generating_check(self, t: TorusPoint, box_radius: int):
        """Truncated left side vs closed-form right side of the generating
        identity; returns (lhs_partial, rhs, gap)."""
        self._need_assignment()
        self.check_region(t)
        lhs = None
        for x in self.negative_cone_points(box_radius):
            tau_val = self.trace_value_partition(x)
            term = tau_val * t.value(vneg(x))
            lhs = term if lhs is None else lhs + term
        if lhs is None:
            lhs = Fraction(0)
        c_t = self.c_full(t)
        c_ti = self.c_full(t.inv())
        denom = self.q_w0_value() * c_t * c_ti
        if denom == 0:
            raise PoleError("right side has a vanishing denominator")
        rhs = 1 / denom
        gap = abs(lhs - rhs)
        return lhs, rhs, gap


def _half_vector(root: Vec) -> Vec | None:
    if all(v % 2 == 0 for v in root):
        return tuple(v // 2 for v in root)
    return None
