"""Finite-dimensional principal-series modules at torus characters.

The commutative subalgebra spanned by the Bernstein basis has one-dimensional
characters given by torus points; inducing such a character up to the full
algebra yields a module of dimension equal to the order of the finite Weyl
group.  This module realises that module concretely: every algebra element
acts by a square matrix over the finite Hecke basis (exact rationals when the
labels and the torus point are rational, complex floats otherwise).

On top of the bare module action this file provides

* intertwining elements for the simple reflections, with their squares and
  braid products available symbolically,
* the recursively built intertwining vectors ``r_w(t)`` together with their
  normalisations and the scalar factors controlling them,
* the sesquilinear pairing and the associated matrix elements,
* the spherical functional, its c-function series formula, and the
  plus-idempotent orthogonality identities in cleared (denominator-free)
  polynomial form, and
* a truncated check of the series identity relating the generating functional
  of the trace to the distinguished matrix element.

All torus points are numeric; identities in the torus variable are verified
on seeded random points rather than over a field of rational functions.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .bernstein import Bernstein, BoxError
from .coeffring import LaurentPoly, evaluate
from .hecke import HeckeElem
from .rootdata import Vec, height, is_dominant, vadd, vneg, vscale
from .tracegen import PoleError, TorusPoint, TraceGen
from .weyl import AffineWeylElem, FiniteWeylElem


class ModeError(RuntimeError):
    """A numeric operation was requested without a numeric label assignment."""


def _conj(v):
    return v.conjugate() if isinstance(v, complex) else v


def _half(x: Vec) -> Vec | None:
    if any(v % 2 for v in x):
        return None
    return tuple(v // 2 for v in x)


# -- small exact linear algebra (lists of lists; sizes are |W0| at most) ------


def mat_vec(m: list[list], v: list) -> list:
    return [sum(row[j] * v[j] for j in range(len(v)) if v[j]) for row in m]


def mat_mul(a: list[list], b: list[list]) -> list[list]:
    n, k, m = len(a), len(b), len(b[0])
    return [
        [sum(a[i][p] * b[p][j] for p in range(k)) for j in range(m)] for i in range(n)
    ]


def mat_trace(m: list[list]):
    return sum(m[i][i] for i in range(len(m)))


def mat_rank(rows: list[list]) -> int:
    """Rank by Gaussian elimination; exact over rationals, pivot-by-modulus
    over floats."""
    work = [list(r) for r in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    row = 0
    for col in range(cols):
        best = None
        for i in range(row, len(work)):
            if work[i][col] != 0 and (best is None or abs(work[i][col]) > abs(work[best][col])):
                best = i
        if best is None:
            continue
        if isinstance(work[best][col], (float, complex)) and abs(work[best][col]) < 1e-9:
            continue
        work[row], work[best] = work[best], work[row]
        pivot = work[row][col]
        for i in range(row + 1, len(work)):
            if work[i][col] != 0:
                factor = work[i][col] / pivot
                work[i] = [work[i][j] - factor * work[row][j] for j in range(cols)]
        row += 1
        rank += 1
        if row == len(work):
            break
    return rank


class PrincipalSeries:
    """Module actions, intertwiners, and matrix elements over one algebra.

    ``assignment`` (variable name -> numeric value) enables the numeric
    operations; the symbolic constructions (intertwining elements, cleared
    plus-idempotent identities) work without it.
    """

    def __init__(self, bernstein: Bernstein, assignment: dict | None = None):
        self.bernstein = bernstein
        self.hecke = bernstein.hecke
        self.labels = bernstein.labels
        self.weyl = bernstein.weyl
        self.datum = bernstein.datum
        self.derived = self.weyl.derived
        self.assignment = assignment
        self.trace = TraceGen(bernstein, assignment)

        self.basis_order = self.weyl.enumerate_w0()
        self.dim = len(self.basis_order)
        self.index = {w: i for i, w in enumerate(self.basis_order)}
        self.longest = self.weyl.longest_element()

        self._r0_pos_set = set(self.derived.positive_roots)
        self._r1_pos = [r for r, _ in self.derived.r1_positive]
        self._r1_pos_set = set(self._r1_pos)
        self._nr_pos_set = {r for r, _ in self.derived.nonreduced_positive}

        self._q_fin_vals = None
        self._p0_val = None
        if assignment is not None:
            self._q_fin_vals = [
                evaluate(self.labels.q_of_fin(w), assignment) for w in self.basis_order
            ]
            self._p0_val = sum(self._q_fin_vals)

        self._left_gen: dict[int, list[list]] = {}
        self._right_gen: dict[int, list[list]] = {}
        self._right_mul: dict[int, list[list]] = {}
        self._left_w0_mat: list[list] | None = None
        self._inv_r1_cache: dict[FiniteWeylElem, list[Vec]] = {}
        self._rs_action: dict[int, list] = {}
        self._rs_matrix: dict[tuple, list[list]] = {}
        self._r_cache: dict[tuple, list] = {}
        self._bra_cache: dict[tuple, list] = {}
        self._plus_cleared: dict[Vec, HeckeElem] = {}
        self._plus_action: dict[Vec, list] = {}
        self._sym_elem: HeckeElem | None = None

    # -- numeric guard -------------------------------------------------------

    def _need_numeric(self) -> dict:
        if self.assignment is None:
            raise ModeError(
                "this operation needs numeric labels; construct PrincipalSeries "
                "with an assignment from LabelSet.numeric_assignment"
            )
        return self.assignment

    def _val(self, poly: LaurentPoly):
        return evaluate(poly, self._need_numeric())

    def p0_value(self):
        self._need_numeric()
        return self._p0_val

    def q_fin_value(self, w: FiniteWeylElem):
        self._need_numeric()
        return self._q_fin_vals[self.index[w]]

    # -- finite Hecke engine over numeric labels -----------------------------

    def _gen_q(self, i: int):
        return self._val(self.labels.q_of_gen(i))

    def _left_gen_matrix(self, i: int) -> list[list]:
        m = self._left_gen.get(i)
        if m is None:
            qi = self._gen_q(i)
            s = self.weyl.simple_reflections[i]
            m = [[0] * self.dim for _ in range(self.dim)]
            for j, w in enumerate(self.basis_order):
                sw = self.weyl.fin_mul(s, w)
                if self.weyl.finite_length(sw) > self.weyl.finite_length(w):
                    m[self.index[sw]][j] += 1
                else:
                    m[j][j] += qi - 1
                    m[self.index[sw]][j] += qi
            self._left_gen[i] = m
        return m

    def _right_gen_matrix(self, i: int) -> list[list]:
        m = self._right_gen.get(i)
        if m is None:
            qi = self._gen_q(i)
            s = self.weyl.simple_reflections[i]
            m = [[0] * self.dim for _ in range(self.dim)]
            for j, w in enumerate(self.basis_order):
                ws = self.weyl.fin_mul(w, s)
                if self.weyl.finite_length(ws) > self.weyl.finite_length(w):
                    m[self.index[ws]][j] += 1
                else:
                    m[j][j] += qi - 1
                    m[self.index[ws]][j] += qi
            self._right_gen[i] = m
        return m

    def _right_mul_matrix(self, j: int) -> list[list]:
        """Matrix of right multiplication by the j-th finite basis element."""
        m = self._right_mul.get(j)
        if m is None:
            m = [[int(i == k) for k in range(self.dim)] for i in range(self.dim)]
            for i in self.weyl.fin_word(self.basis_order[j]):
                m = mat_mul(self._right_gen_matrix(i), m)
            self._right_mul[j] = m
        return m

    def _left_w0(self) -> list[list]:
        if self._left_w0_mat is None:
            m = [[int(i == k) for k in range(self.dim)] for i in range(self.dim)]
            for i in reversed(self.weyl.fin_word(self.longest)):
                m = mat_mul(self._left_gen_matrix(i), m)
            self._left_w0_mat = m
        return self._left_w0_mat

    def h0_product(self, a: list, b: list) -> list:
        """Product of two finite-Hecke elements given by coefficient vectors."""
        out = [0] * self.dim
        for j, c in enumerate(b):
            if c == 0:
                continue
            col = mat_vec(self._right_mul_matrix(j), a)
            for k in range(self.dim):
                out[k] += c * col[k]
        return out

    def unit_vector(self) -> list:
        vec = [0] * self.dim
        vec[0] = 1
        return vec

    # -- module action -------------------------------------------------------

    def expand_auto(self, h: HeckeElem) -> dict[tuple[FiniteWeylElem, Vec], LaurentPoly]:
        """Product-basis coordinates of ``h`` with an automatically grown box."""
        if h.is_zero():
            return {}
        base = max(
            [1] + [abs(v) for g in h.terms for v in g.trans]
        )
        last = None
        for box in (base, 2 * base + 2, 4 * base + 6):
            try:
                return self.bernstein.expand_in_bernstein(h, box)
            except BoxError as exc:
                last = exc
        raise last

    def symbolic_action(self, h: HeckeElem) -> list[list[tuple[int, Vec, LaurentPoly]]]:
        """Torus-independent description of the action of ``h``: per basis
        column, triples (row, lattice point, label coefficient)."""
        out = []
        for v in self.basis_order:
            prod = self.hecke.mul(h, self.hecke.basis(self.weyl.as_affine(v)))
            coords = self.expand_auto(prod)
            out.append([(self.index[w], x, c) for (w, x), c in coords.items()])
        return out

    def laplace_matrix(self, action: list, t: TorusPoint) -> list[list]:
        asg = self._need_numeric()
        m = [[0] * self.dim for _ in range(self.dim)]
        for col, triples in enumerate(action):
            for row, x, poly in triples:
                m[row][col] += evaluate(poly, asg) * t.value(x)
        return m

    def laplace(self, h: HeckeElem, t: TorusPoint) -> list[list]:
        """Matrix of ``h`` acting on the module attached to ``t``."""
        return self.laplace_matrix(self.symbolic_action(h), t)

    # -- intertwining elements (symbolic) ------------------------------------

    def _is_doubled_simple(self, i: int) -> bool:
        alpha = self.datum.simple_roots[i]
        return tuple(2 * v for v in alpha) in self._nr_pos_set

    def r1_of_simple(self, i: int) -> Vec:
        """The non-multipliable positive root proportional to the i-th
        simple root."""
        alpha = self.datum.simple_roots[i]
        if self._is_doubled_simple(i):
            return tuple(2 * v for v in alpha)
        return alpha

    def intertwiner_element(self, i: int) -> HeckeElem:
        """The intertwining element attached to the i-th simple reflection."""
        H = self.hecke
        labels = self.labels
        alpha = self.datum.simple_roots[i]
        ts = H.basis(self.weyl.simple_affine(i))
        if not self._is_doubled_simple(i):
            out = H.sub(ts, H.mul(self.bernstein.theta(vneg(alpha)), ts))
            const = labels.one() - labels.q_root(alpha)
            return H.add(out, H.scale(H.unit(), const))
        two = vscale(2, alpha)
        out = H.sub(ts, H.mul(self.bernstein.theta(vneg(two)), ts))
        c0 = labels.one() - labels.q_half(alpha) * labels.q_root(alpha)
        c1 = labels.q_half_sqrt(alpha) * (labels.q_root(alpha) - labels.one())
        out = H.add(out, H.scale(H.unit(), c0))
        return H.sub(out, H.scale(self.bernstein.theta(vneg(alpha)), c1))

    def intertwiner_element_right(self, i: int) -> HeckeElem:
        """The same element written with the Bernstein factors on the right."""
        H = self.hecke
        labels = self.labels
        alpha = self.datum.simple_roots[i]
        ts = H.basis(self.weyl.simple_affine(i))
        if not self._is_doubled_simple(i):
            out = H.sub(ts, H.mul(ts, self.bernstein.theta(alpha)))
            const = labels.q_root(alpha) - labels.one()
            return H.add(out, H.scale(self.bernstein.theta(alpha), const))
        two = vscale(2, alpha)
        out = H.sub(ts, H.mul(ts, self.bernstein.theta(two)))
        c0 = labels.q_half(alpha) * labels.q_root(alpha) - labels.one()
        c1 = labels.q_half_sqrt(alpha) * (labels.q_root(alpha) - labels.one())
        out = H.add(out, H.scale(self.bernstein.theta(two), c0))
        return H.add(out, H.scale(self.bernstein.theta(alpha), c1))

    def intertwiner_word(self, word: tuple[int, ...]) -> HeckeElem:
        """Product of intertwining elements along a word of simple indices."""
        out = self.hecke.unit()
        for i in word:
            out = self.hecke.mul(out, self.intertwiner_element(i))
        return out

    def n_element(self, beta: Vec) -> HeckeElem:
        """The normalisation factor attached to a (signed) non-multipliable
        root, as an element of the commutative subalgebra."""
        H = self.hecke
        labels = self.labels
        pos = beta if beta in self._r1_pos_set else vneg(beta)
        if pos not in self._r1_pos_set:
            raise ValueError(f"{beta} is not a non-multipliable root")
        half_pos = _half(pos)
        if half_pos is not None and half_pos in self._r0_pos_set:
            alpha = half_pos
            half_signed = _half(beta)
            qa = labels.q_root(alpha)
            const = labels.q_half(alpha) * qa
            mid = labels.q_half_sqrt(alpha) * (qa - labels.one())
            out = H.scale(H.unit(), const)
            out = H.add(out, H.scale(self.bernstein.theta(half_signed), mid))
            return H.sub(out, self.bernstein.theta(beta))
        out = H.scale(H.unit(), labels.q_root(pos))
        return H.sub(out, self.bernstein.theta(beta))

    def delta_element(self, beta: Vec) -> HeckeElem:
        """One minus the Bernstein element at the negated root."""
        return self.hecke.sub(self.hecke.unit(), self.bernstein.theta(vneg(beta)))

    def d_element(self, beta: Vec) -> HeckeElem:
        """Product of the normalisation factors at a root and its negative;
        the square of the corresponding intertwining element."""
        return self.hecke.mul(self.n_element(beta), self.n_element(vneg(beta)))

    # -- numeric root factors ------------------------------------------------

    def n_value(self, beta: Vec, t: TorusPoint):
        pos = beta if beta in self._r1_pos_set else vneg(beta)
        if pos not in self._r1_pos_set:
            raise ValueError(f"{beta} is not a non-multipliable root")
        half_pos = _half(pos)
        if half_pos is not None and half_pos in self._r0_pos_set:
            alpha = half_pos
            qa = self._val(self.labels.q_root(alpha))
            qh = self._val(self.labels.q_half(alpha))
            qhs = self._val(self.labels.q_half_sqrt(alpha))
            return qh * qa + qhs * (qa - 1) * t.value(_half(beta)) - t.value(beta)
        return self._val(self.labels.q_root(pos)) - t.value(beta)

    def r1_inversions(self, w: FiniteWeylElem) -> list[Vec]:
        """Positive non-multipliable roots sent negative by ``w``."""
        cached = self._inv_r1_cache.get(w)
        if cached is None:
            cached = [
                beta for beta in self._r1_pos if w.apply_x(beta) not in self._r1_pos_set
            ]
            self._inv_r1_cache[w] = cached
        return cached

    def n_w_value(self, w: FiniteWeylElem, t: TorusPoint):
        out = 1
        for beta in self.r1_inversions(w):
            out *= self.n_value(beta, t)
        return out

    def delta_w_value(self, w: FiniteWeylElem, t: TorusPoint):
        out = 1
        for beta in self.r1_inversions(w):
            out *= 1 - t.value(vneg(beta))
        return out

    def delta_value(self, t: TorusPoint):
        """Product of (1 - t at the negated root) over all positive
        non-multipliable roots."""
        return self.delta_w_value(self.longest, t)

    def d_w_value(self, w: FiniteWeylElem, t: TorusPoint):
        return self.n_w_value(w, t) * self.n_w_value(w, t.inv())

    # -- intertwining vectors ------------------------------------------------

    def _intertwiner_action(self, i: int) -> list:
        act = self._rs_action.get(i)
        if act is None:
            act = self.symbolic_action(self.intertwiner_element(i))
            self._rs_action[i] = act
        return act

    def intertwiner_matrix(self, i: int, t: TorusPoint) -> list[list]:
        key = (i, t.images)
        m = self._rs_matrix.get(key)
        if m is None:
            m = self.laplace_matrix(self._intertwiner_action(i), t)
            self._rs_matrix[key] = m
        return m

    def r_vector(self, w: FiniteWeylElem, t: TorusPoint, word: tuple[int, ...] | None = None) -> list:
        """Image of the identity basis vector under the intertwiner product
        along a reduced word for ``w`` (the canonical word by default)."""
        if word is None:
            key = (w, t.images)
            cached = self._r_cache.get(key)
            if cached is not None:
                return list(cached)
            word = self.weyl.fin_word(w)
        else:
            key = None
        vec = self.unit_vector()
        for i in reversed(word):
            vec = mat_vec(self.intertwiner_matrix(i, t), vec)
        if key is not None:
            self._r_cache[key] = list(vec)
        return vec

    def r0_vector(self, w: FiniteWeylElem, t: TorusPoint) -> list:
        """Normalised intertwining vector; defined only away from the zero
        locus of the normalisation factor."""
        n = self.n_w_value(w, t)
        if n == 0:
            raise PoleError(f"normalisation factor vanishes at {t} for {w}")
        if isinstance(n, int):
            n = Fraction(n)
        return [c / n for c in self.r_vector(w, t)]

    # -- pairing and matrix elements -----------------------------------------

    def pair(self, x: list, y: list):
        """Sesquilinear pairing: conjugate-linear in the first argument,
        weighted by the label of each finite basis element."""
        self._need_numeric()
        out = 0
        for j in range(self.dim):
            if x[j] != 0 and y[j] != 0:
                out += _conj(x[j]) * self._q_fin_vals[j] * y[j]
        return out

    def bra_vector(self, u: FiniteWeylElem, t: TorusPoint) -> list:
        """Left vector of the matrix-element pairing: the longest element
        acting on the intertwining vector at the conjugate-inverse point."""
        key = (u, t.images)
        cached = self._bra_cache.get(key)
        if cached is None:
            tb = t.conj().inv()
            w0u = self.weyl.fin_mul(self.longest, u)
            cached = mat_vec(self._left_w0(), self.r_vector(w0u, tb))
            self._bra_cache[key] = cached
        return list(cached)

    def matrix_element(
        self,
        u: FiniteWeylElem,
        v: FiniteWeylElem,
        t: TorusPoint,
        h: HeckeElem | None = None,
        action: list | None = None,
    ):
        """Pairing of the ``u``-side left vector against ``h`` applied to the
        ``v``-side intertwining vector."""
        if action is None:
            if h is None:
                raise ValueError("need either an element or a precomputed action")
            action = self.symbolic_action(h)
        m = self.laplace_matrix(action, t)
        return self.pair(self.bra_vector(u, t), mat_vec(m, self.r_vector(v, t)))

    def E_value(self, t: TorusPoint, h: HeckeElem | None = None, action: list | None = None):
        """The distinguished matrix element (both indices at the identity)."""
        e = self.basis_order[0]
        return self.matrix_element(e, e, t, h=h, action=action)

    def char_value(self, t: TorusPoint, h: HeckeElem | None = None, action: list | None = None):
        """Trace of the module action; the character of the module."""
        if action is None:
            if h is None:
                raise ValueError("need either an element or a precomputed action")
            action = self.symbolic_action(h)
        return mat_trace(self.laplace_matrix(action, t))

    def right_mul_matrix_of_vector(self, vec: list) -> list[list]:
        out = [[0] * self.dim for _ in range(self.dim)]
        for j, c in enumerate(vec):
            if c == 0:
                continue
            m = self._right_mul_matrix(j)
            for a in range(self.dim):
                row = m[a]
                orow = out[a]
                for b in range(self.dim):
                    if row[b]:
                        orow[b] += c * row[b]
        return out

    def intertwiner_operator(self, w: FiniteWeylElem, t: TorusPoint) -> list[list]:
        """Matrix of the module map attached to ``w`` from the module at ``t``
        to the module at ``w(t)``: right multiplication by the intertwining
        vector of the inverse element evaluated at ``w(t)``."""
        winv = self.weyl.fin_inv(w)
        wt = t.apply_w(self.weyl, w)
        return self.right_mul_matrix_of_vector(self.r_vector(winv, wt))

    def matrix_element_shift(
        self,
        u: FiniteWeylElem,
        v: FiniteWeylElem,
        i: int,
        t: TorusPoint,
        h: HeckeElem | None = None,
        action: list | None = None,
    ):
        """Both sides of the index-shift identity for matrix elements,
        specialised to the i-th simple reflection.  Only the simple case is
        provided; the general shift is out of scope."""
        if action is None:
            if h is None:
                raise ValueError("need either an element or a precomputed action")
            action = self.symbolic_action(h)
        s = self.weyl.simple_reflections[i]
        st = t.apply_w(self.weyl, s)
        us = self.weyl.fin_mul(u, s)
        vs = self.weyl.fin_mul(v, s)
        lhs = self.matrix_element(u, v, t, action=action)
        num = self.n_w_value(v, t) * self.n_w_value(us, st)
        den = self.n_w_value(u, t) * self.n_w_value(vs, st)
        if den == 0:
            raise PoleError("normalisation factor vanishes in the shift ratio")
        rhs = (num / den) * self.matrix_element(us, vs, st, action=action)
        return lhs, rhs

    # -- spherical functional ------------------------------------------------

    def symmetrizer(self) -> HeckeElem:
        """Sum of all finite basis elements (un-normalised plus idempotent)."""
        if self._sym_elem is None:
            H = self.hecke
            out = H.zero()
            for w in self.basis_order:
                out = H.add(out, H.basis(self.weyl.as_affine(w)))
            self._sym_elem = out
        return self._sym_elem

    def t0_plus_vector(self) -> list:
        """The normalised plus idempotent as a module vector."""
        p0 = self.p0_value()
        return [1 / p0] * self.dim

    def spherical(self, t: TorusPoint, h: HeckeElem | None = None, action: list | None = None):
        """The spherical functional: plus-idempotent matrix coefficient,
        normalised to take value one at the unit element."""
        if action is None:
            if h is None:
                raise ValueError("need either an element or a precomputed action")
            action = self.symbolic_action(h)
        m = self.laplace_matrix(action, t)
        ones = [1] * self.dim
        return self.pair(ones, mat_vec(m, ones)) / self._p0_val

    def theta_plus_cleared(self, x: Vec) -> HeckeElem:
        """Denominator-free version of the spherical Bernstein element: the
        double symmetrised translation, scaled by the square root of the
        modulus character."""
        x = tuple(x)
        cached = self._plus_cleared.get(x)
        if cached is None:
            if not is_dominant(self.datum, x):
                raise ValueError(f"{x} is not dominant")
            H = self.hecke
            sym = self.symmetrizer()
            mid = H.mul(sym, H.basis(self.weyl.translation(x)))
            cached = H.scale(H.mul(mid, sym), self.labels.delta_sqrt(vneg(x)))
            self._plus_cleared[x] = cached
        return cached

    def _theta_plus_action(self, x: Vec) -> list:
        x = tuple(x)
        act = self._plus_action.get(x)
        if act is None:
            act = self.symbolic_action(self.theta_plus_cleared(x))
            self._plus_action[x] = act
        return act

    def theta_plus(self, x: Vec) -> HeckeElem:
        """The spherical Bernstein basis element at a dominant point, with
        numeric (exact rational) coefficients."""
        asg = self._need_numeric()
        if any(isinstance(v, float) for v in asg.values()):
            raise ModeError("the spherical basis needs exact rational labels")
        cleared = self.theta_plus_cleared(x)
        p0sq = self._p0_val ** 2
        vars_ = self.labels.vars
        terms = {}
        for g, c in cleared.terms.items():
            value = Fraction(evaluate(c, asg)) / p0sq
            if value:
                terms[g] = LaurentPoly.const(vars_, value)
        return self.hecke.from_terms(terms)

    def spherical_theta_plus(self, t: TorusPoint, x: Vec):
        """Spherical functional on the spherical Bernstein element, computed
        through the module action."""
        val = self.spherical(t, action=self._theta_plus_action(x))
        return val / (self._p0_val ** 2)

    def macdonald_value(self, t: TorusPoint, x: Vec):
        """The c-function series formula for the spherical functional on the
        spherical Bernstein element at a dominant point."""
        self._need_numeric()
        x = tuple(x)
        qw0 = self.trace.q_w0_value()
        total = 0
        for w in self.basis_order:
            wt = t.apply_w(self.weyl, w)
            winv = self.weyl.fin_inv(w)
            total += self.trace.c_full(wt) * t.value(winv.apply_x(x))
        return qw0 * total / self._p0_val

    # -- plus-idempotent identities in cleared form --------------------------

    def theta_plus_lines(self, x: Vec) -> tuple[HeckeElem, HeckeElem, HeckeElem]:
        """Three expressions for the (cleared) spherical Bernstein element:
        the double-symmetrised translation, its contraction to minimal coset
        representatives, and the fully expanded double-coset sum.  All three
        are equal; each is the cleared element without the square-root
        modulus prefactor."""
        x = tuple(x)
        if not is_dominant(self.datum, x):
            raise ValueError(f"{x} is not dominant")
        H = self.hecke
        weyl = self.weyl
        stab, reps, _w_x, w_up = weyl.coset_data(x)
        tx = weyl.translation(x)
        sym = self.symmetrizer()
        line1 = H.mul(H.mul(sym, H.basis(tx)), sym)
        px = self.labels.poincare(stab)
        partial = H.zero()
        for u in reps:
            partial = H.add(partial, H.basis(weyl.as_affine(u)))
        line2 = H.scale(H.mul(H.mul(partial, H.basis(tx)), sym), px)
        coeff = self.labels.q_of_fin(w_up) * px
        terms: dict[AffineWeylElem, LaurentPoly] = {}
        for u in reps:
            left = weyl.multiply(weyl.as_affine(u), tx)
            for v in self.basis_order:
                g = weyl.multiply(left, weyl.as_affine(v))
                if g in terms:
                    terms[g] = terms[g] + coeff
                else:
                    terms[g] = coeff
        line3 = H.from_terms(terms)
        return line1, line2, line3

    def inner_plus(self, x: Vec, y: Vec) -> LaurentPoly:
        """Cleared pairing of two spherical Bernstein elements: the pairing of
        the double-symmetrised forms, i.e. the normalised pairing multiplied
        by the fourth power of the finite Poincare series."""
        a = self.theta_plus_cleared(tuple(x))
        b = self.theta_plus_cleared(tuple(y))
        return self.hecke.inner(a, b)

    def inner_plus_target(self, x: Vec, y: Vec) -> LaurentPoly:
        """Predicted value of :meth:`inner_plus`: zero off the diagonal; on
        the diagonal the label of the complementary coset representative
        times the stabiliser Poincare series times the square of the full
        one."""
        x = tuple(x)
        y = tuple(y)
        if x != y:
            return self.labels.zero()
        stab, _reps, _w_x, w_up = self.weyl.coset_data(x)
        p0 = self.labels.poincare(self.basis_order)
        px = self.labels.poincare(stab)
        return p0 * p0 * px * self.labels.q_of_fin(w_up)

    # -- truncated series identity -------------------------------------------

    def eisenstein_check(self, t: TorusPoint, h: HeckeElem, box_radius: int, action: list | None = None):
        """Truncated check of the series identity: the scalar product of the
        generating functional against ``h``, scaled by the full intertwiner
        square factor, against the distinguished matrix element scaled by the
        inverse-point root product.  Returns (lhs, rhs, gap)."""
        asg = self._need_numeric()
        self.trace.check_region(t)
        dd = self.d_w_value(self.longest, t)
        delta_inv = self.delta_value(t.inv())
        if dd == 0:
            raise PoleError("the intertwiner square factor vanishes at this point")
        if action is None:
            action = self.symbolic_action(h)
        rhs = delta_inv * self.E_value(t, action=action)

        coords = self.expand_auto(h)
        ys = {x for (_w, x) in coords}
        xs: set[Vec] = set()
        for y in ys:
            bound = box_radius - height(self.datum, y)
            if bound < 0:
                continue
            for p in self.trace.negative_cone_points(int(bound)):
                xs.add(vadd(vneg(y), p))
        total = 0
        for x in sorted(xs, key=lambda v: (height(self.datum, vneg(v)), v)):
            tau = self.hecke.tau_pair(self.bernstein.theta(x), h)
            if tau.is_zero():
                continue
            total += t.value(vneg(x)) * evaluate(tau, asg)
        lhs = dd * total
        return lhs, rhs, abs(lhs - rhs)

    # -- seeded torus points -------------------------------------------------

    def seeded_point(self, seed: int, mode: str = "rational") -> TorusPoint:
        """Reproducible random torus point, rejected until it is regular and
        stays clear of every c-function pole, root-product zero, and
        normalisation-factor zero over the whole finite orbit."""
        self._need_numeric()
        rng = random.Random(seed)
        rank = self.weyl.rank
        for _ in range(5000):
            if mode == "rational":
                images = tuple(
                    Fraction(rng.randrange(1, 10) * rng.choice((1, -1)), rng.randrange(1, 10))
                    for _ in range(rank)
                )
            elif mode == "complex":
                images = tuple(
                    complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
                    for _ in range(rank)
                )
            else:
                raise ValueError(f"unknown mode {mode!r}")
            if any(v == 0 or abs(v) < 1e-3 for v in images):
                continue
            t = TorusPoint(images)
            if self._admissible(t):
                return t
        raise RuntimeError("no admissible torus point found; widen the sampling pool")

    def _admissible(self, t: TorusPoint) -> bool:
        exact = t._rational()
        small = (lambda v: v == 0) if exact else (lambda v: abs(v) < 1e-6)
        seen = set()
        for w in self.basis_order:
            wt = t.apply_w(self.weyl, w)
            if wt.images in seen:
                return False
            seen.add(wt.images)
            try:
                self.trace.c_full(wt)
                self.trace.c_full(wt.inv())
            except PoleError:
                return False
            if small(self.delta_w_value(self.longest, wt)):
                return False
            if small(self.n_w_value(self.longest, wt)) or small(
                self.n_w_value(self.longest, wt.inv())
            ):
                return False
        return True
