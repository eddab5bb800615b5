"""The Iwahori-Hecke algebra on the T-basis.

Elements are finitely supported maps from extended affine Weyl elements to
Laurent-polynomial coefficients.  Multiplication factors the right-hand
element's basis words through the length-zero subgroup and applies the
quadratic relation one generator at a time; everything else (the star
anti-involution, the trace, the inner product, basis inverses) reduces to
that single step rule:

    T_u * T_s = T_{us}                     if l(us) = l(u) + 1
    T_u * T_s = (q_s - 1) T_u + q_s T_{us} if l(us) = l(u) - 1
"""

from __future__ import annotations

from .coeffring import LabelSet, LaurentPoly, obj_to_poly, poly_to_obj
from .weyl import AffineWeyl, AffineWeylElem

MAX_SUPPORT = 1_000_000


class SupportError(RuntimeError):
    """Raised when an intermediate element outgrows the support guard."""


class HeckeElem:
    """A finitely supported element in the T-basis."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[AffineWeylElem, LaurentPoly]):
        self.terms = {g: c for g, c in terms.items() if not c.is_zero()}

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, g: AffineWeylElem) -> LaurentPoly | None:
        return self.terms.get(g)

    def support_size(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElem) and self.terms == other.terms

    def __repr__(self) -> str:
        n = len(self.terms)
        return f"HeckeElem({n} term{'s' if n != 1 else ''})"


class HeckeAlgebra:
    """Arithmetic context: a Weyl group, its labels, and the T-basis rules."""

    def __init__(self, weyl: AffineWeyl, labels: LabelSet | None = None):
        self.weyl = weyl
        self.labels = labels if labels is not None else LabelSet(weyl)
        if self.labels.weyl is not weyl:
            raise ValueError("labels were built for a different Weyl group")
        n = len(weyl.fundamental)
        self._q_gen = [self.labels.q_of_gen(i) for i in range(n)]
        self._q_gen_inv = [q.inverse() for q in self._q_gen]
        one = self.labels.one()
        self._q_minus_one = [q - one for q in self._q_gen]
        self._qinv_minus_one = [q - one for q in self._q_gen_inv]

    # -- constructors --------------------------------------------------------

    def zero(self) -> HeckeElem:
        return HeckeElem({})

    def unit(self) -> HeckeElem:
        return HeckeElem({self.weyl.identity: self.labels.one()})

    def basis(self, g: AffineWeylElem) -> HeckeElem:
        return HeckeElem({g: self.labels.one()})

    def from_terms(self, terms: dict[AffineWeylElem, LaurentPoly]) -> HeckeElem:
        return HeckeElem(dict(terms))

    # -- linear structure ----------------------------------------------------

    def add(self, a: HeckeElem, b: HeckeElem) -> HeckeElem:
        out = dict(a.terms)
        for g, c in b.terms.items():
            s = out.get(g)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(g, None)
            else:
                out[g] = s
        return HeckeElem(out)

    def sub(self, a: HeckeElem, b: HeckeElem) -> HeckeElem:
        return self.add(a, self.scale(b, -1))

    def scale(self, a: HeckeElem, c) -> HeckeElem:
        if isinstance(c, LaurentPoly):
            if c.is_zero():
                return HeckeElem({})
            return HeckeElem({g: cc * c for g, cc in a.terms.items()})
        return HeckeElem({g: cc * c for g, cc in a.terms.items()})

    # -- generator steps -----------------------------------------------------

    def _guard(self, terms: dict) -> None:
        if len(terms) > MAX_SUPPORT:
            raise SupportError(
                f"support exceeded {MAX_SUPPORT} basis terms; "
                "the computation is out of desk scale"
            )

    def _rmul_gen(self, terms: dict, i: int) -> dict:
        """Right-multiply a term dict by T_{s_i}."""
        weyl = self.weyl
        out: dict[AffineWeylElem, LaurentPoly] = {}

        def put(g, c):
            s = out.get(g)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(g, None)
            else:
                out[g] = s

        q = self._q_gen[i]
        qm1 = self._q_minus_one[i]
        step = weyl.gen_step
        for u, c in terms.items():
            us, down = step(u, i)
            if not down:
                put(us, c)
            else:
                put(u, c * qm1)
                put(us, c * q)
        self._guard(out)
        return out

    def _rmul_gen_inv(self, terms: dict, i: int) -> dict:
        """Right-multiply a term dict by T_{s_i}^{-1}."""
        weyl = self.weyl
        out: dict[AffineWeylElem, LaurentPoly] = {}

        def put(g, c):
            s = out.get(g)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(g, None)
            else:
                out[g] = s

        qi = self._q_gen_inv[i]
        qim1 = self._qinv_minus_one[i]
        step = weyl.gen_step
        for u, c in terms.items():
            us, down = step(u, i)
            if down:
                put(us, c)
            else:
                put(us, c * qi)
                put(u, c * qim1)
        self._guard(out)
        return out

    def _relabel_right(self, terms: dict, om: AffineWeylElem) -> dict:
        """Right-multiply by T_om for a length-zero om (a free relabeling)."""
        weyl = self.weyl
        return {weyl.multiply(u, om): c for u, c in terms.items()}

    # -- ring operations -----------------------------------------------------

    def mul(self, a: HeckeElem, b: HeckeElem) -> HeckeElem:
        """Product in the algebra.

        The work of folding the left factor through the right factor's words
        scales with (left support) x (total right word length); when the
        mirrored orientation is cheaper the product is computed through the
        star anti-involution instead, which exchanges the factors.
        """
        if not a.terms or not b.terms:
            return HeckeElem({})
        weyl = self.weyl
        cost_fold = len(a.terms) * sum(weyl.length(h) for h in b.terms)
        cost_star = len(b.terms) * sum(weyl.length(g) for g in a.terms)
        if cost_star < cost_fold:
            return self.star(self._mul_fold(self.star(b), self.star(a)))
        return self._mul_fold(a, b)

    def _mul_fold(self, a: HeckeElem, b: HeckeElem) -> HeckeElem:
        weyl = self.weyl
        out: dict[AffineWeylElem, LaurentPoly] = {}
        for h, d in b.terms.items():
            om, word = weyl.factor_extended(h)
            cur = self._relabel_right(a.terms, om)
            for i in word:
                cur = self._rmul_gen(cur, i)
            for g, c in cur.items():
                s = out.get(g)
                s = c * d if s is None else s + c * d
                if s.is_zero():
                    out.pop(g, None)
                else:
                    out[g] = s
            self._guard(out)
        return HeckeElem(out)

    def rmul_basis(self, a: HeckeElem, h: AffineWeylElem) -> HeckeElem:
        """a * T_h without building the intermediate HeckeElem for T_h."""
        om, word = self.weyl.factor_extended(h)
        cur = self._relabel_right(a.terms, om)
        for i in word:
            cur = self._rmul_gen(cur, i)
        return HeckeElem(cur)

    def star(self, a: HeckeElem) -> HeckeElem:
        """The conjugate-linear anti-involution T_g -> T_{g^{-1}}.

        Coefficients here are real (rational in the v), so conjugation is
        the identity on them."""
        weyl = self.weyl
        return HeckeElem({weyl.inverse(g): c for g, c in a.terms.items()})

    def tau(self, a: HeckeElem) -> LaurentPoly:
        """The trace: the coefficient of the identity."""
        c = a.terms.get(self.weyl.identity)
        return c if c is not None else self.labels.zero()

    def tau_pair(self, a: HeckeElem, b: HeckeElem) -> LaurentPoly:
        """tau(a*b) evaluated through the basis-orthogonality rule
        tau(T_g T_h) = q(g) [h = g^{-1}]; no product is formed."""
        weyl = self.weyl
        labels = self.labels
        out = labels.zero()
        for g, c in a.terms.items():
            d = b.terms.get(weyl.inverse(g))
            if d is not None:
                out = out + c * d * labels.q_of_w(g)
        return out

    def inner(self, a: HeckeElem, b: HeckeElem) -> LaurentPoly:
        """Hermitian inner product tau(star(a) * b); the T-basis is
        orthogonal with squared norm q(g)."""
        labels = self.labels
        out = labels.zero()
        for g, c in a.terms.items():
            d = b.terms.get(g)
            if d is not None:
                out = out + c * d * labels.q_of_w(g)
        return out

    # -- inverses ------------------------------------------------------------

    def invert_basis(
        self,
        g: AffineWeylElem,
        length_window: tuple[int, int] | None = None,
    ) -> HeckeElem:
        """The inverse of a basis element T_g.

        Factors g through the length-zero subgroup and folds the one-letter
        inverses right-to-left.  ``length_window = (lo, hi)`` restricts the
        result to coefficients of basis terms with lo <= l(u) <= hi; terms
        that can no longer reach the window are pruned mid-fold (each letter
        moves lengths by at most one), leaving exactly the windowed slice of
        the true inverse.
        """
        weyl = self.weyl
        om, word = weyl.factor_extended(g)
        cur: dict[AffineWeylElem, LaurentPoly] = {
            weyl.identity: self.labels.one()
        }
        k = len(word)
        for step, i in enumerate(reversed(word)):
            cur = self._rmul_gen_inv(cur, i)
            if length_window is not None:
                lo, hi = length_window
                rest = k - 1 - step
                cur = {
                    u: c
                    for u, c in cur.items()
                    if weyl.length(u) + rest >= lo and weyl.length(u) - rest <= hi
                }
        if om != weyl.identity:
            cur = self._relabel_right(cur, weyl.inverse(om))
        return HeckeElem(cur)

    # -- serialization -------------------------------------------------------

    def elem_to_obj(self, a: HeckeElem) -> list[dict]:
        weyl = self.weyl
        records = [
            {"elem": weyl.elem_to_obj(g), "coeff": poly_to_obj(c)}
            for g, c in a.terms.items()
        ]
        records.sort(key=lambda r: (r["elem"]["word"], r["elem"]["translation"]))
        return records

    def elem_from_obj(self, obj: list[dict]) -> HeckeElem:
        weyl = self.weyl
        terms: dict[AffineWeylElem, LaurentPoly] = {}
        for rec in obj:
            g = weyl.elem_from_obj(rec["elem"])
            c = obj_to_poly(rec["coeff"])
            terms[g] = terms.get(g, self.labels.zero()) + c
        return HeckeElem(terms)
