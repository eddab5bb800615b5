"""Laurent-polynomial arithmetic and the label classes of each preset."""

from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

from affinehecke import (
    ExactDivisionError,
    LabelConfigError,
    LaurentPoly,
    build_preset,
    evaluate,
    exact_divide,
    radical_sign,
)
from affinehecke.coeffring import LabelSet
from affinehecke.rootdata import vneg
from affinehecke.weyl import AffineWeyl

VARS = ("u", "v")


@lru_cache(maxsize=None)
def labels(name):
    return LabelSet(AffineWeyl(build_preset(name)))


def polys(max_terms=4, max_exp=3, denom=4):
    exps = st.tuples(
        st.integers(-max_exp, max_exp), st.integers(-max_exp, max_exp)
    )
    coeff = st.fractions(
        min_value=-5, max_value=5, max_denominator=denom
    )
    return st.dictionaries(exps, coeff, max_size=max_terms).map(
        lambda d: LaurentPoly(VARS, d)
    )


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    zero = LaurentPoly.zero(VARS)
    one = LaurentPoly.one(VARS)
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a
    assert a * one == a
    assert a - a == zero
    assert a * zero == zero


@given(polys())
def test_power_matches_repeated_product(a):
    assert a**0 == LaurentPoly.one(VARS)
    assert a**1 == a
    assert a**3 == a * a * a


def test_monomial_inverse():
    m = LaurentPoly.monomial(VARS, (2, -1), Fraction(3, 4))
    assert m * m.inverse() == LaurentPoly.one(VARS)
    two_terms = m + LaurentPoly.one(VARS)
    with pytest.raises(ValueError):
        two_terms.inverse()


@given(polys(), polys())
def test_exact_divide_recovers_factor(a, b):
    if b.is_zero():
        return
    assert exact_divide(a * b, b) == a


def test_exact_divide_rejects_nondivisible():
    one = LaurentPoly.one(VARS)
    v = LaurentPoly.monomial(VARS, (0, 1))
    with pytest.raises(ExactDivisionError):
        exact_divide(one, one + v)
    # dividing by a monomial always works in the Laurent ring
    assert exact_divide(one + v, v) == v.inverse() + one


def test_evaluate_rational_and_complex():
    p = LaurentPoly(VARS, {(2, 0): Fraction(1), (0, -1): Fraction(1, 2)})
    assert evaluate(p, {"u": Fraction(3), "v": Fraction(1, 2)}) == Fraction(10)
    val = evaluate(p, {"u": 2.0, "v": 1.0 + 0j})
    assert abs(val - 4.5) < 1e-12


def test_evaluate_split_sqrt():
    # u^2 + u at u = sqrt(2): the rational and radical parts separate
    p = LaurentPoly(("u",), {(2,): Fraction(1), (1,): Fraction(1)})
    assert p.evaluate_split_sqrt(2) == (Fraction(2), Fraction(1))
    q = LaurentPoly(("u",), {(-1,): Fraction(1)})  # 1/sqrt(2) = sqrt(2)/2
    assert q.evaluate_split_sqrt(2) == (Fraction(0), Fraction(1, 2))


def test_radical_sign():
    assert radical_sign(Fraction(2), Fraction(1), 2) == 1
    assert radical_sign(Fraction(-3), Fraction(2), 2) == -1  # 2*sqrt(2) < 3
    assert radical_sign(Fraction(3), Fraction(-2), 2) == 1
    assert radical_sign(Fraction(0), Fraction(0), 2) == 0


def test_sorted_terms_are_canonical():
    p = LaurentPoly(VARS, {(1, 0): Fraction(2), (0, 1): Fraction(-1)})
    assert p.sorted_terms() == [((0, 1), Fraction(-1)), ((1, 0), Fraction(2))]
    # zero coefficients are dropped on construction
    q = LaurentPoly(VARS, {(5, 5): Fraction(0)})
    assert q.is_zero()


# -- label classes -----------------------------------------------------------

EXPECTED_CLASSES = {
    "A1-weight": {"s1": "v1", "s0": "v1"},
    "A1-root": {"s1": "v1", "s0": "v0"},
    "A2": {"s1": "v1", "s2": "v1", "s0": "v1"},
    "B2": {"s1": "v1", "s2": "v2", "s0": "v2"},
    "C2": {"s1": "v1", "s2": "v2", "s0": "v1"},
    "G2": {"s1": "v1", "s2": "v2", "s0": "v1"},
    "BnCn(2)": {"s1": "v1", "s2": "v2", "s0": "v0"},
    "BnCn(3)": {"s1": "v1", "s2": "v1", "s3": "v3", "s0": "v0"},
    "GLn(2)": {"s1": "v1", "s0": "v1"},
    "GLn(3)": {"s1": "v1", "s2": "v1", "s0": "v1"},
}


@pytest.mark.parametrize("name", sorted(EXPECTED_CLASSES))
def test_generator_classes(name):
    assert labels(name).class_of_gen == EXPECTED_CLASSES[name]


def test_crossed_level_labels():
    # only the data with a coroot divisible by 2 carry the level swap
    assert labels("A1-weight").special_swap == {}
    assert labels("B2").special_swap == {}
    assert labels("A1-root").special_swap == {0: (1, 0)}
    assert labels("BnCn(2)").special_swap == {1: (2, 1)}
    assert labels("BnCn(3)").special_swap == {1: (2, 1)}


def test_affine_label_swaps_parity():
    # on an orbit whose coroots are divisible by 2, even and odd levels are
    # labelled by crossed classes: the even level borrows the class of the
    # odd-level generator and vice versa
    L = labels("BnCn(2)")
    doubled = (0, 2)  # coroot of the short simple root, divisible by 2
    orbit = L.orbit_id[doubled]
    even_cls, odd_cls = L.special_swap[orbit]
    assert L.affine_label_class(doubled, 0) == even_cls
    assert L.affine_label_class(doubled, 1) == odd_cls
    even = L.affine_label(doubled, 0)
    odd = L.affine_label(doubled, 1)
    assert even != odd
    assert even.is_monomial() and odd.is_monomial()
    # a coroot not divisible by 2 ignores the level entirely
    plain = (1, -1)
    assert L.affine_label_class(plain, 0) == L.affine_label_class(plain, 5)


def test_q_of_gen_is_squared_variable():
    L = labels("BnCn(2)")
    for j, name in enumerate(["s1", "s2", "s0"]):
        q = L.q_of_gen(j)
        v = L.v_of_gen(j)
        assert q == v * v


def test_q_of_w_multiplies_along_reduced_words():
    L = labels("B2")
    w = L.weyl
    for word in [(0, 1), (1, 0, 1), (2, 1, 0), (0, 1, 2, 1)]:
        g = w.identity
        ok = True
        for i in word:
            g2, down = w.gen_step(g, i)
            if down:
                ok = False
                break
            g = g2
        if not ok:
            continue
        assert L.q_of_w(g) == L.q_of_word(word)


def test_q_of_w_is_conjugation_invariant_under_omega():
    # the label of a generator equals the label of its length-zero conjugate
    L = labels("A1-weight")
    w = L.weyl
    om = [g for g in w.omega_elements() if g != w.identity][0]
    s1 = w.simple_affine(0)
    conj = w.multiply(w.multiply(om, s1), w.inverse(om))
    assert w.length(conj) == 1
    assert L.q_of_w(conj) == L.q_of_w(s1)


def test_poincare_a1_and_a2():
    La = labels("A1-weight")
    q = La.q_of_gen(0)
    assert La.poincare(La.weyl.enumerate_w0()) == La.one() + q
    L2 = labels("A2")
    q2 = L2.q_of_gen(0)
    expect = L2.one() + L2.const(2) * q2 + L2.const(2) * q2 * q2 + q2**3
    assert L2.poincare(L2.weyl.enumerate_w0()) == expect


def test_delta_sqrt_is_multiplicative():
    L = labels("BnCn(2)")
    for x in [(1, 0), (0, 1), (2, -1)]:
        for y in [(1, 1), (-1, 2)]:
            xs = L.delta_sqrt(x)
            ys = L.delta_sqrt(y)
            xy = L.delta_sqrt(tuple(a + b for a, b in zip(x, y)))
            assert xs * ys == xy
        assert L.delta_sqrt(x) * L.delta_sqrt(vneg(x)) == L.one()
        assert L.delta(x) == L.delta_sqrt(x) ** 2


def test_numeric_assignment_rational():
    L = labels("BnCn(2)")
    asg = L.numeric_assignment({"s1": 4, "s2": 9, "s0": 25}, "rational")
    assert asg["v1"] == Fraction(2)
    assert asg["v2"] == Fraction(3)
    assert asg["v0"] == Fraction(5)


def test_numeric_assignment_accepts_strings_and_fractions():
    L = labels("A2")
    asg = L.numeric_assignment({"s1": "9/4", "s2": Fraction(9, 4), "s0": 2.25}, "rational")
    assert asg["v1"] == Fraction(3, 2)


def test_numeric_assignment_one_generator_covers_its_class():
    # every generator of A2 lies in a single class, so one value suffices
    asg = labels("A2").numeric_assignment({"s1": 4}, "rational")
    assert asg == {"v1": Fraction(2)}


def test_numeric_assignment_errors():
    L = labels("A2")
    with pytest.raises(LabelConfigError):
        # the two-class datum needs both classes covered
        labels("B2").numeric_assignment({"s1": 4}, "rational")
    with pytest.raises(LabelConfigError):
        # conjugate generators must share a value
        L.numeric_assignment({"s1": 4, "s2": 9, "s0": 4}, "rational")
    with pytest.raises(LabelConfigError):
        L.numeric_assignment({"s1": -4, "s2": -4, "s0": -4}, "rational")
    with pytest.raises(LabelConfigError):
        # 2 is not a perfect square of a rational
        L.numeric_assignment({"s1": 2, "s2": 2, "s0": 2}, "rational")
    with pytest.raises(LabelConfigError):
        L.numeric_assignment({"s1": "nonsense", "s2": 4, "s0": 4}, "rational")
    with pytest.raises(LabelConfigError):
        L.numeric_assignment({"sX": 4}, "rational")
    with pytest.raises(LabelConfigError):
        L.numeric_assignment({"s1": 4, "s2": 4, "s0": 4}, "euclidean")
    # complex mode takes non-square values
    asg = L.numeric_assignment({"s1": 2, "s2": 2, "s0": 2}, "complex")
    assert abs(asg["v1"] ** 2 - 2) < 1e-12


def test_formal_values_is_none():
    assert labels("A2").formal_values() is None
