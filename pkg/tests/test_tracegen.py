"""Trace values on the commutative basis: the two methods, series, c-functions."""

import itertools
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affinehecke import (
    PoleError,
    RegionError,
    build_preset,
    derive,
    evaluate,
    height,
)
from affinehecke.bernstein import Bernstein
from affinehecke.coeffring import LabelSet
from affinehecke.hecke import HeckeAlgebra
from affinehecke.rootdata import vneg, vscale
from affinehecke.tracegen import TorusPoint, TraceGen
from affinehecke.weyl import AffineWeyl


@lru_cache(maxsize=None)
def formal_trace(name):
    w = AffineWeyl(build_preset(name))
    H = HeckeAlgebra(w, LabelSet(w))
    return TraceGen(Bernstein(H))


@lru_cache(maxsize=None)
def numeric_trace(name, items, mode="rational"):
    w = AffineWeyl(build_preset(name))
    L = LabelSet(w)
    H = HeckeAlgebra(w, L)
    asg = L.numeric_assignment(dict(items), mode)
    return TraceGen(Bernstein(H), asg)


def brute_force_partitions(trace, target):
    """Independent enumeration: multiplicity vectors over the non-reduced
    positive roots summing to the target, via bounded nested products."""
    datum = trace.datum
    roots = [beta for beta, _ in derive(datum).nonreduced_positive]
    coords = derive(datum).root_coordinates(datum, target)
    if coords is None or any(c.denominator != 1 or c < 0 for c in coords):
        return []
    total = int(height(datum, target))
    found = []
    for ms in itertools.product(range(total + 1), repeat=len(roots)):
        acc = tuple(0 for _ in target)
        for m, beta in zip(ms, roots):
            acc = tuple(a + m * b for a, b in zip(acc, beta))
        if acc == target:
            found.append({beta: m for beta, m in zip(roots, ms) if m})
    return found


@pytest.mark.parametrize("name", ["A2", "BnCn(2)"])
def test_partitions_match_brute_force(name):
    trace = formal_trace(name)
    targets = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 1)]
    for target in targets:
        got = sorted(
            sorted((beta, m) for beta, m in pi.items())
            for pi in trace.partitions(target)
        )
        want = sorted(
            sorted((beta, m) for beta, m in pi.items())
            for pi in brute_force_partitions(trace, target)
        )
        assert got == want, target


def test_partitions_of_nonlattice_targets_are_empty():
    trace = formal_trace("A1-weight")
    assert list(trace.partitions((1,))) == []  # odd: outside the root lattice
    assert list(trace.partitions((-2,))) == []  # negative side
    assert list(trace.partitions((0,))) == [{}]


def test_d_coefficients_rank_one():
    trace = formal_trace("A1-weight")
    L = trace.labels
    q = L.q_of_gen(0)
    qi = q.inverse()
    d1 = q - L.const(2) + qi  # (q - 1)^2 / q
    assert trace.d_coeff((2,), 1) == d1
    assert trace.d_coeff((2,), 2) == d1 * (q + qi)


def test_d_value_matches_evaluated_coefficient():
    name = "BnCn(2)"
    items = (("s1", 4), ("s2", 9), ("s0", 25))
    formal = formal_trace(name)
    numeric = numeric_trace(name, items)
    for beta, _ in derive(formal.datum).r1_positive:
        for k in (1, 2, 3):
            poly = formal.d_coeff(beta, k)
            assert numeric.d_value(beta, k) == evaluate(poly, numeric.assignment)


def test_two_methods_agree_on_a2_sample():
    trace = formal_trace("A2")
    for x in [(0, 0), (-1, -1), (-2, -1), (-2, -2), (-3, -2)]:
        assert trace.trace_theta_partition(x) == trace.trace_theta_direct(x)


def test_two_methods_agree_with_unequal_labels():
    trace = formal_trace("BnCn(2)")
    for x in [(0, 0), (-1, -1), (-2, 0), (-2, -2)]:
        assert trace.trace_theta_partition(x) == trace.trace_theta_direct(x)


def test_direct_vanishes_off_the_negative_cone_sample():
    trace = formal_trace("A2")
    for x in [(1, 0), (0, 1), (1, 1), (-1, 2), (-2, 3), (2, -1)]:
        assert trace.trace_theta_direct(x).is_zero()


def test_trace_sweep_matches_pointwise_direct():
    trace = formal_trace("A2")
    xs = trace.negative_cone_points(3)
    swept = trace.trace_sweep(xs)
    assert set(swept) == set(xs)
    for x in xs:
        assert swept[x] == trace.trace_theta_direct(x)


def test_trace_value_partition_is_the_evaluated_polynomial():
    items = (("s1", 4),)
    formal = formal_trace("A2")
    numeric = numeric_trace("A2", items)
    for x in [(0, 0), (-1, -1), (-2, -2)]:
        poly = formal.trace_theta_partition(x)
        assert numeric.trace_value_partition(x) == evaluate(poly, numeric.assignment)


def test_negative_cone_points_rank_one():
    trace = formal_trace("A1-weight")
    assert trace.negative_cone_points(3) == [(0,), (-2,), (-4,), (-6,)]
    for x in trace.negative_cone_points(6):
        assert height(trace.datum, vneg(x)) <= 6


def test_negative_cone_points_counts():
    # one point per partitionable depth: counts match the rehearsed corridor
    assert len(formal_trace("A2").negative_cone_points(6)) == 28
    assert len(formal_trace("BnCn(2)").negative_cone_points(6)) == 28
    assert len(formal_trace("A1-root").negative_cone_points(6)) == 7


def test_c_factor_value():
    items = (("s1", 4),)
    numeric = numeric_trace("A2", items)
    t = TorusPoint((Fraction(1, 7), Fraction(2, 23)))
    assert numeric.c_full(t) == Fraction(255, 47488)


def test_c_factor_pole():
    items = (("s1", 4), ("s0", 4))
    numeric = numeric_trace("A1-weight", items)
    with pytest.raises(PoleError):
        numeric.c_factor((2,), TorusPoint((Fraction(1),)))


def test_check_region_rejects_large_points():
    items = (("s1", 4), ("s0", 4))
    numeric = numeric_trace("A1-weight", items)
    with pytest.raises(RegionError):
        numeric.check_region(TorusPoint((Fraction(2),)))
    # well inside the region: no complaint
    numeric.check_region(TorusPoint((Fraction(1, 16),)))


def test_generating_check_rank_one():
    items = (("s1", 4), ("s0", 4))
    numeric = numeric_trace("A1-weight", items)
    t = TorusPoint((Fraction(1, 16),))
    lhs, rhs, gap = numeric.generating_check(t, 30)
    assert rhs == Fraction(7225, 7161)
    assert gap < Fraction(1, 10**40)


def test_series_identity_short_truncation():
    for name in ("A1-weight", "A1-root"):
        trace = formal_trace(name)
        root = derive(trace.datum).r1_positive[0][0]
        assert trace.d_series_truncation(root, 6) == trace.inverse_cc_series(root, 6)


def test_torus_point_is_a_character():
    t = TorusPoint((Fraction(2, 3), Fraction(-1, 5)))
    for x in [(1, 0), (2, -1), (-3, 2)]:
        for y in [(0, 1), (1, 1)]:
            xy = tuple(a + b for a, b in zip(x, y))
            assert t.value(xy) == t.value(x) * t.value(y)
    inv = t.inv()
    for x in [(1, 2), (-1, 3)]:
        assert t.value(x) * inv.value(x) == 1


def test_torus_point_weyl_action():
    w = AffineWeyl(build_preset("A2"))
    t = TorusPoint((Fraction(1, 2), Fraction(3, 4)))
    for u in w.enumerate_w0():
        moved = t.apply_w(w, u)
        uinv = w.fin_inv(u)
        for x in [(1, 0), (1, 1), (-2, 1)]:
            assert moved.value(x) == t.value(uinv.apply_x(x))


def test_formal_trace_refuses_numeric_queries():
    trace = formal_trace("A2")
    with pytest.raises(Exception):
        trace.trace_value_partition((-1, -1))
