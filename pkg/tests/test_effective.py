from fractions import Fraction
import operator

import pytest
from hypothesis import given, settings, strategies as st

from ordbase.domains import MajorizationPoint, RationalInterval, leq_M, surd, way_below_I, way_below_M
from ordbase.effective import (
    Emitter,
    alpha0,
    alpha_majorization,
    approximant_emitter,
    cantor_strings,
    computable_element_emitter,
    computable_function_relation,
    pair,
    rational_intervals,
    rationals,
    relation_emitter,
    totient,
    unpair,
    verify_effective_weak_basis,
)
from ordbase.errors import InvalidElement, PreconditionFailed

le = operator.le


def test_pairing_values():
    assert [pair(0, 0), pair(0, 1), pair(1, 0), pair(2, 3)] == [0, 1, 2, 17]
    assert unpair(17) == (2, 3)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=0, max_value=10**6))
def test_unpair_inverts_pair(n, m):
    assert unpair(pair(n, m)) == (n, m)


def test_pairing_rejects_negatives():
    with pytest.raises(PreconditionFailed):
        pair(-1, 0)
    with pytest.raises(PreconditionFailed):
        unpair(-3)


def test_totient():
    assert [totient(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]


def test_unit_rationals_by_denominator():
    expected = ["0", "1", "1/2", "1/3", "2/3", "1/4", "3/4", "1/5", "2/5", "3/5", "4/5", "1/6", "5/6", "1/7", "2/7", "3/7"]
    assert [str(q) for q in alpha0().take(16)] == expected
    assert alpha0().encode(Fraction(2, 5)) == 8


def test_unit_rationals_reject_outsiders():
    with pytest.raises(InvalidElement):
        alpha0().encode(Fraction(3, 2))
    with pytest.raises(InvalidElement):
        alpha0().decode(-1)


def test_all_rationals_alternate_sign():
    assert [str(q) for q in rationals().take(7)] == ["0", "1", "-1", "1/2", "-1/2", "2", "-2"]
    assert rationals().encode(Fraction(-2)) == 6


def test_majorization_enumeration_starts_at_bottom():
    fmap = alpha_majorization(2)
    assert [str(p) for p in fmap.take(3)] == ["(1/2,1/2)", "(1,0)", "(3/4,1/4)"]
    with pytest.raises(PreconditionFailed):
        alpha_majorization(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_majorization_enumeration_is_injective(n):
    fmap = alpha_majorization(n)
    points = fmap.take(60)
    assert len(set(points)) == 60
    assert [fmap.encode(p) for p in points] == list(range(60))


@pytest.mark.parametrize("n", [2, 3])
def test_majorization_codes_round_trip(n):
    fmap = alpha_majorization(n)
    assert all(fmap.encode(fmap.decode(k)) == k for k in range(10 ** 4))


@pytest.mark.parametrize("n", [2, 3])
def test_majorization_emitter_lists_every_related_pair(n):
    fmap = alpha_majorization(n)
    emitter = relation_emitter(fmap, leq_M)
    for p in range(51):
        for q in range(51):
            code = pair(p, q)
            x, y = fmap.decode(p), fmap.decode(q)
            # for n <= 3 the first and last coordinates fix every partial sum
            below = x.coords[0] <= y.coords[0] and x.coords[-1] >= y.coords[-1]
            assert leq_M(x, y) == below
            expected = code if below else 0
            assert emitter.step(code) == expected, (p, q)


def test_cantor_strings_shortest_first():
    assert [str(s) for s in cantor_strings("01").take(4)] == ["ε", "0", "1", "00"]
    with pytest.raises(PreconditionFailed):
        cantor_strings("")


def test_interval_enumeration():
    fmap = rational_intervals()
    assert fmap.decode(0).is_bottom
    assert str(fmap.decode(1)) == "[0,0]"
    assert str(fmap.decode(17)) == "[1,2]"
    assert fmap.encode(RationalInterval(Fraction(1), Fraction(2))) == 17


def test_relation_emitter_emits_code_or_zero():
    emitter = relation_emitter(alpha0(), le)
    assert emitter.step(pair(2, 1)) == pair(2, 1)
    assert emitter.step(pair(1, 2)) == 0
    assert emitter.trace_text(3).splitlines() == ["0", "1", "0"]


def test_effective_weak_basis_for_unit_rationals():
    report = verify_effective_weak_basis(alpha0(), le, {"half": [Fraction(0), Fraction(1, 2)]}, bound=200)
    assert report.ok
    assert report.clause("directed_witness[half]").holds


def test_incomplete_emitter_is_caught():
    honest = relation_emitter(alpha0(), le)
    broken = Emitter(step=lambda k: 0 if k % 10 == 9 else honest.step(k), name="drops every tenth")
    report = verify_effective_weak_basis(alpha0(), le, {}, bound=100, emitter=broken)
    assert report.clause("emitter_sound").holds
    complete = report.clause("emitter_complete")
    assert complete.holds is False
    assert complete.witness == ["19"]


def test_unsound_emitter_is_caught():
    liar = Emitter(step=lambda k: pair(1, 0))
    report = verify_effective_weak_basis(alpha0(), le, {}, bound=10, emitter=liar)
    unsound = report.clause("emitter_sound")
    assert unsound.holds is False
    assert unsound.witness == ["0"]


def test_witness_outside_the_basis_fails():
    report = verify_effective_weak_basis(alpha0(), le, {"out": [Fraction(3, 2)]}, bound=10)
    assert report.clause("directed_witness[out]").holds is False


def test_square_root_emitter_is_sound():
    root = surd(2)
    point = RationalInterval(root, root)
    intervals = rational_intervals()
    emitter = computable_element_emitter(intervals, lambda b: way_below_I(b, point))
    found = emitter.emitted(200) - {0}
    assert 17 in found
    for k in found:
        interval = intervals.decode(k)
        assert interval.lo < root < interval.hi


def test_element_emitter_needs_bottom_first():
    with pytest.raises(PreconditionFailed):
        computable_element_emitter(alpha0(), lambda b: False)


def test_approximant_emitter_only_emits_way_below_points():
    target = MajorizationPoint((Fraction(2, 3), Fraction(1, 3)))
    fmap = alpha_majorization(2)
    emitter = approximant_emitter(fmap, way_below_M, [target])
    for k in emitter.emitted(100) - {0}:
        assert way_below_M(fmap.decode(k), target)


def test_function_relation_emitter():
    halve = computable_function_relation(lambda q: q / 2, alpha0(), alpha0(), operator.lt)
    assert halve.step(pair(3, 1)) == pair(3, 1)
    assert halve.step(pair(2, 1)) == 0
