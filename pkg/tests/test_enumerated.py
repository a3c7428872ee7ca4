from fractions import Fraction
import operator

import pytest

from ordbase.config import get_settings
from ordbase.domains import MajorizationPoint, RationalInterval, leq_I, leq_M, surd
from ordbase.effective import alpha0, alpha_majorization, rational_intervals
from ordbase.enumerated import (
    ChainStream,
    DirectedStream,
    EnumeratedPoset,
    NotWithinBudget,
    Yes,
    chain_from_directed,
    chain_inside_directed,
    classify_trivial,
    directed_suprema_report,
    order_dense_certificate,
    order_dense_chain,
    supremum_faithful,
    directed_sup_membership,
)
from ordbase.errors import ConstructionError, PreconditionFailed
from ordbase.poset import DEGENERATE, validate_poset

le = operator.le


@pytest.fixture
def unit_rationals():
    return EnumeratedPoset.from_map(alpha0(), le)


def towards_one():
    return DirectedStream(at=lambda k: 1 - Fraction(1, k + 2), name="1-1/k")


def test_chain_stream_rejects_decrease():
    with pytest.raises(ConstructionError):
        ChainStream([2, 1], le).take(2)


def test_strict_chain_stream_rejects_repeat():
    with pytest.raises(ConstructionError):
        ChainStream([1, 1], le, strict=True).take(2)


def test_empty_directed_stream_is_rejected():
    with pytest.raises(PreconditionFailed):
        DirectedStream.from_sequence([])


def test_membership_through_encoding(unit_rationals):
    assert unit_rationals.includes(Fraction(2, 5))
    assert not unit_rationals.includes(Fraction(3, 2))


def test_order_dense_chain_picks_first_enumerated_candidates(unit_rationals):
    chain = order_dense_chain(unit_rationals, Fraction(0), Fraction(1, 2))
    assert chain.take(3) == [Fraction(1, 3), Fraction(2, 5), Fraction(3, 7)]


def test_order_dense_chain_stalls_on_exhausted_budget(unit_rationals):
    chain = order_dense_chain(unit_rationals, Fraction(0), Fraction(1, 2), budget=5)
    assert chain.take(3) == []
    assert chain.stall.budget == 5
    assert chain.stall.produced == 0


def test_order_dense_chain_stalls_when_nothing_lies_between(chain3):
    D = EnumeratedPoset.from_finite(chain3)
    chain = order_dense_chain(D, chain3.index("a"), chain3.index("b"))
    assert chain.take(2) == []
    assert "strictly between" in chain.stall.reason


def test_chain_from_directed_dominates_the_stream(unit_rationals):
    A = towards_one()
    prefix = chain_from_directed(unit_rationals, A).take(8)
    assert len(prefix) == 8
    assert all(a < b for a, b in zip(prefix, prefix[1:]))
    assert all(d < 1 for d in prefix)
    assert supremum_faithful(prefix, A, 5, le) is None


def test_chain_from_directed_rejects_finite_streams(unit_rationals):
    with pytest.raises(PreconditionFailed):
        chain_from_directed(unit_rationals, DirectedStream.from_sequence([Fraction(1, 2)]))


def test_supremum_faithful_reports_first_undominated_index():
    assert supremum_faithful([Fraction(1, 2)], towards_one(), 3, le) == 1


def test_order_dense_certificate():
    assert order_dense_certificate([Fraction(1, 3), Fraction(2, 5)], Fraction(1, 2), le)
    assert not order_dense_certificate([Fraction(2, 5), Fraction(1, 3)], Fraction(1, 2), le)
    assert not order_dense_certificate([], Fraction(1, 2), le)


def test_membership_of_an_irrational_supremum(unit_rationals):
    x = surd(2) / 2
    result = directed_sup_membership(
        "unit interval",
        unit_rationals,
        x,
        is_sup=lambda prefix, t: t - prefix[-1] < Fraction(1, 100),
        chain_length=3,
    )
    assert isinstance(result, Yes)
    assert result.witness == (Fraction(1, 2), Fraction(2, 3), Fraction(7, 10))


def test_membership_of_an_element_of_d(unit_rationals):
    result = directed_sup_membership("unit interval", unit_rationals, Fraction(3, 7))
    assert result == Yes(witness=(Fraction(3, 7),), certificate="member of D")


def test_membership_without_a_supremum_test_gives_up(unit_rationals):
    result = directed_sup_membership("unit interval", unit_rationals, surd(2) / 2)
    assert isinstance(result, NotWithinBudget)
    assert not result.exhausted


def test_membership_in_finite_host_is_exhaustive(diamond):
    D = EnumeratedPoset.from_finite(diamond, diamond.subset(["bot", "l", "r"]))
    result = directed_sup_membership(diamond, D, diamond.index("top"))
    assert isinstance(result, NotWithinBudget)
    assert result.exhausted


def test_finite_posets_have_no_supremum_points(diamond):
    nontrivial, trivial = classify_trivial(diamond, diamond.indices)
    assert nontrivial == frozenset()
    assert trivial == frozenset(diamond.indices)


def test_chain_inside_finite_directed_set_is_its_top(unit_rationals):
    A = DirectedStream.from_sequence([Fraction(1, 4), Fraction(1, 2), Fraction(1, 3)])
    assert chain_inside_directed(unit_rationals, A).take(3) == [Fraction(1, 2)] * 3


def test_chain_inside_rejects_sets_without_top(vee):
    D = EnumeratedPoset.from_finite(vee)
    A = DirectedStream.from_sequence([vee.index("a"), vee.index("b")])
    with pytest.raises(PreconditionFailed):
        chain_inside_directed(D, A)


def test_chain_inside_infinite_stream_stays_in_the_stream(unit_rationals):
    prefix = chain_inside_directed(unit_rationals, towards_one()).take(4)
    assert len(prefix) == 4
    assert all(a <= b for a, b in zip(prefix, prefix[1:]))
    assert all((1 - v).numerator == 1 for v in prefix)


@pytest.fixture
def simplex():
    return EnumeratedPoset.from_map(alpha_majorization(2), leq_M)


def first_share(points):
    return [p.coords[0] for p in points]


def test_simplex_chain_dominates_the_stream(simplex):
    A = DirectedStream(
        at=lambda k: MajorizationPoint((1 - Fraction(1, 2 ** (k + 1)), Fraction(1, 2 ** (k + 1)))),
        name="towards (1,0)",
    )
    prefix = chain_from_directed(simplex, A).take(20)
    assert len(prefix) == 20
    shares = first_share(prefix)
    assert all(a < b for a, b in zip(shares, shares[1:]))
    assert all(s < 1 for s in shares)
    assert shares[:4] == [Fraction(1, 2), Fraction(3, 4), Fraction(5, 6), Fraction(7, 8)]
    assert supremum_faithful(prefix, A, 5, leq_M) is None


def test_interval_chain_shrinks_around_zero():
    D = EnumeratedPoset.from_map(rational_intervals(), leq_I)
    A = DirectedStream(
        at=lambda k: RationalInterval(-Fraction(1, 2 ** k), Fraction(1, 2 ** k)),
        name="[-2^-k, 2^-k]",
    )
    prefix = chain_from_directed(D, A).take(4)
    assert [str(i) for i in prefix] == ["[-1,1]", "[-1,1/2]", "[-1/2,1/2]", "[-1/2,1/3]"]
    assert all(leq_I(a, b) for a, b in zip(prefix, prefix[1:]))
    widths = [i.width for i in prefix]
    assert all(a > b for a, b in zip(widths, widths[1:]))
    assert all(i.lo < 0 < i.hi for i in prefix)


def test_simplex_order_dense_chain_below_the_top(simplex):
    top = MajorizationPoint((Fraction(1), Fraction(0)))
    prefix = order_dense_chain(simplex, MajorizationPoint.bottom(2), top).take(10)
    assert len(prefix) == 10
    shares = first_share(prefix)
    assert all(a < b for a, b in zip(shares, shares[1:]))
    assert all(Fraction(1, 2) < s < 1 for s in shares)


def test_membership_of_an_irrational_simplex_point(simplex):
    half = surd(2) / 2
    result = directed_sup_membership(
        "simplex",
        simplex,
        MajorizationPoint((half, 1 - half)),
        is_sup=lambda prefix, t: t.coords[0] - prefix[-1].coords[0] < Fraction(1, 100),
        chain_length=3,
    )
    assert isinstance(result, Yes)
    assert first_share(result.witness) == [Fraction(2, 3), Fraction(7, 10), Fraction(12, 17)]


@pytest.mark.parametrize(
    "elements, covers",
    [
        (["bot", "l", "r", "top"], [("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")]),
        (["a", "b", "c"], [("a", "c"), ("b", "c")]),
        (["a"], []),
        ([], []),
    ],
    ids=["diamond", "vee", "single", "empty"],
)
def test_directed_suprema_report_is_degenerate(elements, covers):
    report = directed_suprema_report(validate_poset(elements, covers))
    assert report.suite == "directed_suprema"
    assert report.ok, report.failures
    assert all(c.holds is True for c in report.clauses)
    assert all(c.degenerate and c.note.startswith(DEGENERATE) for c in report.clauses)
    assert report.clause("no_nontrivial_suprema").subset == [str(e) for e in elements]


def test_directed_suprema_of_a_subset(diamond):
    B = diamond.subset(["bot", "l", "r"])
    report = directed_suprema_report(diamond, B)
    assert report.ok
    assert report.clause("directed_suprema_stay_in_subset").subset == ["bot", "l", "r"]
    assert report.clause("membership_search_matches_subset").holds is True
    assert report.clause("subset_with_trivial_points_is_weak_basis").subset == ["bot", "l", "r", "top"]


def test_membership_search_skipped_above_sweep_bound(monkeypatch, diamond):
    monkeypatch.setenv("ORDBASE_SWEEP_BOUND", "2")
    get_settings.cache_clear()
    c = directed_suprema_report(diamond).clause("membership_search_matches_subset")
    assert c.holds is None
    assert c.degenerate
    assert "exceeds the sweep bound 2" in c.note
