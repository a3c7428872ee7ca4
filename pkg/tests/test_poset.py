from itertools import combinations, permutations

import pytest
from hypothesis import given, settings

from ordbase.errors import AntisymmetryViolation, ParseError, SizeLimit, UnknownElement
from ordbase.gallery import two_interval_grid
from ordbase.poset import (
    CONDITIONAL_CLAUSES,
    compact_elements,
    directed_family,
    is_basis,
    is_conditionally_connected,
    is_debreu_dense,
    is_debreu_upper_dense,
    is_directed,
    is_weak_basis,
    isolated_elements,
    jumps,
    min_elements,
    poset_from_relation,
    smallest_debreu_dense,
    supremum,
    validate_poset,
    verify_density_theorems,
    way_below_bruteforce,
    weak_basis_separation_witness,
)
from strategies import conditionally_connected_posets, posets


def test_validate_builds_transitive_closure(chain3):
    a, b, c = (chain3.index(x) for x in "abc")
    assert chain3.leq(a, c)
    assert not chain3.leq(c, a)
    assert chain3.lt(a, b)
    assert chain3.down(c) == {a, b, c}


def test_cycle_is_rejected():
    with pytest.raises(AntisymmetryViolation) as info:
        validate_poset(["a", "b"], [("a", "b"), ("b", "a")])
    assert "a" in info.value.cycle and "b" in info.value.cycle


def test_undeclared_element_is_rejected():
    with pytest.raises(UnknownElement):
        validate_poset(["a"], [("a", "z")])


def test_duplicate_labels_are_rejected():
    with pytest.raises(ParseError):
        validate_poset(["a", "a"], [])


def test_relation_must_be_transitive():
    pairs = {("a", "b"), ("b", "c")}
    with pytest.raises(ParseError):
        poset_from_relation(["a", "b", "c"], lambda x, y: x == y or (x, y) in pairs)


def test_supremum_of_a_chain_is_its_maximum(chain3):
    everything = frozenset(chain3.indices)
    assert supremum(chain3, everything) == chain3.index("c")
    assert supremum(chain3, []) is None


def test_empty_set_is_not_directed(chain3):
    assert not is_directed(chain3, [])


def test_incomparable_pair_has_no_supremum(vee):
    assert supremum(vee, vee.subset(["a", "b"])) == vee.index("c")
    assert not is_directed(vee, vee.subset(["a", "b"]))


def test_size_limit_guards_exhaustive_search(chain3):
    with pytest.raises(SizeLimit):
        directed_family(chain3, bound=2)


@settings(max_examples=40, deadline=None)
@given(posets())
def test_way_below_coincides_with_order(P):
    for x in P.indices:
        for y in P.indices:
            assert way_below_bruteforce(P, x, y) == P.leq(x, y)


@settings(max_examples=40, deadline=None)
@given(posets())
def test_directed_sets_contain_their_supremum(P):
    for top, group in directed_family(P).items():
        for A in group:
            assert top in A


@settings(max_examples=30, deadline=None)
@given(posets())
def test_weak_bases_are_upper_dense_and_separate(P):
    everything = frozenset(P.indices)
    assert is_weak_basis(P, everything)
    assert is_debreu_upper_dense(P, everything)
    for x in P.indices:
        for y in P.indices:
            if P.lt(x, y):
                assert weak_basis_separation_witness(P, everything, x, y) is not None


def test_missing_element_breaks_weak_basis(diamond):
    without_top = frozenset(diamond.indices) - {diamond.index("top")}
    check = is_weak_basis(diamond, without_top)
    assert not check
    assert check.witness == (diamond.index("top"),)
    assert not is_basis(diamond, without_top)


def test_density_flags(diamond):
    bot, l, r, top = (diamond.index(x) for x in ("bot", "l", "r", "top"))
    assert is_debreu_dense(diamond, {bot, top})
    upper = is_debreu_upper_dense(diamond, {bot, top})
    assert not upper
    assert set(upper.witness) == {l, r}


def test_structure_of_diamond(diamond):
    assert min_elements(diamond) == {diamond.index("bot")}
    assert compact_elements(diamond) == frozenset(diamond.indices)
    assert len(jumps(diamond)) == 4
    assert isolated_elements(diamond) == {diamond.index("l"), diamond.index("r")}


def test_conditional_connectedness(chain3, vee, diamond):
    assert is_conditionally_connected(chain3)
    assert not is_conditionally_connected(vee)
    assert not is_conditionally_connected(diamond)


def test_grid_needs_one_of_each_shifted_pair():
    P = two_interval_grid()
    assert len(smallest_debreu_dense(P)) == 3
    for x in ("0", "1/2", "1"):
        shifted = str(int(x) + 2) if "/" not in x else "5/2"
        assert P.leq(P.index(x), P.index(shifted))


@settings(max_examples=30, deadline=None)
@given(posets(max_size=5))
def test_density_theorems_hold(P):
    report = verify_density_theorems(P)
    assert report.ok, report.failures


@settings(max_examples=30, deadline=None)
@given(conditionally_connected_posets(max_size=6))
def test_conditional_clauses_run_and_hold(P):
    report = verify_density_theorems(P)
    assert report.clause("conditionally_connected").holds
    for name in CONDITIONAL_CLAUSES:
        assert report.clause(name).holds is True
    assert report.ok


def test_conditional_clauses_skipped_with_reason(vee):
    report = verify_density_theorems(vee)
    assert report.clause("conditionally_connected").holds is False
    for name in CONDITIONAL_CLAUSES:
        c = report.clause(name)
        assert c.holds is None
        assert c.note.startswith("skipped: not conditionally connected")
    assert report.ok


def test_sweep_clauses_skip_above_sweep_bound(chain3):
    report = verify_density_theorems(chain3, sweep_bound=2)
    c = report.clause("weak_basis_upper_dense")
    assert c.holds is None
    assert "skipped" in c.note


@pytest.mark.parametrize(
    "elements, covers",
    [([], []), (["a"], []), (["a", "b", "c"], [("a", "b"), ("b", "c")])],
    ids=["empty", "single", "chain"],
)
def test_minimal_clause_is_vacuous_below_two_minimal_elements(elements, covers):
    report = verify_density_theorems(validate_poset(elements, covers))
    c = report.clause("minimal_in_upper_dense")
    assert c.holds is True
    assert c.degenerate
    assert c.note.startswith("vacuous")
    assert report.ok


def test_minimal_clause_is_checked_with_two_minimal_elements(vee):
    c = verify_density_theorems(vee).clause("minimal_in_upper_dense")
    assert c.holds is True
    assert not c.degenerate
    assert c.subset == ["a", "b"]


def unlabeled_posets(n):
    """One naturally labeled order relation per isomorphism class of n-element posets."""
    pairs = list(combinations(range(n), 2))
    shapes = {}
    for mask in range(2 ** len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        if any((a, d) not in rel for (a, b) in rel for (c, d) in rel if b == c):
            continue
        key = min(tuple(sorted((perm[a], perm[b]) for a, b in rel)) for perm in permutations(range(n)))
        shapes.setdefault(key, rel)
    return list(shapes.values())


@pytest.mark.parametrize("n, classes", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 16), (5, 63)])
def test_every_small_poset_up_to_isomorphism(n, classes):
    shapes = unlabeled_posets(n)
    assert len(shapes) == classes
    labels = [f"e{i}" for i in range(n)]
    for rel in shapes:
        P = validate_poset(labels, [(labels[a], labels[b]) for a, b in sorted(rel)])
        assert all(way_below_bruteforce(P, x, y) == P.leq(x, y) for x in P.indices for y in P.indices)
        report = verify_density_theorems(P)
        assert report.ok, (rel, report.failures)
