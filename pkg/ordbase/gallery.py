"""
Finite truncations of the standard counterexamples, each with the checks
that are decidable on the truncation and a note on what needs the infinite
original.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List

from .domains import surd
from .poset import (
    Check,
    FinitePoset,
    all_subsets,
    clause,
    compact_elements,
    is_conditionally_connected,
    is_debreu_dense,
    is_debreu_upper_dense,
    poset_from_relation,
    way_below_bruteforce,
)
from .schemas import ClauseResult, Report
from .topology import MultiUtility, UtilityFunction, mu_check, strict_multi_utility_check


@dataclass(frozen=True)
class GalleryInstance:
    name: str
    claim: str
    decidable: str
    needs_infinity: str
    build: Callable[[], FinitePoset]
    verify: Callable[[FinitePoset], List[ClauseResult]]

    def report(self) -> Report:
        P = self.build()
        return Report(subject=self.name, suite="gallery", clauses=self.verify(P))


# Two copies of [0,1]: x below y inside a copy by the usual order, and x below y+2 across.
GRID = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(5, 2), Fraction(3)]


def _grid_leq(x: Fraction, y: Fraction) -> bool:
    same_block = (x <= 1) == (y <= 1)
    return (same_block and x <= y) or x + 2 <= y


def two_interval_grid() -> FinitePoset:
    labels = [str(v) for v in GRID]
    values = dict(zip(labels, GRID))
    return poset_from_relation(labels, lambda a, b: _grid_leq(values[a], values[b]))


def _verify_grid(P: FinitePoset) -> List[ClauseResult]:
    lower = [x for x in P.indices if Fraction(P.label(x)) <= 1]
    shifted = {x: P.index(str(Fraction(P.label(x)) + 2)) for x in lower}
    across = next((x for x in lower if not P.leq(x, shifted[x])), None)
    dense = [D for D in all_subsets(P) if is_debreu_dense(P, D)]
    missing = next(
        ((x, D) for D in dense for x in lower if x not in D and shifted[x] not in D),
        None,
    )
    return [
        clause(P, "shift_is_above", Check(True) if across is None else Check(False, witness=(across,)), "x below x+2 for every grid x"),
        clause(
            P,
            "dense_sets_meet_every_pair",
            Check(True) if missing is None else Check(False, witness=(missing[0],)),
            f"each of the {len(dense)} Debreu dense subsets contains x or x+2",
        ),
    ]


# Finite strings over {0,1} up to length 2, and periodic infinite strings standing in for the rest.
PERIODS = {"0^w": "0", "1^w": "1", "(01)^w": "01", "(10)^w": "10"}
SHORT = ["", "0", "1", "00", "01", "10", "11"]


def _unroll(label: str, length: int) -> str:
    period = PERIODS[label]
    return (period * (length // len(period) + 1))[:length]


def _flat_leq(x: str, y: str) -> bool:
    if x == y:
        return True
    return x not in PERIODS and y in PERIODS and _unroll(y, len(x)) == x


def flat_strings() -> FinitePoset:
    labels = [s or "e" for s in SHORT] + list(PERIODS)
    text = {label: ("" if label == "e" else label) for label in labels}
    return poset_from_relation(labels, lambda a, b: _flat_leq(text[a], text[b]))


def _finite_part(P: FinitePoset) -> frozenset:
    return frozenset(x for x in P.indices if P.label(x) not in PERIODS)


def _verify_flat(P: FinitePoset) -> List[ClauseResult]:
    finite = _finite_part(P)
    stray = next(
        ((x, y) for x in P.indices for y in P.indices if P.lt(x, y) and not (x in finite and y not in finite)),
        None,
    )
    return [
        clause(P, "flat_order", Check(True) if stray is None else Check(False, witness=stray), "x strictly below y only for a finite string below an infinite one"),
        clause(P, "finite_strings_debreu_dense", is_debreu_dense(P, finite)),
        clause(P, "finite_strings_debreu_upper_dense", is_debreu_upper_dense(P, finite)),
    ]


def _verify_all_compact(P: FinitePoset) -> List[ClauseResult]:
    compacts = compact_elements(P)
    slack = next(
        ((x, y) for x in P.indices for y in P.indices if P.leq(x, y) and not way_below_bruteforce(P, x, y)),
        None,
    )
    missing = tuple(sorted(frozenset(P.indices) - compacts))
    return [
        clause(P, "every_element_compact", Check(True) if not missing else Check(False, witness=missing)),
        clause(P, "below_implies_way_below", Check(True) if slack is None else Check(False, witness=slack)),
    ]


ANTICHAIN = [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)]


def antichain() -> FinitePoset:
    labels = [str(v) for v in ANTICHAIN]
    return poset_from_relation(labels, lambda a, b: a == b)


def _verify_antichain(P: FinitePoset) -> List[ClauseResult]:
    identity = {x: Fraction(P.label(x)) for x in P.indices}
    V = MultiUtility(P, (UtilityFunction("id", identity), UtilityFunction("-id", {x: -v for x, v in identity.items()})))
    flags = mu_check(P, V)
    upper = [D for D in all_subsets(P) if is_debreu_upper_dense(P, D)]
    return [
        clause(P, "identity_pair_multi_utility", flags.multi_utility),
        clause(P, "identity_pair_strict", flags.strict),
        clause(P, "identity_pair_lsc", flags.lsc),
        clause(P, "upper_dense_is_everything", upper == [frozenset(P.indices)],"the only Debreu upper dense subset is the whole antichain"),
    ]


SQRT2 = surd(2)
RATIONAL_IRRATIONAL = [Fraction(0), SQRT2 / 4, Fraction(1, 2), SQRT2 / 2, Fraction(1)]


def _is_rational(v) -> bool:
    return isinstance(v, Fraction)


def rational_below_irrational() -> FinitePoset:
    labels = [str(v) for v in RATIONAL_IRRATIONAL]
    values = dict(zip(labels, RATIONAL_IRRATIONAL))

    def leq(a: str, b: str) -> bool:
        x, y = values[a], values[b]
        return a == b or (_is_rational(x) and not _is_rational(y) and x < y)

    return poset_from_relation(labels, leq)


def rational_irrational_utilities(P: FinitePoset) -> MultiUtility:
    values = {x: RATIONAL_IRRATIONAL[x] for x in P.indices}
    v1 = UtilityFunction("v1", values)
    v2 = UtilityFunction("v2", {x: (-v - 1 if _is_rational(v) else -v) for x, v in values.items()})
    return MultiUtility(P, (v1, v2))


def _verify_rational_irrational(P: FinitePoset) -> List[ClauseResult]:
    V = rational_irrational_utilities(P)
    flags = mu_check(P, V)
    clauses = [
        clause(P, "pair_multi_utility", flags.multi_utility),
        clause(P, "pair_strict", flags.strict),
        clause(P, "pair_lsc", flags.lsc),
        clause(
            P,
            "rationals_debreu_upper_dense",
            is_debreu_upper_dense(P, [x for x in P.indices if _is_rational(RATIONAL_IRRATIONAL[x])]),
            "fails for irrationals x > y: every rational below y is also below x",
            theorem=False,
        ),
        clause(P, "everything_debreu_upper_dense", is_debreu_upper_dense(P, P.indices)),
    ]
    if flags.all:
        clauses.extend(strict_multi_utility_check(P, V).clauses)
    return clauses


UNIT_GRID = [Fraction(k, 4) for k in range(5)]


def unit_chain() -> FinitePoset:
    labels = [str(v) for v in UNIT_GRID]
    values = dict(zip(labels, UNIT_GRID))
    return poset_from_relation(labels, lambda a, b: values[a] <= values[b])


def _verify_unit_chain(P: FinitePoset) -> List[ClauseResult]:
    return [
        clause(P, "conditionally_connected", is_conditionally_connected(P)),
        clause(P, "grid_debreu_upper_dense", is_debreu_upper_dense(P, P.indices)),
        ClauseResult(
            property="compacts_only_bottom",
            holds=None,
            degenerate=True,
            note="degenerate at finite scale: every element of a finite chain is compact",
        ),
    ]


GALLERY = [
    GalleryInstance(
        name="two_interval_grid",
        claim="countable weak basis but no countable Debreu dense subset",
        decidable="x below x+2, and every Debreu dense subset meets each pair {x, x+2}",
        needs_infinity="uncountably many disjoint pairs {x, x+2} force an uncountable dense subset",
        build=two_interval_grid,
        verify=_verify_grid,
    ),
    GalleryInstance(
        name="flat_strings",
        claim="Debreu upper separable without a countable weak basis",
        decidable="the flat order and density of the finite strings",
        needs_infinity="every infinite string must lie in any weak basis, and there are uncountably many",
        build=flat_strings,
        verify=_verify_flat,
    ),
    GalleryInstance(
        name="flat_strings_all_compact",
        claim="continuous, Debreu upper separable, below implies way below, yet uncountably many compact elements",
        decidable="every element is compact and the order coincides with way-below",
        needs_infinity="uncountability of the compact infinite strings",
        build=flat_strings,
        verify=_verify_all_compact,
    ),
    GalleryInstance(
        name="antichain_identity_pair",
        claim="finite lsc strict monotone multi-utility, uncountable compacts, not Debreu upper separable",
        decidable="{id, -id} is a strict lsc multi-utility; only the whole set is Debreu upper dense",
        needs_infinity="the antichain [0,1] is uncountable",
        build=antichain,
        verify=_verify_antichain,
    ),
    GalleryInstance(
        name="rational_below_irrational",
        claim="finite lsc strict monotone multi-utility, yet uncountable compacts",
        decidable="{v1, v2} is a strict lsc multi-utility; whether the rationals alone are Debreu upper dense",
        needs_infinity="the irrationals of [0,1] are uncountable and all compact",
        build=rational_below_irrational,
        verify=_verify_rational_irrational,
    ),
    GalleryInstance(
        name="unit_interval_chain",
        claim="conditionally connected and Debreu upper separable but not omega-algebraic",
        decidable="conditional connectedness and upper density of the rational grid",
        needs_infinity="only 0 is compact in [0,1], which no finite chain can show",
        build=unit_chain,
        verify=_verify_unit_chain,
    ),
]


def _status(c: ClauseResult) -> str:
    if c.holds is None:
        return "skipped"
    if c.holds:
        return "ok"
    # informational clauses are expected to be false at truncation
    return "FAILED" if c.theorem else "false"


def gallery_text() -> str:
    lines = []
    for instance in GALLERY:
        report = instance.report()
        P = instance.build()
        lines.append(f"{instance.name}: {instance.claim}")
        lines.append(f"  elements: {', '.join(str(e) for e in P.elements)}")
        lines.append(f"  decidable at truncation: {instance.decidable}")
        lines.append(f"  needs the infinite original: {instance.needs_infinity}")
        for c in report.clauses:
            lines.append(f"    [{_status(c)}] {c.property}" + (f" ({c.note})" if c.note else ""))
        lines.append("")
    return "\n".join(lines).rstrip() + "\n"
