from typing import Callable, Optional
import json
import logging
import random
import time

from pydantic import ValidationError

from .config import get_settings
from .enumerated import directed_suprema_report
from .errors import ParseError, PreconditionFailed, SizeLimit
from .poset import (
    CONDITIONAL_CLAUSES,
    FinitePoset,
    clause,
    is_basis,
    is_debreu_dense,
    is_debreu_upper_dense,
    is_order_dense,
    is_weak_basis,
    random_conditionally_connected_poset,
    random_poset,
    skipped,
    validate_poset,
    verify_density_theorems,
)
from .schemas import ClauseResult, MultiUtilityFile, PosetFile, Report, SuiteResult
from .topology import (
    MonotoneMap,
    MultiUtility,
    lower_topology,
    mu_check,
    mu_from_downsets,
    mu_from_opens,
    mu_from_weak_basis,
    order_from_topology,
    sequential_completeness_check,
    scott_topology,
    strict_multi_utility,
    continuity_check,
    strict_multi_utility_check,
)

logger = logging.getLogger(__name__)

SUITES = ("density", "conditional", "theorems", "mu")


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e}")
    except OSError as e:
        raise ParseError(f"Cannot read {path}: {e}")


def load_poset(path: str) -> tuple[FinitePoset, Optional[frozenset]]:
    """Read a poset file; returns the poset and the optional subset it names."""
    start = time.perf_counter()
    try:
        model = PosetFile(**_read_json(path))
    except ValidationError as e:
        raise ParseError(f"{path} is not a poset file: {e}")
    P = validate_poset(model.elements, model.covers)
    subset = P.subset(model.subset) if model.subset is not None else None
    logger.info(f"[PERF] Loaded {len(P)} elements from {path} in {(time.perf_counter() - start)*1000:.2f}ms")
    return P, subset


def load_utilities(path: str, P: FinitePoset) -> MultiUtility:
    try:
        model = MultiUtilityFile(**_read_json(path))
    except ValidationError as e:
        raise ParseError(f"{path} is not a multi-utility file: {e}")
    return MultiUtility.from_file(P, model)


def subset_report(P: FinitePoset, D: frozenset) -> Report:
    """Density flags of a caller-chosen subset, plus the implication every weak basis must satisfy."""
    weak = is_weak_basis(P, D)
    clauses = [
        clause(P, "debreu_dense", is_debreu_dense(P, D), theorem=False),
        clause(P, "debreu_upper_dense", is_debreu_upper_dense(P, D), theorem=False),
        clause(P, "order_dense", is_order_dense(P, D), theorem=False),
        clause(P, "weak_basis", weak, theorem=False),
        clause(P, "basis", is_basis(P, D), theorem=False),
    ]
    if weak:
        clauses.append(clause(P, "weak_basis_is_upper_dense", is_debreu_upper_dense(P, D)))
    return Report(subject=f"subset {{{', '.join(P.labels(D))}}}", suite="subset", clauses=clauses)


def topology_report(P: FinitePoset) -> Report:
    subject = f"finite poset with {len(P)} elements"
    try:
        scott = scott_topology(P)
    except SizeLimit as e:
        names = ("scott_is_topology", "lower_is_topology", "order_from_scott_topology", "lower_coarser_than_scott")
        return Report(subject=subject, suite="topology", clauses=[skipped(name, f"skipped: {e}") for name in names])
    lower = lower_topology(P)
    clauses = [
        ClauseResult(property="scott_is_topology", holds=scott.is_topology()),
        ClauseResult(property="lower_is_topology", holds=lower.is_topology()),
        ClauseResult(
            property="order_from_scott_topology",
            holds=order_from_topology(scott).table == P.table,
            note="x below y iff every Scott open containing x contains y",
        ),
        ClauseResult(
            property="lower_coarser_than_scott",
            holds=lower.opens <= scott.opens,
            note=f"{len(lower)} lower opens, {len(scott)} Scott opens",
        ),
    ]
    return Report(subject=subject, suite="topology", clauses=clauses)


def _mu_clauses(P: FinitePoset, name: str, V: MultiUtility) -> list[ClauseResult]:
    flags = mu_check(P, V)
    return [
        clause(P, f"{name}_multi_utility", flags.multi_utility),
        clause(P, f"{name}_lsc", flags.lsc),
        clause(P, f"{name}_strict", flags.strict, theorem=False),
    ]


def mu_report(P: FinitePoset, utilities: Optional[MultiUtility] = None) -> list[Report]:
    clauses = []
    clauses.extend(_mu_clauses(P, "downsets", mu_from_downsets(P)))
    clauses.extend(_mu_clauses(P, "weak_basis", mu_from_weak_basis(P, P.indices)))
    clauses.extend(_mu_clauses(P, "lower_opens", mu_from_opens(lower_topology(P))))
    reports = [Report(subject=f"finite poset with {len(P)} elements", suite="multi_utility", clauses=clauses)]

    if utilities is not None:
        flags = mu_check(P, utilities)
        given = [
            clause(P, "multi_utility", flags.multi_utility, theorem=False),
            clause(P, "strict", flags.strict, theorem=False),
            clause(P, "lsc", flags.lsc, theorem=False),
        ]
        reports.append(Report(subject=f"{len(utilities)} given utility functions", suite="given_utilities", clauses=given))
        if flags.all:
            reports.append(strict_multi_utility_check(P, utilities))
    return reports


def _sweep(
    suite: str,
    make: Callable[[int, random.Random], FinitePoset],
    check: Callable[[FinitePoset], list[Report]],
    seed: int,
) -> Report:
    """Run check on seeded random posets; one clause per poset, failing clause names as witness."""
    settings = get_settings()
    rng = random.Random(seed)
    start = time.perf_counter()
    clauses = []
    for i in range(settings.sweep_count):
        size = rng.randint(1, settings.sweep_max_size)
        P = make(size, rng)
        failures = [c.property for r in check(P) for c in r.failures]
        clauses.append(ClauseResult(
            property=f"random_{i}",
            holds=not failures,
            witness=failures or None,
            note=f"{len(P)} elements",
        ))
    logger.info(f"[PERF] {suite} sweep of {settings.sweep_count} posets in {(time.perf_counter() - start)*1000:.2f}ms")
    return Report(subject=f"{settings.sweep_count} random posets, seed {seed}", suite=f"{suite}_sweep", clauses=clauses)


def _theorem_reports(P: FinitePoset, bound: Optional[int] = None) -> list[Report]:
    identity = MonotoneMap(P, P, tuple(P.indices))
    return [
        verify_density_theorems(P, bound),
        directed_suprema_report(P, bound=bound),
        continuity_check(identity, bound),
        sequential_completeness_check(P, bound),
        strict_multi_utility_check(P, strict_multi_utility(P), bound=bound),
    ]


def run_suite(
    P: FinitePoset,
    suite: str,
    subset: Optional[frozenset] = None,
    utilities: Optional[MultiUtility] = None,
    bound: Optional[int] = None,
    seed: Optional[int] = None,
) -> SuiteResult:
    """
    Run a named suite against P.

    Every suite also sweeps seeded random posets, so the same command and
    seed always produce the same result.
    """
    if suite not in SUITES:
        raise PreconditionFailed(f"Unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    seed = get_settings().seed if seed is None else seed
    start = time.perf_counter()

    if suite == "density":
        reports = [verify_density_theorems(P, bound)]
        if subset is not None:
            reports.append(subset_report(P, subset))
        reports.append(_sweep(suite, random_poset, lambda Q: [verify_density_theorems(Q)], seed))
    elif suite == "conditional":
        full = verify_density_theorems(P, bound)
        kept = [c for c in full.clauses if c.property == "conditionally_connected" or c.property in CONDITIONAL_CLAUSES]
        reports = [Report(subject=full.subject, suite="conditional", clauses=kept)]
        reports.append(_sweep(suite, random_conditionally_connected_poset, lambda Q: [verify_density_theorems(Q)], seed))
    elif suite == "theorems":
        reports = _theorem_reports(P, bound) + [topology_report(P)]
        if subset is not None:
            reports.append(directed_suprema_report(P, subset, bound))
        reports.append(_sweep(suite, random_poset, _theorem_reports, seed))
    else:
        reports = [topology_report(P)] + mu_report(P, utilities)
        reports.append(_sweep(suite, random_poset, lambda Q: [topology_report(Q)] + mu_report(Q), seed))

    result = SuiteResult(reports=reports)
    logger.info(f"[PERF] Suite {suite} on {len(P)} elements in {(time.perf_counter() - start)*1000:.2f}ms")
    return result


def render(result: SuiteResult) -> str:
    return result.model_dump_json(indent=2)

