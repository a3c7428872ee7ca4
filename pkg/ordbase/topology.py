"""
Scott and lower topologies on finite posets, lower semicontinuity, and
multi-utility constructions with the checks that relate them to continuity.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import count, islice, product
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence

from .config import get_settings
from .domains import MajorizationPoint, approx_below, leq_M, way_below_M
from .errors import ConstructionError, NotWeakBasis, ParseError, PreconditionFailed, SizeLimit, UnknownElement
from .poset import (
    DEGENERATE,
    Check,
    FinitePoset,
    all_subsets,
    clause,
    compact_elements,
    directed_family,
    is_basis,
    is_debreu_dense,
    is_debreu_upper_dense,
    is_directed,
    is_weak_basis,
    poset_from_relation,
    supremum,
    way_below_bruteforce,
)
from .schemas import ClauseResult, MultiUtilityFile, Report, parse_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteTopology:
    host: FinitePoset
    opens: frozenset

    def is_open(self, S: Iterable[int]) -> bool:
        return frozenset(S) in self.opens

    def closed_sets(self) -> frozenset:
        everything = frozenset(self.host.indices)
        return frozenset(everything - O for O in self.opens)

    def is_topology(self) -> bool:
        everything = frozenset(self.host.indices)
        if frozenset() not in self.opens or everything not in self.opens:
            return False
        return all(U | V in self.opens and U & V in self.opens for U in self.opens for V in self.opens)

    def __len__(self) -> int:
        return len(self.opens)


def _is_upper(P: FinitePoset, S: frozenset) -> bool:
    return all(y in S for x in S for y in P.up(x))


def is_scott_open(P: FinitePoset, S: Iterable[int]) -> bool:
    """
    Upper and inaccessible by directed suprema.

    Above the sweep or exhaustive bound only upper-ness is checked: a directed
    subset of a finite poset contains its supremum, so every upper set is
    inaccessible.
    """
    members = frozenset(S)
    if not _is_upper(P, members):
        return False
    settings = get_settings()
    if len(P) > min(settings.sweep_bound, settings.exhaustive_bound):
        return True
    return all(
        top not in members or any(a in members for a in A)
        for top, group in directed_family(P).items()
        for A in group
    )


def scott_topology(P: FinitePoset, bound: Optional[int] = None) -> FiniteTopology:
    """
    Upper sets of P, cross-checked against the definition: upper and
    inaccessible by directed suprema.
    """
    family = directed_family(P)
    fast, definitional = set(), set()
    for S in all_subsets(P, bound):
        upper = _is_upper(P, S)
        if upper:
            fast.add(S)
        inaccessible = all(not (top in S) or any(a in S for a in A) for top, group in family.items() for A in group)
        if upper and inaccessible:
            definitional.add(S)
    if fast != definitional:
        raise ConstructionError(f"Upper sets and Scott opens disagree on {P.elements}")
    return FiniteTopology(P, frozenset(fast))


def order_from_topology(T: FiniteTopology) -> FinitePoset:
    """Specialization order: x below y iff every open containing x contains y."""
    P = T.host
    table = tuple(
        tuple(all(y in O for O in T.opens if x in O) for y in P.indices) for x in P.indices
    )
    return FinitePoset(elements=P.elements, table=table)


def _close(family: set, combine: Callable[[frozenset, frozenset], frozenset]) -> set:
    closed = set(family)
    frontier = list(closed)
    while frontier:
        fresh = []
        for A in frontier:
            for B in list(closed):
                C = combine(A, B)
                if C not in closed:
                    closed.add(C)
                    fresh.append(C)
        frontier = fresh
    return closed


def lower_topology(P: FinitePoset) -> FiniteTopology:
    """Closed sets generated from the principal down-sets by finite unions, then intersections."""
    everything = frozenset(P.indices)
    unions = _close({frozenset()} | {P.down(x) for x in P.indices}, frozenset.union)
    closed = _close(unions | {everything}, frozenset.intersection)
    return FiniteTopology(P, frozenset(everything - C for C in closed))


def _thresholds(values: Iterable[Fraction]) -> List[Fraction]:
    attained = sorted(set(values))
    if not attained:
        return []
    cuts = [attained[0] - 1]
    cuts.extend((a + b) / 2 for a, b in zip(attained, attained[1:]))
    return cuts


def is_lsc(P: FinitePoset, T: Optional[FiniteTopology], u: Dict[int, Fraction]) -> bool:
    """Every strict upper level set {x : u(x) > a} is open in T, or Scott open when T is None."""
    is_open = T.is_open if T is not None else (lambda S: is_scott_open(P, S))
    for a in _thresholds(u.values()):
        if not is_open(x for x in P.indices if u[x] > a):
            return False
    return True


@dataclass(frozen=True)
class UtilityFunction:
    name: str
    values: Dict[int, Fraction]

    def __call__(self, x: int) -> Fraction:
        return self.values[x]


@dataclass(frozen=True)
class MultiUtility:
    host: FinitePoset
    functions: tuple

    @classmethod
    def from_file(cls, P: FinitePoset, model: MultiUtilityFile) -> "MultiUtility":
        functions = []
        for fn in model.functions:
            values = {P.index(label): parse_fraction(v) for label, v in fn.values.items()}
            missing = set(P.indices) - set(values)
            if missing:
                raise ParseError(f"Function {fn.name} has no value for {P.labels(missing)}")
            functions.append(UtilityFunction(fn.name, values))
        return cls(P, tuple(functions))

    def __len__(self) -> int:
        return len(self.functions)


@dataclass(frozen=True)
class MuFlags:
    multi_utility: Check
    strict: Check
    lsc: Check

    @property
    def all(self) -> bool:
        return bool(self.multi_utility and self.strict and self.lsc)


def mu_check(P: FinitePoset, V: MultiUtility, topology: Optional[FiniteTopology] = None) -> MuFlags:
    represents = Check(True)
    for x in P.indices:
        for y in P.indices:
            if P.leq(x, y) != all(v(x) <= v(y) for v in V.functions):
                represents = Check(False, witness=(x, y))
                break
        if not represents:
            break

    strict = Check(True)
    for x in P.indices:
        bad = next((y for y in P.indices if P.lt(x, y) and not all(v(x) < v(y) for v in V.functions)), None)
        if bad is not None:
            strict = Check(False, witness=(x, bad))
            break

    # lsc against the Scott topology is tested per level set, never by listing opens
    failing = next((v for v in V.functions if not is_lsc(P, topology, v.values)), None)
    lsc = Check(True) if failing is None else Check(False, witness=())
    if failing is not None:
        logger.debug(f"{failing.name} is not lower semicontinuous")
    return MuFlags(multi_utility=represents, strict=strict, lsc=lsc)


def _indicator(name: str, P: FinitePoset, members: frozenset) -> UtilityFunction:
    return UtilityFunction(name, {x: Fraction(1 if x in members else 0) for x in P.indices})


def mu_from_downsets(P: FinitePoset) -> MultiUtility:
    """u_x is the indicator of the complement of the down-set of x."""
    everything = frozenset(P.indices)
    return MultiUtility(P, tuple(_indicator(f"u_{P.label(x)}", P, everything - P.down(x)) for x in P.indices))


def mu_from_weak_basis(P: FinitePoset, B: Iterable[int]) -> MultiUtility:
    """v_b is the indicator of the up-set of b, or of the way-above set of b when B is a basis."""
    members = frozenset(B)
    if not is_weak_basis(P, members):
        raise NotWeakBasis(f"{P.labels(members)} is not a weak basis")
    basis = bool(is_basis(P, members))

    def above(b: int) -> frozenset:
        if basis:
            return frozenset(y for y in P.indices if way_below_bruteforce(P, b, y))
        return P.up(b)

    return MultiUtility(P, tuple(_indicator(f"v_{P.label(b)}", P, above(b)) for b in sorted(members)))


def mu_from_opens(T: FiniteTopology) -> MultiUtility:
    """Indicators of a family of open sets, here all opens of T."""
    P = T.host
    ordered = sorted(T.opens, key=lambda O: (len(O), sorted(O)))
    return MultiUtility(P, tuple(_indicator(f"1_{'_'.join(P.labels(O)) or 'empty'}", P, O) for O in ordered))


def _height(P: FinitePoset) -> Dict[int, int]:
    height: Dict[int, int] = {}
    for x in sorted(P.indices, key=lambda i: len(P.down(i))):
        below = P.strictly_below(x)
        height[x] = 1 + max((height[y] for y in below), default=-1)
    return height


def strict_multi_utility(P: FinitePoset) -> MultiUtility:
    """
    Lower semicontinuous strict monotone multi-utility for any finite P.

    Each down-set indicator is scaled past the height function and added to it.
    """
    height = _height(P)
    scale = max(height.values(), default=0) + 1
    everything = frozenset(P.indices)
    functions = [UtilityFunction("height", {x: Fraction(h) for x, h in height.items()})]
    for x in P.indices:
        outside = everything - P.down(x)
        values = {z: Fraction(scale * (1 if z in outside else 0) + height[z]) for z in P.indices}
        functions.append(UtilityFunction(f"w_{P.label(x)}", values))
    return MultiUtility(P, tuple(functions))


def strict_multi_utility_check(
    P: FinitePoset,
    V: MultiUtility,
    sweep_bound: Optional[int] = None,
    bound: Optional[int] = None,
) -> Report:
    flags = mu_check(P, V)
    for name in ("multi_utility", "strict", "lsc"):
        if not getattr(flags, name):
            raise PreconditionFailed(f"Family fails the {name} requirement")

    clauses = []
    strict_pairs = next(
        ((x, y) for x in P.indices for y in P.indices if P.lt(x, y) and not way_below_bruteforce(P, x, y, bound)),
        None,
    )
    clauses.append(clause(
        P,
        "strictly_below_is_way_below",
        Check(True) if strict_pairs is None else Check(False, witness=strict_pairs),
        "x strictly below y implies x way below y",
    ))
    continuous = is_basis(P, P.indices, bound)
    clauses.append(clause(P, "continuous", continuous, "every element is the supremum of elements way below it"))

    compacts = compact_elements(P, bound)
    algebraic = is_basis(P, compacts, bound)
    clauses.append(clause(P, "compact_elements_form_basis", algebraic, f"{len(compacts)} compact elements", theorem=False))
    clauses.append(ClauseResult(
        property="countable_basis_iff_countable_compacts",
        holds=bool(continuous) == bool(algebraic),
        degenerate=True,
        note=f"{DEGENERATE}: finite sets are countable, so this compares 'a basis exists' with 'the compact elements form a basis'",
    ))

    try:
        bases = [B for B in all_subsets(P, sweep_bound) if is_basis(P, B, bound)]
    except SizeLimit as e:
        clauses.append(ClauseResult(property="basis_dense_and_upper_dense", holds=None, note=f"skipped: {e}"))
    else:
        failure = Check(True)
        for B in bases:
            dense, upper = is_debreu_dense(P, B), is_debreu_upper_dense(P, B)
            if not dense:
                failure = dense
                break
            if not upper:
                failure = upper
                break
        clauses.append(clause(P, "basis_dense_and_upper_dense", failure, "every basis is Debreu dense and Debreu upper dense"))
    return Report(subject=f"finite poset with {len(P)} elements, {len(V)} utility functions", suite="strict_multi_utility", clauses=clauses)


@dataclass(frozen=True)
class Realized:
    lower: tuple
    upper: tuple
    element: object


def dyadic_boxes(N: int) -> Iterator[tuple[tuple, tuple]]:
    """
    Rational boxes (q, r) with q_i < r_i, depth by depth.

    Depth d holds the boxes whose sides are (j/2^d, (j+2)/2^d) with corners in
    [-(d+1), d+1]. Each depth is finite, and a point of Q^N with coordinates
    below d in absolute value lies strictly inside some box of depth d, so the
    walk reaches arbitrarily small boxes around every rational point.
    """
    for d in count():
        scale = 2 ** d
        reach = (d + 1) * scale
        for corner in product(range(-reach, reach - 1), repeat=N):
            yield (
                tuple(Fraction(j, scale) for j in corner),
                tuple(Fraction(j + 2, scale) for j in corner),
            )


def box_basis_construction(
    V: Sequence[Callable],
    oracle: Callable[[tuple, tuple], Optional[object]],
    count: int,
    max_codes: Optional[int] = None,
) -> List[Realized]:
    """
    Walk the dyadic boxes in depth order and keep a witness for every box the
    oracle realizes. At most max_codes boxes are offered to the oracle.
    """
    N = len(V)
    limit = get_settings().stream_budget if max_codes is None else max_codes
    realized: List[Realized] = []
    for lower, upper in islice(dyadic_boxes(N), limit):
        if len(realized) >= count:
            break
        element = oracle(lower, upper)
        if element is None:
            continue
        values = [v(element) for v in V]
        if not all(q < value < r for q, value, r in zip(lower, values, upper)):
            raise PreconditionFailed(f"Oracle returned {element}, outside the box {lower}..{upper}")
        realized.append(Realized(lower, upper, element))
    logger.info(f"Realized {len(realized)} boxes")
    return realized


def simplex_box_oracle(lower: tuple, upper: tuple) -> Optional[MajorizationPoint]:
    """Realizes a box for V = {s_1} on the two-point simplex by its clipped midpoint."""
    lo, hi = max(lower[0], Fraction(1, 2)), min(upper[0], Fraction(1))
    if not lo < hi:
        return None
    mid = (lo + hi) / 2
    return MajorizationPoint((mid, 1 - mid))


def verify_si_mu_lsc(n: int, samples: Iterable[tuple]) -> Report:
    """
    Check that the partial sums s_1..s_{n-1} form a lower semicontinuous
    multi-utility on the n-simplex, over sampled (p, k, r) triples.

    For r below s_k(p), a q way below p with s_k(q) > r shows that p lies in a
    way-above set inside the preimage of (r, infinity).
    """
    if n < 2:
        raise PreconditionFailed(f"Majorization needs n >= 2, got {n}")
    bottom = MajorizationPoint.bottom(n)
    clauses: list[ClauseResult] = []
    points = []
    for i, (p, k, r) in enumerate(samples):
        points.append(p)
        r = Fraction(r)
        name = f"lsc_witness[{i}]"
        if r >= 1:
            clauses.append(ClauseResult(property=name, holds=True, note="preimage of (r, infinity) is empty"))
            continue
        if r < Fraction(k, n):
            ok = way_below_M(bottom, p) and bottom.partial_sum(k) > r
            clauses.append(ClauseResult(property=name, holds=ok, witness=[str(bottom)], note="bottom witnesses the whole space"))
            continue
        if p.partial_sum(k) <= r:
            clauses.append(ClauseResult(property=name, holds=True, note=f"{p} lies outside the preimage"))
            continue
        q = approx_below(p, p.partial_sum(k) - r)
        ok = way_below_M(q, p) and q.partial_sum(k) > r
        clauses.append(ClauseResult(property=name, holds=ok, witness=[str(q)], note=f"q way below {p} with s_{k}(q) > {r}"))

    mismatch = next(
        (
            (x, y)
            for x in points
            for y in points
            if leq_M(x, y) != all(x.partial_sum(j) <= y.partial_sum(j) for j in range(1, n))
        ),
        None,
    )
    clauses.insert(0, ClauseResult(
        property="partial_sums_represent_order",
        holds=mismatch is None,
        witness=None if mismatch is None else [str(mismatch[0]), str(mismatch[1])],
        note="x below y iff s_k(x) <= s_k(y) for every k < n",
    ))
    return Report(subject=f"partial sums on the {n}-simplex", suite="partial_sum_lsc", clauses=clauses)


@dataclass(frozen=True)
class MonotoneMap:
    source: FinitePoset
    target: FinitePoset
    table: tuple

    @classmethod
    def from_labels(cls, source: FinitePoset, target: FinitePoset, mapping: Dict) -> "MonotoneMap":
        try:
            table = tuple(target.index(mapping[source.label(x)]) for x in source.indices)
        except KeyError as e:
            raise UnknownElement(f"Map has no image for {e}")
        return cls(source, target, table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_monotone(self) -> Check:
        for x in self.source.indices:
            for y in self.source.indices:
                if self.source.leq(x, y) and not self.target.leq(self(x), self(y)):
                    return Check(False, witness=(x, y))
        return Check(True)

    def _preserves(self, keep: Callable[[frozenset], bool], bound: Optional[int] = None) -> Check:
        for top, group in directed_family(self.source, bound).items():
            for A in group:
                if not keep(A):
                    continue
                image = frozenset(self(a) for a in A)
                if not is_directed(self.target, image) or supremum(self.target, image) != self(top):
                    return Check(False, witness=tuple(sorted(A)))
        return Check(True)

    def is_scott_continuous(self, bound: Optional[int] = None) -> Check:
        return self._preserves(lambda A: True, bound)

    def is_sequentially_continuous(self, bound: Optional[int] = None) -> Check:
        """Monotone and preserving suprema of increasing sequences, which on a finite poset are chains."""
        monotone = self.is_monotone()
        if not monotone:
            return monotone
        return self._preserves(lambda A: all(self.source.comparable(a, b) for a in A for b in A), bound)


def continuity_check(f: MonotoneMap, bound: Optional[int] = None) -> Report:
    monotone = f.is_monotone()
    scott = f.is_scott_continuous(bound)
    sequential = f.is_sequentially_continuous(bound)
    P = f.source
    clauses = [
        clause(P, "monotone", monotone, theorem=False),
        clause(P, "scott_continuous", scott, theorem=False),
        clause(P, "sequentially_continuous", sequential, theorem=False),
        ClauseResult(
            property="sequential_iff_scott",
            holds=bool(sequential) == bool(scott),
            degenerate=True,
            note=f"{DEGENERATE}: increasing sequences stabilize, so both sides reduce to monotonicity",
        ),
        ClauseResult(
            property="monotone_iff_scott",
            holds=bool(monotone) == bool(scott),
            note="on finite posets a map is Scott continuous iff it is monotone",
        ),
    ]
    return Report(subject=f"map from {len(P)} to {len(f.target)} elements", suite="continuity", clauses=clauses)


def sequential_completeness_check(P: FinitePoset, bound: Optional[int] = None) -> Report:
    family = directed_family(P, bound)
    directed = all(supremum(P, A) is not None for group in family.values() for A in group)
    chains = all(
        supremum(P, A) is not None
        for group in family.values()
        for A in group
        if all(P.comparable(a, b) for a in A for b in A)
    )
    clauses = [
        ClauseResult(property="directed_sets_have_suprema", holds=directed, theorem=False),
        ClauseResult(property="increasing_sequences_have_suprema", holds=chains, theorem=False),
        ClauseResult(
            property="completeness_by_sequences",
            holds=directed == chains,
            degenerate=True,
            note=f"{DEGENERATE}: every directed subset of a finite poset has a greatest element",
        ),
    ]
    return Report(subject=f"finite poset with {len(P)} elements", suite="sequential_completeness", clauses=clauses)


def majorization_grid(n: int, denominator: int) -> FinitePoset:
    """Rational points of the n-simplex with the given common denominator, as a finite poset."""

    def compositions(total: int, slots: int, cap: int):
        if slots == 1:
            if total <= cap:
                yield (total,)
            return
        for first in range(min(total, cap), -1, -1):
            for rest in compositions(total - first, slots - 1, first):
                yield (first,) + rest

    points = [
        MajorizationPoint(tuple(Fraction(c, denominator) for c in parts))
        for parts in compositions(denominator, n, denominator)
    ]
    labels = [str(p) for p in points]
    lookup = dict(zip(labels, points))
    return poset_from_relation(labels, lambda a, b: leq_M(lookup[a], lookup[b]))


def partial_sum_utilities(P: FinitePoset) -> MultiUtility:
    """s_1..s_{n-1} as utility functions on a poset whose labels are majorization points."""
    points = {x: MajorizationPoint.parse(str(P.label(x))) for x in P.indices}
    n = next(iter(points.values())).n if points else 2
    return MultiUtility(
        P,
        tuple(UtilityFunction(f"s_{k}", {x: p.partial_sum(k) for x, p in points.items()}) for k in range(1, n)),
    )
