"""
Finite partial orders with brute-force order theory.

Every notion here is evaluated straight from its definition, so the module is
also the oracle layer the rest of the package is checked against. Elements are
addressed by their index in declaration order; subsets are frozensets of
indices.
"""
import logging
import random
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Optional, Sequence

import networkx as nx

from .config import get_settings
from .errors import AntisymmetryViolation, ConstructionError, ParseError, SizeLimit, UnknownElement
from .schemas import ClauseResult, Report

logger = logging.getLogger(__name__)

DEGENERATE = "degenerate at finite scale"


@dataclass(frozen=True)
class FinitePoset:
    elements: tuple
    table: tuple

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def _positions(self) -> dict:
        return {label: i for i, label in enumerate(self.elements)}

    @property
    def indices(self) -> range:
        return range(len(self.elements))

    def index(self, label: Hashable) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise UnknownElement(f"Unknown element: {label!r}")

    def subset(self, labels: Iterable[Hashable]) -> frozenset:
        return frozenset(self.index(label) for label in labels)

    def label(self, x: int) -> Hashable:
        return self.elements[x]

    def labels(self, xs: Iterable[int]) -> list[str]:
        return [str(self.elements[x]) for x in sorted(xs)]

    def leq(self, x: int, y: int) -> bool:
        return self.table[x][y]

    def lt(self, x: int, y: int) -> bool:
        return x != y and self.table[x][y]

    def comparable(self, x: int, y: int) -> bool:
        return self.table[x][y] or self.table[y][x]

    def incomparable(self, x: int, y: int) -> bool:
        return not self.comparable(x, y)

    def down(self, x: int) -> frozenset:
        return frozenset(y for y in self.indices if self.table[y][x])

    def up(self, x: int) -> frozenset:
        return frozenset(y for y in self.indices if self.table[x][y])

    def strictly_below(self, x: int) -> frozenset:
        return self.down(x) - {x}

    def restrict(self, keep: Iterable[int]) -> "FinitePoset":
        kept = sorted(set(keep))
        return FinitePoset(
            elements=tuple(self.elements[i] for i in kept),
            table=tuple(tuple(self.table[i][j] for j in kept) for i in kept),
        )


@dataclass(frozen=True)
class Check:
    """Outcome of a quantifier check: counter-witness on failure, checked subset on success."""
    holds: bool
    witness: Optional[tuple] = None
    subset: Optional[frozenset] = None

    def __bool__(self) -> bool:
        return self.holds


def validate_poset(elements: Sequence[Hashable], cover_pairs: Iterable[Sequence[Hashable]]) -> FinitePoset:
    labels = tuple(elements)
    if len(set(labels)) != len(labels):
        raise ParseError("Element labels must be distinct")
    positions = {label: i for i, label in enumerate(labels)}

    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(labels)))
    for a, b in cover_pairs:
        for label in (a, b):
            if label not in positions:
                raise UnknownElement(f"Cover pair mentions undeclared element {label!r}")
        if a != b:
            graph.add_edge(positions[a], positions[b])

    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        raise AntisymmetryViolation([labels[u] for u, _ in cycle] + [labels[cycle[0][0]]])

    closure = nx.transitive_closure(graph, reflexive=True)
    table = tuple(tuple(closure.has_edge(i, j) for j in range(len(labels))) for i in range(len(labels)))
    return FinitePoset(elements=labels, table=table)


def poset_from_relation(elements: Sequence[Hashable], relation: Callable[[Hashable, Hashable], bool]) -> FinitePoset:
    """Tabulate a relation given as a predicate on labels and check the order axioms."""
    labels = tuple(elements)
    n = len(labels)
    table = tuple(tuple(bool(relation(labels[i], labels[j])) for j in range(n)) for i in range(n))
    for i in range(n):
        if not table[i][i]:
            raise ParseError(f"Relation is not reflexive at {labels[i]!r}")
        for j in range(n):
            if i != j and table[i][j] and table[j][i]:
                raise AntisymmetryViolation([labels[i], labels[j], labels[i]])
            if table[i][j]:
                for k in range(n):
                    if table[j][k] and not table[i][k]:
                        raise ParseError(f"Relation is not transitive at {labels[i]!r}, {labels[j]!r}, {labels[k]!r}")
    return FinitePoset(elements=labels, table=table)


def random_poset(size: int, rng: random.Random, density: float = 0.35) -> FinitePoset:
    labels = [f"e{i}" for i in range(size)]
    covers = [(labels[i], labels[j]) for i in range(size) for j in range(i + 1, size) if rng.random() < density]
    return validate_poset(labels, covers)


def random_conditionally_connected_poset(size: int, rng: random.Random) -> FinitePoset:
    """Forest in which every element has at most one lower cover, so each down-set is a chain."""
    labels = [f"e{i}" for i in range(size)]
    covers = []
    for i in range(1, size):
        parent = rng.randrange(-1, i)
        if parent >= 0:
            covers.append((labels[parent], labels[i]))
    return validate_poset(labels, covers)


def _bound(bound: Optional[int]) -> int:
    return get_settings().exhaustive_bound if bound is None else bound


def _require_exhaustive(P: FinitePoset, bound: Optional[int]) -> None:
    limit = _bound(bound)
    if len(P) > limit:
        raise SizeLimit(len(P), limit)


def is_directed(P: FinitePoset, A: Iterable[int]) -> bool:
    members = sorted(A)
    if not members:
        return False
    for i, x in enumerate(members):
        for y in members[i + 1:]:
            if not any(P.leq(x, z) and P.leq(y, z) for z in members):
                return False
    return True


def upper_bounds(P: FinitePoset, A: Iterable[int]) -> frozenset:
    members = list(A)
    return frozenset(u for u in P.indices if all(P.leq(a, u) for a in members))


def supremum(P: FinitePoset, A: Iterable[int]) -> Optional[int]:
    members = frozenset(A)
    if not members:
        return None
    bounds = upper_bounds(P, members)
    for u in sorted(bounds):
        if all(P.leq(u, v) for v in bounds):
            return u
    return None


def directed_subsets(P: FinitePoset, within: Optional[Iterable[int]] = None, bound: Optional[int] = None) -> Iterator[frozenset]:
    _require_exhaustive(P, bound)
    pool = sorted(P.indices if within is None else set(within))
    for r in range(1, len(pool) + 1):
        for combo in combinations(pool, r):
            if is_directed(P, combo):
                yield frozenset(combo)


@lru_cache(maxsize=512)
def _directed_by_supremum(P: FinitePoset) -> Mapping[int, tuple]:
    family: dict[int, list] = {x: [] for x in P.indices}
    for A in directed_subsets(P, bound=len(P)):
        top = supremum(P, A)
        if top is None:
            raise ConstructionError(f"Directed subset {P.labels(A)} has no supremum")
        family[top].append(A)
    return {x: tuple(group) for x, group in family.items()}


def directed_family(P: FinitePoset, bound: Optional[int] = None) -> Mapping[int, tuple]:
    """Every directed subset of P, grouped by its supremum."""
    _require_exhaustive(P, bound)
    return _directed_by_supremum(P)


def all_subsets(P: FinitePoset, bound: Optional[int] = None) -> Iterator[frozenset]:
    limit = get_settings().sweep_bound if bound is None else bound
    if len(P) > limit:
        raise SizeLimit(len(P), limit)
    for r in range(len(P) + 1):
        for combo in combinations(P.indices, r):
            yield frozenset(combo)


def way_below_bruteforce(P: FinitePoset, x: int, y: int, bound: Optional[int] = None) -> bool:
    family = directed_family(P, bound)
    for top, group in family.items():
        if not P.leq(y, top):
            continue
        for A in group:
            if not any(P.leq(x, a) for a in A):
                return False
    return True


def way_below(P: FinitePoset, x: int, y: int, bound: Optional[int] = None) -> bool:
    if len(P) <= _bound(bound):
        return way_below_bruteforce(P, x, y, bound)
    # finite posets: sup A = max A lies in A, so way-below collapses to the order
    return P.leq(x, y)


def way_below_set(P: FinitePoset, y: int, bound: Optional[int] = None) -> frozenset:
    return frozenset(x for x in P.indices if way_below(P, x, y, bound))


def compact_elements(P: FinitePoset, bound: Optional[int] = None) -> frozenset:
    return frozenset(x for x in P.indices if way_below(P, x, x, bound))


def min_elements(P: FinitePoset) -> frozenset:
    return frozenset(x for x in P.indices if not any(P.lt(y, x) for y in P.indices))


def isolated_witness(P: FinitePoset, x: int) -> Optional[int]:
    below = P.strictly_below(x)
    for v in sorted(below):
        if all(P.leq(y, v) for y in below):
            return v
    return None


def isolated_elements(P: FinitePoset) -> frozenset:
    return frozenset(x for x in P.indices if isolated_witness(P, x) is not None)


def jumps(P: FinitePoset) -> frozenset:
    return frozenset(
        (x, y)
        for x in P.indices
        for y in P.indices
        if P.lt(x, y) and not any(P.lt(x, z) and P.lt(z, y) for z in P.indices)
    )


def immediate_successors(P: FinitePoset, x: int) -> frozenset:
    return frozenset(y for (a, y) in jumps(P) if a == x)


def immediate_successor_targets(P: FinitePoset) -> frozenset:
    """Elements that are the upper end of some jump."""
    return frozenset(y for (_, y) in jumps(P))


def _pairs(P: FinitePoset, keep: Callable[[int, int], bool]) -> Iterator[tuple[int, int]]:
    for x in P.indices:
        for y in P.indices:
            if keep(x, y):
                yield x, y


def _density(P: FinitePoset, D: Iterable[int], pair: Callable[[int, int], bool], hit: Callable[[int, int, int], bool]) -> Check:
    members = sorted(set(D))
    for x, y in _pairs(P, pair):
        if not any(hit(x, d, y) for d in members):
            return Check(False, witness=(x, y))
    return Check(True, subset=frozenset(members))


def is_debreu_dense(P: FinitePoset, D: Iterable[int]) -> Check:
    return _density(P, D, P.lt, lambda x, d, y: P.leq(x, d) and P.leq(d, y))


def is_debreu_upper_dense(P: FinitePoset, D: Iterable[int]) -> Check:
    return _density(P, D, P.incomparable, lambda x, d, y: P.incomparable(x, d) and P.leq(d, y))


def is_order_dense(P: FinitePoset, D: Iterable[int]) -> Check:
    return _density(P, D, P.lt, lambda x, d, y: P.lt(x, d) and P.lt(d, y))


def is_strictly_upper_dense(P: FinitePoset, D: Iterable[int]) -> Check:
    return _density(P, D, P.incomparable, lambda x, d, y: P.incomparable(x, d) and P.lt(d, y))


def is_upper_separated_by(P: FinitePoset, D: Iterable[int]) -> Check:
    """Order dense and strictly upper dense at once."""
    members = frozenset(D)
    dense = is_order_dense(P, members)
    if not dense:
        return dense
    return is_strictly_upper_dense(P, members)


def is_conditionally_connected(P: FinitePoset, bound: Optional[int] = None) -> Check:
    pairwise = Check(True)
    for x, y in _pairs(P, lambda a, b: a < b and P.incomparable(a, b)):
        if any(P.leq(x, z) and P.leq(y, z) for z in P.indices):
            pairwise = Check(False, witness=(x, y))
            break

    if len(P) <= _bound(bound):
        chains_only = all(
            all(P.comparable(a, b) for a in A for b in A)
            for group in directed_family(P, bound).values()
            for A in group
        )
        if chains_only != pairwise.holds:
            raise ConstructionError(
                f"Bounded-pair and directed-chain characterizations disagree on {P.elements}"
            )
    return pairwise


def is_weak_basis(P: FinitePoset, B: Iterable[int], bound: Optional[int] = None) -> Check:
    members = frozenset(B)
    family = directed_family(P, bound)
    for x in P.indices:
        if not any(A <= members for A in family[x]):
            return Check(False, witness=(x,))
    return Check(True, subset=members)


def is_basis(P: FinitePoset, B: Iterable[int], bound: Optional[int] = None) -> Check:
    members = frozenset(B)
    family = directed_family(P, bound)
    for x in P.indices:
        approximants = members & way_below_set(P, x, bound)
        if not any(A <= approximants for A in family[x]):
            return Check(False, witness=(x,))
    return Check(True, subset=members)


def weak_basis_separation_witness(P: FinitePoset, B: Iterable[int], x: int, y: int) -> Optional[int]:
    """Lowest b in B with b below y but not below x."""
    for b in sorted(set(B)):
        if P.leq(b, y) and not P.leq(b, x):
            return b
    return None


def smallest_debreu_dense(P: FinitePoset, bound: Optional[int] = None) -> frozenset:
    for D in all_subsets(P, bound):
        if is_debreu_dense(P, D):
            return D
    return frozenset(P.indices)


def has_bottom(P: FinitePoset) -> Optional[int]:
    for b in P.indices:
        if all(P.leq(b, z) for z in P.indices):
            return b
    return None


def clause(P: FinitePoset, name: str, check, note: Optional[str] = None, **extra) -> ClauseResult:
    """Render a Check (or a plain boolean) as a report entry with labels in place of indices."""
    if isinstance(check, Check):
        return ClauseResult(
            property=name,
            holds=check.holds,
            witness=[str(P.label(i)) for i in check.witness] if check.witness is not None else None,
            subset=P.labels(check.subset) if check.holds and check.subset is not None else None,
            note=note,
            **extra,
        )
    return ClauseResult(property=name, holds=check, note=note, **extra)


def skipped(name: str, note: str, **extra) -> ClauseResult:
    return ClauseResult(property=name, holds=None, note=note, **extra)


@dataclass
class _Sweep:
    weak_bases: list
    bases: list
    dense: list
    upper_dense: list
    order_dense: list


def _sweep(P: FinitePoset, bound: Optional[int], sweep_bound: Optional[int]) -> _Sweep:
    result = _Sweep([], [], [], [], [])
    for S in all_subsets(P, sweep_bound):
        if is_weak_basis(P, S, bound):
            result.weak_bases.append(S)
        if is_basis(P, S, bound):
            result.bases.append(S)
        if is_debreu_dense(P, S):
            result.dense.append(S)
        if is_debreu_upper_dense(P, S):
            result.upper_dense.append(S)
        if is_order_dense(P, S):
            result.order_dense.append(S)
    logger.debug(
        f"Swept {2 ** len(P)} subsets: {len(result.weak_bases)} weak bases, {len(result.dense)} Debreu dense"
    )
    return result


def _first_failure(family: Iterable[frozenset], test: Callable[[frozenset], Check]) -> Check:
    for S in family:
        outcome = test(S)
        if not outcome:
            return Check(False, witness=outcome.witness)
    return Check(True)


CONDITIONAL_CLAUSES = (
    "compact_is_isolated_or_minimal",
    "way_below_rule",
    "self_basis",
    "basis_debreu_dense",
    "dense_plus_compact_upper_dense",
    "jumps_match_isolated",
    "upper_separable_iff_trivial_compacts",
)


def verify_density_theorems(P: FinitePoset, bound: Optional[int] = None, sweep_bound: Optional[int] = None) -> Report:
    """
    Check every density and basis theorem that applies to P.

    Clauses quantifying over all subsets of P are skipped above the sweep
    bound; clauses that need conditional connectedness are skipped when P is
    not conditionally connected. Skipped clauses carry holds=None and a note.
    """
    _require_exhaustive(P, bound)
    family = directed_family(P, bound)
    clauses: list[ClauseResult] = []

    dcpo = Check(True)
    for top, group in family.items():
        stray = next((A for A in group if top not in A), None)
        if stray is not None:
            dcpo = Check(False, witness=tuple(sorted(stray)))
            break
    clauses.append(clause(P, "directed_suprema_attained", dcpo, "every directed subset contains its supremum"))

    compacts = compact_elements(P, bound)
    minimal = min_elements(P)
    successors = immediate_successor_targets(P)
    everything = frozenset(P.indices)

    reason = ""
    try:
        sweep = _sweep(P, bound, sweep_bound)
    except SizeLimit as e:
        sweep = None
        reason = f"skipped: {e}"

    def swept(name: str, build: Callable[[_Sweep], Check], note: str) -> None:
        if sweep is None:
            clauses.append(skipped(name, reason))
        else:
            clauses.append(clause(P, name, build(sweep), note))

    swept(
        "weak_basis_upper_dense",
        lambda s: _first_failure(s.weak_bases, lambda B: is_debreu_upper_dense(P, B)),
        "every weak basis is Debreu upper dense",
    )

    def separation(s: _Sweep) -> Check:
        for B in s.weak_bases:
            for x, y in _pairs(P, P.lt):
                if weak_basis_separation_witness(P, B, x, y) is None:
                    return Check(False, witness=(x, y))
        return Check(True)

    swept("weak_basis_separation", separation, "for x below y some weak-basis element lies below y but not below x")
    swept(
        "basis_upper_dense",
        lambda s: _first_failure(s.bases, lambda B: is_debreu_upper_dense(P, B)),
        "every basis is Debreu upper dense",
    )

    def minimal_inside(s: _Sweep) -> Check:
        for D in s.upper_dense:
            missing = minimal - D
            if missing:
                return Check(False, witness=(min(missing),))
        return Check(True, subset=minimal)

    if len(minimal) <= 1:
        clauses.append(ClauseResult(
            property="minimal_in_upper_dense",
            holds=True,
            degenerate=True,
            note=f"vacuous: {len(minimal)} minimal element(s); the claim needs two incomparable minimal elements",
        ))
    else:
        swept("minimal_in_upper_dense", minimal_inside, "with two or more minimal elements, all of them belong to every Debreu upper dense subset")

    def successor_bases(s: _Sweep) -> Check:
        rest = sorted(everything - minimal)
        restricted = P.restrict(rest)
        positions = {x: i for i, x in enumerate(rest)}
        for D in s.dense:
            whole = is_weak_basis(P, successors | D | minimal, bound)
            if not whole:
                return whole
            if rest:
                inner = frozenset(positions[x] for x in (successors | D) - minimal)
                partial = is_weak_basis(restricted, inner, bound)
                if not partial:
                    return Check(False, witness=(rest[partial.witness[0]],))
        return Check(True, subset=successors | minimal)

    swept(
        "successor_weak_basis",
        successor_bases,
        "upper ends of jumps plus any Debreu dense subset plus minimal elements form a weak basis",
    )
    swept(
        "dense_compact_basis",
        lambda s: _first_failure(s.dense, lambda D: is_basis(P, D | compacts, bound)),
        "D together with the compact elements is a basis for every Debreu dense D",
    )

    if is_order_dense(P, everything):
        def order_dense_basis(s: _Sweep) -> Check:
            if compacts != minimal:
                return Check(False, witness=tuple(sorted(compacts ^ minimal)))
            return _first_failure(s.order_dense, lambda D: is_basis(P, D | minimal, bound))

        swept(
            "order_dense_compacts_minimal",
            order_dense_basis,
            "with an order dense subset the compact elements are the minimal ones",
        )
    else:
        clauses.append(skipped("order_dense_compacts_minimal", "skipped: no order dense subset exists"))

    connected = is_conditionally_connected(P, bound)
    clauses.append(clause(P, "conditionally_connected", connected, theorem=False))
    if not connected:
        pair = " and ".join(P.labels(connected.witness))
        clauses.extend(skipped(name, f"skipped: not conditionally connected ({pair})") for name in CONDITIONAL_CLAUSES)
        return Report(subject=_describe(P), suite="density_theorems", clauses=clauses)

    isolated = isolated_elements(P)
    expected = isolated | minimal
    clauses.append(clause(
        P,
        "compact_is_isolated_or_minimal",
        Check(True, subset=compacts) if compacts == expected else Check(False, witness=tuple(sorted(compacts ^ expected))),
        "compact elements are the isolated ones plus the minimal ones",
    ))

    def rule(x: int, y: int) -> bool:
        if x != y:
            return P.lt(x, y)
        return not any(x not in A for A in family[x])

    mismatch = next(
        ((x, y) for x in P.indices for y in P.indices if rule(x, y) != way_below_bruteforce(P, x, y, bound)),
        None,
    )
    clauses.append(clause(
        P,
        "way_below_rule",
        Check(True) if mismatch is None else Check(False, witness=mismatch),
        "x way below y iff x strictly below y, or x = y and no directed set avoiding x has supremum x",
    ))
    clauses.append(clause(P, "self_basis", is_basis(P, everything, bound), "the whole poset is a basis"))
    swept(
        "basis_debreu_dense",
        lambda s: _first_failure(s.bases, lambda B: is_debreu_dense(P, B)),
        "every basis is Debreu dense",
    )
    swept(
        "dense_plus_compact_upper_dense",
        lambda s: _first_failure(s.dense, lambda D: is_debreu_upper_dense(P, D | compacts)),
        "D together with the compact elements is Debreu upper dense for every Debreu dense D",
    )

    tops = [y for (_, y) in sorted(jumps(P))]
    bijective = len(tops) == len(set(tops)) and set(tops) == isolated
    clauses.append(clause(
        P,
        "jumps_match_isolated",
        Check(True, subset=isolated) if bijective else Check(False, witness=tuple(sorted(set(tops) ^ isolated))),
        "each jump ends in an isolated element and each isolated element ends exactly one jump",
    ))

    separable = bool(is_upper_separated_by(P, everything))
    bottom = has_bottom(P)
    trivial = not compacts or (bottom is not None and compacts == {bottom})
    clauses.append(clause(
        P,
        "upper_separable_iff_trivial_compacts",
        separable == trivial,
        f"upper separable: {separable}; compact elements trivial: {trivial}",
    ))
    return Report(subject=_describe(P), suite="density_theorems", clauses=clauses)


def _describe(P: FinitePoset) -> str:
    return f"finite poset with {len(P)} elements"
