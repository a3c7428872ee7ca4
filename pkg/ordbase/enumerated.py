"""
Countable posets given by an enumeration, and the lazy chain constructions
that run over them.

A stream either produces elements or ends with a Stall carrying the budget it
ran out of. Budgets count order comparisons, so a semi-decision that cannot
find a witness reports how far it got instead of looping.
"""
import logging
import time
from dataclasses import dataclass
from itertools import combinations, count, islice, repeat
from typing import Any, Callable, Generic, Iterable, Iterator, List, Optional, TypeVar, Union

from .config import get_settings
from .errors import ConstructionError, OrdbaseError, PreconditionFailed
from .poset import DEGENERATE, Check, FinitePoset, clause, directed_family, is_directed, is_weak_basis, skipped, supremum
from .schemas import ClauseResult, Report

logger = logging.getLogger(__name__)

T = TypeVar("T")
Leq = Callable[[Any, Any], bool]


@dataclass(frozen=True)
class Stall:
    budget: int
    produced: int
    reason: str


@dataclass(frozen=True)
class Yes:
    witness: tuple
    certificate: str


@dataclass(frozen=True)
class NotWithinBudget:
    budget: int
    explored: int
    exhausted: bool = False


Membership = Union[Yes, NotWithinBudget]


class _OutOfBudget(Exception):
    pass


class _Meter:
    """Comparison counter shared by one semi-decision."""

    def __init__(self, leq: Leq, budget: int):
        self._leq = leq
        self.budget = budget
        self.spent = 0

    def leq(self, x, y) -> bool:
        self.spent += 1
        if self.spent > self.budget:
            raise _OutOfBudget()
        return self._leq(x, y)

    def lt(self, x, y) -> bool:
        return self.leq(x, y) and not self.leq(y, x)


_MISSING = object()


class ChainStream(Iterator[T]):
    """
    Single-consumer iterator over an increasing sequence.

    Every produced element is compared with its predecessor; a decrease (or a
    repeat, in strict mode) raises ConstructionError since the producers are
    theorem-backed.
    """

    def __init__(self, source: Iterable, leq: Leq, strict: bool = False, name: str = "chain"):
        self._source = iter(source)
        self._leq = leq
        self._strict = strict
        self._last = _MISSING
        self.name = name
        self.produced = 0
        self.stall: Optional[Stall] = None

    def __iter__(self) -> "ChainStream[T]":
        return self

    def __next__(self) -> T:
        if self.stall is not None:
            raise StopIteration
        item = next(self._source)
        if isinstance(item, Stall):
            self.stall = item
            logger.info(f"{self.name} stalled after {item.produced} elements: {item.reason}")
            raise StopIteration
        if self._last is not _MISSING:
            if not self._leq(self._last, item):
                raise ConstructionError(f"{self.name}: element {self.produced} is not above its predecessor")
            if self._strict and self._leq(item, self._last):
                raise ConstructionError(f"{self.name}: element {self.produced} repeats its predecessor")
        self._last = item
        self.produced += 1
        return item

    def take(self, k: int) -> List[T]:
        return list(islice(self, k))


@dataclass
class DirectedStream(Generic[T]):
    at: Callable[[int], T]
    member: Optional[Callable[[T], bool]] = None
    length: Optional[int] = None
    name: str = "A"

    @classmethod
    def from_sequence(cls, items: Iterable[T], name: str = "A") -> "DirectedStream[T]":
        values = tuple(items)
        if not values:
            raise PreconditionFailed("A directed set is nonempty")
        return cls(at=lambda k: values[k % len(values)], member=lambda v: v in values, length=len(values), name=name)

    @classmethod
    def constant(cls, value: T, name: str = "A") -> "DirectedStream[T]":
        return cls.from_sequence([value], name=name)

    def prefix(self, k: int) -> List[T]:
        return [self.at(i) for i in range(k)]


@dataclass
class EnumeratedPoset(Generic[T]):
    decode: Callable[[int], T]
    leq: Leq
    encode: Optional[Callable[[T], int]] = None
    size: Optional[int] = None
    sup_oracle: Optional[Callable[[List[T]], T]] = None
    contains: Optional[Callable[[T], bool]] = None
    name: str = "D"

    def lt(self, x: T, y: T) -> bool:
        return self.leq(x, y) and not self.leq(y, x)

    def has(self, k: int) -> bool:
        return self.size is None or k < self.size

    def elements(self) -> Iterator[T]:
        for k in count():
            if not self.has(k):
                return
            yield self.decode(k)

    def includes(self, x: T) -> bool:
        if self.contains is not None:
            return self.contains(x)
        if self.encode is None:
            return False
        try:
            k = self.encode(x)
        except (OrdbaseError, ValueError, KeyError):
            return False
        return self.has(k) and self.decode(k) == x

    @classmethod
    def from_map(cls, fmap, leq: Leq, **extra) -> "EnumeratedPoset":
        return cls(decode=fmap.decode, encode=fmap.encode, size=fmap.size, leq=leq, name=fmap.name, **extra)

    @classmethod
    def from_finite(cls, P: FinitePoset, subset: Optional[Iterable[int]] = None, name: str = "D") -> "EnumeratedPoset[int]":
        """Enumerate a subset of a finite poset; elements are the poset's indices."""
        members = sorted(P.indices if subset is None else set(subset))
        positions = {x: k for k, x in enumerate(members)}
        return cls(
            decode=lambda k: members[k],
            encode=lambda x: positions[x],
            leq=P.leq,
            size=len(members),
            contains=lambda x: x in positions,
            name=name,
        )


def _budget(budget: Optional[int]) -> int:
    return get_settings().stream_budget if budget is None else budget


def _metered(source: Callable[[], Iterator], meter: _Meter, produced: List[int]) -> Iterator:
    """Run a generator, converting budget exhaustion into a trailing Stall."""
    try:
        for item in source():
            if isinstance(item, Stall):
                yield item
                return
            produced[0] += 1
            yield item
    except _OutOfBudget:
        yield Stall(meter.budget, produced[0], f"{meter.budget} comparisons spent")


def _bounded_members(D: EnumeratedPoset, A: DirectedStream, meter: _Meter) -> Iterator:
    """
    Elements d of D with a <= d <= b for some a, b in A, in discovery order.

    Stage s draws A's s-th element and D's s-th candidate. Pending candidates
    are only compared against the newly drawn element of A.
    """
    drawn = []
    pending = []  # [candidate, has lower witness, has upper witness]
    for s in count():
        a = A.at(s)
        drawn.append(a)
        still = []
        for entry in pending:
            entry[1] = entry[1] or meter.leq(a, entry[0])
            entry[2] = entry[2] or meter.leq(entry[0], a)
            if entry[1] and entry[2]:
                yield entry[0]
            else:
                still.append(entry)
        pending = still
        if D.has(s):
            d = D.decode(s)
            lower = any(meter.leq(x, d) for x in drawn)
            upper = any(meter.leq(d, x) for x in drawn)
            if lower and upper:
                yield d
            else:
                pending.append([d, lower, upper])


def _dominating_chain(D: EnumeratedPoset, A: DirectedStream, meter: _Meter, strict: bool) -> Iterator:
    members = _bounded_members(D, A, meter)
    found: list = []

    def reach(k: int) -> bool:
        while len(found) <= k:
            try:
                found.append(next(members))
            except StopIteration:
                return False
        return True

    if not reach(0):
        yield Stall(meter.budget, 0, "no element of D lies between elements of A")
        return
    current = found[0]
    yield current
    for n in count(1):
        if not reach(n):
            yield Stall(meter.budget, n, "D ran out of candidates")
            return
        for m in count():
            if not reach(m):
                yield Stall(meter.budget, n, "D ran out of candidates")
                return
            candidate = found[m]
            step = meter.lt(current, candidate) if strict else meter.leq(current, candidate)
            if step and meter.leq(found[n], candidate):
                break
        current = candidate
        yield current


def chain_from_directed(D: EnumeratedPoset, A: DirectedStream, budget: Optional[int] = None, strict: bool = True) -> ChainStream:
    """
    Increasing chain in D dominating the directed stream A.

    D must be Debreu dense and A must not contain its supremum; a finite A
    always does, so it is rejected here and belongs to chain_inside_directed.
    """
    if A.length is not None:
        raise PreconditionFailed(f"{A.name} is finite, so it contains its supremum")
    meter = _Meter(D.leq, _budget(budget))
    produced = [0]
    source = _metered(lambda: _dominating_chain(D, A, meter, strict), meter, produced)
    return ChainStream(source, D.leq, strict=strict, name=f"chain from {A.name}")


def supremum_faithful(prefix: List, A: DirectedStream, k: int, leq: Leq) -> Optional[int]:
    """Index of the first of A's first k elements that no prefix element dominates, or None."""
    for i in range(k):
        a = A.at(i)
        if not any(leq(a, d) for d in prefix):
            return i
    return None


def order_dense_chain(D: EnumeratedPoset, x, y, budget: Optional[int] = None) -> ChainStream:
    meter = _Meter(D.leq, _budget(budget))
    produced = [0]

    def source() -> Iterator:
        floor, start = x, 0
        while True:
            for m in count(start):
                if not D.has(m):
                    yield Stall(meter.budget, produced[0], f"no element of {D.name} strictly between")
                    return
                d = D.decode(m)
                if meter.lt(floor, d) and meter.lt(d, y):
                    break
            floor, start = d, m + 1
            yield d

    return ChainStream(_metered(source, meter, produced), D.leq, strict=True, name="order dense chain")


def order_dense_certificate(prefix: List, x, leq: Leq) -> bool:
    if not prefix:
        return False
    strictly = all(leq(a, b) and not leq(b, a) for a, b in zip(prefix, prefix[1:]))
    return strictly and all(leq(d, x) and not leq(x, d) for d in prefix)


def directed_sup_membership(
    host,
    D: EnumeratedPoset,
    x,
    budget: Optional[int] = None,
    is_sup: Optional[Callable[[List, Any], bool]] = None,
    chain_length: Optional[int] = None,
) -> Membership:
    """
    Semi-decide whether x lies in D or is the supremum of a directed subset of D.

    A finite host is searched exhaustively. On an infinite host x is approached
    by an order dense chain in D, and the caller's is_sup predicate (or D's
    sup_oracle) decides whether the chain's supremum is x.
    """
    started = time.perf_counter()
    limit = _budget(budget)
    if D.includes(x):
        return Yes(witness=(x,), certificate="member of D")

    if isinstance(host, FinitePoset):
        members = [D.decode(k) for k in range(D.size)]
        explored = 0
        for r in range(1, len(members) + 1):
            for A in combinations(members, r):
                explored += 1
                if explored > limit:
                    return NotWithinBudget(limit, explored - 1, exhausted=False)
                if is_directed(host, A) and supremum(host, A) == x:
                    return Yes(witness=A, certificate="directed subset of D with supremum x")
        return NotWithinBudget(limit, explored, exhausted=True)

    if is_sup is None and D.sup_oracle is not None:
        is_sup = lambda prefix, target: D.leq(D.sup_oracle(prefix), target) and D.leq(target, D.sup_oracle(prefix))
    if is_sup is None:
        return NotWithinBudget(limit, 0, exhausted=False)

    meter = _Meter(D.leq, limit)
    start = _MISSING
    try:
        for k in count():
            if not D.has(k):
                return NotWithinBudget(limit, meter.spent, exhausted=True)
            if meter.lt(D.decode(k), x):
                start = D.decode(k)
                break
    except _OutOfBudget:
        return NotWithinBudget(limit, meter.spent, exhausted=False)

    length = chain_length or get_settings().chain_length
    chain = order_dense_chain(D, start, x, budget=limit - meter.spent)
    prefix = chain.take(length)
    if chain.stall is not None or len(prefix) < length:
        return NotWithinBudget(limit, meter.spent + len(prefix), exhausted=chain.stall is None)
    if order_dense_certificate(prefix, x, D.leq) and is_sup(prefix, x):
        logger.info(f"[PERF] membership certified in {(time.perf_counter() - started) * 1000:.2f} ms")
        return Yes(witness=tuple(prefix), certificate="increasing chain in D with supremum x")
    return NotWithinBudget(limit, meter.spent + len(prefix), exhausted=False)


def classify_trivial(P: FinitePoset, B: Iterable[int], bound: Optional[int] = None) -> tuple:
    """
    Split P into the supremum points N_B and the rest T_B.

    N_B holds every x that is the supremum of a directed A inside B that
    misses x.
    """
    members = frozenset(B)
    family = directed_family(P, bound)
    nontrivial = frozenset(
        x for x, group in family.items() if any(A <= members and x not in A for A in group)
    )
    return nontrivial, frozenset(P.indices) - nontrivial


def directed_suprema_report(P: FinitePoset, B: Optional[Iterable[int]] = None, bound: Optional[int] = None) -> Report:
    """
    How suprema of directed subsets of B behave inside the finite poset P.

    A directed subset of a finite poset contains its supremum, so the points
    reachable as directed suprema from B are the elements of B, N_B is empty
    and T_B is all of P. Every clause is computed and annotated as degenerate.
    """
    members = frozenset(P.indices if B is None else B)
    family = directed_family(P, bound)
    clauses: list[ClauseResult] = []

    stray = next((A for top, group in family.items() for A in group if top not in A), None)
    clauses.append(clause(
        P,
        "directed_sets_have_maximum",
        Check(True) if stray is None else Check(False, witness=tuple(sorted(stray))),
        f"{DEGENERATE}: the supremum of a directed set is its greatest element",
        degenerate=True,
    ))

    reached = frozenset(top for top, group in family.items() if any(A <= members for A in group))
    clauses.append(clause(
        P,
        "directed_suprema_stay_in_subset",
        Check(True, subset=reached) if reached == members else Check(False, witness=tuple(sorted(reached ^ members))),
        f"{DEGENERATE}: the suprema of directed subsets of B are exactly the elements of B",
        degenerate=True,
    ))

    limit = get_settings().sweep_bound
    if len(members) > limit:
        clauses.append(skipped(
            "membership_search_matches_subset",
            f"skipped: searching {len(members)} elements exceeds the sweep bound {limit}",
            degenerate=True,
        ))
    else:
        D = EnumeratedPoset.from_finite(P, members, name="B")
        wrong = next(
            (x for x in P.indices if isinstance(directed_sup_membership(P, D, x, budget=2 ** len(members)), Yes) != (x in members)),
            None,
        )
        clauses.append(clause(
            P,
            "membership_search_matches_subset",
            Check(True) if wrong is None else Check(False, witness=(wrong,)),
            f"{DEGENERATE}: the exhaustive membership search certifies exactly the elements of B",
            degenerate=True,
        ))

    nontrivial, trivial = classify_trivial(P, members, bound)
    clauses.append(clause(
        P,
        "no_nontrivial_suprema",
        Check(True, subset=trivial) if not nontrivial else Check(False, witness=tuple(sorted(nontrivial))),
        f"{DEGENERATE}: N_B is empty and T_B is the whole poset",
        degenerate=True,
    ))
    clauses.append(clause(
        P,
        "subset_with_trivial_points_is_weak_basis",
        is_weak_basis(P, members | trivial, bound),
        f"{DEGENERATE}: B together with T_B is a weak basis because T_B is finite, hence countable",
        degenerate=True,
    ))
    return Report(subject=f"finite poset with {len(P)} elements", suite="directed_suprema", clauses=clauses)


def chain_inside_directed(D: EnumeratedPoset, A: DirectedStream, budget: Optional[int] = None) -> ChainStream:
    """Increasing chain drawn from A itself with the same supremum as A."""
    if A.length is not None:
        values = A.prefix(A.length)
        top = next((a for a in values if all(D.leq(b, a) for b in values)), None)
        if top is None:
            raise PreconditionFailed(f"{A.name} is not directed: no greatest element")
        return ChainStream(repeat(top), D.leq, name=f"chain inside {A.name}")

    meter = _Meter(D.leq, _budget(budget))
    produced = [0]

    def source() -> Iterator:
        previous = _MISSING
        for d in _dominating_chain(D, A, meter, strict=False):
            if isinstance(d, Stall):
                yield d
                return
            for k in count():
                b = A.at(k)
                if meter.leq(d, b) and (previous is _MISSING or meter.leq(previous, b)):
                    break
            previous = b
            yield b

    return ChainStream(_metered(source, meter, produced), D.leq, name=f"chain inside {A.name}")
