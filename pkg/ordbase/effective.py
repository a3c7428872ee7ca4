"""
Effectivity layer: the Cantor pairing function, finite maps (bijective
enumerations of countable carriers) and emitters, which model recursively
enumerable sets as the range of a total step function.

Emitters follow the emit-zero-on-reject convention: code 0 = <0,0> always
encodes a positive instance, so rejecting a candidate by emitting 0 never adds
a wrong element to the range.
"""
import logging
import math
import time
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Any, Callable, Dict, List, Optional

from .domains import MajorizationPoint, RationalInterval, SigmaString
from .errors import InvalidElement, PreconditionFailed
from .schemas import ClauseResult, Report

logger = logging.getLogger(__name__)


def pair(n: int, m: int) -> int:
    if n < 0 or m < 0:
        raise PreconditionFailed(f"pair takes naturals, got ({n}, {m})")
    return (n + m) * (n + m + 1) // 2 + n


def unpair(code: int) -> tuple[int, int]:
    if code < 0:
        raise PreconditionFailed(f"unpair takes a natural, got {code}")
    w = (math.isqrt(8 * code + 1) - 1) // 2
    n = code - w * (w + 1) // 2
    return n, w - n


@dataclass(frozen=True)
class FiniteMap:
    decode: Callable[[int], Any]
    encode: Callable[[Any], int]
    name: str
    size: Optional[int] = None

    def has(self, k: int) -> bool:
        return k >= 0 and (self.size is None or k < self.size)

    def take(self, k: int) -> list:
        limit = k if self.size is None else min(k, self.size)
        return [self.decode(i) for i in range(limit)]


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    result, rest, f = 1, n, 2
    while f * f <= rest:
        if rest % f == 0:
            rest //= f
            if rest % f == 0:
                return 0
            result = -result
        f += 1
    return -result if rest > 1 else result


@lru_cache(maxsize=None)
def divisors(n: int) -> tuple:
    small = [f for f in range(1, math.isqrt(n) + 1) if n % f == 0]
    return tuple(sorted(set(small + [n // f for f in small])))


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return sum(mobius(f) * (n // f) for f in divisors(n))


class _TotientPrefix:
    """Lazily grown table of T(s) = sum of totient(t) for 2 <= t < s."""

    def __init__(self):
        self.starts = [0, 0, 0]  # starts[s] for s = 0, 1, 2

    def upto(self, s: int) -> int:
        while len(self.starts) <= s:
            t = len(self.starts) - 1
            self.starts.append(self.starts[-1] + totient(t))
        return self.starts[s]

    def locate(self, j: int) -> int:
        """Largest s >= 2 with T(s) <= j."""
        while self.starts[-1] <= j:
            self.upto(len(self.starts))
        return bisect_right(self.starts, j, lo=2) - 1


_prefix = _TotientPrefix()


def _coprime_rank(p: int, q: int) -> int:
    return sum(1 for t in range(1, p) if math.gcd(t, q) == 1)


def _coprime_at(rank: int, q: int) -> int:
    for t in range(1, q):
        if math.gcd(t, q) == 1:
            if rank == 0:
                return t
            rank -= 1
    raise InvalidElement(f"No coprime of {q} at that rank")


def alpha0() -> FiniteMap:
    """Rationals in [0,1]: 0, 1, then reduced fractions by denominator, then numerator."""

    def decode(k: int) -> Fraction:
        if k < 0:
            raise InvalidElement(f"Negative index {k}")
        if k < 2:
            return Fraction(k)
        j = k - 2
        q = _prefix.locate(j)
        return Fraction(_coprime_at(j - _prefix.upto(q), q), q)

    def encode(x) -> int:
        if not isinstance(x, (int, Fraction)) or not 0 <= x <= 1:
            raise InvalidElement(f"{x!r} is not a rational in [0,1]")
        x = Fraction(x)
        if x.denominator == 1:
            return int(x)
        return 2 + _prefix.upto(x.denominator) + _coprime_rank(x.numerator, x.denominator)

    return FiniteMap(decode=decode, encode=encode, name="alpha0")


def rationals() -> FiniteMap:
    """All rationals: 0, then p/q ordered by p+q and p, each followed by its negative."""

    def decode(k: int) -> Fraction:
        if k < 0:
            raise InvalidElement(f"Negative index {k}")
        if k == 0:
            return Fraction(0)
        slot, negative = divmod(k - 1, 2)
        s = _prefix.locate(slot)
        p = _coprime_at(slot - _prefix.upto(s), s)
        value = Fraction(p, s - p)
        return -value if negative else value

    def encode(x) -> int:
        if not isinstance(x, (int, Fraction)):
            raise InvalidElement(f"{x!r} is not rational")
        x = Fraction(x)
        if x == 0:
            return 0
        p, q = abs(x.numerator), x.denominator
        slot = _prefix.upto(p + q) + _coprime_rank(p, p + q)
        return 1 + 2 * slot + (1 if x < 0 else 0)

    return FiniteMap(decode=decode, encode=encode, name="rationals")


def _compositions(total: int, slots: int) -> int:
    if slots == 0:
        return 1 if total == 0 else 0
    return math.comb(total + slots - 1, slots - 1)


def _coprime_extensions(prefix: tuple, d: int, n: int) -> int:
    """Compositions of d into n parts starting with prefix whose parts have gcd 1."""
    rest = d - sum(prefix)
    if rest < 0:
        return 0
    g = math.gcd(d, *prefix)
    return sum(mobius(f) * _compositions(rest // f, n - len(prefix)) for f in divisors(g))


class _SimplexIndex:
    """
    Bijective indexing of the rational points of the n-simplex.

    A point q corresponds to the weights w_i = i*(q_i - q_{i+1}), w_n = n*q_n,
    which are nonnegative and sum to 1. Writing w = c/d in lowest terms gives
    a composition c of d whose parts have gcd 1. Points are listed by d, and
    within one d by c in descending lexicographic order. Bottom is w = (0,..,0,1)
    at d = 1 and is moved to index 0.
    """

    def __init__(self, n: int):
        self.n = n
        self.starts = [None, 1]  # starts[d]: first index of block d

    def _block_size(self, d: int) -> int:
        size = _coprime_extensions((), d, self.n)
        return size - 1 if d == 1 else size

    def _grow(self) -> None:
        d = len(self.starts) - 1
        self.starts.append(self.starts[d] + self._block_size(d))

    def block_of(self, k: int) -> int:
        while self.starts[-1] <= k:
            self._grow()
        return bisect_right(self.starts, k, lo=1) - 1

    def start(self, d: int) -> int:
        while len(self.starts) <= d:
            self._grow()
        return self.starts[d]

    def unrank(self, rank: int, d: int) -> tuple:
        parts: list[int] = []
        for _ in range(self.n - 1):
            for v in range(d - sum(parts), -1, -1):
                block = _coprime_extensions(tuple(parts) + (v,), d, self.n)
                if rank < block:
                    parts.append(v)
                    break
                rank -= block
        parts.append(d - sum(parts))
        return tuple(parts)

    def rank(self, parts: tuple, d: int) -> int:
        total = 0
        for i, c in enumerate(parts[:-1]):
            prefix = tuple(parts[:i])
            total += sum(_coprime_extensions(prefix + (v,), d, self.n) for v in range(c + 1, d - sum(prefix) + 1))
        return total

    def decode(self, k: int) -> MajorizationPoint:
        if k < 0:
            raise InvalidElement(f"Negative index {k}")
        if k == 0:
            return MajorizationPoint.bottom(self.n)
        d = self.block_of(k)
        parts = self.unrank(k - self.starts[d], d)
        weights = [Fraction(c, d) for c in parts]
        coords = [sum((weights[j] / (j + 1) for j in range(i, self.n)), Fraction(0)) for i in range(self.n)]
        return MajorizationPoint(tuple(coords))

    def encode(self, x) -> int:
        if not isinstance(x, MajorizationPoint) or x.n != self.n or not x.is_rational:
            raise InvalidElement(f"{x} is not a rational point of dimension {self.n}")
        if x.is_bottom:
            return 0
        q = x.coords
        weights = [(i + 1) * (q[i] - q[i + 1]) for i in range(self.n - 1)] + [self.n * q[-1]]
        d = math.lcm(*(w.denominator for w in weights))
        parts = tuple(int(w * d) for w in weights)
        return self.start(d) + self.rank(parts, d)


@lru_cache(maxsize=None)
def alpha_majorization(n: int) -> FiniteMap:
    if n < 2:
        raise PreconditionFailed(f"Majorization needs n >= 2, got {n}")
    index = _SimplexIndex(n)
    return FiniteMap(decode=lru_cache(maxsize=65536)(index.decode), encode=index.encode, name=f"alpha_majorization({n})")


def cantor_strings(alphabet: str) -> FiniteMap:
    """Finite strings over the alphabet, shortest first, then lexicographic in alphabet order."""
    symbols = list(alphabet)
    base = len(symbols)
    if base == 0:
        raise PreconditionFailed("Alphabet must be nonempty")
    positions = {s: i for i, s in enumerate(symbols)}

    def first_index(length: int) -> int:
        return length if base == 1 else (base ** length - 1) // (base - 1)

    def decode(k: int) -> SigmaString:
        if k < 0:
            raise InvalidElement(f"Negative index {k}")
        length = 0
        while first_index(length + 1) <= k:
            length += 1
        offset = k - first_index(length)
        digits = []
        for _ in range(length):
            offset, r = divmod(offset, base)
            digits.append(symbols[r])
        return SigmaString(alphabet, "".join(reversed(digits)))

    def encode(x) -> int:
        if not isinstance(x, SigmaString) or not x.is_finite:
            raise InvalidElement(f"{x} is not a finite string")
        offset = 0
        for s in x.content:
            offset = offset * base + positions[s]
        return first_index(len(x.content)) + offset

    return FiniteMap(decode=decode, encode=encode, name=f"cantor_strings({alphabet})")


def rational_intervals() -> FiniteMap:
    """Bottom first, then [min, max] of the rationals r_i, r_j for i <= j in triangular order."""
    numbers = rationals()

    def decode(k: int) -> RationalInterval:
        if k < 0:
            raise InvalidElement(f"Negative index {k}")
        if k == 0:
            return RationalInterval.bottom()
        i, j = unpair_triangular(k - 1)
        a, b = numbers.decode(i), numbers.decode(j)
        return RationalInterval(min(a, b), max(a, b))

    def encode(x) -> int:
        if not isinstance(x, RationalInterval):
            raise InvalidElement(f"{x!r} is not an interval")
        if x.is_bottom:
            return 0
        i, j = sorted((numbers.encode(x.lo), numbers.encode(x.hi)))
        return 1 + j * (j + 1) // 2 + i

    return FiniteMap(decode=decode, encode=encode, name="rational_intervals")


def unpair_triangular(t: int) -> tuple[int, int]:
    j = (math.isqrt(8 * t + 1) - 1) // 2
    return t - j * (j + 1) // 2, j


@dataclass(frozen=True)
class Emitter:
    step: Callable[[int], int]
    name: str = "emitter"

    def trace(self, steps: int) -> List[int]:
        return [self.step(k) for k in range(steps)]

    def trace_text(self, steps: int) -> str:
        return "\n".join(str(code) for code in self.trace(steps))

    def emitted(self, steps: int) -> set:
        return set(self.trace(steps))


def relation_emitter(fmap: FiniteMap, rel: Callable[[Any, Any], bool]) -> Emitter:
    def step(code: int) -> int:
        p, q = unpair(code)
        if fmap.has(p) and fmap.has(q) and rel(fmap.decode(p), fmap.decode(q)):
            return code
        return 0

    return Emitter(step=step, name=f"relation over {fmap.name}")


def computable_element_emitter(basis_map: FiniteMap, waybelow_x: Callable[[Any], bool]) -> Emitter:
    """Indices n with b_n way below x; index 0 must hold the bottom element."""
    if not waybelow_x(basis_map.decode(0)):
        raise PreconditionFailed(f"{basis_map.name} must list bottom at index 0")

    def step(k: int) -> int:
        return k if basis_map.has(k) and waybelow_x(basis_map.decode(k)) else 0

    return Emitter(step=step, name=f"approximants in {basis_map.name}")


def approximant_emitter(basis_map: FiniteMap, way_below: Callable[[Any, Any], bool], chain_prefix: list) -> Emitter:
    """Element emitter for the supremum of a chain, justified by the consumed prefix only."""
    return computable_element_emitter(basis_map, lambda b: any(way_below(b, c) for c in chain_prefix))


def computable_function_relation(
    f: Callable[[Any], Any],
    basisP: FiniteMap,
    basisQ: FiniteMap,
    waybelowQ: Callable[[Any, Any], bool],
) -> Emitter:
    def step(code: int) -> int:
        n, m = unpair(code)
        if basisQ.has(n) and basisP.has(m) and waybelowQ(basisQ.decode(n), f(basisP.decode(m))):
            return code
        return 0

    return Emitter(step=step, name=f"graph of a function into {basisQ.name}")


def verify_effective_weak_basis(
    fmap: FiniteMap,
    leq: Callable[[Any, Any], bool],
    witnesses: Dict[str, list],
    bound: int,
    emitter: Optional[Emitter] = None,
) -> Report:
    """
    Check the effective weak basis conditions up to a bound.

    witnesses maps a name for each test element x to a prefix of a directed
    family B_x inside the basis.
    """
    started = time.perf_counter()
    emitter = emitter or relation_emitter(fmap, leq)
    clauses: list[ClauseResult] = []

    unsound = None
    incomplete = None
    for code in range(bound):
        p, q = unpair(code)
        positive = fmap.has(p) and fmap.has(q) and leq(fmap.decode(p), fmap.decode(q))
        out = emitter.step(code)
        if unsound is None and out != 0:
            a, b = unpair(out)
            if not (fmap.has(a) and fmap.has(b) and leq(fmap.decode(a), fmap.decode(b))):
                unsound = code
        if incomplete is None and positive and out != code:
            incomplete = code
    clauses.append(ClauseResult(
        property="emitter_sound",
        holds=unsound is None,
        witness=None if unsound is None else [str(unsound)],
        note=f"every nonzero emission below step {bound} decodes to an ordered pair",
    ))
    clauses.append(ClauseResult(
        property="emitter_complete",
        holds=incomplete is None,
        witness=None if incomplete is None else [str(incomplete)],
        note=f"every ordered pair with code below {bound} is emitted at its own step",
    ))

    for name, prefix in witnesses.items():
        clauses.append(_check_witness(fmap, leq, emitter, name, prefix))

    logger.info(f"[PERF] effective weak basis check over {bound} steps: {(time.perf_counter() - started) * 1000:.2f} ms")
    return Report(subject=fmap.name, suite="effective_weak_basis", clauses=clauses)


def _check_witness(fmap: FiniteMap, leq, emitter: Emitter, name: str, prefix: list) -> ClauseResult:
    label = f"directed_witness[{name}]"
    try:
        codes = [fmap.encode(b) for b in prefix]
    except InvalidElement as e:
        return ClauseResult(property=label, holds=False, note=f"witness outside the basis: {e}")

    for (i, bi), (j, bj) in combinations_with_replacement(list(enumerate(prefix)), 2):
        top = next((p for p, bp in enumerate(prefix) if leq(bi, bp) and leq(bj, bp)), None)
        if top is None:
            return ClauseResult(
                property=label,
                holds=None,
                witness=[str(bi), str(bj)],
                note="bound exceeded: no dominating element within the witness prefix",
            )
        for n in (codes[i], codes[j]):
            code = pair(n, codes[top])
            if emitter.step(code) != code:
                return ClauseResult(property=label, holds=False, witness=[str(code)], note="dominating pair not emitted")
    return ClauseResult(property=label, holds=True, note=f"{len(prefix)} witness elements, every pair dominated and emitted")
