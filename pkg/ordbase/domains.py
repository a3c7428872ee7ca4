"""
Exact implementations of three example domains: the majorization simplex,
the interval domain and the Cantor domain of finite and infinite strings.

Coordinates are Fractions, or real algebraic sympy numbers such as sqrt(2)/2
where an irrational point is needed. Nothing here touches floating point.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import count, repeat
from typing import Callable, Iterable, Optional, Union

import sympy

from .config import get_settings
from .enumerated import ChainStream
from .errors import BottomInput, ConstructionError, InvalidElement, NotDirected, NotWayBelow, PreconditionFailed
from .schemas import parse_fraction

logger = logging.getLogger(__name__)


Exact = Union[Fraction, sympy.Expr]


def surd(radicand: int, scale=1) -> sympy.Expr:
    """scale * sqrt(radicand) as an exact sympy number."""
    if radicand <= 0:
        raise InvalidElement(f"Radicand must be positive, got {radicand}")
    scale = Fraction(scale)
    value = sympy.Rational(scale.numerator, scale.denominator) * sympy.sqrt(radicand)
    if value.is_Rational:
        raise InvalidElement(f"{radicand} is a perfect square; use a Fraction")
    return value


def exact(value) -> Exact:
    """
    Normalize a number: rationals become Fractions, real algebraic sympy
    values stay symbolic with their radicals simplified.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidElement(f"Not an exact number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_fraction(value)
    if isinstance(value, sympy.Expr) and value.is_number:
        value = sympy.radsimp(value)
        if value.is_Rational:
            return Fraction(int(value.p), int(value.q))
        if value.is_real and value.is_algebraic:
            return value
    raise InvalidElement(f"Not an exact number: {value!r}")


def _floor(value) -> int:
    return math.floor(value) if isinstance(value, Fraction) else int(sympy.floor(value))


def simplest_between(lo, hi) -> Fraction:
    """
    Rational of smallest denominator strictly inside (lo, hi).

    hi=None stands for +infinity. Bounds may be irrational sympy numbers.
    """
    lo = exact(lo)
    hi = None if hi is None else exact(hi)
    if hi is not None and not lo < hi:
        raise PreconditionFailed(f"Empty open interval ({lo}, {hi})")
    if lo < 0:
        if hi is None or hi > 0:
            return Fraction(0)
        return -simplest_between(-hi, -lo)
    whole = _floor(lo)
    if hi is None or whole + 1 < hi:
        return Fraction(whole + 1)
    rest_lo = lo - whole
    rest_hi = hi - whole
    return whole + 1 / simplest_between(1 / rest_hi, None if rest_lo == 0 else 1 / rest_lo)


def square_root_oracle(radicand: int) -> Callable[[Fraction], int]:
    """Compare rationals against sqrt(radicand) using q < sqrt(r) iff q < 0 or q*q < r."""

    def compare(q) -> int:
        q = exact(q)
        if q < 0 or q * q < radicand:
            return -1
        return 0 if q * q == radicand else 1

    return compare


@dataclass(frozen=True)
class MajorizationPoint:
    coords: tuple

    def __post_init__(self):
        values = tuple(exact(v) for v in self.coords)
        object.__setattr__(self, "coords", values)
        if len(values) < 2:
            raise InvalidElement("Majorization points need at least two coordinates")
        if any(v < 0 or v > 1 for v in values):
            raise InvalidElement(f"Coordinates must lie in [0, 1]: {self}")
        if exact(sum(values, Fraction(0))) != 1:
            raise InvalidElement(f"Coordinates must sum to 1: {self}")
        if any(a < b for a, b in zip(values, values[1:])):
            raise InvalidElement(f"Coordinates must be non-increasing: {self}")

    @classmethod
    def bottom(cls, n: int) -> "MajorizationPoint":
        return cls(tuple(Fraction(1, n) for _ in range(n)))

    @classmethod
    def parse(cls, text: str) -> "MajorizationPoint":
        body = text.strip().strip("()[]")
        return cls(tuple(parse_fraction(part) for part in body.split(",")))

    @property
    def n(self) -> int:
        return len(self.coords)

    @cached_property
    def partial_sums(self) -> tuple:
        sums, total = [], Fraction(0)
        for v in self.coords:
            total = exact(total + v)
            sums.append(total)
        return tuple(sums)

    def partial_sum(self, k: int) -> Exact:
        """s_k: the sum of the k largest coordinates."""
        return self.partial_sums[k - 1] if k > 0 else Fraction(0)

    @property
    def is_bottom(self) -> bool:
        return all(v == Fraction(1, self.n) for v in self.coords)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.coords)

    def to_json(self) -> list[str]:
        return [str(v) for v in self.coords]

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.coords) + ")"


def _same_dimension(x: MajorizationPoint, y: MajorizationPoint) -> None:
    if x.n != y.n:
        raise PreconditionFailed(f"Dimension mismatch: {x.n} vs {y.n}")


def leq_M(x: MajorizationPoint, y: MajorizationPoint) -> bool:
    _same_dimension(x, y)
    return all(x.partial_sums[k] <= y.partial_sums[k] for k in range(x.n - 1))


def way_below_M(x: MajorizationPoint, y: MajorizationPoint) -> bool:
    _same_dimension(x, y)
    return x.is_bottom or all(x.partial_sums[k] < y.partial_sums[k] for k in range(x.n - 1))


def _sandwiched(q: MajorizationPoint, x: MajorizationPoint, eps) -> bool:
    return all(x.partial_sums[k] - eps < q.partial_sums[k] < x.partial_sums[k] for k in range(x.n - 1))


def approx_below(x: MajorizationPoint, eps) -> MajorizationPoint:
    """
    Rational q in the simplex with s_k(x) - eps < s_k(q) < s_k(x) for every k < n.

    Free choices inside open intervals take the rational of smallest
    denominator, so the output is deterministic.
    """
    if x.is_bottom:
        raise BottomInput("The bottom element has nothing strictly below it")
    eps = exact(eps)
    if eps <= 0:
        raise PreconditionFailed(f"Tolerance must be positive, got {eps}")

    n, c = x.n, x.coords
    h = max(i for i in range(n) if c[i] != 0) + 1
    k = h
    while k > 1 and c[k - 2] == c[h - 1]:
        k -= 1

    if k == 1:
        # x is uniform over its h nonzero coordinates
        m = h
        e = simplest_between(0, min(eps / m, Fraction(n - m, n * m)))
        q = [Fraction(1, m) - e] * m + [m * e / (n - m)] * (n - m)
    else:
        alpha = h - k + 1
        e = simplest_between(0, min(eps / k, (c[k - 2] - c[k - 1]) / (1 + Fraction(k - 1, alpha))))
        head: list = []
        for i in range(k - 1):
            if head and head[-1] < c[i]:
                head.append(head[-1])
            else:
                head.append(simplest_between(c[i] - e, c[i]))
        tau = (1 - sum(head, Fraction(0))) / alpha
        q = head + [tau] * alpha + [Fraction(0)] * (n - h)
        if h < n:
            tail = n - h
            slack = sum(q[:k], Fraction(0)) - x.partial_sum(k) + eps
            beta = simplest_between(0, min(eps / tail, tau / (1 + Fraction(tail, alpha)), slack / tail))
            shift = tail * beta / alpha
            q = head + [tau - shift] * alpha + [beta] * tail

    result = MajorizationPoint(tuple(q))
    if not _sandwiched(result, x, eps):
        raise ConstructionError(f"approx_below({x}, {eps}) produced {result}, outside the partial-sum sandwich")
    return result


def interpolate(x: MajorizationPoint, y: MajorizationPoint) -> MajorizationPoint:
    """Rational b with x way below b and b way below y."""
    if not way_below_M(x, y):
        raise NotWayBelow(f"{x} is not way below {y}")
    if x.is_bottom:
        return x

    n = x.n
    gaps = [y.partial_sums[j] - x.partial_sums[j] for j in range(n - 1)]
    b: list = []
    excess = Fraction(0)
    for i in range(n - 1):
        upper = x.coords[i] + min(gaps[i:]) - excess
        if b:
            upper = min(upper, b[-1])
        b.append(simplest_between(x.coords[i], upper))
        excess = excess + b[-1] - x.coords[i]
    b.append(1 - sum(b, Fraction(0)))

    result = MajorizationPoint(tuple(b))
    if not (way_below_M(x, result) and way_below_M(result, y)):
        raise ConstructionError(f"interpolate({x}, {y}) produced {result}, which does not sit between them")
    return result


def basis_chain_M(x: MajorizationPoint) -> ChainStream:
    """
    Strictly increasing chain of rational points way below x converging to x.

    Step i approximates x within 2**-(i+1) of the smallest partial-sum gap to
    bottom, and never looser than the previous step's distance to x.
    """
    if x.is_bottom:
        return ChainStream(repeat(x), leq_M, name="basis chain below bottom")
    n = x.n
    gap = min(x.partial_sums[k] - Fraction(k + 1, n) for k in range(n - 1))

    def source():
        previous = None
        for i in count():
            eps = gap / 2 ** (i + 1)
            if previous is not None:
                eps = min(eps, min(x.partial_sums[k] - previous.partial_sums[k] for k in range(n - 1)))
            previous = approx_below(x, eps)
            yield previous

    return ChainStream(source(), leq_M, strict=True, name=f"basis chain below {x}")


@dataclass(frozen=True)
class RationalInterval:
    lo: Optional[Exact] = None
    hi: Optional[Exact] = None

    def __post_init__(self):
        if (self.lo is None) != (self.hi is None):
            raise InvalidElement("An interval needs both endpoints, or neither for bottom")
        if self.lo is None:
            return
        lo, hi = exact(self.lo), exact(self.hi)
        if lo > hi:
            raise InvalidElement(f"Interval endpoints out of order: [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def bottom(cls) -> "RationalInterval":
        return cls()

    @classmethod
    def from_json(cls, data) -> "RationalInterval":
        if data == "bottom":
            return cls()
        return cls(parse_fraction(data["lo"]), parse_fraction(data["hi"]))

    @property
    def is_bottom(self) -> bool:
        return self.lo is None

    @property
    def width(self) -> Optional[Exact]:
        return None if self.is_bottom else self.hi - self.lo

    def to_json(self):
        return "bottom" if self.is_bottom else {"lo": str(self.lo), "hi": str(self.hi)}

    def __str__(self) -> str:
        return "bottom" if self.is_bottom else f"[{self.lo},{self.hi}]"


def leq_I(x: RationalInterval, y: RationalInterval) -> bool:
    if x.is_bottom:
        return True
    if y.is_bottom:
        return False
    return x.lo <= y.lo and y.hi <= x.hi


def way_below_I(x: RationalInterval, y: RationalInterval) -> bool:
    if x.is_bottom:
        return True
    if y.is_bottom:
        return False
    return x.lo < y.lo and y.hi < x.hi


class IntervalLimit:
    """
    Intersection of an increasing interval chain.

    Intervals are pulled from the chain only as queries need them, at most
    budget of them in total.
    """

    def __init__(self, chain: Iterable[RationalInterval], budget: Optional[int] = None):
        self._chain = iter(chain)
        self.budget = get_settings().limit_depth if budget is None else budget
        self.consumed: list[RationalInterval] = []

    def _advance(self) -> bool:
        if len(self.consumed) >= self.budget:
            return False
        try:
            interval = next(self._chain)
        except StopIteration:
            return False
        if self.consumed and not leq_I(self.consumed[-1], interval):
            raise NotDirected(f"{interval} does not refine {self.consumed[-1]}")
        self.consumed.append(interval)
        return True

    def compare(self, q) -> Optional[int]:
        """-1 if q lies below the limit, +1 if above, None if undecided within budget."""
        q = exact(q)
        checked = 0
        while True:
            for interval in self.consumed[checked:]:
                if not interval.is_bottom:
                    if q < interval.lo:
                        return -1
                    if q > interval.hi:
                        return 1
            checked = len(self.consumed)
            if not self._advance():
                return None

    def enclosure(self, width) -> Optional[RationalInterval]:
        target = exact(width)
        while True:
            if self.consumed and not self.consumed[-1].is_bottom and self.consumed[-1].width <= target:
                return self.consumed[-1]
            if not self._advance():
                return None


def sup_interval_chain(chain: Iterable[RationalInterval], budget: Optional[int] = None) -> IntervalLimit:
    return IntervalLimit(chain, budget)


def bisection_chain(compare: Callable[[Fraction], int], lo, hi) -> ChainStream:
    """Nested rational intervals halving around the number compare locates."""
    start = RationalInterval(exact(lo), exact(hi))

    def source():
        interval = start
        while True:
            yield interval
            mid = (interval.lo + interval.hi) / 2
            side = compare(mid)
            if side < 0:
                interval = RationalInterval(mid, interval.hi)
            elif side > 0:
                interval = RationalInterval(interval.lo, mid)
            else:
                interval = RationalInterval(mid, mid)

    return ChainStream(source(), leq_I, name=f"bisection of {start}")


@dataclass(frozen=True)
class DepthBounded:
    """
    An infinite-string comparison that agreed on the first depth symbols.

    It is falsy: agreement on a prefix never proves the order. Check
    `decided` to tell it apart from a refuted comparison.
    """
    depth: int

    @property
    def decided(self) -> bool:
        return False

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class SigmaString:
    alphabet: str
    content: str = ""
    oracle: Optional[Callable[[int], str]] = None
    name: Optional[str] = None

    def __post_init__(self):
        if self.oracle is None:
            stray = [s for s in self.content if s not in self.alphabet]
            if stray:
                raise InvalidElement(f"Symbols {stray} are not in the alphabet {self.alphabet!r}")

    @classmethod
    def omega(cls, alphabet: str, oracle: Callable[[int], str], name: str = "omega") -> "SigmaString":
        return cls(alphabet, oracle=oracle, name=name)

    @property
    def is_finite(self) -> bool:
        return self.oracle is None

    @property
    def length(self) -> Optional[int]:
        return len(self.content) if self.is_finite else None

    def symbol(self, i: int) -> str:
        if self.is_finite:
            return self.content[i]
        s = self.oracle(i)
        if s not in self.alphabet:
            raise InvalidElement(f"{self.name} produced {s!r} at depth {i}, outside the alphabet")
        return s

    def truncate(self, depth: int) -> "SigmaString":
        if self.is_finite:
            return SigmaString(self.alphabet, self.content[:depth])
        return SigmaString(self.alphabet, "".join(self.symbol(i) for i in range(depth)))

    def __str__(self) -> str:
        if self.is_finite:
            return self.content or "ε"
        return f"{self.truncate(8).content}... ({self.name})"


def _same_alphabet(x: SigmaString, y: SigmaString) -> None:
    if set(x.alphabet) != set(y.alphabet):
        raise PreconditionFailed(f"Alphabets differ: {x.alphabet!r} vs {y.alphabet!r}")


def leq_C(x: SigmaString, y: SigmaString, depth: Optional[int] = None) -> Union[bool, DepthBounded]:
    """Prefix order; two infinite strings are only compared to a depth."""
    _same_alphabet(x, y)
    if x.is_finite:
        if y.is_finite:
            return y.content.startswith(x.content)
        return all(x.content[i] == y.symbol(i) for i in range(len(x.content)))
    if y.is_finite:
        return False
    limit = get_settings().omega_depth if depth is None else depth
    if any(x.symbol(i) != y.symbol(i) for i in range(limit)):
        return False
    return DepthBounded(limit)


def way_below_C(x: SigmaString, y: SigmaString, depth: Optional[int] = None) -> bool:
    if not x.is_finite:
        return False
    return leq_C(x, y, depth)


def prefix_chain(w: SigmaString) -> ChainStream:
    """Finite prefixes of w, which approximate it from below."""

    def source():
        for depth in count():
            if w.is_finite and depth >= len(w.content):
                yield from repeat(w)
            yield w.truncate(depth)

    return ChainStream(source(), leq_C, name=f"prefixes of {w}")
