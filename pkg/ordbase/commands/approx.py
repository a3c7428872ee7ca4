import math
import re
import sys

import click

from ..domains import (
    MajorizationPoint,
    approx_below,
    bisection_chain,
    square_root_oracle,
    sup_interval_chain,
)
from ..errors import ParseError
from ..schemas import parse_fraction

SQRT = re.compile(r"^sqrt(\d+)$")


def real_oracle(spec: str):
    """Comparison oracle and a starting rational interval for a named real such as sqrt2."""
    match = SQRT.match(spec.strip())
    if not match:
        raise ParseError(f"Unknown real {spec!r}; expected sqrtN")
    radicand = int(match.group(1))
    lo = math.isqrt(radicand)
    return square_root_oracle(radicand), lo, lo + 1


@click.command("approx")
@click.argument("domain", type=click.Choice(("majorization", "real")))
@click.argument("spec")
@click.option("--eps", default="1/10", show_default=True, help="Partial-sum tolerance for majorization")
@click.option("--width", default="1/1024", show_default=True, help="Interval width for reals")
def approx(domain, spec, eps, width):
    """Print a rational approximant strictly below a majorization point, or a narrow interval around a real."""
    if domain == "majorization":
        x = MajorizationPoint.parse(spec)
        click.echo(str(approx_below(x, parse_fraction(eps))))
        return

    compare, lo, hi = real_oracle(spec)
    limit = sup_interval_chain(bisection_chain(compare, lo, hi))
    interval = limit.enclosure(parse_fraction(width))
    if interval is None:
        click.echo(f"undecided after {len(limit.consumed)} intervals", err=True)
        sys.exit(1)
    click.echo(str(interval))
