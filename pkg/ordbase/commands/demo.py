import click

from ..domains import MajorizationPoint, basis_chain_M, bisection_chain, way_below_M
from ..effective import alpha_majorization, approximant_emitter, computable_element_emitter, rational_intervals
from .approx import real_oracle


@click.group("demo")
def demo():
    """Computable-element demos for the interval and majorization domains."""


@demo.command("real")
@click.argument("spec", default="sqrt2")
@click.option("--steps", type=int, default=21, show_default=True)
@click.option("--emissions", type=int, default=200, show_default=True, help="Emitter steps to scan")
def real(spec, steps, emissions):
    """Bisection intervals around a real, then basis intervals way below it."""
    compare, lo, hi = real_oracle(spec)
    for i, interval in enumerate(bisection_chain(compare, lo, hi).take(steps)):
        click.echo(f"{i}\t{interval}\twidth {interval.width}")

    intervals = rational_intervals()

    def way_below_x(b) -> bool:
        return b.is_bottom or (compare(b.lo) < 0 and compare(b.hi) > 0)

    emitter = computable_element_emitter(intervals, way_below_x)
    found = sorted(emitter.emitted(emissions) - {0})
    click.echo(f"approximants among the first {emissions} intervals: {len(found)}")
    for k in found[:10]:
        click.echo(f"  {k}\t{intervals.decode(k)}")


@demo.command("majorization")
@click.argument("spec")
@click.option("--steps", type=int, default=5, show_default=True)
@click.option("--emissions", type=int, default=200, show_default=True)
def majorization(spec, steps, emissions):
    """Strictly increasing basis chain below a point, and the approximants it justifies."""
    x = MajorizationPoint.parse(spec)
    prefix = basis_chain_M(x).take(steps)
    for i, point in enumerate(prefix):
        click.echo(f"{i}\t{point}")
    basis = alpha_majorization(x.n)
    emitter = approximant_emitter(basis, way_below_M, prefix)
    found = sorted(emitter.emitted(emissions) - {0})
    click.echo(f"basis points way below the prefix among the first {emissions}: {len(found)}")
    for k in found[:10]:
        click.echo(f"  {k}\t{basis.decode(k)}")
