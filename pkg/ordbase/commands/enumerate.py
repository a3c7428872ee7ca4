from typing import Callable

import click

from ..domains import leq_C, leq_I, leq_M
from ..effective import (
    FiniteMap,
    alpha0,
    alpha_majorization,
    cantor_strings,
    rational_intervals,
    rationals,
    relation_emitter,
    unpair,
)
from ..errors import PreconditionFailed

DOMAINS = ("rationals01", "rationals", "majorization", "cantor-strings", "intervals")


def domain_map(domain: str, n: int, alphabet: str) -> tuple[FiniteMap, Callable]:
    """Finite map and order for a named domain."""
    if domain == "rationals01":
        return alpha0(), lambda a, b: a <= b
    if domain == "rationals":
        return rationals(), lambda a, b: a <= b
    if domain == "majorization":
        return alpha_majorization(n), leq_M
    if domain == "cantor-strings":
        return cantor_strings(alphabet), leq_C
    if domain == "intervals":
        return rational_intervals(), leq_I
    raise PreconditionFailed(f"Unknown domain {domain!r}")


@click.command("enumerate")
@click.argument("domain", type=click.Choice(DOMAINS))
@click.option("--n", "n", type=int, default=2, show_default=True, help="Dimension of the majorization simplex")
@click.option("--count", type=int, default=10, show_default=True)
@click.option("--alphabet", default="01", show_default=True)
def enumerate_(domain, n, count, alphabet):
    """Print decode(0), ..., decode(count - 1), one per line."""
    fmap, _ = domain_map(domain, n, alphabet)
    for element in fmap.take(count):
        click.echo(str(element))


@click.command("emit")
@click.argument("domain", type=click.Choice(DOMAINS))
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--steps", type=int, default=10, show_default=True)
@click.option("--alphabet", default="01", show_default=True)
@click.option("--decode", is_flag=True, help="Show the ordered pair behind each nonzero emission")
def emit(domain, n, steps, alphabet, decode):
    """Print the order-relation emitter's output at steps 0..steps-1."""
    fmap, leq = domain_map(domain, n, alphabet)
    emitter = relation_emitter(fmap, leq)
    for code in emitter.trace(steps):
        if decode and code:
            p, q = unpair(code)
            click.echo(f"{code}\t{fmap.decode(p)} <= {fmap.decode(q)}")
        else:
            click.echo(str(code))
