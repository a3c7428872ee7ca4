import sys

import click

from ..services import SUITES, load_poset, load_utilities, render, run_suite


@click.command("check")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--suite", type=click.Choice(SUITES), default="density", show_default=True)
@click.option("--utilities", "utilities_path", type=click.Path(dir_okay=False), default=None, help="Multi-utility JSON for the mu suite")
@click.option("--bound", type=int, default=None, help="Largest poset searched exhaustively")
@click.option("--seed", type=int, default=None, help="Seed for the random-poset sweep")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here instead of stdout")
def check(path, suite, utilities_path, bound, seed, out):
    """Run a report suite against a poset file; exit 1 if a theorem-backed clause fails."""
    P, subset = load_poset(path)
    utilities = load_utilities(utilities_path, P) if utilities_path else None
    result = run_suite(P, suite, subset=subset, utilities=utilities, bound=bound, seed=seed)
    text = render(result)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        click.echo(text)
    if not result.ok:
        sys.exit(1)
