import click

from ..gallery import gallery_text


@click.command("gallery")
def gallery():
    """Print the finite truncations of the standard counterexamples."""
    click.echo(gallery_text(), nl=False)
