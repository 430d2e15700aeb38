import sys

import click

from ih_derham.cli import app


def main() -> None:
    # usage errors exit 1; 2 is reserved for domain failures
    try:
        rv = app(standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        sys.exit(1)
    except click.ClickException as e:
        e.show()
        sys.exit(1)
    sys.exit(rv if isinstance(rv, int) else 0)


if __name__ == "__main__":
    main()
