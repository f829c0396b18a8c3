"""Entry point for hypernorm."""

import sys


def main() -> None:
    """Run the hypernorm command line."""
    from .cli import run

    sys.exit(run())


if __name__ == "__main__":
    main()
