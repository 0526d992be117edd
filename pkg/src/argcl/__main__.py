"""Module entry point: python -m argcl."""

from .cli import run

if __name__ == "__main__":
    raise SystemExit(run())
