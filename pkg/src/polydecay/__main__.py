"""Entry point for running polydecay as a module."""

from polydecay.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
