"""Entry point for `python -m quatdenoise`."""

from quatdenoise.app import main

if __name__ == "__main__":
    raise SystemExit(main())
