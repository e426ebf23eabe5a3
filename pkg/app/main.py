# app/main.py
import sys
from typing import Optional, Sequence

from app.cli.cli import ejecutar


def main(argv: Optional[Sequence[str]] = None) -> int:
    """`python -m app.main <subcomando> ...`"""
    return ejecutar(argv)


if __name__ == "__main__":
    sys.exit(main())
