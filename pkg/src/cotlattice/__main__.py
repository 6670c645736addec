"""Allow ``python -m cotlattice``."""

from .cli import entry

entry()
