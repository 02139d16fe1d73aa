"""Lattice metamaterial simulation with learned edge energies."""

from ._mgn import *  # noqa: F401,F403
from ._mgn import MgnError, __version__  # noqa: F401
