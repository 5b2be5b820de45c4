"""Disordered discrete-time quantum walk simulator."""

from ._qwalk import *  # noqa: F401,F403
from ._qwalk import __version__  # noqa: F401
