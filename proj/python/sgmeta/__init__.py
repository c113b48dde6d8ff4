"""Metastability lab for the stochastic sine-Gordon equation on the torus."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
