"""Bifurcation sequences of integrable secular three-body models in Hopf variables."""

from ._core import *  # noqa: F401,F403
from ._core import HopfbifError

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
