"""Dexterous and ergonomic workspace analysis of dual master manipulators."""

from ._ergoscope import *  # noqa: F401,F403
from ._ergoscope import __version__  # noqa: F401
