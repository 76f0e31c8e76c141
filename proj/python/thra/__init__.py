"""Wavelength-resolved Trojan-horse risk analysis for fiber-optic QKD subsystems."""

from ._thra import *  # noqa: F401,F403
from ._thra import __version__  # noqa: F401
