"""Resonant EM vibration harvester + switched-capacitor multiplier toolkit."""

from ._emvm import *  # noqa: F401,F403
from ._emvm import __doc__ as _core_doc

__doc__ = _core_doc
