"""Exact and approximate packing on graphs with bounded tree-independence number.

Graphs are bitset-backed; weights and coordinates are exact rationals.
"""
from .constructions import *  # noqa: F401,F403
from .generators import *  # noqa: F401,F403
from .geometry import *  # noqa: F401,F403
from .graph import *  # noqa: F401,F403
from .ptas import *  # noqa: F401,F403
from .solver import *  # noqa: F401,F403
from .treedec import *  # noqa: F401,F403

__version__ = "0.1.0"
