"""Adaptive network-coding maps for two-way M-PSK relaying.

The package enumerates the singular fade states of an M-PSK two-way relay
channel, builds the constrained partial Latin squares that remove them,
completes and constructs full Latin squares, assembles a verified map book
and exercises it with a Monte Carlo protocol simulator.
"""

from .constellation import PskConfig, FadeState
from .fades import SingularFade, enumerate_singular_fades
from .latin import GridMap, Clustering

__all__ = [
    "PskConfig",
    "FadeState",
    "SingularFade",
    "enumerate_singular_fades",
    "GridMap",
    "Clustering",
]

__version__ = "0.1.0"
