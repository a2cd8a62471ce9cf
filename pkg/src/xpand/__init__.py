"""Graph fault-resilience toolkit.

Exact expansion and span measurement at small scale, pruning procedures
that certify large well-expanding subgraphs after faults, targeted
attack constructions on subdivided graphs, and Monte Carlo percolation
experiments, all deterministic per seed.
"""

from .errors import (
    ContractError,
    GenerationError,
    InputError,
    LimitError,
    LoadError,
    NoSteinerTreeError,
    SamplingError,
    XpandError,
)
from .graph import Graph

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "XpandError",
    "InputError",
    "LoadError",
    "LimitError",
    "GenerationError",
    "SamplingError",
    "NoSteinerTreeError",
    "ContractError",
    "__version__",
]
