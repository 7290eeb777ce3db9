"""Error taxonomy shared across the package.

The CLI maps these onto exit codes: ParameterError -> 1, DataError -> 2,
SimulationError (and subclasses) -> 3.
"""

from __future__ import annotations


class ParameterError(ValueError):
    """A caller-supplied parameter is out of range or inconsistent."""


class DataError(ValueError):
    """An input file or dataset is malformed."""


class SimulationError(RuntimeError):
    """The dynamics cannot run on the given graph or configuration."""


class DegenerateStateError(SimulationError):
    """A run reached a state with no usable signal (all mass absorbed,
    nothing resolved, degenerate statistic)."""
