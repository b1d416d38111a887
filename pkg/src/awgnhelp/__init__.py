"""Parameter modulation over AWGN channels with a rate-limited helper.

Submodules: ``power`` (power-limited exponents), ``energy`` (energy-limited
PPM bounds), ``ct`` (continuous-time exponents), ``oracle`` (exact PPM error
probabilities), ``simulator`` (Monte Carlo schemes), ``sweeps`` and ``cli``.
All rates and exponents are in nats.
"""

from .core import (
    AwgnHelpError,
    ConfigError,
    DomainError,
    ExponentValue,
    MaxIterExceeded,
    NoSignChange,
    RootBracketError,
    Tolerance,
)
from .ct import CTParams, DTReduction
from .energy import EnergyParams
from .oracle import PPMSpec
from .power import PowerParams
from .simulator import SimConfig, SimResult
from .sweeps import CurveTable, Grid, SweepSpec, __version__

__all__ = [
    "AwgnHelpError", "ConfigError", "DomainError", "ExponentValue", "MaxIterExceeded",
    "NoSignChange", "RootBracketError", "Tolerance", "CTParams", "DTReduction",
    "EnergyParams", "PPMSpec", "PowerParams", "SimConfig", "SimResult", "CurveTable",
    "Grid", "SweepSpec", "__version__",
]
