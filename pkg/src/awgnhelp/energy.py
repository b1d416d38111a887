"""Energy-limited bounds: PPM error probabilities and MPaE exponents.

All functions drop the sub-exponential slack terms (o(gamma), o(n),
o_Lh(1)) and return exponent-order values. Probability bounds are clipped
to 1 outside their useful region so sweeps stay total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import DomainError, ExponentValue, Tolerance, golden_max

TWO_PI_E = 2.0 * math.pi * math.e


@dataclass(frozen=True)
class EnergyParams:
    gamma: float
    L: float = 0.0
    Lh: float = 0.0
    alpha: float = 1.0
    n: int | None = None
    Rh: float | None = None

    def __post_init__(self):
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma}")
        if self.L < 0 or self.Lh < 0:
            raise DomainError("nat budgets must be non-negative")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if self.n is not None and self.n < 1:
            raise DomainError(f"block length must be positive, got {self.n}")
        if self.Rh is not None and self.Rh < 0:
            raise DomainError(f"help rate must be non-negative, got {self.Rh}")

    @property
    def total_help(self) -> float:
        """Help in nats: n*Rh when a rate is given, Lh otherwise."""
        if self.n is not None and self.Rh is not None:
            return self.n * self.Rh
        return self.Lh


def ppm_pe_exponent(L: float, gamma: float) -> float:
    """Exponent of the orthogonal-signalling error bound; 0 for L >= gamma/2."""
    if L < 0:
        raise DomainError(f"L must be non-negative, got {L}")
    if L <= gamma / 8.0:
        return gamma / 4.0 - L
    if L <= gamma / 2.0:
        return (math.sqrt(gamma / 2.0) - math.sqrt(L)) ** 2
    return 0.0


def ppm_pe_bound(L: float, gamma: float) -> float:
    return math.exp(-ppm_pe_exponent(L, gamma))


def ppm_mpae_bound(alpha: float, gamma: float) -> float:
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if alpha < 1:
        return alpha / (1.0 + math.sqrt(alpha)) ** 2 * gamma / 2.0
    return alpha / (1.0 + alpha) * gamma / 4.0


def fixed_rate_pe_exponent(L: float, gamma: float, n: int, Rh: float) -> ExponentValue:
    """Error exponent (in nats, not per use) with n*Rh nats of help."""
    excess = L - n * Rh
    if excess < 0:
        return ExponentValue.unbounded()
    return ExponentValue.finite(ppm_pe_exponent(excess, gamma))


def fixed_rate_pe_bound(L: float, gamma: float, n: int, Rh: float) -> float:
    """Error bound with n*Rh nats of help.

    Returns 0.0 when L < n*Rh, standing for an arbitrarily small error
    probability; :func:`fixed_rate_pe_exponent` flags that case as unbounded.
    """
    return math.exp(-float(fixed_rate_pe_exponent(L, gamma, n, Rh)))


class ExponentSplit(NamedTuple):
    """Exponent of the form n*per_use + constant."""

    per_use: float
    constant: float

    def at(self, n: int) -> float:
        return n * self.per_use + self.constant


def fixed_rate_mpae_bound(alpha: float, gamma: float, n: int, Rh: float) -> ExponentSplit:
    return ExponentSplit(alpha * Rh, ppm_mpae_bound(alpha, gamma))


def cribbed_tx_pe_exponent(L: float, gamma: float, Lh: float) -> float:
    return max(gamma / 2.0 + math.sqrt(2.0 * Lh * gamma) - L, 0.0)


def cribbed_tx_pe_bound(L: float, gamma: float, Lh: float) -> float:
    """Bound for the transmitter-only cribbed helper; o_Lh(1) dropped.

    Beyond L = gamma/2 + sqrt(2*Lh*gamma) the bound is trivial and 1 is
    returned.
    """
    return math.exp(-cribbed_tx_pe_exponent(L, gamma, Lh))


def cribbed_tx_mpae_bound(alpha: float, gamma: float, Lh: float) -> float:
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return alpha / (1.0 + alpha) * (gamma / 2.0 + math.sqrt(2.0 * Lh * gamma))


def side_channel_mpae_bound(alpha: float, gamma: float, Lh: float) -> float:
    return alpha * Lh + ppm_mpae_bound(alpha, gamma)


def two_sided_pe_bound(L: float, gamma: float, Lh: float) -> float:
    if L >= gamma / 2.0:
        return 1.0
    return math.exp(-ppm_pe_exponent(L, gamma) * math.exp(Lh))


def two_sided_mpae_bound(alpha: float, gamma: float, Lh: float) -> float:
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    eh = math.exp(Lh)
    if Lh <= math.log(alpha):
        return alpha * eh / (eh + alpha) * gamma / 4.0
    return alpha * eh / (math.exp(Lh / 2.0) + math.sqrt(alpha)) ** 2 * gamma / 2.0


class HybridBound(NamedTuple):
    exponent: float
    Lm: float
    candidate_exponent: float
    candidate_Lm: float


def hybrid_candidates(alpha: float, Lh: float) -> list[float]:
    """Side-channel splits Lm in {Lh, 0, Lh - ln(alpha)} that lie in [0, Lh]."""
    cands = [Lh, 0.0]
    mid = Lh - math.log(alpha)
    if 0.0 <= mid <= Lh and mid not in cands:
        cands.append(mid)
    return cands


def _hybrid_objective(alpha: float, gamma: float, Lh: float, Lm: float) -> float:
    return alpha * Lm + two_sided_mpae_bound(alpha, gamma, Lh - Lm)


HYBRID_GRID_POINTS = 2001


def hybrid_mpae_bound(alpha: float, gamma: float, Lh: float) -> HybridBound:
    """Best split of the help budget between side channel and instance selection.

    The three named candidates are always evaluated. For finite gamma the
    optimum can lie strictly inside (0, Lh), so a dense grid with golden
    refinement is searched as well and the better of the two is returned.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if Lh < 0:
        raise DomainError(f"help budget must be non-negative, got {Lh}")
    f = lambda lm: _hybrid_objective(alpha, gamma, Lh, lm)
    cand_val, cand_lm = max((f(lm), lm) for lm in hybrid_candidates(alpha, Lh))
    if Lh == 0:
        return HybridBound(cand_val, cand_lm, cand_val, cand_lm)
    grid = np.linspace(0.0, Lh, HYBRID_GRID_POINTS)
    vals = [f(x) for x in grid]
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    lm_star, val_star = golden_max(f, lo, hi, Tolerance(abs_tol=1e-12 * max(Lh, 1.0)))
    if val_star > cand_val:
        return HybridBound(float(val_star), float(lm_star), cand_val, cand_lm)
    return HybridBound(cand_val, cand_lm, cand_val, cand_lm)


# Helper quantizer calculator for the fixed-rate energy-limited scheme. The
# o_n(1), o(n) and epsilon(Delta) terms are set to zero.

def appendixA_delta(tau: float, B: float, Rh: float, sigma2: float) -> float:
    """Hypercube side length that lets e^{n Rh} cells cover the noise ball."""
    if not 0 < tau < 1:
        raise DomainError(f"tau must lie in (0, 1), got {tau}")
    if not (B > 0 and sigma2 > 0):
        raise DomainError("B and sigma2 must be positive")
    # Divided through by e^{Rh/tau} so that small tau cannot overflow.
    shrink = math.exp(-Rh / tau)
    denom = 1.0 - math.sqrt(TWO_PI_E) * shrink
    if denom <= 0:
        raise DomainError("Rh/tau must exceed ln(2*pi*e)/2")
    return math.sqrt(TWO_PI_E * sigma2 * (1.0 + B / tau)) * shrink / denom


def appendixA_rprime(n: int, tau: float, B: float, Rh: float, E: float, sigma2: float) -> float:
    """Nats carried error-free by the quantized-noise sub-block (optimistic)."""
    appendixA_delta(tau, B, Rh, sigma2)
    if E <= 0:
        raise DomainError(f"energy must be positive, got {E}")
    penalty_arg = 1.0 - math.sqrt(TWO_PI_E) * math.exp(-Rh / tau)
    return (n * Rh
            + 0.5 * n * tau * math.log(E / (n * sigma2 * (B + tau)))
            + n * tau * math.log(penalty_arg))


def appendixA_overload_bound(n: int, tau: float, B: float) -> float:
    """Chernoff bound on the noise leaving the quantizer ball."""
    if not B > 0:
        raise DomainError(f"B must be positive, got {B}")
    if tau == 0:
        return math.exp(-n * B / 2.0)
    return math.exp(-0.5 * n * (B - tau * math.log1p(B / tau)))
