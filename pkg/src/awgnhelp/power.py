"""Power-limited exponents for the AWGN channel with a rate-limited helper.

Capacities, the ordinary and weak sphere-packing exponents, Ziv-Zakai type
converse exponents for parameter modulation and the achievable exponents of
the natural-labeling quantize-and-code scheme. Everything is per channel use
and in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .core import (
    DEFAULT_TOL,
    DomainError,
    ExponentValue,
    NoSignChange,
    Tolerance,
    bisect_root,
    golden_max,
)

# Below this |beta - 1| the sphere-packing formula is replaced by its limit S/2.
BETA_SINGULAR = 1e-8
# Root brackets stay this far inside (0, C0).
ROOT_MARGIN = 1e-12

FAMILIES = ("random-coding", "expurgated", "best")


@dataclass(frozen=True)
class PowerParams:
    S: float
    Rh: float = 0.0
    alpha: float = 1.0
    d: int = 1

    def __post_init__(self):
        if not self.S >= 0:
            raise DomainError(f"SNR must be non-negative, got {self.S}")
        if not self.Rh >= 0:
            raise DomainError(f"help rate must be non-negative, got {self.Rh}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.d}")

    @property
    def C0(self) -> float:
        return capacity_c0(self.S)


def capacity_c0(S: float) -> float:
    if S < 0:
        raise DomainError(f"SNR must be non-negative, got {S}")
    return 0.5 * math.log1p(S)


def zeta(R: float, p: PowerParams) -> float:
    if not R > p.Rh:
        raise DomainError(f"zeta needs R > Rh, got R={R}, Rh={p.Rh}")
    return p.S / math.expm1(2.0 * (R - p.Rh))


def weak_sphere_packing(R: float, p: PowerParams) -> ExponentValue:
    """Weak sphere-packing exponent (input may depend on the noise).

    R == Rh is treated as part of the unbounded region.
    """
    if R <= p.Rh:
        return ExponentValue.unbounded()
    if R - p.Rh >= p.C0:
        return ExponentValue.zero()
    z = zeta(R, p)
    return ExponentValue.finite(0.5 * (z - math.log(z) - 1.0))


def _sphere_packing_beta(beta: float, S: float) -> float:
    if abs(beta - 1.0) < BETA_SINGULAR:
        return S / 2.0
    bm1 = beta - 1.0
    root = math.sqrt(1.0 + 4.0 * beta / (S * bm1))
    first = S / (4.0 * beta) * (beta + 1.0 - bm1 * root)
    second = 0.5 * math.log(beta - S * bm1 / 2.0 * (root - 1.0))
    # Cancellation near capacity can leave a negative residue of order S*eps.
    return max(first + second, 0.0)


def sphere_packing(R: float, p: PowerParams) -> ExponentValue:
    """Ordinary sphere-packing exponent, shifted by the help rate."""
    if R <= p.Rh:
        return ExponentValue.unbounded()
    R0 = R - p.Rh
    if R0 >= p.C0 or p.S == 0:
        return ExponentValue.zero()
    return ExponentValue.finite(_sphere_packing_beta(math.exp(2.0 * R0), p.S))


def s_star(p: PowerParams) -> float:
    """Minimizer over s >= 1 of alpha*ln(1 + S/s) + s - ln s - 1."""
    if p.S < 0:
        raise DomainError(f"SNR must be non-negative, got {p.S}")
    if p.S == 0:
        return 1.0
    S, a = p.S, p.alpha
    # Same value as 2(a+1)S / (sqrt((S+1)^2 + 4aS) + S - 1) after
    # rationalizing; this form has no cancellation as S -> 0.
    return 0.5 * (1.0 - S + math.sqrt((S + 1.0) ** 2 + 4.0 * a * S))


def zz_objective(s: float, p: PowerParams) -> float:
    """alpha*ln(1 + S/s) + s - ln s - 1; twice the converse exponent above alpha*Rh."""
    return p.alpha * math.log1p(p.S / s) + s - math.log(s) - 1.0


def converse_exponent_tx(p: PowerParams, s: float | None = None) -> ExponentValue:
    """Transmitter-assisted Ziv-Zakai converse alpha*(Rh + C0*).

    Any ``s >= 1`` gives a valid bound; ``s=1`` reproduces the
    data-processing bound exactly.
    """
    if p.S <= 0:
        raise DomainError("converse_exponent_tx needs S > 0")
    if s is None:
        s = s_star(p)
    elif s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    c0_star = 0.5 * (math.log1p(p.S / s) + (s - math.log(s) - 1.0) / p.alpha)
    return ExponentValue.finite(p.alpha * (p.Rh + c0_star))


def dpt_exponent(p: PowerParams) -> ExponentValue:
    return ExponentValue.finite(p.alpha * (p.C0 + p.Rh))


def converse_rate_rx(p: PowerParams, tol: Tolerance = DEFAULT_TOL) -> float:
    """Root R0 in (0, C0) of alpha*R0 = Esp(R0 + Rh)."""
    if p.S <= 0:
        raise DomainError("converse_exponent_rx needs S > 0")
    lo, hi = ROOT_MARGIN, p.C0 - ROOT_MARGIN

    def gap(r0):
        return p.alpha * r0 - _sphere_packing_beta(math.exp(2.0 * r0), p.S)

    return bisect_root(gap, lo, hi, _root_tol(tol))


def converse_exponent_rx(p: PowerParams, tol: Tolerance = DEFAULT_TOL) -> ExponentValue:
    return ExponentValue.finite(p.alpha * (p.Rh + converse_rate_rx(p, tol)))


def _xi(S: float) -> float:
    return 0.5 * (1.0 + S / 2.0 + math.sqrt(1.0 + S * S / 4.0))


def critical_rate(S: float) -> float:
    return 0.5 * math.log(_xi(S))


def random_coding_exponent(R0: float, S: float) -> ExponentValue:
    """Gallager's random-coding exponent of the Gaussian channel (no help)."""
    if S <= 0:
        raise DomainError("random_coding_exponent needs S > 0")
    if R0 < 0:
        raise DomainError(f"rate must be non-negative, got {R0}")
    C0 = capacity_c0(S)
    if R0 >= C0:
        return ExponentValue.zero()
    xi = _xi(S)
    if R0 < 0.5 * math.log(xi):
        return ExponentValue.finite(1.0 - xi + S / 2.0 + 0.5 * math.log(xi * (xi - S / 2.0)) - R0)
    return ExponentValue.finite(_sphere_packing_beta(math.exp(2.0 * R0), S))


def expurgated_threshold(S: float) -> float:
    return 0.5 * math.log(0.5 + 0.5 * math.sqrt(1.0 + S * S / 4.0))


def expurgated_exponent(R0: float, S: float) -> ExponentValue:
    if R0 < 0:
        raise DomainError(f"rate must be non-negative, got {R0}")
    if R0 >= expurgated_threshold(S):
        return ExponentValue.zero()
    return ExponentValue.finite(S / 4.0 * (1.0 - math.sqrt(-math.expm1(-2.0 * R0))))


def gallager_e0(rho: float, S: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Gallager function E0(rho) for the power-constrained Gaussian channel.

    The supremum over s in [0, 1/(2S)) is found by golden section; the upper
    end is pulled inside the open interval.
    """
    if not 0 <= rho <= 1:
        raise DomainError(f"rho must lie in [0, 1], got {rho}")
    if S <= 0:
        raise DomainError("gallager_e0 needs S > 0")
    if rho == 0:
        return 0.0
    hi = (1.0 - 1e-12) / (2.0 * S)

    def inner(s):
        t = 1.0 - 2.0 * s * S
        return s * (1.0 + rho) * S + 0.5 * math.log(t) + 0.5 * rho * math.log(t + S / (1.0 + rho))

    _, value = golden_max(inner, 0.0, hi, Tolerance(abs_tol=1e-13 * hi, max_iter=400))
    return max(value, 0.0)


def random_coding_rate_via_e0(alpha: float, S: float) -> float:
    """sup over rho in [0,1] of E0(rho)/(rho + alpha).

    Independent route to the root of alpha*R0 = Er(R0).
    """
    _, value = golden_max(lambda rho: gallager_e0(rho, S) / (rho + alpha), 0.0, 1.0,
                          Tolerance(abs_tol=1e-10, max_iter=400))
    return value


def _family_exponent(family: str) -> Callable[[float, float], float]:
    if family == "random-coding":
        return lambda r0, S: float(random_coding_exponent(r0, S))
    if family == "expurgated":
        return lambda r0, S: float(expurgated_exponent(r0, S))
    raise DomainError(f"unknown exponent family {family!r}; choose from {FAMILIES}")


def _root_tol(tol: Tolerance) -> Tolerance:
    return Tolerance(abs_tol=min(tol.abs_tol, 1e-13), rel_tol=tol.rel_tol, max_iter=tol.max_iter)


def _check_nonincreasing(E: Callable[[float], float], C0: float) -> None:
    grid = np.linspace(0.0, C0, 65)
    vals = [E(r) for r in grid]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:])), "achievable exponent must be non-increasing"


def achievable_rate(p: PowerParams, family: str = "best", tol: Tolerance = DEFAULT_TOL) -> float:
    """Rate R0 that balances alpha*R0 against the channel-coding exponent.

    For an exponent with a downward jump the returned rate is the jump
    location, which is still the supremum of min(alpha*R0, E(R0)) / alpha.
    Returns 0 when there is no sign change (no positive exponent).
    """
    if p.S <= 0:
        raise DomainError("achievable exponent needs S > 0")
    if family == "best":
        return max(achievable_rate(p, "random-coding", tol), achievable_rate(p, "expurgated", tol))
    E = _family_exponent(family)
    C0 = p.C0
    _check_nonincreasing(lambda r: E(r, p.S), C0)
    try:
        return bisect_root(lambda r0: p.alpha * r0 - E(r0, p.S), ROOT_MARGIN, C0 - ROOT_MARGIN,
                           _root_tol(tol))
    except NoSignChange:
        return 0.0


def achievable_exponent(p: PowerParams, family: str = "best", tol: Tolerance = DEFAULT_TOL) -> ExponentValue:
    return ExponentValue.finite(p.alpha * (p.Rh + achievable_rate(p, family, tol)))


def very_noisy_r0(alpha: float, C0: float) -> float:
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if alpha >= 1:
        return C0 / (2.0 * (1.0 + alpha))
    return C0 / (1.0 + math.sqrt(alpha)) ** 2


def very_noisy_exponent(p: PowerParams) -> ExponentValue:
    """alpha*(Rh + R0*) with the very-noisy balancing rate."""
    return ExponentValue.finite(p.alpha * (p.Rh + very_noisy_r0(p.alpha, p.C0)))


def vector_wrap(p: PowerParams, base_op: Callable[[PowerParams], ExponentValue]) -> ExponentValue:
    """Evaluate a scalar-parameter exponent for a d-dimensional parameter.

    The d-dimensional problem behaves as the scalar one with alpha/d.
    """
    return base_op(replace(p, alpha=p.alpha / p.d, d=1))
