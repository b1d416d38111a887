"""Continuous-time, unconstrained-bandwidth versions of the helper exponents.

Rates and exponents are per second; multiply by the horizon T to get nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .core import DomainError, ExponentValue
from .power import very_noisy_r0


@dataclass(frozen=True)
class CTParams:
    C0c: float
    Rhc: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        if not self.C0c >= 0:
            raise DomainError(f"C0c must be non-negative, got {self.C0c}")
        if not self.Rhc >= 0:
            raise DomainError(f"Rhc must be non-negative, got {self.Rhc}")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class DTReduction:
    n: int
    P: float
    sigma2: float
    rate_scale: float
    # 2*B*T before flooring, kept so the rounding can be reproduced.
    exact_samples: float

    @property
    def gamma(self) -> float:
        return self.n * self.P / self.sigma2


def dt_reduce(B: float, T: float, Pc: float, N0: float) -> DTReduction:
    if not (B > 0 and T > 0 and N0 > 0):
        raise DomainError("bandwidth, horizon and noise density must be positive")
    if Pc < 0:
        raise DomainError(f"power must be non-negative, got {Pc}")
    exact = 2.0 * B * T
    return DTReduction(n=int(math.floor(exact)), P=Pc / (2.0 * B), sigma2=N0 / 2.0,
                       rate_scale=2.0 * B, exact_samples=exact)


def ct_ee_no_help(Rc: float, C0c: float) -> ExponentValue:
    """Infinite-bandwidth reliability function of the Gaussian channel."""
    if Rc < 0:
        raise DomainError(f"rate must be non-negative, got {Rc}")
    if Rc >= C0c:
        return ExponentValue.zero()
    if Rc < C0c / 4.0:
        return ExponentValue.finite(C0c / 2.0 - Rc)
    return ExponentValue.finite((math.sqrt(C0c) - math.sqrt(Rc)) ** 2)


def ct_ee_oblivious(Rc: float, p: CTParams) -> ExponentValue:
    if Rc < 0:
        raise DomainError(f"rate must be non-negative, got {Rc}")
    if Rc < p.Rhc:
        return ExponentValue.unbounded()
    return ct_ee_no_help(Rc - p.Rhc, p.C0c)


def ct_cribbed_capacity_lb(C0c: float, Rhc: float) -> float:
    if C0c < 0 or Rhc < 0:
        raise DomainError("C0c and Rhc must be non-negative")
    return C0c + 2.0 * math.sqrt(Rhc * C0c)


def ct_cribbed_ee(Rc: float, p: CTParams) -> ExponentValue:
    if Rc < 0:
        raise DomainError(f"rate must be non-negative, got {Rc}")
    return ExponentValue.finite(max(ct_cribbed_capacity_lb(p.C0c, p.Rhc) - Rc, 0.0))


class ExponentPair(NamedTuple):
    achievable: float
    converse: float


def ct_mpae_oblivious(p: CTParams) -> ExponentPair:
    r0 = very_noisy_r0(p.alpha, p.C0c)
    return ExponentPair(p.alpha * (r0 + p.Rhc), p.alpha * (p.C0c + p.Rhc))


def ct_cribbed_mpae(p: CTParams) -> float:
    return p.alpha / (1.0 + p.alpha) * ct_cribbed_capacity_lb(p.C0c, p.Rhc)


def ct_two_sided_mpae(p: CTParams) -> float:
    denom = min(4.0, (1.0 + math.sqrt(p.alpha)) ** 2)
    return p.alpha * max(p.C0c, p.Rhc + p.C0c / denom)


def ct_two_sided_pe(Rc: float, T: float, p: CTParams, base_pe) -> float:
    """Error probability when the helper selects among e^{Rhc*T} instances.

    ``base_pe`` is either a probability or a callable ``(Rc, T) -> probability``.
    """
    pe = base_pe(Rc, T) if callable(base_pe) else base_pe
    if not 0.0 <= pe <= 1.0:
        raise DomainError(f"base error probability must lie in [0, 1], got {pe}")
    if pe == 0.0:
        return 0.0
    return math.exp(math.log(pe) * math.exp(p.Rhc * T))
