"""Exact error probabilities and MPaE of the PPM schemes by 1-D quadrature.

MPaE uses wrong-slot uniformity: given a decoding error, every wrong message
is equally likely. This follows from the iid noise and the argmax decoders
(for the cribbed scheme each wrong residue owns Mh exchangeable slots), and
it reduces the MPaE to a mixture over reconstruction values. The unit tests
verify the lemma against a 3-D integral at M=3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .core import DomainError, Tolerance, gauss_expectation
from .simulator import quantize, reconstruction

ORACLE_TOL = Tolerance(abs_tol=1e-12, rel_tol=1e-10)


@dataclass(frozen=True)
class PPMSpec:
    M: int
    Mh: int = 1
    gamma: float = 0.0

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 2:
            raise DomainError(f"M must be an integer >= 2, got {self.M}")
        if int(self.Mh) != self.Mh or self.Mh < 1:
            raise DomainError(f"Mh must be a positive integer, got {self.Mh}")
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be non-negative, got {self.gamma}")

    @property
    def n(self) -> int:
        return self.M * self.Mh


def _miss_probability(power: int, shift: float):
    """x -> 1 - Phi(shift + x)^power, accurate when the result is tiny."""
    return lambda x: -np.expm1(power * special.log_ndtr(shift + x))


def ppm_pe_exact(M: int, gamma: float, tol: Tolerance = ORACLE_TOL) -> float:
    """1 - E[Phi(sqrt(gamma) + Z)^(M-1)]."""
    spec = PPMSpec(M, 1, gamma)
    return gauss_expectation(_miss_probability(spec.M - 1, math.sqrt(gamma)), tol)


def cribbed_tx_pe_exact(spec: PPMSpec, tol: Tolerance = ORACLE_TOL) -> float:
    """Error probability when the pulse rides on the largest of Mh noise samples.

    The signal slot carries sqrt(gamma) + G with G the maximum of Mh standard
    normals; G has density Mh*Phi(x)^(Mh-1)*phi(x).
    """
    miss = _miss_probability((spec.M - 1) * spec.Mh, math.sqrt(spec.gamma))
    Mh = spec.Mh

    def g(x):
        weight = Mh * np.exp((Mh - 1) * special.log_ndtr(x)) if Mh > 1 else 1.0
        return weight * miss(x)

    return gauss_expectation(g, tol)


def two_sided_pe_exact(spec: PPMSpec, tol: Tolerance = ORACLE_TOL) -> float:
    """The Mh instances fail independently, so Pe is the single-instance Pe to the Mh."""
    return ppm_pe_exact(spec.M, spec.gamma, tol) ** spec.Mh


def hybrid_pe_exact(Mm: int, Ml: int, Mh: int, gamma: float, tol: Tolerance = ORACLE_TOL) -> float:
    """MSB part is error-free; LSB part is two-sided PPM with Mh/Mm instances."""
    _check_hybrid(Mm, Ml, Mh)
    if Ml == 1:
        return 0.0
    return two_sided_pe_exact(PPMSpec(Ml, Mh // Mm, gamma), tol)


def _check_hybrid(Mm: int, Ml: int, Mh: int) -> None:
    if Mm < 1 or Ml < 1 or Mh < 1:
        raise DomainError("Mm, Ml and Mh must be positive")
    if Mh % Mm:
        raise DomainError(f"Mm={Mm} must divide Mh={Mh}")


def _mixture(alpha: float, u: float, pe: float, w: int, candidates: np.ndarray, M: int) -> float:
    """(1-Pe)*|u_w - u|^a + Pe * mean over wrong candidates of |u_v - u|^a."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    correct = abs(reconstruction(w, M) - u) ** alpha
    wrong = candidates[candidates != w]
    if wrong.size == 0:
        return correct
    d = np.abs(reconstruction(wrong, M) - u) ** alpha
    return (1.0 - pe) * correct + pe * math.fsum(d.tolist()) / wrong.size


def ppm_mpae_exact(alpha: float, M: int, gamma: float, u: float, tol: Tolerance = ORACLE_TOL) -> float:
    w, _ = quantize(u, M)
    return _mixture(alpha, u, ppm_pe_exact(M, gamma, tol), w, np.arange(1, M + 1), M)


def cribbed_tx_mpae_exact(alpha: float, spec: PPMSpec, u: float, tol: Tolerance = ORACLE_TOL) -> float:
    w, _ = quantize(u, spec.M)
    return _mixture(alpha, u, cribbed_tx_pe_exact(spec, tol), w, np.arange(1, spec.M + 1), spec.M)


def two_sided_mpae_exact(alpha: float, spec: PPMSpec, u: float, tol: Tolerance = ORACLE_TOL) -> float:
    w, _ = quantize(u, spec.M)
    return _mixture(alpha, u, two_sided_pe_exact(spec, tol), w, np.arange(1, spec.M + 1), spec.M)


def hybrid_mpae_exact(alpha: float, Mm: int, Ml: int, Mh: int, gamma: float, u: float,
                      tol: Tolerance = ORACLE_TOL) -> float:
    """Errors stay inside the block of Ml values that share the (known) MSB."""
    M = Mm * Ml
    w, _ = quantize(u, M)
    block_start = ((w - 1) // Ml) * Ml + 1
    block = np.arange(block_start, block_start + Ml)
    return _mixture(alpha, u, hybrid_pe_exact(Mm, Ml, Mh, gamma, tol), w, block, M)
