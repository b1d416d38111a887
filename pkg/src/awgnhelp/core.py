"""Shared numeric primitives.

Gaussian tails, bracketing root search, golden-section maximization and an
adaptive Simpson rule for expectations over a standard normal variable.
All rates and exponents in the package are in nats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special


class AwgnHelpError(Exception):
    """Base class for package errors."""


class DomainError(AwgnHelpError, ValueError):
    pass


class NoSignChange(AwgnHelpError, ValueError):
    pass


# Alias used by the exponent optimizers.
RootBracketError = NoSignChange


class MaxIterExceeded(AwgnHelpError, RuntimeError):
    pass


class ConfigError(AwgnHelpError, ValueError):
    pass


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_iter: int = 200

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.rel_tol < 0:
            raise DomainError(f"rel_tol must be non-negative, got {self.rel_tol}")
        if self.max_iter < 1:
            raise DomainError(f"max_iter must be >= 1, got {self.max_iter}")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class ExponentValue:
    """An error exponent that may be finite, zero or arbitrarily large.

    ``unbounded`` stands for regimes where any finite exponent is achievable
    (e.g. rates below the help rate); it never carries a number.
    """

    kind: str
    value: float = 0.0

    def __post_init__(self):
        if self.kind not in ("finite", "unbounded", "zero"):
            raise DomainError(f"unknown exponent kind {self.kind!r}")
        if self.kind == "finite" and not (self.value >= 0 and math.isfinite(self.value)):
            raise DomainError(f"finite exponent must be a non-negative real, got {self.value}")

    @classmethod
    def finite(cls, value: float) -> "ExponentValue":
        # Tiny negative values come from cancellation at branch ends.
        value = float(value)
        if -1e-14 < value < 0:
            value = 0.0
        if value == 0.0:
            return cls("zero")
        return cls("finite", value)

    @classmethod
    def unbounded(cls) -> "ExponentValue":
        return cls("unbounded", math.inf)

    @classmethod
    def zero(cls) -> "ExponentValue":
        return cls("zero")

    @property
    def is_unbounded(self) -> bool:
        return self.kind == "unbounded"

    def __float__(self) -> float:
        if self.kind == "unbounded":
            return math.inf
        if self.kind == "zero":
            return 0.0
        return self.value

    def scaled(self, factor: float) -> "ExponentValue":
        if self.kind == "unbounded":
            return self
        return ExponentValue.finite(factor * float(self))


def as_float(x) -> float:
    """Numeric view of a float or an :class:`ExponentValue` (unbounded -> inf)."""
    return float(x)


def gaussian_tail(x):
    """Q(x) = P(Z > x) for a standard normal Z (elementwise on arrays)."""
    q = special.ndtr(-np.asarray(x, dtype=float))
    return float(q) if np.ndim(q) == 0 else q


def normal_cdf(x):
    return special.ndtr(x)


def log_normal_cdf(x):
    return special.log_ndtr(x)


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                tol: Tolerance = DEFAULT_TOL) -> float:
    """Root of a continuous function with a sign change on ``[lo, hi]``.

    Stops when the bracket is narrower than ``tol.abs_tol`` or ``f``
    vanishes exactly at the midpoint.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise NoSignChange(f"f({lo})={flo} and f({hi})={fhi} have the same sign")
    for _ in range(tol.max_iter):
        if hi - lo <= tol.abs_tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0:
            return mid
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    if hi - lo <= tol.abs_tol:
        return 0.5 * (lo + hi)
    raise MaxIterExceeded(f"bisection did not converge in {tol.max_iter} steps")


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f: Callable[[float], float], lo: float, hi: float,
               tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    """Golden-section search for the maximum of ``f`` on ``[lo, hi]``.

    For a non-unimodal ``f`` the result is only a local maximizer. The
    endpoints are compared against the interior estimate, so monotone
    functions return the boundary.
    """
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(tol.max_iter):
        if b - a <= tol.abs_tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    else:
        if b - a > tol.abs_tol:
            raise MaxIterExceeded(f"golden section did not converge in {tol.max_iter} steps")
    x = 0.5 * (a + b)
    best = (x, f(x))
    # Near a flat maximum f(c) and f(d) tie in floating point, which limits
    # golden section to about sqrt(eps) relative accuracy. A parabola through
    # three wider-spaced points recovers the vertex; it is kept only if it
    # does not lower f.
    h = 1e-4 * (hi - lo)
    if lo <= x - h and x + h <= hi:
        fm, fp = f(x - h), f(x + h)
        curv = fp - 2.0 * best[1] + fm
        if curv < 0:
            v = x - 0.5 * h * (fp - fm) / curv
            if abs(v - x) <= h:
                fv = f(v)
                if fv >= best[1]:
                    best = (v, fv)
    for edge in (lo, hi):
        fe = f(edge)
        if fe > best[1]:
            best = (edge, fe)
    return best


# Quadrature truncation in standard deviations; the discarded mass is ~1e-350.
QUAD_HALF_WIDTH = 40.0
QUAD_MAX_DEPTH = 60
# Cap on integrand evaluations, so pathological integrands fail fast.
QUAD_MAX_EVALS = 5_000_000


def gauss_expectation(g: Callable, tol: Tolerance = DEFAULT_TOL, *,
                      points=(), half_width: float = QUAD_HALF_WIDTH) -> float:
    """E[g(Z)] for a standard normal Z by adaptive Simpson quadrature.

    ``g`` is called with numpy arrays and may return a scalar (broadcast).
    Known discontinuities of ``g`` should be passed in ``points``.
    The integration runs over ``[-half_width, half_width]``, split into unit
    panels, and refines all unconverged intervals one level at a time.
    """
    c = float(half_width)
    edges = set(np.arange(-c, c + 0.5, 1.0).tolist())
    edges.update(float(p) for p in points if -c < p < c)
    edges = np.array(sorted(edges))

    def integrand(x):
        x = np.asarray(x, dtype=float)
        gx = np.broadcast_to(np.asarray(g(x), dtype=float), x.shape)
        return gx * np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)

    a, b = edges[:-1], edges[1:]
    m = 0.5 * (a + b)
    fa, fm, fb = integrand(a), integrand(m), integrand(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    rough = abs(math.fsum(whole.tolist()))
    target = max(tol.abs_tol, tol.rel_tol * rough)
    total_width = 2.0 * c
    local_tol = target * (b - a) / total_width

    accepted: list[float] = []
    evals = 3 * len(a)
    for _ in range(QUAD_MAX_DEPTH):
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm, frm = integrand(lm), integrand(rm)
        evals += 2 * len(a)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        err = left + right - whole
        width = b - a
        done = (np.abs(err) <= 15.0 * local_tol) | (width <= 64 * np.finfo(float).eps * np.maximum(1.0, np.abs(m)))
        if np.any(done):
            accepted.extend((left[done] + right[done] + err[done] / 15.0).tolist())
        keep = ~done
        if not np.any(keep):
            return math.fsum(accepted)
        if evals + 4 * int(np.count_nonzero(keep)) > QUAD_MAX_EVALS:
            raise MaxIterExceeded(f"adaptive Simpson exceeded {QUAD_MAX_EVALS} evaluations")
        # Split every remaining interval into its two halves.
        a, m, b = a[keep], m[keep], b[keep]
        fa, fm, fb = fa[keep], fm[keep], fb[keep]
        flm, frm = flm[keep], frm[keep]
        left, right = left[keep], right[keep]
        half_tol = local_tol[keep] / 2.0
        a, m, b, fa, fm, fb, whole, local_tol = (
            np.concatenate([a, m]),
            np.concatenate([lm[keep], rm[keep]]),
            np.concatenate([m, b]),
            np.concatenate([fa, fm]),
            np.concatenate([flm, frm]),
            np.concatenate([fm, fb]),
            np.concatenate([left, right]),
            np.concatenate([half_tol, half_tol]),
        )
    raise MaxIterExceeded(
        f"adaptive Simpson exceeded depth {QUAD_MAX_DEPTH} ({evals} evaluations)")
