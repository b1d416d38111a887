"""Monte Carlo simulation of the PPM-based helper schemes.

Each scheme is simulated end to end: quantize the parameter, place the pulse
(possibly in a helper-selected instance), add unit-variance noise, decode by
argmax and reconstruct. Trials run in fixed-size chunks; every chunk owns a
Philox stream keyed by (seed, u index, chunk index), so results do not depend
on how many worker threads run the chunks.
"""

from __future__ import annotations

import math
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import ConfigError, DomainError

SCHEMES = ("ppm-basic", "cribbed-tx", "two-sided", "hybrid")
CHUNK = 65536


def quantize(u: float, M: int) -> tuple[int, float]:
    """Uniform M-level quantizer on [-1/2, 1/2) with natural labeling.

    Returns the 1-based index w (increasing with the reconstruction value)
    and the cell center (w - 1/2)/M - 1/2. For even M this is
    (floor(M*u) + 1/2)/M.
    """
    if M < 1:
        raise DomainError(f"M must be positive, got {M}")
    if not -0.5 <= u < 0.5:
        raise DomainError(f"parameter must lie in [-1/2, 1/2), got {u}")
    # Adding 1/2 to u before scaling rounds tiny negative u into the wrong
    # cell, so even M uses floor(M*u) directly and odd M is done exactly.
    if M % 2 == 0:
        w = math.floor(M * u) + M // 2 + 1
    else:
        w = math.floor(Fraction(u) * M + Fraction(M, 2)) + 1
    w = min(max(w, 1), M)
    return w, reconstruction(w, M)


def reconstruction(w, M: int):
    """Cell center of 1-based index w (scalar or array)."""
    v = (np.asarray(w, dtype=float) - 0.5) / M - 0.5
    return float(v) if v.ndim == 0 else v


def default_u_grid(M: int) -> list[float]:
    """Cell centers and left cell edges, plus the largest float below 1/2.

    The last point stands in for the right edge u = 1/2, which is outside the
    half-open parameter range.
    """
    pts = {(k + 0.5) / M - 0.5 for k in range(M)}
    pts.update(k / M - 0.5 for k in range(M))
    pts.add(float(np.nextafter(0.5, 0.0)))
    return sorted(pts)


@dataclass(frozen=True)
class SimConfig:
    scheme: str
    M: int
    gamma: float
    Mh: int = 1
    Mm: int = 1
    Ml: int | None = None
    alpha: float = 2.0
    u_grid: tuple[float, ...] | None = None
    trials: int = 100_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        for name in ("M", "Mh", "Mm", "trials", "workers"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not self.gamma >= 0:
            raise ConfigError(f"gamma must be non-negative, got {self.gamma}")
        if not self.alpha > 0:
            raise ConfigError(f"alpha must be positive, got {self.alpha}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.scheme != "hybrid" and self.M < 2:
            raise ConfigError("PPM needs at least two slots")
        if self.scheme == "ppm-basic" and self.Mh != 1:
            raise ConfigError("ppm-basic requires Mh=1")
        if self.scheme == "hybrid":
            if self.Ml is not None and self.Mm * self.Ml != self.M:
                raise ConfigError(f"hybrid requires M = Mm*Ml, got {self.M} != {self.Mm}*{self.Ml}")
            if self.M % self.Mm:
                raise ConfigError("hybrid requires Mm to divide M")
            if self.Mh % self.Mm:
                raise ConfigError("hybrid requires Mm to divide Mh")
        if self.u_grid is not None:
            if len(self.u_grid) == 0:
                raise ConfigError("u_grid must be non-empty")
            for u in self.u_grid:
                if not -0.5 <= u < 0.5:
                    raise ConfigError(f"grid point {u} outside [-1/2, 1/2)")

    @property
    def ml(self) -> int:
        return self.Ml if self.Ml is not None else self.M // self.Mm

    @property
    def grid(self) -> list[float]:
        return list(self.u_grid) if self.u_grid is not None else default_u_grid(self.M)


@dataclass(frozen=True)
class SimResult:
    pe_hat: float
    pe_stderr: float
    mpae_by_u: list[tuple[float, float, float]] = field(default_factory=list)
    mpae_sup: float = 0.0
    errors: int = 0
    trials: int = 0


def _rng(seed: int, u_index: int, chunk: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(u_index, chunk))
    return np.random.Generator(np.random.Philox(ss))


def _decode_ppm(z: np.ndarray, w0: int, amp: float) -> np.ndarray:
    z[:, w0] += amp
    return np.argmax(z, axis=1)


def _decode_cribbed(z: np.ndarray, w0: int, amp: float, M: int) -> np.ndarray:
    # z has shape (k, Mh, M); slot t = i*M + m.
    k = z.shape[0]
    rows = np.arange(k)
    i_star = np.argmax(z[:, :, w0], axis=1)
    z[rows, i_star, w0] += amp
    t = np.argmax(z.reshape(k, -1), axis=1)
    return t % M


def _select_instance(z: np.ndarray, w0: int) -> np.ndarray:
    """Instance whose signal slot beats its strongest rival by the most."""
    M = z.shape[2]
    if M == 1:
        margin = z[:, :, 0]
    else:
        others = np.delete(z, w0, axis=2).max(axis=2)
        margin = z[:, :, w0] - others
    return np.argmax(margin, axis=1)


def _decode_two_sided(z: np.ndarray, w0: int, amp: float) -> np.ndarray:
    k = z.shape[0]
    rows = np.arange(k)
    block = z[rows, _select_instance(z, w0)]
    block[:, w0] += amp
    return np.argmax(block, axis=1)


def _decode_hybrid(z: np.ndarray, w0: int, amp: float, Mm: int, Ml: int) -> np.ndarray:
    # z has shape (k, Mh/Mm, Ml). The helper index encodes both the chosen
    # instance and the MSB part of the message.
    wm0, wl0 = divmod(w0, Ml)
    k = z.shape[0]
    rows = np.arange(k)
    h_l = _select_instance(z, wl0)
    helper = Mm * h_l + wm0
    # Receiver side: split the helper index back into instance and MSB.
    wm_hat = helper % Mm
    inst = helper // Mm
    block = z[rows, inst]
    block[:, wl0] += amp
    wl_hat = np.argmax(block, axis=1)
    return Ml * wm_hat + wl_hat


def _chunk_stats(cfg: SimConfig, u: float, u_index: int, chunk: int, size: int):
    rng = _rng(cfg.seed, u_index, chunk)
    w, _ = quantize(u, cfg.M)
    w0 = w - 1
    amp = math.sqrt(cfg.gamma)
    if cfg.scheme == "ppm-basic":
        w_hat = _decode_ppm(rng.standard_normal((size, cfg.M)), w0, amp)
    elif cfg.scheme == "cribbed-tx":
        w_hat = _decode_cribbed(rng.standard_normal((size, cfg.Mh, cfg.M)), w0, amp, cfg.M)
    elif cfg.scheme == "two-sided":
        w_hat = _decode_two_sided(rng.standard_normal((size, cfg.Mh, cfg.M)), w0, amp)
    else:
        z = rng.standard_normal((size, cfg.Mh // cfg.Mm, cfg.ml))
        w_hat = _decode_hybrid(z, w0, amp, cfg.Mm, cfg.ml)
    errors = int(np.count_nonzero(w_hat != w0))
    dist = np.abs(reconstruction(w_hat + 1, cfg.M) - u) ** cfg.alpha
    return errors, math.fsum(dist.tolist()), math.fsum((dist * dist).tolist())


def _run_point(cfg: SimConfig, u: float, u_index: int, pool: ThreadPoolExecutor | None):
    sizes = [CHUNK] * (cfg.trials // CHUNK)
    if cfg.trials % CHUNK:
        sizes.append(cfg.trials % CHUNK)
    jobs = [(cfg, u, u_index, c, s) for c, s in enumerate(sizes)]
    if pool is None:
        stats = [_chunk_stats(*j) for j in jobs]
    else:
        stats = list(pool.map(lambda j: _chunk_stats(*j), jobs))
    errors = sum(s[0] for s in stats)
    mean = math.fsum(s[1] for s in stats) / cfg.trials
    second = math.fsum(s[2] for s in stats) / cfg.trials
    var = max(second - mean * mean, 0.0)
    return errors, mean, math.sqrt(var / cfg.trials)


def estimate_mpae(cfg: SimConfig) -> SimResult:
    """Simulate ``cfg.trials`` trials at every grid point.

    pe_hat pools the decoding errors of all grid points; the error
    probability of every scheme is the same for all messages.
    """
    grid = cfg.grid
    pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
    try:
        per_u = [_run_point(cfg, u, i, pool) for i, u in enumerate(grid)]
    finally:
        if pool is not None:
            pool.shutdown()
    errors = sum(p[0] for p in per_u)
    total = cfg.trials * len(grid)
    pe = errors / total
    by_u = [(u, m, s) for u, (_, m, s) in zip(grid, per_u)]
    return SimResult(
        pe_hat=pe,
        pe_stderr=math.sqrt(pe * (1.0 - pe) / total),
        mpae_by_u=by_u,
        mpae_sup=max(m for _, m, _ in by_u),
        errors=errors,
        trials=total,
    )


def _run_scheme(cfg: SimConfig, scheme: str) -> SimResult:
    if cfg.scheme != scheme:
        raise ConfigError(f"config is for {cfg.scheme!r}, not {scheme!r}")
    return estimate_mpae(cfg)


def run_ppm_basic(cfg: SimConfig) -> SimResult:
    return _run_scheme(cfg, "ppm-basic")


def run_cribbed_tx(cfg: SimConfig) -> SimResult:
    return _run_scheme(cfg, "cribbed-tx")


def run_two_sided(cfg: SimConfig) -> SimResult:
    return _run_scheme(cfg, "two-sided")


def run_hybrid(cfg: SimConfig) -> SimResult:
    return _run_scheme(cfg, "hybrid")
