"""Seeded, partition-invariant Monte Carlo simulation.

Each trial owns one Philox counter block (4 x 64-bit draws), addressed
by its trial index: positions x1, y1, x2, y2 are always columns 0-3 of
the trial's block regardless of how trials are chunked across workers.
Outage estimates are integer counts divided by the trial count, so any
partitioning yields bit-identical results; sample streams preserve
trial order. Memory stays bounded by a fixed per-chunk cap.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .system import SystemConfig, snr_bob_pinching, snr_eve_pinching, snr_fpa

__all__ = [
    "McConfig",
    "McResult",
    "simulate_sop_pas",
    "simulate_sop_fpa",
    "simulate_lower_bound_event",
    "sample_snr_eve",
    "sample_offset_sq",
]

_DRAWS_PER_TRIAL = 4  # one Philox counter block
_CHUNK_TRIALS = 1 << 17


@dataclass(frozen=True)
class McConfig:
    """Trial count, seed, and a partitioning hint.

    ``workers`` shapes chunking (and threading) only; estimates are
    bit-identical for any value.
    """

    trials: int
    seed: int
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class McResult:
    """A probability estimate with its binomial standard error."""

    estimate: float
    stderr: float
    trials: int
    seed: int


def _uniform_chunk(seed: int, start: int, stop: int) -> np.ndarray:
    """Standard uniforms for trials [start, stop), shape (stop-start, 4)."""
    bits = np.random.Philox(key=seed)
    bits.advance(start)
    return np.random.Generator(bits).random((stop - start, _DRAWS_PER_TRIAL))


def _positions(u: np.ndarray, cfg: SystemConfig) -> tuple[np.ndarray, ...]:
    """Map uniform columns to coordinates on [-D/2, D/2]."""
    coords = (u - 0.5) * cfg.region_side
    return coords[:, 0], coords[:, 1], coords[:, 2], coords[:, 3]


def _chunk_bounds(trials: int, workers: int) -> list[tuple[int, int]]:
    """Split [0, trials) by worker spans, capped at the chunk size."""
    bounds: list[tuple[int, int]] = []
    span = math.ceil(trials / workers)
    for lo in range(0, trials, span):
        hi = min(lo + span, trials)
        for sub in range(lo, hi, _CHUNK_TRIALS):
            bounds.append((sub, min(sub + _CHUNK_TRIALS, hi)))
    return bounds


def _count_event(
    cfg: SystemConfig, mc: McConfig, event: Callable[[np.ndarray, SystemConfig], np.ndarray]
) -> McResult:
    chunks = _chunk_bounds(mc.trials, mc.workers)

    def count(bound: tuple[int, int]) -> int:
        u = _uniform_chunk(mc.seed, *bound)
        return int(np.count_nonzero(event(u, cfg)))

    if mc.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            total = sum(pool.map(count, chunks))
    else:
        total = sum(count(b) for b in chunks)

    estimate = total / mc.trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / mc.trials)
    return McResult(estimate, stderr, mc.trials, mc.seed)


def _outage_pas(u: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    x1, y1, x2, y2 = _positions(u, cfg)
    gb = snr_bob_pinching(y1, cfg)
    ge = snr_eve_pinching(x1, x2, y2, cfg)
    return (1.0 + gb) <= cfg.rate_threshold * (1.0 + ge)


def _outage_fpa(u: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    x1, y1, x2, y2 = _positions(u, cfg)
    gb = snr_fpa(x1, y1, cfg)
    ge = snr_fpa(x2, y2, cfg)
    return (1.0 + gb) <= cfg.rate_threshold * (1.0 + ge)


def _bound_event(u: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    x1, y1, x2, y2 = _positions(u, cfg)
    return (x1 - x2) ** 2 + y2**2 <= y1**2


def simulate_sop_pas(cfg: SystemConfig, mc: McConfig) -> McResult:
    """Empirical SOP of the pinching-antenna system.

    Per trial, both receivers are drawn uniformly on the region and the
    outage event (1 + snr_bob) <= C * (1 + snr_eve) is counted.
    """
    return _count_event(cfg, mc, _outage_pas)


def simulate_sop_fpa(cfg: SystemConfig, mc: McConfig) -> McResult:
    """Empirical SOP of the fixed-position baseline (antenna at the center)."""
    return _count_event(cfg, mc, _outage_fpa)


def simulate_lower_bound_event(cfg: SystemConfig, mc: McConfig) -> McResult:
    """Probability that the eavesdropper's SNR is at least the receiver's.

    The event (x1-x2)^2 + y2^2 <= y1^2 is scale-free: the estimate does
    not depend on the region size, the height, or the transmit power.
    """
    return _count_event(cfg, mc, _bound_event)


def _collect_samples(
    cfg: SystemConfig,
    mc: McConfig,
    transform: Callable[[np.ndarray, SystemConfig], np.ndarray],
) -> np.ndarray:
    chunks = _chunk_bounds(mc.trials, mc.workers)
    out = np.empty(mc.trials, dtype=np.float64)

    def fill(bound: tuple[int, int]) -> None:
        lo, hi = bound
        out[lo:hi] = transform(_uniform_chunk(mc.seed, lo, hi), cfg)

    if mc.workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            list(pool.map(fill, chunks))
    else:
        for b in chunks:
            fill(b)
    return out


def _eve_snr_values(u: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    x1, _, x2, y2 = _positions(u, cfg)
    return snr_eve_pinching(x1, x2, y2, cfg)


def _offset_sq_values(u: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    x1, _, x2, y2 = _positions(u, cfg)
    return (x1 - x2) ** 2 + y2**2


def sample_snr_eve(cfg: SystemConfig, mc: McConfig) -> np.ndarray:
    """Per-trial eavesdropper SNR samples, in trial order."""
    return _collect_samples(cfg, mc, _eve_snr_values)


def sample_offset_sq(cfg: SystemConfig, mc: McConfig) -> np.ndarray:
    """Per-trial squared horizontal offset samples, in trial order."""
    return _collect_samples(cfg, mc, _offset_sq_values)
