"""Pilot construction and sequential single-antenna reception.

Training activates one antenna per slot: in slot t only antenna m_t radiates,
so y_t = w_{m_t} h_{m_t} s_t + z_t with w the in-waveguide phase and z
circularly-symmetric complex Gaussian noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .geometry import WaveguideConfig


@dataclass(frozen=True)
class SubarrayLayout:
    """Near-end and far-end pilot subarrays (1-based antenna indices).

    The near subarray is antennas 1..near_count; the far subarray starts at
    ``far_start`` and spans ``far_count`` consecutive antennas.
    """

    near_count: int = 30
    far_count: int = 30
    far_start: int = 450

    def __post_init__(self):
        if self.near_count < 1 or self.far_count < 1:
            raise ValueError("subarray sizes must be at least 1")
        if self.far_start <= self.near_count:
            raise ValueError("far subarray must start beyond the near subarray")

    def validate(self, cfg: WaveguideConfig):
        if self.far_start + self.far_count - 1 > cfg.antenna_count:
            raise ValueError(
                f"far subarray ends at {self.far_start + self.far_count - 1}, "
                f"waveguide has {cfg.antenna_count} candidate positions")

    def near_indices(self) -> np.ndarray:
        return np.arange(1, self.near_count + 1)

    def far_indices(self) -> np.ndarray:
        return np.arange(self.far_start, self.far_start + self.far_count)

    @property
    def slot_count(self) -> int:
        return self.near_count + self.far_count


@dataclass(frozen=True)
class TrialRng:
    """Deterministic per-trial random streams.

    Identical (base_seed, stream_id) always reproduces the same draws; extra
    lane ids derive further independent streams for the same trial.
    """

    base_seed: int
    stream_id: int

    def generator(self, *lanes: int) -> np.random.Generator:
        return np.random.default_rng((self.base_seed, self.stream_id, *lanes))


@dataclass
class ReceivedFrame:
    """One pilot frame: which antennas fired, with what symbols, what came back."""

    indices: np.ndarray        # 1-based antenna index per slot, activation order
    pilots: np.ndarray         # complex pilot symbol per slot
    y: np.ndarray              # received sample per slot
    noise_variance_w: float


def dbm_to_watts(power_dbm: float) -> float:
    return 10.0 ** ((power_dbm - 30.0) / 10.0)


def make_pilot_symbols(total_power_w: float, slots: int) -> np.ndarray:
    """Real positive pilots with the budget split equally: |s_t|^2 = q / T."""
    if total_power_w <= 0.0:
        raise ValueError("pilot power budget must be positive")
    if slots < 1:
        raise ValueError("need at least one pilot slot")
    return np.full(slots, math.sqrt(total_power_w / slots), dtype=complex)


def receive_sequential(cfg: WaveguideConfig, channel: np.ndarray, indices, pilots,
                       noise_variance_w: float,
                       rng: np.random.Generator | None = None) -> ReceivedFrame:
    """Simulate one-antenna-per-slot reception over the given index order.

    With ``noise_variance_w`` = 0 the frame is exact and no generator is
    touched; otherwise noise is CN(0, sigma^2) drawn from ``rng``.
    """
    idx = np.atleast_1d(np.asarray(indices, dtype=int))
    s = np.atleast_1d(np.asarray(pilots, dtype=complex))
    if idx.shape != s.shape:
        raise ValueError("one pilot symbol per activated antenna required")
    if noise_variance_w < 0.0:
        raise ValueError("noise variance must be nonnegative")
    w = geometry.radiation_vector(cfg, idx)
    clean = w * np.asarray(channel, dtype=complex)[idx - 1] * s
    if noise_variance_w > 0.0:
        if rng is None:
            raise ValueError("rng required when noise variance is positive")
        scale = math.sqrt(noise_variance_w / 2.0)
        noise = scale * (rng.standard_normal(idx.size) + 1j * rng.standard_normal(idx.size))
        y = clean + noise
    else:
        y = clean
    return ReceivedFrame(indices=idx, pilots=s, y=y, noise_variance_w=float(noise_variance_w))
