"""Estimation quality and downstream rate metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RateConfig:
    """Downlink power and noise floor used for the achievable-rate metric."""

    transmit_power_w: float
    noise_variance_w: float

    def __post_init__(self):
        if self.transmit_power_w <= 0.0:
            raise ValueError("transmit power must be positive")
        if self.noise_variance_w <= 0.0:
            raise ValueError("noise variance must be positive")


def nmse(h_hat, h) -> float:
    """Normalized mean squared error ||h_hat - h||^2 / ||h||^2."""
    h_hat = np.asarray(h_hat, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if h_hat.shape != h.shape:
        raise ValueError("estimate and reference must have the same shape")
    ref = float(np.linalg.norm(h) ** 2)
    if ref == 0.0:
        raise ValueError("reference channel is exactly zero")
    return float(np.linalg.norm(h_hat - h) ** 2) / ref


def select_antenna(h_hat) -> int:
    """1-based index of the strongest entry; ties go to the lowest index."""
    h_hat = np.asarray(h_hat, dtype=complex)
    if h_hat.ndim != 1 or h_hat.size == 0:
        raise ValueError("channel estimate must be a nonempty vector")
    return int(np.argmax(np.abs(h_hat))) + 1


def achievable_rate(h, antenna_index: int, rate: RateConfig) -> float:
    """log2(1 + q |h_m|^2 / sigma^2) at the chosen antenna of the true channel."""
    h = np.asarray(h, dtype=complex)
    if not 1 <= antenna_index <= h.size:
        raise IndexError("antenna index outside the channel vector")
    snr = rate.transmit_power_w * abs(h[antenna_index - 1]) ** 2 / rate.noise_variance_w
    return math.log2(1.0 + snr)
