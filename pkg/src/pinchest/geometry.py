"""Waveguide geometry, free-space multipath model, and channel synthesis.

The transmission line is a dielectric waveguide fed at the origin and laid
along the x axis.  Radiating "pinching" antennas can be activated at M
candidate positions spaced half a wavelength apart, the first one at the feed
point itself, so x_m = (m - 1) * lambda / 2 for 1-based antenna index m.
Sources (the user and any scatterers) sit in the xy plane at polar
coordinates (r, phi) measured from the feed point, phi in [-pi/2, pi/2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels

LIGHT_SPEED = 3.0e8  # m/s


@dataclass(frozen=True)
class WaveguideConfig:
    """Waveguide dimensions and carrier, with the derived array constants."""

    length_m: float = 3.0
    carrier_hz: float = 28.0e9
    refractive_index: float = 1.4

    def __post_init__(self):
        if self.length_m <= 0.0:
            raise ValueError("waveguide length must be positive")
        if self.carrier_hz <= 0.0:
            raise ValueError("carrier frequency must be positive")
        if self.refractive_index < 1.0:
            raise ValueError("waveguide refractive index must be >= 1")
        if self.antenna_count < 2:
            raise ValueError("waveguide shorter than one antenna spacing")

    @property
    def wavelength_m(self) -> float:
        return LIGHT_SPEED / self.carrier_hz

    @property
    def spacing_m(self) -> float:
        return 0.5 * self.wavelength_m

    @property
    def antenna_count(self) -> int:
        # floor, with a small guard so exact-integer apertures survive rounding
        return int(math.floor(2.0 * self.length_m / self.wavelength_m + 1e-9))

    @property
    def propagation_constant(self) -> float:
        """In-guide wavenumber beta_g = n_g * 2 pi / lambda (rad/m)."""
        return self.refractive_index * 2.0 * math.pi / self.wavelength_m


def candidate_positions(cfg: WaveguideConfig) -> np.ndarray:
    """Positions of all M candidate antennas along the waveguide."""
    return np.arange(cfg.antenna_count, dtype=float) * cfg.spacing_m


def positions_for(cfg: WaveguideConfig, indices) -> np.ndarray:
    """Map 1-based antenna indices to waveguide positions."""
    idx = np.atleast_1d(np.asarray(indices, dtype=int))
    if idx.size == 0:
        raise ValueError("empty antenna index set")
    if idx.min() < 1 or idx.max() > cfg.antenna_count:
        raise IndexError(f"antenna index outside 1..{cfg.antenna_count}")
    return (idx - 1) * cfg.spacing_m


def radiation_vector(cfg: WaveguideConfig, indices) -> np.ndarray:
    """In-waveguide phase accumulated up to each antenna, w_m = exp(-j beta_g x_m).

    Unit modulus for every index; the feed-point antenna (m = 1) gets exactly 1.
    """
    x = positions_for(cfg, indices)
    return np.exp(-1j * cfg.propagation_constant * x)


def distance_to_position(source_distance: float, source_angle: float, x) -> np.ndarray:
    """Exact distance from a source at (r, phi) to waveguide position(s) x.

    Law of cosines with the polar axis along the waveguide:
    sqrt(r^2 - 2 r x sin(phi) + x^2).
    """
    r = float(source_distance)
    if r <= 0.0:
        raise ValueError("source distance must be positive")
    x = np.asarray(x, dtype=float)
    return np.sqrt(r * r - 2.0 * r * np.sin(source_angle) * x + x * x)


def scatterer_user_distance(user_distance: float, user_angle: float,
                            scatterer_distance: float, scatterer_angle: float) -> float:
    """Length of the scatterer-to-user leg of a single-bounce path."""
    r0, rp = float(user_distance), float(scatterer_distance)
    if r0 <= 0.0 or rp <= 0.0:
        raise ValueError("distances must be positive")
    return math.sqrt(r0 * r0 - 2.0 * r0 * rp * math.cos(user_angle - scatterer_angle) + rp * rp)


def taylor_distance(source_distance: float, source_angle: float, x, order: int):
    """Taylor expansion of the exact source-to-position distance around x = 0.

    order 1: r - x sin(phi); order 2 adds x^2 cos^2(phi) / (2 r).
    """
    if order not in (1, 2):
        raise ValueError("expansion order must be 1 or 2")
    r = float(source_distance)
    if r <= 0.0:
        raise ValueError("source distance must be positive")
    x = np.asarray(x, dtype=float)
    approx = r - x * np.sin(source_angle)
    if order == 2:
        approx = approx + x * x * math.cos(source_angle) ** 2 / (2.0 * r)
    return approx


def steering_vector(cfg: WaveguideConfig, source_distance: float, source_angle: float,
                    indices) -> np.ndarray:
    """Exact near-field steering vector over the given antennas.

    Entry m is (r / r_m) exp(-j 2 pi (r_m - r) / lambda), referenced to the
    feed point so the m = 1 entry (if included) is exactly 1.
    """
    pos = positions_for(cfg, indices)
    rows = kernels.near_field_atoms(cfg.wavelength_m, pos, float(source_angle),
                                    np.asarray([float(source_distance)]))
    return rows[0]


@dataclass(frozen=True)
class Scatterer:
    """Point scatterer at (r, phi) with radar cross-section alpha."""

    distance_m: float
    angle_rad: float
    rcs_m2: float = 1.0

    def __post_init__(self):
        if self.distance_m <= 0.0:
            raise ValueError("scatterer distance must be positive")
        if not -math.pi / 2 <= self.angle_rad <= math.pi / 2:
            raise ValueError("scatterer angle outside [-pi/2, pi/2]")
        if self.rcs_m2 <= 0.0:
            raise ValueError("scatterer cross-section must be positive")


@dataclass(frozen=True)
class Scene:
    """One propagation scene: the user plus P single-bounce scatterers."""

    user_distance_m: float
    user_angle_rad: float
    scatterers: tuple[Scatterer, ...] = ()

    def __post_init__(self):
        if self.user_distance_m <= 0.0:
            raise ValueError("user distance must be positive")
        if not -math.pi / 2 <= self.user_angle_rad <= math.pi / 2:
            raise ValueError("user angle outside [-pi/2, pi/2]")
        object.__setattr__(self, "scatterers", tuple(self.scatterers))

    @property
    def path_count(self) -> int:
        """Number of NLoS paths (P)."""
        return len(self.scatterers)


@dataclass(frozen=True)
class Path:
    """One propagation path as seen from the waveguide reference point."""

    kind: str  # "los" or "nlos"
    distance_m: float
    angle_rad: float
    gain: complex
    scatterer_user_m: float | None = None  # bounce leg, NLoS only


@dataclass(frozen=True)
class PathSet:
    """All paths of a scene with their complex gains."""

    paths: tuple[Path, ...]

    def angles(self) -> np.ndarray:
        return np.array([p.angle_rad for p in self.paths], dtype=float)

    def distances(self) -> np.ndarray:
        return np.array([p.distance_m for p in self.paths], dtype=float)

    def gains(self) -> np.ndarray:
        return np.array([p.gain for p in self.paths], dtype=complex)

    def by_descending_gain(self) -> "PathSet":
        order = np.argsort(-np.abs(self.gains()), kind="stable")
        return PathSet(tuple(self.paths[i] for i in order))


def path_gains(cfg: WaveguideConfig, scene: Scene) -> PathSet:
    """LoS and single-bounce path gains referenced to the feed point.

    LoS:  beta_0 = lambda / (4 pi r_0) * exp(-j 2 pi r_0 / lambda).
    NLoS: beta_p = lambda alpha_p / ((4 pi)^{3/2} r_p r_up)
                   * exp(-j 2 pi (r_p + r_up) / lambda).
    """
    lam = cfg.wavelength_m
    r0 = scene.user_distance_m
    los_gain = lam / (4.0 * math.pi * r0) * np.exp(-2j * math.pi * r0 / lam)
    paths = [Path("los", r0, scene.user_angle_rad, complex(los_gain))]
    for sc in scene.scatterers:
        ru = scatterer_user_distance(r0, scene.user_angle_rad, sc.distance_m, sc.angle_rad)
        mag = lam * sc.rcs_m2 / ((4.0 * math.pi) ** 1.5 * sc.distance_m * ru)
        phase = -2.0 * math.pi * (sc.distance_m + ru) / lam
        paths.append(Path("nlos", sc.distance_m, sc.angle_rad,
                          complex(mag * np.exp(1j * phase)), scatterer_user_m=ru))
    return PathSet(tuple(paths))


def synthesize_channel(cfg: WaveguideConfig, scene: Scene) -> np.ndarray:
    """Complex channel h over all M candidate antennas.

    Sum of per-path gain times exact steering vector; term-by-term this equals
    the spherical-wave free-space model for the LoS and each bounce path.
    """
    positions = candidate_positions(cfg)
    h = np.zeros(cfg.antenna_count, dtype=complex)
    for p in path_gains(cfg, scene).paths:
        atom = kernels.near_field_atoms(cfg.wavelength_m, positions, p.angle_rad,
                                        np.asarray([p.distance_m]))[0]
        h += p.gain * atom
    return h


def fresnel_critical_count(cfg: WaveguideConfig, max_distance: float) -> int:
    """Antenna count above which sources within ``max_distance`` leave the
    far-field regime of the array aperture: ceil(1 + sqrt(8 r / lambda)).
    """
    if max_distance <= 0.0:
        raise ValueError("distance must be positive")
    value = 1.0 + math.sqrt(8.0 * max_distance / cfg.wavelength_m)
    return int(math.ceil(value - 1e-12))
