"""Reference numpy implementations of the hot numeric kernels.

The compiled extension module ``_kernels_c`` mirrors these signatures; see
``kernels`` for how the backend is selected at import time.  All atom
matrices are returned atom-major: one row per grid value, one column per
waveguide position.
"""

import numpy as np


def first_order_atoms(wavelength, positions, angles):
    """Planar-wavefront phase atoms, exp(+j k x sin(theta)), one row per angle."""
    k = 2.0 * np.pi / wavelength
    x = np.asarray(positions, dtype=float)
    s = np.sin(np.asarray(angles, dtype=float))
    return np.exp(1j * (k * s[:, None] * x[None, :]))


def second_order_atoms(wavelength, positions, angles, focus_distance):
    """Curvature-corrected phase atoms focused at ``focus_distance``, one row per angle."""
    k = 2.0 * np.pi / wavelength
    x = np.asarray(positions, dtype=float)
    th = np.asarray(angles, dtype=float)
    s = np.sin(th)[:, None]
    c2 = np.cos(th)[:, None] ** 2
    phase = k * (s * x[None, :] - c2 * x[None, :] ** 2 / (2.0 * focus_distance))
    return np.exp(1j * phase)


def near_field_atoms(wavelength, positions, angle, distances):
    """Exact spherical-wavefront atoms at a fixed angle, one row per source distance.

    Entry (d, m) is (r_d / r_dm) * exp(-j k (r_dm - r_d)) with r_dm the exact
    distance from the source at (r_d, angle) to waveguide position x_m.  The
    x = 0 column is pinned to exactly 1 so the feed-point entry is the phase
    reference.
    """
    k = 2.0 * np.pi / wavelength
    x = np.asarray(positions, dtype=float)[None, :]
    r = np.asarray(distances, dtype=float)[:, None]
    rm = np.sqrt(r * r - 2.0 * r * np.sin(angle) * x + x * x)
    rm = np.where(x == 0.0, r, rm)
    return (r / rm) * np.exp(-1j * k * (rm - r))


def correlation_scores(atom_rows, weights, residual):
    """Normalized correlation |<w . a, res>| / ||w . a|| per atom row.

    Rows whose weighted norm is zero score 0.
    """
    eff = np.asarray(atom_rows) * np.asarray(weights)[None, :]
    num = np.abs(eff.conj() @ np.asarray(residual))
    den = np.sqrt(np.einsum("cm,cm->c", eff, eff.conj()).real)
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den > 0.0)
    return out
