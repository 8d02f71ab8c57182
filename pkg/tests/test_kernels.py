"""Backend selection and compiled-vs-numpy kernel equivalence."""

import os
import subprocess
import sys

import numpy as np
import pytest

from pinchest import kernels
from pinchest import _kernels_np

HAVE_COMPILED = "cython" in kernels.available_backends()

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED,
                                    reason="compiled extension not built")


@pytest.fixture
def restore_backend():
    name = kernels.backend_name()
    yield
    kernels.set_backend(name)


def test_backend_registry():
    assert "numpy" in kernels.available_backends()
    assert kernels.backend_name() in kernels.available_backends()
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_set_backend_switches(restore_backend):
    kernels.set_backend("numpy")
    assert kernels.backend_name() == "numpy"


def _inputs(seed):
    rng = np.random.default_rng(seed)
    wavelength = 0.010714285714285714
    positions = np.arange(40, dtype=float) * (wavelength / 2.0)
    angles = np.sort(rng.uniform(-np.pi / 2, np.pi / 2, size=64))
    distances = rng.uniform(1.0, 15.0, size=32)
    return wavelength, positions, angles, distances


@needs_compiled
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_first_order_atoms_agree(seed):
    lam, pos, ang, _ = _inputs(seed)
    a = _kernels_np.first_order_atoms(lam, pos, ang)
    b = kernels._BACKENDS["cython"].first_order_atoms(lam, pos, ang)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


@needs_compiled
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_second_order_atoms_agree(seed):
    lam, pos, ang, _ = _inputs(seed)
    a = _kernels_np.second_order_atoms(lam, pos, ang, 4.5)
    b = kernels._BACKENDS["cython"].second_order_atoms(lam, pos, ang, 4.5)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


@needs_compiled
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_near_field_atoms_agree(seed):
    lam, pos, ang, dist = _inputs(seed)
    a = _kernels_np.near_field_atoms(lam, pos, float(ang[3]), dist)
    b = kernels._BACKENDS["cython"].near_field_atoms(lam, pos, float(ang[3]), dist)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


@needs_compiled
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_correlation_scores_agree(seed):
    lam, pos, ang, dist = _inputs(seed)
    rng = np.random.default_rng(seed + 100)
    rows = np.ascontiguousarray(_kernels_np.near_field_atoms(lam, pos, 0.3, dist))
    w = rng.standard_normal(pos.size) + 1j * rng.standard_normal(pos.size)
    res = rng.standard_normal(pos.size) + 1j * rng.standard_normal(pos.size)
    a = _kernels_np.correlation_scores(rows, w, res)
    b = kernels._BACKENDS["cython"].correlation_scores(rows, w, res)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-14)


def test_near_field_feed_point_entry_is_pinned():
    lam, pos, _, dist = _inputs(0)
    rows = kernels.near_field_atoms(lam, pos, 0.7, dist)
    assert np.all(rows[:, 0] == 1.0 + 0.0j)


def test_correlation_scores_zero_norm_row():
    rows = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    w = np.ones(2, dtype=complex)
    res = np.array([1.0, 1.0], dtype=complex)
    scores = kernels.correlation_scores(rows, w, res)
    assert scores[0] == 0.0
    assert scores[1] == pytest.approx(1.0)


def test_env_var_forces_the_numpy_backend():
    env = dict(os.environ, PINCHEST_KERNELS="numpy")
    out = subprocess.run(
        [sys.executable, "-c",
         "import pinchest; print(pinchest.kernel_backend())"],
        capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"


@needs_compiled
def test_estimates_match_across_backends(restore_backend):
    # one full pipeline run per backend on the same noiseless frames
    from pinchest import estimator, geometry, pilots
    from pinchest.estimator import EstimatorConfig
    from pinchest.geometry import Scatterer, Scene, WaveguideConfig
    from pinchest.pilots import SubarrayLayout

    cfg = WaveguideConfig()
    layout = SubarrayLayout()
    scene = Scene(5.0, 0.31, (Scatterer(4.2, -0.8),))
    h = geometry.synthesize_channel(cfg, scene)
    symbols = pilots.make_pilot_symbols(10.0, layout.slot_count)
    ne = pilots.receive_sequential(cfg, h, layout.near_indices(), symbols[:30], 0.0)
    fe = pilots.receive_sequential(cfg, h, layout.far_indices(), symbols[30:], 0.0)
    est = EstimatorConfig(pursuit_order=2)

    channels = {}
    for name in ("cython", "numpy"):
        kernels.set_backend(name)
        channels[name] = estimator.algorithm1(ne, fe, cfg, layout, est).channel
    scale = np.abs(channels["cython"]).max()
    assert np.allclose(channels["cython"], channels["numpy"],
                       rtol=1e-9, atol=1e-12 * scale)
