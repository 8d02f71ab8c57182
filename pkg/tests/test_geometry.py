"""Waveguide constants, exact distances, path gains, channel synthesis."""

import math

import numpy as np
import pytest

from pinchest import geometry
from pinchest.geometry import Scatterer, Scene, WaveguideConfig

CFG = WaveguideConfig()
LAM = 3.0e8 / 28.0e9


def test_wavelength_and_spacing():
    assert CFG.wavelength_m == pytest.approx(0.010714285714285714, rel=0, abs=1e-18)
    assert CFG.spacing_m == pytest.approx(LAM / 2.0, rel=0, abs=1e-18)


def test_antenna_count_default_aperture():
    # 2 * 3 m / lambda = 560 exactly at 28 GHz
    assert CFG.antenna_count == 560


def test_antenna_count_survives_exact_integer_ratio():
    # 100 half-wavelengths: floor must not lose the last one to rounding
    cfg = WaveguideConfig(length_m=50.0 * LAM)
    assert cfg.antenna_count == 100


def test_propagation_constant():
    assert CFG.propagation_constant == pytest.approx(821.0028801381326, rel=1e-15)


@pytest.mark.parametrize("kwargs", [
    {"length_m": 0.0},
    {"length_m": -1.0},
    {"carrier_hz": 0.0},
    {"refractive_index": 0.9},
    {"length_m": 0.004},   # shorter than one antenna spacing
])
def test_waveguide_validation(kwargs):
    with pytest.raises(ValueError):
        WaveguideConfig(**kwargs)


def test_candidate_positions():
    pos = geometry.candidate_positions(CFG)
    assert pos.shape == (560,)
    assert pos[0] == 0.0
    assert np.allclose(np.diff(pos), CFG.spacing_m)


def test_positions_for_is_one_based():
    pos = geometry.positions_for(CFG, [1, 2, 560])
    assert pos[0] == 0.0
    assert pos[1] == pytest.approx(CFG.spacing_m)
    assert pos[2] == pytest.approx(559 * CFG.spacing_m)


@pytest.mark.parametrize("indices", [[0], [561], [1, 600]])
def test_positions_for_rejects_out_of_range(indices):
    with pytest.raises(IndexError):
        geometry.positions_for(CFG, indices)


def test_positions_for_rejects_empty():
    with pytest.raises(ValueError):
        geometry.positions_for(CFG, [])


def test_radiation_vector_unit_modulus_and_feed_reference():
    w = geometry.radiation_vector(CFG, np.arange(1, 561))
    assert np.allclose(np.abs(w), 1.0)
    assert w[0] == 1.0 + 0.0j
    # beta_g * spacing = 1.4 pi, so w_2 = exp(-1.4j pi) = exp(0.6j pi)
    assert w[1] == pytest.approx(np.exp(0.6j * np.pi), rel=1e-12)
    assert w[1] == pytest.approx(-0.30901699437494756 + 0.9510565162951535j, rel=1e-12)


def test_distance_to_position_exact():
    # law of cosines at broadside: sqrt(r^2 + x^2)
    d = geometry.distance_to_position(10.0, 0.0, 2.142857)
    assert d == pytest.approx(10.22701501526467, rel=1e-15)
    assert geometry.distance_to_position(7.0, 0.4, 0.0) == pytest.approx(7.0)


def test_distance_to_position_angle_sign():
    # positive angle leans the source toward positive x, shortening the path
    near = geometry.distance_to_position(5.0, 0.5, 1.0)
    far = geometry.distance_to_position(5.0, -0.5, 1.0)
    assert near < 5.0 < far


def test_distance_to_position_rejects_nonpositive_radius():
    with pytest.raises(ValueError):
        geometry.distance_to_position(0.0, 0.0, 1.0)


def test_scatterer_user_distance():
    # pi/2 separation makes the cosine term vanish: sqrt(25 + 9)
    ru = geometry.scatterer_user_distance(5.0, math.pi / 3, 3.0, -math.pi / 6)
    assert ru == pytest.approx(math.sqrt(34.0), rel=1e-15)
    assert ru == pytest.approx(5.830951894845301, rel=1e-15)


def test_taylor_distance_orders():
    x = np.array([0.2142857142857143, 2.142857142857143])
    first = geometry.taylor_distance(10.0, 0.0, x, 1)
    second = geometry.taylor_distance(10.0, 0.0, x, 2)
    assert np.allclose(first, 10.0)  # sin(0) = 0
    terms = second - first
    assert terms[0] == pytest.approx(0.0022959183673469394, rel=1e-12)
    assert terms[1] == pytest.approx(0.22959183673469385, rel=1e-12)


def test_taylor_distance_converges_to_exact():
    x = np.linspace(0.0, 0.3, 7)
    exact = geometry.distance_to_position(8.0, 0.7, x)
    first = geometry.taylor_distance(8.0, 0.7, x, 1)
    second = geometry.taylor_distance(8.0, 0.7, x, 2)
    assert np.max(np.abs(second - exact)) < np.max(np.abs(first - exact))


def test_taylor_distance_rejects_bad_order():
    with pytest.raises(ValueError):
        geometry.taylor_distance(5.0, 0.0, 1.0, 3)


def test_steering_vector_entries():
    idx = np.arange(1, 41)
    a = geometry.steering_vector(CFG, 6.0, 0.3, idx)
    assert a[0] == 1.0 + 0.0j  # feed-point reference
    x = geometry.positions_for(CFG, idx)
    rm = geometry.distance_to_position(6.0, 0.3, x)
    expected = (6.0 / rm) * np.exp(-2j * np.pi / CFG.wavelength_m * (rm - 6.0))
    assert np.allclose(a, expected, rtol=1e-12)


def test_steering_vector_flattens_in_far_field():
    # at 10 km the amplitude taper across 30 elements is negligible
    a = geometry.steering_vector(CFG, 1.0e4, -0.4, np.arange(1, 31))
    assert np.max(np.abs(np.abs(a) - 1.0)) < 1e-4


@pytest.mark.parametrize("ctor_kwargs", [
    {"distance_m": -1.0, "angle_rad": 0.0},
    {"distance_m": 3.0, "angle_rad": 2.0},
    {"distance_m": 3.0, "angle_rad": 0.0, "rcs_m2": 0.0},
])
def test_scatterer_validation(ctor_kwargs):
    with pytest.raises(ValueError):
        Scatterer(**ctor_kwargs)


def test_scene_validation_and_path_count():
    with pytest.raises(ValueError):
        Scene(user_distance_m=0.0, user_angle_rad=0.0)
    with pytest.raises(ValueError):
        Scene(user_distance_m=5.0, user_angle_rad=1.8)
    scene = Scene(5.0, 0.1, (Scatterer(3.0, -0.2), Scatterer(4.0, 0.5)))
    assert scene.path_count == 2


def test_path_gains_los():
    paths = geometry.path_gains(CFG, Scene(5.0, 0.25)).paths
    assert len(paths) == 1
    g = paths[0].gain
    assert abs(g) == pytest.approx(0.00017052315331274502, rel=1e-12)
    expected = abs(g) * np.exp(-2j * math.pi * 5.0 / LAM)
    assert g == pytest.approx(expected, rel=1e-10)


def test_path_gains_nlos():
    scene = Scene(5.0, math.pi / 3, (Scatterer(3.0, -math.pi / 6, rcs_m2=1.0),))
    ps = geometry.path_gains(CFG, scene)
    nlos = ps.paths[1]
    assert nlos.kind == "nlos"
    assert nlos.scatterer_user_m == pytest.approx(math.sqrt(34.0), rel=1e-14)
    assert abs(nlos.gain) == pytest.approx(1.3749525604589737e-05, rel=1e-12)
    expected = abs(nlos.gain) * np.exp(-2j * math.pi * (3.0 + math.sqrt(34.0)) / LAM)
    assert nlos.gain == pytest.approx(expected, rel=1e-8)


def test_path_set_accessors_and_ordering():
    scene = Scene(5.0, 0.0, (Scatterer(3.0, 0.4, rcs_m2=50.0),))
    ps = geometry.path_gains(CFG, scene)
    assert ps.angles().tolist() == [0.0, 0.4]
    assert ps.distances().tolist() == [5.0, 3.0]
    ordered = ps.by_descending_gain()
    mags = np.abs(ordered.gains())
    assert np.all(mags[:-1] >= mags[1:])
    # the boosted cross-section must push the bounce path in front
    assert ordered.paths[0].kind == "nlos"


def test_synthesize_channel_matches_path_sum():
    scene = Scene(5.0, 0.3, (Scatterer(4.0, -0.7, rcs_m2=2.0),))
    h = geometry.synthesize_channel(CFG, scene)
    assert h.shape == (560,)
    idx = np.arange(1, 561)
    manual = np.zeros(560, dtype=complex)
    for p in geometry.path_gains(CFG, scene).paths:
        manual += p.gain * geometry.steering_vector(CFG, p.distance_m, p.angle_rad, idx)
    assert np.allclose(h, manual, rtol=1e-12)


def test_synthesize_channel_los_amplitude_profile():
    scene = Scene(5.0, 0.0)
    h = geometry.synthesize_channel(CFG, scene)
    x = geometry.candidate_positions(CFG)
    rm = geometry.distance_to_position(5.0, 0.0, x)
    assert np.allclose(np.abs(h), abs(h[0]) * 5.0 / rm, rtol=1e-12)


def test_fresnel_critical_count():
    assert geometry.fresnel_critical_count(CFG, 50.0) == 195
    with pytest.raises(ValueError):
        geometry.fresnel_critical_count(CFG, 0.0)
