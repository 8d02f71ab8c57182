"""Dictionaries, orthogonal matching pursuit, and the two-subarray pipeline.

Estimation runs in stages: per-path angles from the near-end frame with a
planar-wavefront dictionary, per-path distances from the far-end frame with
exact spherical-wavefront dictionaries, one or more refinement sweeps that
re-select angles with a curvature-corrected dictionary and then re-match the
distances, a joint least-squares fit of the path gains on both frames, and a
full-array reconstruction from the fitted parameter triplets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import geometry, kernels
from .geometry import WaveguideConfig
from .pilots import ReceivedFrame, SubarrayLayout

# Upper bound on the re-selection sweeps the distance matcher runs after its
# first pass.  Selections almost always stop moving after one or two sweeps;
# the bound only guards against a cycle between equally scored grid points.
_RESELECTION_SWEEPS = 8


class DegenerateObservationError(ValueError):
    """The observation is exactly zero and carries no signal."""


@dataclass(frozen=True)
class EstimatorConfig:
    """Grid sizes and pursuit depth for the sparse pipeline.

    ``pursuit_order`` is the number of paths fitted (LoS plus scatterers);
    None lets the harness fill in P + 1 from its scene law.
    ``refinement_passes`` = 0 keeps the coarse angle/distance estimates.
    ``angle_exclusion`` keeps any two selected angles apart by that many
    main-lobe widths of the near-end subarray (the lobe width scales
    inversely with the subarray aperture); it stops a weak path's scan from
    settling on the shoulder of a stronger one, where the strong path's own
    model mismatch dominates the residual.  The refinement stage masks half
    that width: its curvature-corrected model subtracts the stronger path
    far more cleanly, and the narrower margin lets a real path that sits
    near a strong one be recovered from the pursuit's forced mis-pick.
    """

    angle_grid_size: int = 1024
    distance_grid_size: int = 2048
    distance_range_m: tuple[float, float] = (1.0, 15.0)
    pursuit_order: int | None = None
    refinement_passes: int = 2
    angle_exclusion: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "distance_range_m", tuple(self.distance_range_m))
        if self.angle_grid_size < 2 or self.distance_grid_size < 2:
            raise ValueError("dictionary grids need at least two points")
        d_min, d_max = self.distance_range_m
        if not 0.0 < d_min < d_max:
            raise ValueError("distance range must satisfy 0 < d_min < d_max")
        if self.pursuit_order is not None and self.pursuit_order < 1:
            raise ValueError("pursuit order must be at least 1")
        if self.refinement_passes < 0:
            raise ValueError("refinement pass count must be nonnegative")
        if self.angle_exclusion < 0:
            raise ValueError("angle exclusion must be nonnegative")

    def exclusion_bins(self, near_count: int) -> int:
        """Pursuit-stage exclusion half-width in angle grid steps.

        One main-lobe width of an aperture of ``near_count`` half-wavelength
        elements spans 2/near_count in sine terms, which at broadside covers
        2 * angle_grid_size / (pi * near_count) grid steps.
        """
        lobe = 2.0 * self.angle_grid_size / (np.pi * near_count)
        return int(round(self.angle_exclusion * lobe))

    def order(self) -> int:
        if self.pursuit_order is None:
            raise ValueError("pursuit order unresolved; set it explicitly")
        return self.pursuit_order


@dataclass(frozen=True, eq=False)
class DictionaryGrid:
    """A sampled parameter grid with one atom per grid value.

    ``atoms`` has one column per value and one row per subarray position;
    ``row_atoms`` is the transposed (atom-major, contiguous) view the scan
    kernels consume.
    """

    kind: str     # "angle" or "distance"
    values: np.ndarray
    atoms: np.ndarray
    model: str    # "first-order", "second-order", or "exact-near-field"

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def row_atoms(self) -> np.ndarray:
        return np.ascontiguousarray(self.atoms.T)


def angle_grid(size: int) -> np.ndarray:
    """Uniform angle grid -pi/2 + pi c / size for c = 0..size-1."""
    return -0.5 * np.pi + np.pi * np.arange(size, dtype=float) / size


def build_near_dict_firstorder(cfg: WaveguideConfig, near_count: int,
                               grid_size: int) -> DictionaryGrid:
    """Planar-wavefront angle dictionary over the near-end subarray."""
    angles = angle_grid(grid_size)
    pos = geometry.positions_for(cfg, np.arange(1, near_count + 1))
    rows = kernels.first_order_atoms(cfg.wavelength_m, pos, angles)
    return DictionaryGrid("angle", angles, rows.T, "first-order")


def build_near_dict_secondorder(cfg: WaveguideConfig, focus_distance: float,
                                near_count: int, grid_size: int) -> DictionaryGrid:
    """Curvature-corrected angle dictionary focused at one distance estimate."""
    if focus_distance <= 0.0:
        raise ValueError("focus distance must be positive")
    angles = angle_grid(grid_size)
    pos = geometry.positions_for(cfg, np.arange(1, near_count + 1))
    rows = kernels.second_order_atoms(cfg.wavelength_m, pos, angles, float(focus_distance))
    return DictionaryGrid("angle", angles, rows.T, "second-order")


def build_far_dict_distance(cfg: WaveguideConfig, angle: float, layout: SubarrayLayout,
                            grid_size: int, d_min: float, d_max: float) -> DictionaryGrid:
    """Exact spherical-wavefront distance dictionary over the far-end subarray.

    Distances are d_min + c (d_max - d_min) / (grid_size - 1), both endpoints
    included.
    """
    if not 0.0 < d_min < d_max:
        raise ValueError("distance range must satisfy 0 < d_min < d_max")
    layout.validate(cfg)
    d = np.linspace(d_min, d_max, grid_size)
    pos = geometry.positions_for(cfg, layout.far_indices())
    rows = kernels.near_field_atoms(cfg.wavelength_m, pos, float(angle), d)
    return DictionaryGrid("distance", d, rows.T, "exact-near-field")


@lru_cache(maxsize=32)
def _cached_first_order(cfg: WaveguideConfig, near_count: int, grid_size: int,
                        backend: str) -> DictionaryGrid:
    # keyed on the kernel backend so switching backends cannot serve stale atoms
    return build_near_dict_firstorder(cfg, near_count, grid_size)


@dataclass
class OmpResult:
    """Greedy pursuit outcome: selection order, joint-LS coefficients, residual."""

    indices: np.ndarray
    coefficients: np.ndarray
    residual: np.ndarray
    residual_norms: np.ndarray   # after each selection's joint refit
    rank_deficient: bool


def omp(y, atoms, count: int, weights=None, min_separation: int = 0) -> OmpResult:
    """Orthogonal matching pursuit with a joint LS refit after every pick.

    ``atoms`` holds one candidate per column.  The score of a column is the
    magnitude of its correlation with the current residual divided by the
    column norm; ties go to the lowest column index.  ``weights``, when
    given, multiplies the rows (per-slot waveguide phase times pilot), so the
    effective column c is weights * atoms[:, c].  ``min_separation`` masks
    that many columns on each side of every previous pick, keeping later
    picks off the shoulders of an already-fitted candidate; the default 0
    masks only the picked column itself.  A rank-deficient selected set is
    reported via the result, not raised.
    """
    y = np.ascontiguousarray(np.asarray(y, dtype=complex).ravel())
    a = np.asarray(atoms, dtype=complex)
    if a.ndim != 2:
        raise ValueError("atoms must be a matrix with one candidate per column")
    if a.shape[0] != y.size:
        raise ValueError("atom rows must match the observation length")
    if not 1 <= count <= a.shape[1]:
        raise ValueError("pursuit count must be in 1..number of atoms")
    if min_separation < 0:
        raise ValueError("min_separation must be non-negative")
    if not np.any(y):
        raise DegenerateObservationError("observation is exactly zero")
    rows = np.ascontiguousarray(a.T)
    if weights is None:
        w = np.ones(y.size, dtype=complex)
    else:
        w = np.ascontiguousarray(np.asarray(weights, dtype=complex).ravel())
        if w.size != y.size:
            raise ValueError("one weight per observation slot required")

    selected: list[int] = []
    norms = []
    rank_deficient = False
    coef = np.zeros(0, dtype=complex)
    residual = y.copy()
    for _ in range(count):
        scores = kernels.correlation_scores(rows, w, residual)
        for s in selected:
            scores[max(0, s - min_separation):s + min_separation + 1] = -1.0
        if scores.max() < 0.0:
            raise ValueError("min_separation leaves no candidate to select")
        selected.append(int(np.argmax(scores)))
        effective = (rows[selected] * w).T
        coef, _, rank, _ = np.linalg.lstsq(effective, y, rcond=None)
        if rank < len(selected):
            rank_deficient = True
        residual = y - effective @ coef
        norms.append(float(np.linalg.norm(residual)))
    return OmpResult(indices=np.array(selected), coefficients=coef, residual=residual,
                     residual_norms=np.array(norms), rank_deficient=rank_deficient)


def _frame_weights(cfg: WaveguideConfig, frame: ReceivedFrame) -> np.ndarray:
    return geometry.radiation_vector(cfg, frame.indices) * frame.pilots


def _check_frame(frame: ReceivedFrame, expected: np.ndarray, name: str):
    if not np.array_equal(frame.indices, expected):
        raise ValueError(f"frame must cover the {name} subarray in order")
    if not np.any(frame.y):
        raise DegenerateObservationError(f"{name} frame is exactly zero")


def coarse_angles(frame_ne: ReceivedFrame, cfg: WaveguideConfig, layout: SubarrayLayout,
                  est: EstimatorConfig) -> tuple[np.ndarray, OmpResult]:
    """Per-path arrival angles pursued on the near-end frame.

    One plain greedy pass; no re-selection sweeps.  The planar-wavefront
    dictionary is a deliberately biased model of the spherical response, so
    polishing its fit any harder than the pursuit already does just chases
    the model mismatch; the curvature-corrected refinement stage owns that
    correction.  Returns (angles, pursuit result), both reordered by
    descending coefficient magnitude so the strongest fitted path comes
    first.
    """
    layout.validate(cfg)
    _check_frame(frame_ne, layout.near_indices(), "near-end")
    grid = _cached_first_order(cfg, layout.near_count, est.angle_grid_size,
                               kernels.backend_name())
    w = _frame_weights(cfg, frame_ne)
    result = omp(frame_ne.y, grid.atoms, est.order(), weights=w,
                 min_separation=est.exclusion_bins(layout.near_count))
    order = np.argsort(-np.abs(result.coefficients), kind="stable")
    result.indices = result.indices[order]
    result.coefficients = result.coefficients[order]
    return grid.values[result.indices], result


def coarse_distances(frame_fe: ReceivedFrame, angles, cfg: WaveguideConfig,
                     layout: SubarrayLayout, est: EstimatorConfig
                     ) -> tuple[np.ndarray, dict]:
    """Per-path source distances matched sequentially on the far-end frame.

    Paths are handled in the order given (strongest first).  Each path scans
    its own distance dictionary, built at that path's angle, against the
    residual left by the already-fitted paths; after every selection all
    fitted coefficients are refit jointly.  Once every path has a selection
    the matcher keeps sweeping over the paths, re-scanning each one against
    the residual with only the other paths subtracted; a re-selection is
    kept only when it lowers the joint residual, so the sweeps stop at a
    stable set.  The sweeps remove the bias the first pass inherits from
    paths it has not fitted yet: with clean inputs the stable point
    reproduces the generating distances exactly, because each leave-one-out
    residual then contains nothing but the path being scanned.  Info flags
    selections that landed on the grid boundary, which usually means the
    true distance sits outside the dictionary range.
    """
    layout.validate(cfg)
    _check_frame(frame_fe, layout.far_indices(), "far-end")
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    if angles.size < 1:
        raise ValueError("need at least one path angle")
    d_min, d_max = est.distance_range_m
    w = _frame_weights(cfg, frame_fe)
    y = np.asarray(frame_fe.y, dtype=complex)

    count = angles.size
    grids = [build_far_dict_distance(cfg, ang, layout, est.distance_grid_size,
                                     d_min, d_max)
             for ang in angles]
    picks = np.zeros(count, dtype=int)
    fitted_rows = np.empty((count, y.size), dtype=complex)
    coef = np.zeros(0, dtype=complex)
    rank_deficient = False
    residual = y.copy()

    def refit(fitted: int) -> float:
        nonlocal coef, rank_deficient, residual
        effective = (fitted_rows[:fitted] * w).T
        coef, _, rank, _ = np.linalg.lstsq(effective, y, rcond=None)
        if rank < fitted:
            rank_deficient = True
        residual = y - effective @ coef
        return float(np.linalg.norm(residual))

    for i in range(count):
        rows = grids[i].row_atoms
        scores = kernels.correlation_scores(rows, w, residual)
        picks[i] = int(np.argmax(scores))
        fitted_rows[i] = rows[picks[i]]
        norm = refit(i + 1)

    for _ in range(_RESELECTION_SWEEPS):
        changed = False
        for i in range(count):
            rows = grids[i].row_atoms
            loo_residual = residual + coef[i] * (w * fitted_rows[i])
            scores = kernels.correlation_scores(rows, w, loo_residual)
            pick = int(np.argmax(scores))
            if pick == picks[i]:
                continue
            keep_pick, keep_coef = picks[i], coef
            fitted_rows[i] = rows[pick]
            new_norm = refit(count)
            if new_norm < norm * (1.0 - 1e-12):
                picks[i] = pick
                norm = new_norm
                changed = True
            else:
                fitted_rows[i] = rows[keep_pick]
                coef = keep_coef
                residual = y - (fitted_rows * w).T @ coef
        if not changed:
            break

    distances = np.array([grids[i].values[picks[i]] for i in range(count)])
    boundary = np.array([picks[i] in (0, grids[i].size - 1)
                         for i in range(count)])
    info = {
        "boundary": boundary,
        "coefficients": coef,
        "residual_norm": float(np.linalg.norm(residual)),
        "rank_deficient": rank_deficient,
    }
    return distances, info


def refine_angles(frame_ne: ReceivedFrame, angles, distances, cfg: WaveguideConfig,
                  layout: SubarrayLayout, est: EstimatorConfig) -> np.ndarray:
    """Re-select every path's angle with a curvature-corrected dictionary.

    Path p scans the dictionary focused at its own distance estimate against
    the leave-one-out residual: the jointly fitted contributions of all other
    paths are subtracted from the frame first.  A re-selection is kept only
    when it lowers the frame's joint fit residual, so a path whose siblings
    are poorly fitted cannot be dragged off a good estimate by their
    subtraction error.  Other paths' angles are masked at half the pursuit's
    exclusion width.  Updated angles feed into the subtraction for the paths
    refined after them.
    """
    layout.validate(cfg)
    _check_frame(frame_ne, layout.near_indices(), "near-end")
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    distances = np.atleast_1d(np.asarray(distances, dtype=float))
    if angles.shape != distances.shape:
        raise ValueError("one distance estimate per angle required")
    w = _frame_weights(cfg, frame_ne)
    y = np.asarray(frame_ne.y, dtype=complex)
    pos = geometry.positions_for(cfg, layout.near_indices())

    model_rows = np.empty((angles.size, y.size), dtype=complex)
    for i in range(angles.size):
        model_rows[i] = kernels.second_order_atoms(
            cfg.wavelength_m, pos, np.asarray([angles[i]]), distances[i])[0]

    def joint_norm() -> float:
        effective = (model_rows * w).T
        coef, *_ = np.linalg.lstsq(effective, y, rcond=None)
        return float(np.linalg.norm(y - effective @ coef))

    refined = angles.copy()
    step = np.pi / est.angle_grid_size
    for i in range(angles.size):
        grid = build_near_dict_secondorder(cfg, distances[i], layout.near_count,
                                           est.angle_grid_size)
        if angles.size > 1:
            effective = (model_rows * w).T
            coef, *_ = np.linalg.lstsq(effective, y, rcond=None)
            others = effective @ coef - coef[i] * effective[:, i]
            target = y - others
        else:
            target = y
        scores = kernels.correlation_scores(grid.row_atoms, w, target)
        excl = est.exclusion_bins(layout.near_count) // 2
        if excl:
            for j in range(angles.size):
                if j == i:
                    continue
                at = int(round((refined[j] + np.pi / 2.0) / step))
                scores[max(0, at - excl):at + excl + 1] = -1.0
            if scores.max() < 0.0:
                raise ValueError("angle exclusion leaves no candidate to select")
        pick = int(np.argmax(scores))
        if angles.size > 1:
            before = joint_norm()
            keep = model_rows[i].copy()
            model_rows[i] = grid.row_atoms[pick]
            if joint_norm() < before * (1.0 + 1e-12):
                refined[i] = grid.values[pick]
            else:
                model_rows[i] = keep
        else:
            refined[i] = grid.values[pick]
            model_rows[i] = grid.row_atoms[pick]
    return refined


def refine_distances(frame_fe: ReceivedFrame, refined_angles, cfg: WaveguideConfig,
                     layout: SubarrayLayout, est: EstimatorConfig
                     ) -> tuple[np.ndarray, dict]:
    """Distance re-match at the refined angles; same contract as coarse_distances."""
    return coarse_distances(frame_fe, refined_angles, cfg, layout, est)


# estimate_gains re-solves with a growing full-array energy penalty once the
# plain LS gains imply a reconstruction carrying more than this multiple of
# the energy the pilot slots themselves measured.  Channels drawn from the
# default scene law stay under 4x (the steering amplitude taper varies
# mildly across the array, sources sitting several meters out); only
# near-collinear or misplaced fitted atoms overshoot the bound, and those
# fits extrapolate garbage onto the unsampled antennas.  Sources closer than
# a couple of meters can exceed the bound legitimately, so the guard is a
# stabilizer for the surveyed operating range, not a universal invariant.
_ENERGY_GUARD_FACTOR = 8.0


def estimate_gains(frame_ne: ReceivedFrame, frame_fe: ReceivedFrame, angles, distances,
                   cfg: WaveguideConfig, layout: SubarrayLayout
                   ) -> tuple[np.ndarray, dict]:
    """Joint minimum-norm LS fit of all path gains on the stacked frames.

    The design matrix stacks, per path, the exact steering entries at the
    near-end and far-end antennas scaled by the per-slot waveguide phase and
    pilot.  When the fitted gains would reconstruct a full-array channel
    whose energy exceeds many times the energy visible in the pilot slots,
    the fit is repeated with a ridge on the full-array reconstruction until
    the energy is plausible again; consistent well-posed systems never
    trigger this and keep the exact LS solution.  Info reports the design's
    condition number, whether the fit was rank-deficient (for example two
    paths collapsing onto the same grid point), and whether the energy guard
    engaged.
    """
    layout.validate(cfg)
    _check_frame(frame_ne, layout.near_indices(), "near-end")
    _check_frame(frame_fe, layout.far_indices(), "far-end")
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    distances = np.atleast_1d(np.asarray(distances, dtype=float))
    if angles.shape != distances.shape:
        raise ValueError("one distance per angle required")
    if angles.size > layout.slot_count:
        raise ValueError("more paths than pilot slots")
    pos = np.concatenate([geometry.positions_for(cfg, layout.near_indices()),
                          geometry.positions_for(cfg, layout.far_indices())])
    y = np.concatenate([frame_ne.y, frame_fe.y])
    w = np.concatenate([_frame_weights(cfg, frame_ne), _frame_weights(cfg, frame_fe)])

    columns = np.empty((angles.size, pos.size), dtype=complex)
    for i in range(angles.size):
        columns[i] = kernels.near_field_atoms(cfg.wavelength_m, pos, angles[i],
                                              np.asarray([distances[i]]))[0]
    design = (columns * w).T
    gains, _, rank, sv = np.linalg.lstsq(design, y, rcond=None)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0.0 else float("inf")

    full_pos = geometry.candidate_positions(cfg)
    full_atoms = np.empty((angles.size, full_pos.size), dtype=complex)
    for i in range(angles.size):
        full_atoms[i] = kernels.near_field_atoms(cfg.wavelength_m, full_pos,
                                                 angles[i],
                                                 np.asarray([distances[i]]))[0]
    budget = _ENERGY_GUARD_FACTOR * float(np.mean(np.abs(y / w) ** 2)) * full_pos.size
    guarded = False
    if float(np.linalg.norm(full_atoms.T @ gains) ** 2) > budget:
        guarded = True
        gram = design.conj().T @ design
        gram_full = full_atoms.conj() @ full_atoms.T
        rhs = design.conj().T @ y
        ridge = 1e-6 * float(np.trace(gram).real / max(np.trace(gram_full).real,
                                                       np.finfo(float).tiny))
        for _ in range(64):
            gains = np.linalg.solve(gram + ridge * gram_full, rhs)
            if float(np.linalg.norm(full_atoms.T @ gains) ** 2) <= budget:
                break
            ridge *= 10.0
    info = {
        "condition_number": cond,
        "rank_deficient": rank < angles.size,
        "residual_norm": float(np.linalg.norm(y - design @ gains)),
        "energy_guarded": guarded,
    }
    return gains, info


@dataclass(frozen=True)
class PathEstimate:
    """Fitted parameter triplet for one path."""

    angle_rad: float
    distance_m: float
    gain: complex


@dataclass
class FullEstimate:
    """Pipeline output: fitted paths, reconstructed channel, diagnostics."""

    paths: tuple[PathEstimate, ...]
    channel: np.ndarray
    diagnostics: dict


def reconstruct(cfg: WaveguideConfig, paths) -> np.ndarray:
    """Rebuild the full-array channel from fitted (angle, distance, gain) triplets."""
    positions = geometry.candidate_positions(cfg)
    h = np.zeros(cfg.antenna_count, dtype=complex)
    for p in paths:
        atom = kernels.near_field_atoms(cfg.wavelength_m, positions, p.angle_rad,
                                        np.asarray([p.distance_m]))[0]
        h += p.gain * atom
    return h


def ls_full_csi(frame: ReceivedFrame, cfg: WaveguideConfig) -> np.ndarray:
    """Per-antenna least squares over a full-array frame: h_m = y_m / (w_m s_m)."""
    expected = np.arange(1, cfg.antenna_count + 1)
    if not np.array_equal(frame.indices, expected):
        raise ValueError("LS baseline needs one slot per antenna, in index order")
    if np.any(frame.pilots == 0):
        raise ValueError("pilot symbols must be nonzero")
    w = geometry.radiation_vector(cfg, frame.indices)
    return frame.y / (w * frame.pilots)


def _finish(frame_ne, frame_fe, angles, distances, cfg, layout, diagnostics):
    gains, gain_info = estimate_gains(frame_ne, frame_fe, angles, distances, cfg, layout)
    paths = tuple(PathEstimate(float(a), float(d), complex(g))
                  for a, d, g in zip(angles, distances, gains))
    diagnostics["gain_condition_number"] = gain_info["condition_number"]
    diagnostics["gain_rank_deficient"] = gain_info["rank_deficient"]
    diagnostics["gain_residual_norm"] = gain_info["residual_norm"]
    diagnostics["gain_energy_guarded"] = gain_info["energy_guarded"]
    return FullEstimate(paths=paths, channel=reconstruct(cfg, paths),
                        diagnostics=diagnostics)


def algorithm1(frame_ne: ReceivedFrame, frame_fe: ReceivedFrame, cfg: WaveguideConfig,
               layout: SubarrayLayout, est: EstimatorConfig) -> FullEstimate:
    """Full staged pipeline on one pair of subarray frames.

    Coarse angles, coarse distances, ``est.refinement_passes`` sweeps of
    angle refinement plus distance re-match (0 keeps the coarse estimates),
    then the joint gain fit and full-array reconstruction.
    """
    angles, pursuit = coarse_angles(frame_ne, cfg, layout, est)
    distances, dist_info = coarse_distances(frame_fe, angles, cfg, layout, est)
    diagnostics = {
        "coarse_angles": angles.copy(),
        "coarse_distances": distances.copy(),
        "angle_residual_norms": pursuit.residual_norms,
        "angle_rank_deficient": pursuit.rank_deficient,
        "distance_residual_norm": dist_info["residual_norm"],
        "distance_boundary": dist_info["boundary"],
    }
    for _ in range(est.refinement_passes):
        angles = refine_angles(frame_ne, angles, distances, cfg, layout, est)
        distances, dist_info = refine_distances(frame_fe, angles, cfg, layout, est)
    diagnostics["refined_angles"] = angles.copy()
    diagnostics["refined_distances"] = distances.copy()
    diagnostics["refined_distance_boundary"] = dist_info["boundary"]
    return _finish(frame_ne, frame_fe, angles, distances, cfg, layout, diagnostics)


def oracle_pipeline(frame_ne: ReceivedFrame, frame_fe: ReceivedFrame, true_angles,
                    cfg: WaveguideConfig, layout: SubarrayLayout,
                    est: EstimatorConfig) -> FullEstimate:
    """Distance matching and gain fit with the angles handed in exactly.

    Baseline for how much of the error budget the angle stages consume; pass
    the true angles strongest path first.
    """
    angles = np.atleast_1d(np.asarray(true_angles, dtype=float))
    distances, dist_info = coarse_distances(frame_fe, angles, cfg, layout, est)
    diagnostics = {
        "coarse_distances": distances.copy(),
        "distance_residual_norm": dist_info["residual_norm"],
        "distance_boundary": dist_info["boundary"],
    }
    return _finish(frame_ne, frame_fe, angles, distances, cfg, layout, diagnostics)
