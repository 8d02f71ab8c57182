"""Monte Carlo harness: scene sampling, per-trial runs, sweeps, CSV export.

Reproducibility contract: every random draw comes from a generator seeded by
(base_seed, purpose, indices), so a sweep's output is a pure function of its
configuration and seed no matter how trials are scheduled.  Scenes are keyed
by trial index only, never by sweep point: trial t sees the same scene at
every point of a sweep, so cross-point comparisons are paired.  Noise is
keyed by (sweep point, trial) and drawn independently at each point; the
sparse and LS pilot frames use separate noise lanes within a trial.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import time
import typing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import estimator, geometry, metrics, pilots
from .estimator import EstimatorConfig
from .geometry import Scatterer, Scene, WaveguideConfig
from .pilots import SubarrayLayout, TrialRng, dbm_to_watts

METHODS = ("LS", "Coarse", "Refined", "Oracle", "PerfectCSI")

# lane ids for the per-trial random streams
_SCENE_STREAM = 1
_NOISE_STREAM = 2


@dataclass(frozen=True)
class SceneLaw:
    """Distribution the per-trial scenes are drawn from.

    The user sits at a fixed distance with a uniform angle; each scatterer
    draws an independent uniform distance and angle.  ``nlos_gain_scale``
    multiplies every scatterer cross-section, so 0 < scale < 1 weakens all
    bounce paths relative to the line of sight.
    """

    user_distance_m: float = 5.0
    scatterer_count: int = 2
    scatterer_range_m: tuple[float, float] = (3.0, 10.0)
    angle_range_rad: tuple[float, float] = (-np.pi / 2, np.pi / 2)
    rcs_m2: float = 1.0
    nlos_gain_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "scatterer_range_m", tuple(self.scatterer_range_m))
        object.__setattr__(self, "angle_range_rad", tuple(self.angle_range_rad))
        if self.user_distance_m <= 0.0:
            raise ValueError("user distance must be positive")
        if self.scatterer_count < 0:
            raise ValueError("scatterer count must be nonnegative")
        lo, hi = self.scatterer_range_m
        if not 0.0 < lo <= hi:
            raise ValueError("scatterer distance range must satisfy 0 < lo <= hi")
        lo, hi = self.angle_range_rad
        if not -np.pi / 2 <= lo <= hi <= np.pi / 2:
            raise ValueError("angle range must sit inside [-pi/2, pi/2]")
        if self.rcs_m2 <= 0.0 or self.nlos_gain_scale <= 0.0:
            raise ValueError("cross-section and gain scale must be positive")


def sample_scene(rng: np.random.Generator, law: SceneLaw) -> Scene:
    """Draw one scene: user angle first, then each scatterer's (distance, angle)."""
    a_lo, a_hi = law.angle_range_rad
    user_angle = float(rng.uniform(a_lo, a_hi))
    scatterers = []
    for _ in range(law.scatterer_count):
        dist = float(rng.uniform(*law.scatterer_range_m))
        ang = float(rng.uniform(a_lo, a_hi))
        scatterers.append(Scatterer(dist, ang, law.rcs_m2 * law.nlos_gain_scale))
    return Scene(law.user_distance_m, user_angle, tuple(scatterers))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; defaults reproduce the reference setup."""

    waveguide: WaveguideConfig = WaveguideConfig()
    scene: SceneLaw = SceneLaw()
    layout: SubarrayLayout = SubarrayLayout()
    estimator: EstimatorConfig = EstimatorConfig()
    noise_dbm: float = -100.0
    pilot_powers_dbm: tuple[float, ...] = (0.0, 10.0, 20.0, 30.0, 40.0)
    comm_power_dbm: float = 40.0
    subarray_splits: tuple[tuple[int, int], ...] = ((10, 50), (20, 40), (30, 30),
                                                    (40, 20), (50, 10))
    trials: int = 200
    base_seed: int = 1
    out: str = "results.csv"
    methods: tuple[str, ...] = METHODS

    def __post_init__(self):
        object.__setattr__(self, "pilot_powers_dbm", tuple(self.pilot_powers_dbm))
        object.__setattr__(self, "subarray_splits",
                           tuple(tuple(s) for s in self.subarray_splits))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.pilot_powers_dbm:
            raise ValueError("need at least one pilot power")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}; valid: {METHODS}")
        for split in self.subarray_splits:
            if len(split) != 2 or split[0] < 1 or split[1] < 1:
                raise ValueError("subarray splits must be pairs of positive counts")
        self.layout.validate(self.waveguide)

    def resolved_estimator(self) -> EstimatorConfig:
        """Estimator config with the pursuit order defaulted to P + 1."""
        if self.estimator.pursuit_order is not None:
            return self.estimator
        return dataclasses.replace(self.estimator,
                                   pursuit_order=self.scene.scatterer_count + 1)


def _build_dataclass(cls, data, where):
    if not isinstance(data, dict):
        raise ValueError(f"{where}: expected an object")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(fields)
    if unknown:
        raise ValueError(f"{where}: unknown keys {sorted(unknown)}")
    kwargs = {}
    for name, value in data.items():
        if isinstance(value, dict):
            nested = _NESTED.get((cls, name))
            if nested is None:
                raise ValueError(f"{where}.{name}: unexpected object")
            value = _build_dataclass(nested, value, f"{where}.{name}")
        elif isinstance(value, list):
            value = tuple(tuple(v) if isinstance(v, list) else v for v in value)
        kwargs[name] = value
    return cls(**kwargs)


_NESTED = {
    (ExperimentConfig, "waveguide"): WaveguideConfig,
    (ExperimentConfig, "scene"): SceneLaw,
    (ExperimentConfig, "layout"): SubarrayLayout,
    (ExperimentConfig, "estimator"): EstimatorConfig,
}


def config_from_dict(data: dict) -> ExperimentConfig:
    """Build a config from a plain dict, rejecting unknown keys at every level."""
    return _build_dataclass(ExperimentConfig, data, "config")


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


@dataclass
class TrialRecord:
    """One trial's per-method outcomes plus the shared scene facts."""

    trial: int
    power_dbm: float
    scene: Scene
    channel_norm_sq: float
    nmse: dict
    antenna: dict
    rate: dict
    seconds: dict
    errors: dict


def run_trial(config: ExperimentConfig, trial_index: int,
              power_dbm: float | None = None, point_index: int = 0) -> TrialRecord:
    """Run every configured method once on a freshly drawn scene.

    The scene depends only on (base_seed, trial_index); the noise draws also
    key on ``point_index``, which sweeps set to their point number so that
    each sweep point sees fresh noise on the same scenes.  The sparse methods
    share one near+far pilot frame pair; the LS baseline gets its own
    full-array frame with the same total pilot budget and an independent
    noise stream.  Method failures are recorded, not raised.
    """
    cfg = config.waveguide
    layout = config.layout
    if power_dbm is None:
        power_dbm = config.pilot_powers_dbm[0]
    q = dbm_to_watts(power_dbm)
    sigma2 = dbm_to_watts(config.noise_dbm)

    scene_rng = TrialRng(config.base_seed, _SCENE_STREAM).generator(trial_index)
    scene = sample_scene(scene_rng, config.scene)
    h = geometry.synthesize_channel(cfg, scene)
    noise_rng = TrialRng(config.base_seed, _NOISE_STREAM)

    est = config.resolved_estimator()
    rate_cfg = metrics.RateConfig(dbm_to_watts(config.comm_power_dbm), sigma2)
    record = TrialRecord(trial=trial_index, power_dbm=float(power_dbm), scene=scene,
                         channel_norm_sq=float(np.linalg.norm(h) ** 2),
                         nmse={}, antenna={}, rate={}, seconds={}, errors={})

    needs_sparse = {"Coarse", "Refined", "Oracle"} & set(config.methods)
    frame_ne = frame_fe = None
    if needs_sparse:
        symbols = pilots.make_pilot_symbols(q, layout.slot_count)
        rng = noise_rng.generator(point_index, trial_index, 0)
        frame_ne = pilots.receive_sequential(cfg, h, layout.near_indices(),
                                             symbols[:layout.near_count], sigma2, rng)
        frame_fe = pilots.receive_sequential(cfg, h, layout.far_indices(),
                                             symbols[layout.near_count:], sigma2, rng)

    def run(name, fn):
        start = time.perf_counter()
        try:
            h_hat = fn()
        except Exception as exc:  # noqa: BLE001 - a failed method must not kill the trial
            record.seconds[name] = time.perf_counter() - start
            record.errors[name] = f"{type(exc).__name__}: {exc}"
            record.nmse[name] = float("nan")
            record.rate[name] = float("nan")
            return
        record.seconds[name] = time.perf_counter() - start
        record.nmse[name] = metrics.nmse(h_hat, h)
        chosen = metrics.select_antenna(h_hat)
        record.antenna[name] = chosen
        record.rate[name] = metrics.achievable_rate(h, chosen, rate_cfg)

    for name in config.methods:
        if name == "LS":
            def ls():
                full = np.arange(1, cfg.antenna_count + 1)
                symbols_ls = pilots.make_pilot_symbols(q, cfg.antenna_count)
                rng_ls = noise_rng.generator(point_index, trial_index, 1)
                frame = pilots.receive_sequential(cfg, h, full, symbols_ls, sigma2, rng_ls)
                return estimator.ls_full_csi(frame, cfg)
            run(name, ls)
        elif name == "Coarse":
            coarse_est = dataclasses.replace(est, refinement_passes=0)
            run(name, lambda: estimator.algorithm1(frame_ne, frame_fe, cfg, layout,
                                                   coarse_est).channel)
        elif name == "Refined":
            run(name, lambda: estimator.algorithm1(frame_ne, frame_fe, cfg, layout,
                                                   est).channel)
        elif name == "Oracle":
            truth = geometry.path_gains(cfg, scene).by_descending_gain()
            run(name, lambda: estimator.oracle_pipeline(
                frame_ne, frame_fe, truth.angles(), cfg, layout, est).channel)
        elif name == "PerfectCSI":
            run(name, lambda: h)
    return record


@dataclass
class SweepRow:
    """One aggregated line of a sweep table."""

    sweep_value: typing.Any
    method: str
    mean_nmse: float
    mean_rate: float
    trials: int
    seed: int


def _trial_star(args):
    config, trial, power, point = args
    return run_trial(config, trial, power_dbm=power, point_index=point)


def _run_point(config: ExperimentConfig, power_dbm: float,
               jobs: int, point_index: int = 0) -> list[TrialRecord]:
    tasks = [(config, t, power_dbm, point_index) for t in range(config.trials)]
    if jobs <= 1:
        return [_trial_star(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_trial_star, tasks, chunksize=chunk))


def _summarize(records: list[TrialRecord], config: ExperimentConfig,
               sweep_value) -> list[SweepRow]:
    rows = []
    for method in config.methods:
        vals_nmse = np.array([r.nmse[method] for r in records])
        vals_rate = np.array([r.rate[method] for r in records])
        rows.append(SweepRow(sweep_value=sweep_value, method=method,
                             mean_nmse=float(np.mean(vals_nmse)),
                             mean_rate=float(np.mean(vals_rate)),
                             trials=config.trials, seed=config.base_seed))
    return rows


def sweep_power(config: ExperimentConfig, jobs: int = 1
                ) -> tuple[list[SweepRow], list[list[TrialRecord]]]:
    """Mean NMSE and rate per method at every configured pilot power."""
    rows: list[SweepRow] = []
    all_records: list[list[TrialRecord]] = []
    for point, power in enumerate(config.pilot_powers_dbm):
        records = _run_point(config, power, jobs, point_index=point)
        rows.extend(_summarize(records, config, float(power)))
        all_records.append(records)
    return rows, all_records


def sweep_subarray(config: ExperimentConfig, power_dbm: float | None = None,
                   jobs: int = 1) -> tuple[list[SweepRow], list[list[TrialRecord]]]:
    """Mean NMSE and rate per method over the configured (near, far) splits.

    Runs at a single pilot power, by default the largest configured one.
    """
    if power_dbm is None:
        power_dbm = max(config.pilot_powers_dbm)
    rows: list[SweepRow] = []
    all_records: list[list[TrialRecord]] = []
    for point, (near, far) in enumerate(config.subarray_splits):
        layout = dataclasses.replace(config.layout, near_count=near, far_count=far)
        split_config = dataclasses.replace(config, layout=layout)
        records = _run_point(split_config, power_dbm, jobs, point_index=point)
        rows.extend(_summarize(records, split_config, f"{near}-{far}"))
        all_records.append(records)
    return rows, all_records


def _format_cell(value) -> str:
    if isinstance(value, float):
        # 17 significant digits so parsing the text recovers the exact float
        return f"{value:.16e}"
    return str(value)


def emit_csv(rows: list[SweepRow], path: str):
    """Write the sweep table; byte-identical output for identical rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["sweep_value", "method", "mean_nmse", "mean_rate",
                         "trials", "seed"])
        for row in rows:
            writer.writerow([_format_cell(row.sweep_value), row.method,
                             _format_cell(row.mean_nmse), _format_cell(row.mean_rate),
                             str(row.trials), str(row.seed)])
