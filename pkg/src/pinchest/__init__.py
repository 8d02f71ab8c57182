"""Channel estimation for waveguide-fed pinching-antenna arrays.

Synthesizes near-field multipath channels seen along a dielectric waveguide,
simulates sequential single-antenna pilot reception, and estimates the full
CSI either per antenna (least squares) or geometrically from two short
subarrays (matching-pursuit pipeline with angle refinement).
"""

from . import kernels
from .estimator import (DegenerateObservationError, EstimatorConfig, FullEstimate,
                        PathEstimate, algorithm1, build_far_dict_distance,
                        build_near_dict_firstorder, build_near_dict_secondorder,
                        coarse_angles, coarse_distances, estimate_gains, ls_full_csi,
                        omp, oracle_pipeline, reconstruct, refine_angles,
                        refine_distances)
from .geometry import (Path, PathSet, Scatterer, Scene, WaveguideConfig,
                       candidate_positions, distance_to_position,
                       fresnel_critical_count, path_gains, radiation_vector,
                       scatterer_user_distance, steering_vector, synthesize_channel,
                       taylor_distance)
from .harness import (ExperimentConfig, SceneLaw, SweepRow, TrialRecord, emit_csv,
                      load_config, run_trial, sample_scene, sweep_power,
                      sweep_subarray)
from .metrics import RateConfig, achievable_rate, nmse, select_antenna
from .pilots import (ReceivedFrame, SubarrayLayout, TrialRng, dbm_to_watts,
                     make_pilot_symbols, receive_sequential)

__version__ = "0.1.0"


def kernel_backend() -> str:
    """Name of the numeric kernel backend in use ("cython" or "numpy")."""
    return kernels.backend_name()
