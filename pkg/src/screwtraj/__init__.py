"""Coordinate-invariant local representation of twist and wrench trajectories.

The package turns discrete rigid-body motion (twist) and interaction-force
(wrench) trajectories into a coordinate-invariant form: each local window
of three consecutive screws factors uniquely into a screw transform (the
frame-dependent part) and a twice upper-triangular 6x3 invariant matrix.
A singularity-robust variant keeps the factorization total near pure
translations and parallel-axis configurations.
"""

from .decomposition import (Decomposition, InvariantMatrix, Regularity,
                            REGULARITY_RTOL, check_regularity, compute_u2,
                            orient_from_alpha, reconstruct, solve_p_star,
                            su_decompose)
from .errors import (DegenerateColumns, DegenerateU2, InvalidSpec,
                     IrregularPair, IrregularWindow, MixedKind,
                     NonMonotoneProgress, NonPositiveStep, ParseError,
                     ScrewTrajError, Singular, TooShort, ZeroAlpha)
from .geometry import (AxisPair, GeometryReport, alpha_relations, axis_pair,
                       axis_offset_projected, common_normal_points,
                       verify_su_geometry)
from .ingest import (FileFormat, LocalWindow, PoseSample, Trajectory,
                     build_windows, load_trajectory, pose_log_twist,
                     save_pose_csv, save_screw_csv)
from .regularization import (RegularizationConfig, epsilon_objective,
                             procrustes_objective, procrustes_rc,
                             regularize_p, su_decompose_regularized,
                             triangularize_u2)
from .screws import (Screw, ScrewKind, ScrewTransform, axis_direction,
                     closest_point, compose, inverse, skew, transform_screw)
from .synth import PROFILES, SynthSpec, synth_pose_trajectory, synth_trajectory

__version__ = "0.1.0"

__all__ = [
    "Decomposition", "InvariantMatrix", "Regularity", "REGULARITY_RTOL",
    "check_regularity", "compute_u2", "orient_from_alpha", "reconstruct",
    "solve_p_star", "su_decompose",
    "DegenerateColumns", "DegenerateU2", "InvalidSpec", "IrregularPair",
    "IrregularWindow", "MixedKind", "NonMonotoneProgress", "NonPositiveStep",
    "ParseError", "ScrewTrajError", "Singular", "TooShort", "ZeroAlpha",
    "AxisPair", "GeometryReport", "alpha_relations", "axis_pair",
    "axis_offset_projected", "common_normal_points", "verify_su_geometry",
    "FileFormat", "LocalWindow", "PoseSample", "Trajectory", "build_windows",
    "load_trajectory", "pose_log_twist", "save_pose_csv", "save_screw_csv",
    "RegularizationConfig", "epsilon_objective", "procrustes_objective",
    "procrustes_rc", "regularize_p", "su_decompose_regularized",
    "triangularize_u2",
    "Screw", "ScrewKind", "ScrewTransform", "axis_direction", "closest_point",
    "compose", "inverse", "skew", "transform_screw",
    "PROFILES", "SynthSpec", "synth_pose_trajectory", "synth_trajectory",
    "__version__",
]
