"""Synthetic trajectory generator for tests, demos and fixtures.

Profiles:

* ``constant-screw``    — one fixed screw repeated at every sample;
* ``pure-translation``  — zero alpha, constant linear velocity;
* ``pure-rotation``     — rotation at a fixed rate about a fixed axis
                          through a given point;
* ``slide-lift-pour``   — three segments: a straight slide (near-pure
                          translation), a lift with a slowly precessing
                          rotation axis, and a pour about an axis close to
                          the origin.

Twist samples are evaluated analytically on a uniform progress grid;
optional additive Gaussian noise (standard deviation ``noise_sigma``,
seeded) is applied to all six screw components.  Pose output integrates
the (possibly noisy) twists step by step through the displacement
exponential, so re-extracting twists from the written poses recovers the
generating screws.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import liegroup
from .errors import InvalidSpec
from .ingest import PoseSample, Trajectory
from .screws import ScrewKind

PROFILES = ("constant-screw", "pure-translation", "pure-rotation", "slide-lift-pour")


@dataclass(frozen=True)
class SynthSpec:
    profile: str
    n_samples: int = 240
    duration: float = 2.8
    noise_sigma: float = 0.0
    seed: int = 0
    kind: ScrewKind = ScrewKind.TWIST
    # constant-screw parameters (alpha, beta)
    screw: tuple[float, ...] = (0.0, 0.0, 1.0, 0.1, 0.0, 0.0)
    # pure-translation parameter
    velocity: tuple[float, float, float] = (0.5, 0.0, 0.0)
    # pure-rotation parameters
    axis_point: tuple[float, float, float] = (0.0, 0.0, 0.0)
    axis_dir: tuple[float, float, float] = (0.0, 0.0, 1.0)
    rate: float = 1.0

    def validate(self) -> None:
        if self.profile not in PROFILES:
            raise InvalidSpec(f"unknown profile {self.profile!r}; choose from {PROFILES}")
        if self.n_samples < 3:
            raise InvalidSpec(f"need at least 3 samples, got {self.n_samples}")
        if not self.duration > 0.0:
            raise InvalidSpec(f"duration must be > 0, got {self.duration}")
        if self.noise_sigma < 0.0:
            raise InvalidSpec(f"noise sigma must be >= 0, got {self.noise_sigma}")
        if len(self.screw) != 6:
            raise InvalidSpec("constant screw needs 6 components")
        if self.profile == "pure-rotation":
            if np.linalg.norm(self.axis_dir) == 0.0:
                raise InvalidSpec("rotation axis direction must be nonzero")


def _slide_lift_pour(t: np.ndarray, duration: float) -> tuple[np.ndarray, np.ndarray]:
    """Piecewise twist profile; segment boundaries at T/4 and 4T/7."""
    t1 = duration / 4.0
    t2 = duration * 4.0 / 7.0
    alphas = np.zeros((len(t), 3))
    betas = np.zeros((len(t), 3))

    slide = t < t1
    betas[slide] = (0.5, 0.0, 0.0)

    lift = (t >= t1) & (t < t2)
    tau = t[lift] - t1
    ax = np.column_stack([np.cos(1.2 * tau), np.sin(1.2 * tau),
                          0.25 * np.ones_like(tau)])
    ax /= np.linalg.norm(ax, axis=1, keepdims=True)
    alphas[lift] = 0.35 * ax
    betas[lift] = (0.0, 0.0, 0.45)

    pour = t >= t2
    tau = t[pour] - t2
    ax = np.column_stack([0.18 * np.sin(0.9 * tau), np.ones_like(tau),
                          0.18 * np.cos(0.9 * tau)])
    ax /= np.linalg.norm(ax, axis=1, keepdims=True)
    alphas[pour] = 0.9 * ax
    # axis passes through c: velocity of the origin point is c x omega
    c = np.array([0.15, 0.0, 0.1])
    betas[pour] = np.cross(c, alphas[pour])

    return alphas, betas


def _profile_samples(spec: SynthSpec, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(t)
    if spec.profile == "constant-screw":
        s = np.asarray(spec.screw, dtype=float)
        return np.tile(s[:3], (n, 1)), np.tile(s[3:], (n, 1))
    if spec.profile == "pure-translation":
        return np.zeros((n, 3)), np.tile(np.asarray(spec.velocity, dtype=float), (n, 1))
    if spec.profile == "pure-rotation":
        e = np.asarray(spec.axis_dir, dtype=float)
        omega = spec.rate * e / np.linalg.norm(e)
        c = np.asarray(spec.axis_point, dtype=float)
        return np.tile(omega, (n, 1)), np.tile(np.cross(c, omega), (n, 1))
    return _slide_lift_pour(t, spec.duration)


def synth_trajectory(spec: SynthSpec) -> Trajectory:
    """Screw-sample trajectory for the given spec (deterministic per seed)."""
    spec.validate()
    t = np.linspace(0.0, spec.duration, spec.n_samples)
    alphas, betas = _profile_samples(spec, t)
    if spec.noise_sigma > 0.0:
        rng = np.random.default_rng(spec.seed)
        noise = rng.normal(0.0, spec.noise_sigma, (spec.n_samples, 6))
        alphas = alphas + noise[:, :3]
        betas = betas + noise[:, 3:]
    return Trajectory(t, alphas, betas, spec.kind)


def synth_pose_trajectory(spec: SynthSpec) -> tuple[np.ndarray, list[PoseSample]]:
    """Pose samples obtained by integrating the profile's world-frame twists.

    Each step applies the displacement exponential of the twist held over
    the step, composed on the left (world frame).  Noise, when requested,
    perturbs the twists before integration.
    """
    spec.validate()
    if spec.kind is not ScrewKind.TWIST:
        raise InvalidSpec("pose output is only defined for twist trajectories")
    traj = synth_trajectory(spec)
    t = traj.progress
    R = np.eye(3)
    p = np.zeros(3)
    poses = [PoseSample(p, liegroup.matrix_to_quat(R))]
    for i in range(len(t) - 1):
        dt = t[i + 1] - t[i]
        R_d, p_d = liegroup.se3_exp(traj.alphas[i] * dt, traj.betas[i] * dt)
        R = R_d @ R
        p = R_d @ p + p_d
        poses.append(PoseSample(p, liegroup.matrix_to_quat(R)))
    return t, poses
