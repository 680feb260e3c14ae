"""Shared helpers for the test suite."""

import numpy as np

from screwtraj import (LocalWindow, Screw, ScrewKind, ScrewTransform,
                       Trajectory, check_regularity, Regularity, skew,
                       su_decompose)
from screwtraj.liegroup import matrix_to_quat, quat_to_matrix


def rand_rotation(rng) -> np.ndarray:
    """Uniform random rotation (normalized 4-normal quaternion)."""
    q = rng.normal(size=4)
    return quat_to_matrix(q / np.linalg.norm(q))


def rand_transform(rng, tmax: float = 1.0) -> ScrewTransform:
    return ScrewTransform(rand_rotation(rng), rng.uniform(-tmax, tmax, 3))


def pure_rotation_transform(rng) -> ScrewTransform:
    return ScrewTransform(rand_rotation(rng), np.zeros(3))


def window_from_matrix(xi: np.ndarray, kind=ScrewKind.TWIST) -> LocalWindow:
    xi = np.asarray(xi, dtype=float).reshape(6, 3)
    return LocalWindow(Screw(xi[:3, 0], xi[3:, 0], kind),
                       Screw(xi[:3, 1], xi[3:, 1], kind),
                       Screw(xi[:3, 2], xi[3:, 2], kind))


def rand_regular_window(rng, scale: float = 1.0) -> LocalWindow:
    """Generic random window, rejection-sampled to be regular."""
    while True:
        w = window_from_matrix(rng.normal(size=(6, 3)) * scale)
        if check_regularity(w) is Regularity.REGULAR:
            return w


def rand_valid_pair(rng, tmax: float = 10.0):
    """Random (S, U) with the uniqueness conventions u11, u22 > 0."""
    S = rand_transform(rng, tmax)
    U1 = np.triu(rng.normal(size=(3, 3)))
    U1[0, 0] = abs(U1[0, 0]) + 0.1
    U1[1, 1] = abs(U1[1, 1]) + 0.1
    U2 = np.triu(rng.normal(size=(3, 3)))
    return S, np.vstack([U1, U2])


def matrix6(S: ScrewTransform) -> np.ndarray:
    """Explicit 6x6 screw-transformation matrix (test oracle only)."""
    out = np.zeros((6, 6))
    out[:3, :3] = S.rotation
    out[3:, 3:] = S.rotation
    out[3:, :3] = skew(S.position) @ S.rotation
    return out


def relmax(x, y) -> float:
    """Max absolute deviation of x from y, relative to y's largest entry."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300))


def fibonacci_sphere(n: int, radius: float) -> np.ndarray:
    """Quasi-uniform n-point grid on the sphere of the given radius."""
    i = np.arange(n) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / n)
    azimuth = np.pi * (1.0 + 5.0 ** 0.5) * i
    return radius * np.column_stack([np.cos(azimuth) * np.sin(polar),
                                     np.sin(azimuth) * np.sin(polar),
                                     np.cos(polar)])


def spiral_trajectory(n: int, kind=ScrewKind.TWIST) -> Trajectory:
    """Deterministic everywhere-regular trajectory (precessing alpha)."""
    t = np.linspace(0.0, 1.0, n)
    a = np.column_stack([np.cos(3 * t), np.sin(3 * t), 0.4 + 0.3 * np.sin(7 * t)])
    a *= (1.0 + 0.5 * np.sin(5 * t))[:, None]
    b = np.column_stack([np.sin(2 * t), np.cos(4 * t), 0.2 * t]) + 0.3
    return Trajectory(t, a, b, kind)


def transform_pose_row(values, G: ScrewTransform):
    """Apply a fixed world-frame transform to one pose-CSV row."""
    p = G.rotation @ np.asarray(values[1:4]) + G.position
    q = matrix_to_quat(G.rotation @ quat_to_matrix(values[4:8]))
    return [values[0], *p, *q]


def transform_pose_file(src, dst, G: ScrewTransform) -> None:
    from pathlib import Path
    lines = Path(src).read_text(encoding="utf-8").strip().splitlines()
    out = [lines[0]]
    for line in lines[1:]:
        vals = [float(s) for s in line.split(",")]
        out.append(",".join("{:.17g}".format(v) for v in transform_pose_row(vals, G)))
    Path(dst).write_text("\n".join(out) + "\n", encoding="utf-8")
