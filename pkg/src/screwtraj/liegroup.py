"""Rotation and rigid-displacement helpers (SO(3)/SE(3) exp and log).

Internal numerical support for twist extraction and synthetic pose
generation.  Conventions:

* rotation vectors are axis * angle, in radians;
* the displacement log of (R, p) returns (phi, rho) with R = exp([phi]x)
  and p = V(phi) rho, where V is the left Jacobian of SO(3);
* quaternions are (w, x, y, z), unit norm.
"""

from __future__ import annotations

import numpy as np

from .screws import skew

# Below this angle the closed forms lose digits to cancellation; switch to
# second-order Taylor expansions.
_SMALL_ANGLE = 1e-5


def vee(W: np.ndarray) -> np.ndarray:
    """Inverse of skew(): extract the 3-vector of a skew-symmetric matrix."""
    return 0.5 * np.array([W[2, 1] - W[1, 2], W[0, 2] - W[2, 0], W[1, 0] - W[0, 1]])


def so3_exp(phi: np.ndarray) -> np.ndarray:
    """Rodrigues formula; Taylor series below the small-angle threshold."""
    phi = np.asarray(phi, dtype=float)
    theta = float(np.linalg.norm(phi))
    W = skew(phi)
    if theta < _SMALL_ANGLE:
        # sin t / t and (1 - cos t)/t^2 to second order
        a = 1.0 - theta * theta / 6.0
        b = 0.5 - theta * theta / 24.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / (theta * theta)
    return np.eye(3) + a * W + b * (W @ W)


def so3_log(R: np.ndarray) -> np.ndarray:
    """Rotation vector of R, robust at both ends of [0, pi].

    Near zero a second-order Taylor expansion of the vee part is used; near
    pi the axis is recovered from the largest diagonal element of
    (R + I)/2, which stays well conditioned where R - R^T vanishes.
    """
    R = np.asarray(R, dtype=float)
    w = 0.5 * vee(R - R.T)  # = sin(theta) * axis
    cos_t = np.clip((np.trace(R) - 1.0) * 0.5, -1.0, 1.0)
    sin_t = float(np.linalg.norm(w))
    theta = float(np.arctan2(sin_t, cos_t))

    if theta < _SMALL_ANGLE:
        return w * (1.0 + theta * theta / 6.0)

    if np.pi - theta < _SMALL_ANGLE:
        # The symmetric part (R + R^T)/2 = cos(t) I + (1 - cos(t)) a a^T is
        # well conditioned at t ~ pi (where R - R^T vanishes); read the axis
        # off the largest-diagonal column of the rank-one remainder.
        B = (0.5 * (R + R.T) - cos_t * np.eye(3)) / (1.0 - cos_t)
        i = int(np.argmax(np.diag(B)))
        axis = B[:, i] / np.sqrt(max(B[i, i], np.finfo(float).tiny))
        axis = axis / np.linalg.norm(axis)
        # Keep continuity with the generic branch when sin(theta) is not
        # exactly zero; otherwise fix the sign deterministically.
        if sin_t > 1e-12:
            if np.dot(axis, w) < 0.0:
                axis = -axis
        elif axis[int(np.argmax(np.abs(axis)))] < 0.0:
            axis = -axis
        return theta * axis

    return w * (theta / sin_t)


def left_jacobian(phi: np.ndarray) -> np.ndarray:
    """V(phi) with exp([phi]x + translation) structure: p = V rho."""
    phi = np.asarray(phi, dtype=float)
    theta = float(np.linalg.norm(phi))
    W = skew(phi)
    if theta < _SMALL_ANGLE:
        b = 0.5 - theta * theta / 24.0
        c = 1.0 / 6.0 - theta * theta / 120.0
    else:
        b = (1.0 - np.cos(theta)) / (theta * theta)
        c = (theta - np.sin(theta)) / (theta ** 3)
    return np.eye(3) + b * W + c * (W @ W)


def left_jacobian_inv(phi: np.ndarray) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    theta = float(np.linalg.norm(phi))
    W = skew(phi)
    if theta < _SMALL_ANGLE:
        c = 1.0 / 12.0 + theta * theta / 720.0
    else:
        c = 1.0 / (theta * theta) - (1.0 + np.cos(theta)) / (2.0 * theta * np.sin(theta))
    return np.eye(3) - 0.5 * W + c * (W @ W)


def se3_exp(phi: np.ndarray, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Displacement (R, p) of the exponential coordinates (phi, rho)."""
    return so3_exp(phi), left_jacobian(phi) @ np.asarray(rho, dtype=float)


def se3_log(R: np.ndarray, p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exponential coordinates (phi, rho) of the displacement (R, p)."""
    phi = so3_log(R)
    return phi, left_jacobian_inv(phi) @ np.asarray(p, dtype=float)


def quat_to_matrix(q) -> np.ndarray:
    """Rotation matrix of a unit quaternion (w, x, y, z)."""
    w, x, y, z = np.asarray(q, dtype=float).reshape(4)
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def matrix_to_quat(R: np.ndarray) -> np.ndarray:
    """Unit quaternion (w, x, y, z) of a rotation matrix, w >= 0."""
    R = np.asarray(R, dtype=float)
    if R[2, 2] < 0:
        if R[0, 0] > R[1, 1]:
            t = 1 + R[0, 0] - R[1, 1] - R[2, 2]
            q = [R[2, 1] - R[1, 2], t, R[1, 0] + R[0, 1], R[0, 2] + R[2, 0]]
        else:
            t = 1 - R[0, 0] + R[1, 1] - R[2, 2]
            q = [R[0, 2] - R[2, 0], R[1, 0] + R[0, 1], t, R[2, 1] + R[1, 2]]
    else:
        if R[0, 0] < -R[1, 1]:
            t = 1 - R[0, 0] - R[1, 1] + R[2, 2]
            q = [R[1, 0] - R[0, 1], R[0, 2] + R[2, 0], R[2, 1] + R[1, 2], t]
        else:
            t = 1 + R[0, 0] + R[1, 1] + R[2, 2]
            q = [t, R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]]
    q = np.asarray(q, dtype=float) * (0.5 / np.sqrt(t))
    if q[0] < 0:
        q = -q
    return q
