"""Screw algebra: twists, wrenches and the 6x6 screw-transformation group.

A screw is a pair of 3-vectors (alpha, beta).  For twists alpha is the
angular velocity and beta the translational velocity of the point of the
body instantaneously at the expression-frame origin; for wrenches alpha
is the resultant force and beta the torque about that origin.  All algebra
below is kind-agnostic; the kind tag only guards against mixing the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import MixedKind, ZeroAlpha

# Relative tolerance deciding when the axis direction alpha/|alpha| is
# considered undefined.  Scale-free: callers pass the characteristic
# alpha magnitude of their trajectory (1.0 when unknown or all-zero).
DIRECTION_RTOL = 1e-9


class ScrewKind(Enum):
    TWIST = "twist"
    WRENCH = "wrench"


def _vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(3).copy()
    if not np.all(np.isfinite(v)):
        raise ValueError("expected finite 3-vector")
    v.flags.writeable = False
    return v


def _mat33(x) -> np.ndarray:
    m = np.asarray(x, dtype=float).reshape(3, 3).copy()
    if not np.all(np.isfinite(m)):
        raise ValueError("expected finite 3x3 matrix")
    m.flags.writeable = False
    return m


@dataclass(frozen=True)
class Screw:
    """Six-dimensional screw sample (alpha, beta) with a kind tag."""

    alpha: np.ndarray
    beta: np.ndarray
    kind: ScrewKind = ScrewKind.TWIST

    def __post_init__(self):
        object.__setattr__(self, "alpha", _vec3(self.alpha))
        object.__setattr__(self, "beta", _vec3(self.beta))
        if not isinstance(self.kind, ScrewKind):
            raise ValueError(f"bad screw kind: {self.kind!r}")

    def as_vector(self) -> np.ndarray:
        """Stacked 6-vector (alpha on top)."""
        return np.concatenate([self.alpha, self.beta])

    def _check_kind(self, other: "Screw"):
        if self.kind is not other.kind:
            raise MixedKind(f"cannot combine {self.kind.value} with {other.kind.value}")

    def __add__(self, other: "Screw") -> "Screw":
        self._check_kind(other)
        return Screw(self.alpha + other.alpha, self.beta + other.beta, self.kind)

    def __sub__(self, other: "Screw") -> "Screw":
        self._check_kind(other)
        return Screw(self.alpha - other.alpha, self.beta - other.beta, self.kind)

    def __mul__(self, scalar: float) -> "Screw":
        return Screw(self.alpha * scalar, self.beta * scalar, self.kind)

    __rmul__ = __mul__


@dataclass(frozen=True)
class ScrewTransform:
    """Rotation/position pair realizing a 6x6 screw coordinate change.

    The 6x6 matrix itself is never stored; its action on a screw is
    implemented block-wise in :func:`transform_screw`.
    """

    rotation: np.ndarray
    position: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", _mat33(self.rotation))
        object.__setattr__(self, "position", _vec3(self.position))
        R = self.rotation
        if np.max(np.abs(R.T @ R - np.eye(3))) > 1e-12:
            raise ValueError("rotation is not orthonormal within 1e-12")
        if abs(np.linalg.det(R) - 1.0) > 1e-12:
            raise ValueError("rotation determinant is not +1 within 1e-12")

    @classmethod
    def identity(cls) -> "ScrewTransform":
        return cls(np.eye(3), np.zeros(3))


def skew(p) -> np.ndarray:
    """3x3 skew-symmetric matrix M with M @ v == cross(p, v)."""
    x, y, z = np.asarray(p, dtype=float).reshape(3)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def transform_screw(S: ScrewTransform, xi: Screw) -> Screw:
    """Re-express a screw in another coordinate system.

    alpha' = R alpha,  beta' = [p]x R alpha + R beta; the kind is kept.
    """
    R, p = S.rotation, S.position
    a = R @ xi.alpha
    return Screw(a, np.cross(p, a) + R @ xi.beta, xi.kind)


def compose(S12: ScrewTransform, S1: ScrewTransform) -> ScrewTransform:
    """Composition S12 after S1; equals the product of the 6x6 matrices."""
    return ScrewTransform(S12.rotation @ S1.rotation,
                          S12.position + S12.rotation @ S1.position)


def inverse(S: ScrewTransform) -> ScrewTransform:
    """Group inverse: (R, p) -> (R^T, -R^T p)."""
    Rt = S.rotation.T
    return ScrewTransform(Rt, -(Rt @ S.position))


def axis_direction(xi: Screw, alpha_scale: float = 1.0) -> np.ndarray:
    """Unit direction of the screw axis, alpha/|alpha|.

    Raises ZeroAlpha when |alpha| <= DIRECTION_RTOL * alpha_scale; pass the
    trajectory-wide maximum |alpha| as ``alpha_scale`` for a scale-free test.
    """
    n = float(np.linalg.norm(xi.alpha))
    if n <= DIRECTION_RTOL * alpha_scale:
        raise ZeroAlpha(f"|alpha| = {n:g} below tolerance; axis direction undefined")
    return xi.alpha / n


def closest_point(xi: Screw, alpha_scale: float = 1.0) -> np.ndarray:
    """Point on the screw axis closest to the origin: cross(alpha, beta)/|alpha|^2."""
    n = float(np.linalg.norm(xi.alpha))
    if n <= DIRECTION_RTOL * alpha_scale:
        raise ZeroAlpha(f"|alpha| = {n:g} below tolerance; screw axis undefined")
    return np.cross(xi.alpha, xi.beta) / (n * n)
