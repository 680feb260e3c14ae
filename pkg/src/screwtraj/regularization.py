"""Singularity-robust decomposition: sphere projection of p* and
Procrustes correction of R.

Near a representation singularity (vanishing or parallel alpha columns)
the exact decomposition blows up: the anchor point p* runs off to
infinity and the frame R becomes arbitrary.  Two repairs make the
decomposition total:

* p* is projected onto the sphere of radius L (the geometric scale,
  meters) whenever |p*| > L.  Among all points of that sphere, the
  projection minimizes e51^2 + e61^2, the squared lower-diagonal
  residuals it induces in the first column of the lower block.  Closed
  form, two cases: keep (p*_y, p*_z) and shorten p*_x along the screw
  axis when the axis still intersects the sphere; otherwise set
  p*_x = 0 and project (p*_y, p*_z) isotropically.
* R is corrected as R <- R Rc^T where the rotation Rc makes both Rc U1
  and Rc U2_hat as upper-triangular as possible (weighted orthogonal
  Procrustes alignment; the weight w, in meters, balances the different
  physical units of the two blocks and defaults to L).

The corrected split still reconstructs the window exactly; only the
distribution of content between S and U moves.  When the window is
regular and the sphere projection is inactive, the output coincides with
the exact decomposition and both regularization flags stay False.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import (InvariantMatrix, Decomposition, Regularity,
                            _gram_schmidt_frame, _NORM_FLOOR,
                            REGULARITY_RTOL, check_regularity,
                            orient_from_alpha, solve_p_star, su_decompose)
from .errors import DegenerateU2
from .ingest import LocalWindow
from .screws import ScrewTransform, skew

# Changes smaller than this (absolute) do not count as "regularized" for
# the result flags.
_FLAG_ATOL = 1e-12


@dataclass(frozen=True)
class RegularizationConfig:
    """Geometric scale L and Procrustes weight w (meters); w defaults to L."""

    L: float = 1.0
    w: float | None = None
    enabled: bool = True

    def __post_init__(self):
        if not self.L > 0.0:
            raise ValueError(f"L must be > 0, got {self.L!r}")
        if self.w is not None and not self.w > 0.0:
            raise ValueError(f"w must be > 0, got {self.w!r}")

    @property
    def weight(self) -> float:
        return self.L if self.w is None else self.w


def _project_axial(p_star: np.ndarray, L: float) -> np.ndarray:
    """Keep (y, z), move x onto the sphere along the screw-axis direction."""
    y, z = p_star[1], p_star[2]
    x2 = L * L - y * y - z * z
    sign = -1.0 if p_star[0] < 0.0 else 1.0  # sign(0) := +1
    return np.array([sign * np.sqrt(max(x2, 0.0)), y, z])


def _project_isotropic(p_star: np.ndarray, L: float) -> np.ndarray:
    """Zero x, scale (y, z) radially onto the sphere."""
    y, z = p_star[1], p_star[2]
    s = L / np.sqrt(y * y + z * z)
    return np.array([0.0, y * s, z * s])


def regularize_p(p_star: np.ndarray, L: float) -> tuple[np.ndarray, bool]:
    """Project the anchor point onto the L-sphere when it lies outside.

    Returns (p_hat_star, active).  Inactive inside the sphere.  When
    active the result has |p_hat_star| = L and minimizes the induced
    lower-diagonal residuals e51^2 + e61^2 over the sphere; the two
    closed-form cases agree exactly on their boundary
    (p*_y^2 + p*_z^2 = L^2).
    """
    if not L > 0.0:
        raise ValueError(f"L must be > 0, got {L!r}")
    p_star = np.asarray(p_star, dtype=float).reshape(3)
    if float(np.linalg.norm(p_star)) <= L:
        return p_star.copy(), False
    if p_star[1] ** 2 + p_star[2] ** 2 <= L * L:
        return _project_axial(p_star, L), True
    return _project_isotropic(p_star, L), True


def epsilon_objective(p_hat_star: np.ndarray, u11: float, RtB: np.ndarray) -> float:
    """Sum of squared lower-diagonal residuals of the first lower-block column.

    e51 = (R^T B)_21 - u11 * p_z,  e61 = (R^T B)_31 + u11 * p_y; this is
    the quantity the sphere projection minimizes.
    """
    p = np.asarray(p_hat_star, dtype=float).reshape(3)
    M = np.asarray(RtB, dtype=float).reshape(3, 3)
    e51 = M[1, 0] - u11 * p[2]
    e61 = M[2, 0] + u11 * p[1]
    return float(e51 * e51 + e61 * e61)


def triangularize_u2(U2_hat: np.ndarray) -> np.ndarray:
    """Upper-triangular factor of U2_hat under the same construction as U1.

    The orientation factor is discarded; the first two diagonal entries
    are positive by construction.  Raises DegenerateU2 when the first two
    columns are linearly dependent.
    """
    U2_hat = np.asarray(U2_hat, dtype=float).reshape(3, 3)
    frame = _gram_schmidt_frame(U2_hat[:, 0], U2_hat[:, 1])
    if frame is None:
        raise DegenerateU2("first two columns are linearly dependent")
    r1, n1, r2 = frame
    r3 = np.cross(r1, r2)
    return np.array([
        [n1, np.dot(r1, U2_hat[:, 1]), np.dot(r1, U2_hat[:, 2])],
        [0.0, np.dot(r2, U2_hat[:, 1]), np.dot(r2, U2_hat[:, 2])],
        [0.0, 0.0, np.dot(r3, U2_hat[:, 2])],
    ])


def procrustes_objective(Rc: np.ndarray, U1: np.ndarray, U2_hat: np.ndarray,
                         U2_tri: np.ndarray, w: float) -> float:
    """w^2 |U1 - Rc U1|_F^2 + |U2_tri - Rc U2_hat|_F^2."""
    d1 = U1 - Rc @ U1
    d2 = U2_tri - Rc @ U2_hat
    return float(w * w * np.sum(d1 * d1) + np.sum(d2 * d2))


def procrustes_rc(U1: np.ndarray, U2_hat: np.ndarray, U2_tri: np.ndarray,
                  w: float) -> np.ndarray:
    """Rotation minimizing the weighted two-block Procrustes objective.

    Closed form: maximize tr(Rc^T M) with the stacked weighted
    cross-covariance M = w^2 U1 U1^T + U2_tri U2_hat^T; the optimum over
    proper rotations flips the smallest singular direction when needed.
    Degenerate M still yields a valid rotation (SVD convention breaks
    ties).
    """
    if not w > 0.0:
        raise ValueError(f"w must be > 0, got {w!r}")
    U1 = np.asarray(U1, dtype=float).reshape(3, 3)
    U2_hat = np.asarray(U2_hat, dtype=float).reshape(3, 3)
    U2_tri = np.asarray(U2_tri, dtype=float).reshape(3, 3)
    M = w * w * (U1 @ U1.T) + U2_tri @ U2_hat.T
    P, _, Qt = np.linalg.svd(M)
    d = np.sign(np.linalg.det(P @ Qt))
    if d == 0.0:
        d = 1.0
    return P @ np.diag([1.0, 1.0, d]) @ Qt


_WORLD_AXES = np.eye(3)


def _seed_orientation(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Total variant of orient_from_alpha for (near-)degenerate alpha blocks.

    Ill-defined directions are completed deterministically: a zero first
    column seeds r1 with the world x-axis; a vanishing rejection seeds r2
    from the world axis least aligned with r1 (lowest index on ties).  A
    fully zero block therefore seeds the identity.  U1 keeps its exact
    upper-triangular structure in every branch; the Procrustes step later
    corrects the arbitrary part of the frame from the lower-block content.
    """
    A = np.asarray(A, dtype=float).reshape(3, 3)
    a1, a2 = A[:, 0], A[:, 1]
    n1 = float(np.linalg.norm(a1))
    r1 = a1 / n1 if n1 > _NORM_FLOOR else _WORLD_AXES[0].copy()
    rej = a2 - np.dot(a2, r1) * r1
    n2 = float(np.linalg.norm(rej))
    if n2 <= _NORM_FLOOR:
        axis = _WORLD_AXES[int(np.argmin(np.abs(_WORLD_AXES @ r1)))]
        rej = axis - np.dot(axis, r1) * r1
        n2 = float(np.linalg.norm(rej))
    r2 = rej / n2
    r2 = r2 - np.dot(r2, r1) * r1
    r2 /= np.linalg.norm(r2)
    r3 = np.cross(r1, r2)
    R = np.column_stack([r1, r2, r3])
    U1 = np.array([
        [n1, np.dot(r1, a2), np.dot(r1, A[:, 2])],
        [0.0, np.dot(r2, a2), np.dot(r2, A[:, 2])],
        [0.0, 0.0, np.dot(r3, A[:, 2])],
    ])
    return R, U1


def _seed_p_star(regularity: Regularity, M: np.ndarray, U1: np.ndarray,
                 tol: float) -> np.ndarray:
    """Solve the anchor equations where determined, zero elsewhere."""
    u11 = U1[0, 0]
    u22 = U1[1, 1]
    if regularity is Regularity.ALPHA_ZERO:
        # u11 ~ 0: p*_y, p*_z undetermined; p*_x still follows from u22
        # when the second alpha column carries signal.
        col2 = float(np.hypot(U1[0, 1], u22))
        p_x = M[2, 1] / u22 if abs(u22) > tol * max(col2, _NORM_FLOOR) else 0.0
        return np.array([p_x, 0.0, 0.0])
    # ALPHA_PARALLEL: u22 ~ 0, but u11 is sound.
    p_z = M[1, 0] / u11
    p_y = -M[2, 0] / u11
    return np.array([0.0, p_y, p_z])


def su_decompose_regularized(window: LocalWindow,
                             cfg: RegularizationConfig = RegularizationConfig(),
                             tol: float = REGULARITY_RTOL) -> Decomposition:
    """Total decomposition; exact where possible, regularized elsewhere.

    Pipeline: orient (with deterministic completion of ill-defined frame
    directions), solve the anchor point where determined, project it onto
    the L-sphere when it escapes, rebuild the lower block, and correct the
    frame by the Procrustes rotation.  The correction runs whenever the
    window is irregular or the sphere projection was active; otherwise the
    exact decomposition already leaves nothing to correct and is returned
    unchanged.  Reconstruction is exact in every branch.

    With ``cfg.enabled`` False this is simply the exact path (and raises
    IrregularWindow on singular input).
    """
    if not cfg.enabled:
        return su_decompose(window, tol)

    regularity = check_regularity(window, tol)
    xi = window.matrix()
    A, B = xi[:3], xi[3:]

    if regularity is Regularity.REGULAR:
        R, U1 = orient_from_alpha(A)
        M = R.T @ B
        p_star = solve_p_star(R, B, U1)
    else:
        R, U1 = _seed_orientation(A)
        M = R.T @ B
        p_star = _seed_p_star(regularity, M, U1, tol)

    p_hat, p_active = regularize_p(p_star, cfg.L)
    U2 = M - skew(p_hat) @ U1

    if regularity is Regularity.REGULAR and not p_active:
        # Nothing to repair: identical to the exact decomposition.
        U2[1, 0] = 0.0
        U2[2, 0] = 0.0
        U2[2, 1] = 0.0
        S = ScrewTransform(R, R @ p_star)
        return Decomposition(S, InvariantMatrix(np.vstack([U1, U2])), p_star,
                             regularity)

    try:
        Rc = procrustes_rc(U1, U2, triangularize_u2(U2), cfg.weight)
    except DegenerateU2:
        Rc = np.eye(3)

    r_active = bool(np.max(np.abs(Rc - np.eye(3))) > _FLAG_ATOL)
    flag_p = p_active and bool(np.max(np.abs(p_hat - p_star)) > _FLAG_ATOL)

    # Re-split so reconstruction stays exact: the window position R @ p_hat
    # is unchanged, only expressed in the corrected frame R Rc^T.
    U1_hat = Rc @ U1
    U2_hat = Rc @ U2
    p_world = R @ p_hat
    R_hat = R @ Rc.T
    p_star_out = Rc @ p_hat

    S = ScrewTransform(R_hat, p_world)
    inv = InvariantMatrix(np.vstack([U1_hat, U2_hat]),
                          regularized_p=flag_p, regularized_R=r_active)
    return Decomposition(S, inv, p_star_out, regularity)
