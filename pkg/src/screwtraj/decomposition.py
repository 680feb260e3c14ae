"""Exact factorization of a local window into screw transform and invariant.

A regular 6x3 window Xi (three consecutive screws as columns) factors
uniquely as Xi = S @ U where S is the 6x6 screw-transformation matrix of a
rotation/position pair (R, p) and U stacks two 3x3 upper-triangular blocks
U1 (alpha rows) and U2 (beta rows).  U is invariant under changes of the
coordinate system in which the window is expressed; (R, p) absorb the
frame and transform equivariantly.

Regularity requires a nonzero first alpha column and non-parallel first
two alpha columns; uniqueness is fixed by the sign convention
u11 > 0, u22 > 0 (u33's sign follows from right-handedness of R).

The construction:

* R, U1 come from Gram-Schmidt on the first two alpha columns, so that
  r1 is the unit direction of the first screw axis and r3 the unit
  common-normal direction of the first two screw axes;
* writing M = R^T B and p* = R^T p, the strictly-lower entries of
  M = [p*]x U1 + U2 give three scalar equations solved in closed form:
  p*_z = M21/u11, p*_y = -M31/u11, p*_x = (M32 + u12 p*_y)/u22;
* U2 = M - [p*]x U1, exactly upper-triangular at the solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DegenerateColumns, IrregularWindow, Singular
from .ingest import LocalWindow
from .screws import ScrewTransform, skew

# Relative tolerance for the regularity test, applied against the scale of
# the alpha columns so that twists and wrenches are treated alike.
REGULARITY_RTOL = 1e-9

# Absolute floor under which a vector norm is treated as exactly zero in
# the Gram-Schmidt construction (guards against overflow, nothing more).
_NORM_FLOOR = 1e-300


class Regularity(Enum):
    REGULAR = "regular"
    ALPHA_ZERO = "alpha_zero"
    ALPHA_PARALLEL = "alpha_parallel"


@dataclass(frozen=True)
class InvariantMatrix:
    """6x3 twice upper-triangular invariant of a local window.

    ``matrix`` holds the full 6x3 array.  In the exact decomposition the
    six lower-triangular positions are exact zeros.  Regularized results
    may carry nonzero residuals in the lower block first column
    (epsilon = (e51, e61, e62)); the flags record which regularization
    steps actually changed the outcome.
    """

    matrix: np.ndarray
    regularized_p: bool = False
    regularized_R: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float).reshape(6, 3).copy()
        if not np.all(np.isfinite(m)):
            raise ValueError("invariant matrix has non-finite entries")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def u1(self) -> np.ndarray:
        """Upper (alpha) 3x3 block."""
        return self.matrix[:3]

    @property
    def u2(self) -> np.ndarray:
        """Lower (beta) 3x3 block."""
        return self.matrix[3:]

    @property
    def epsilon(self) -> tuple[float, float, float]:
        """Lower-diagonal residuals (e51, e61, e62) of the lower block."""
        return (float(self.matrix[4, 0]), float(self.matrix[5, 0]),
                float(self.matrix[5, 1]))


@dataclass(frozen=True)
class Decomposition:
    """Result pair (S, U) plus diagnostics for one window."""

    transform: ScrewTransform
    invariant: InvariantMatrix
    p_star: np.ndarray
    regularity: Regularity = Regularity.REGULAR

    def __post_init__(self):
        p = np.asarray(self.p_star, dtype=float).reshape(3).copy()
        p.flags.writeable = False
        object.__setattr__(self, "p_star", p)


def check_regularity(window: LocalWindow, tol: float = REGULARITY_RTOL) -> Regularity:
    """Classify a window against the two regularity conditions.

    The scale max(|alpha_prev|, |alpha_curr|) makes the test unit-free.
    """
    a_prev = window.xi_prev.alpha
    a_curr = window.xi_curr.alpha
    n_prev = float(np.linalg.norm(a_prev))
    n_curr = float(np.linalg.norm(a_curr))
    scale = max(n_prev, n_curr, _NORM_FLOOR)
    if n_prev <= tol * scale:
        return Regularity.ALPHA_ZERO
    if float(np.linalg.norm(np.cross(a_prev, a_curr))) <= tol * scale * scale:
        return Regularity.ALPHA_PARALLEL
    return Regularity.REGULAR


def _gram_schmidt_frame(a1: np.ndarray, a2: np.ndarray):
    """Orthonormal (r1, n1, r2) from two independent columns, or None.

    r1 follows a1 (n1 = |a1| becomes the positive first pivot), r2 the
    rejection of a2 from a1.  A nearly-parallel a2 leaves the computed
    rejection with an O(eps |a2| / |rejection|) component along r1, so one
    re-orthogonalization pass is applied; without it the frame can miss
    orthonormality by many orders of magnitude near the parallel limit.
    """
    n1 = float(np.linalg.norm(a1))
    if n1 <= _NORM_FLOOR:
        return None
    r1 = a1 / n1
    rej = a2 - np.dot(a2, r1) * r1
    n2 = float(np.linalg.norm(rej))
    if n2 <= _NORM_FLOOR:
        return None
    r2 = rej / n2
    r2 = r2 - np.dot(r2, r1) * r1
    r2 /= np.linalg.norm(r2)
    return r1, n1, r2


def orient_from_alpha(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor A = R @ U1 with R a right-handed rotation, U1 upper-triangular.

    Gram-Schmidt on the first two columns fixes r1 and r2 (and therefore
    u11 = |a1| > 0 and u22 = |rejection| > 0); r3 = r1 x r2 completes the
    right-handed frame, which also fixes the sign of u33.  Raises
    DegenerateColumns when the first two columns are dependent.
    """
    A = np.asarray(A, dtype=float).reshape(3, 3)
    frame = _gram_schmidt_frame(A[:, 0], A[:, 1])
    if frame is None:
        raise DegenerateColumns("first two columns are linearly dependent")
    r1, n1, r2 = frame
    r3 = np.cross(r1, r2)
    R = np.column_stack([r1, r2, r3])
    U1 = np.array([
        [n1, np.dot(r1, A[:, 1]), np.dot(r1, A[:, 2])],
        [0.0, np.dot(r2, A[:, 1]), np.dot(r2, A[:, 2])],
        [0.0, 0.0, np.dot(r3, A[:, 2])],
    ])
    return R, U1


def solve_p_star(R: np.ndarray, B: np.ndarray, U1: np.ndarray,
                 min_diag: float = _NORM_FLOOR) -> np.ndarray:
    """Closed-form anchor point p* = R^T p from the lower window block.

    Uses the three strictly-lower entries of M = R^T B, which do not
    involve the unknown upper-triangular entries of U2.  Raises Singular
    when u11 or u22 is (near) zero.
    """
    u11 = float(U1[0, 0])
    u12 = float(U1[0, 1])
    u22 = float(U1[1, 1])
    if abs(u11) <= min_diag or abs(u22) <= min_diag:
        raise Singular(f"diagonal pivots u11={u11:g}, u22={u22:g} too small")
    M = R.T @ np.asarray(B, dtype=float).reshape(3, 3)
    p_z = M[1, 0] / u11
    p_y = -M[2, 0] / u11
    p_x = (M[2, 1] + u12 * p_y) / u22
    return np.array([p_x, p_y, p_z])


def compute_u2(R: np.ndarray, B: np.ndarray, U1: np.ndarray,
               p_star: np.ndarray) -> np.ndarray:
    """Lower invariant block U2 = R^T B - [p*]x U1."""
    return R.T @ np.asarray(B, dtype=float).reshape(3, 3) - skew(p_star) @ U1


def su_decompose(window: LocalWindow, tol: float = REGULARITY_RTOL) -> Decomposition:
    """Exact decomposition of a regular window.

    Raises IrregularWindow (carrying the regularity class) when the window
    fails the regularity test; callers should then fall back to the
    regularized pipeline.
    """
    regularity = check_regularity(window, tol)
    if regularity is not Regularity.REGULAR:
        raise IrregularWindow(regularity)
    xi = window.matrix()
    A, B = xi[:3], xi[3:]
    R, U1 = orient_from_alpha(A)
    p_star = solve_p_star(R, B, U1)
    U2 = compute_u2(R, B, U1, p_star)
    # Zero in exact arithmetic; snap away the float residue.
    U2[1, 0] = 0.0
    U2[2, 0] = 0.0
    U2[2, 1] = 0.0
    S = ScrewTransform(R, R @ p_star)
    return Decomposition(S, InvariantMatrix(np.vstack([U1, U2])), p_star)


def reconstruct(S: ScrewTransform, U) -> np.ndarray:
    """Window matrix S @ U evaluated block-wise (the 6x6 S is never formed)."""
    m = U.matrix if isinstance(U, InvariantMatrix) else np.asarray(U, dtype=float)
    m = m.reshape(6, 3)
    R, p = S.rotation, S.position
    top = R @ m[:3]
    return np.vstack([top, skew(p) @ top + R @ m[3:]])
