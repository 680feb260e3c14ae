"""Independent line geometry of screw-axis pairs, used to cross-check the
decomposition against its geometric meaning.

For a regular pair of screws the decomposition frame has a concrete
interpretation: r1 is the unit direction of the first screw axis, r3 the
unit direction of the common normal of the two axes, and the position p is
the point where the common normal meets the first axis.  Everything in
this module is computed directly from the screw components (axis
directions, closest points, the common-normal foot via explicit line
geometry) and never from the decomposition internals, so agreement between
the two routes is evidence rather than tautology.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decomposition import Decomposition, Regularity
from .errors import IrregularPair
from .ingest import LocalWindow
from .screws import Screw, axis_direction, closest_point

# Default tolerance of the geometric assertions (relative where a natural
# scale exists, absolute otherwise).
GEOMETRY_RTOL = 1e-10

_PAIR_RTOL = 1e-9


@dataclass(frozen=True)
class AxisPair:
    """Two screws with well-defined axes and the angle between them."""

    xi_1: Screw
    xi_2: Screw
    theta: float


def _pair(xi_1: Screw, xi_2: Screw, tol: float) -> tuple[np.ndarray, np.ndarray, float]:
    a1, a2 = xi_1.alpha, xi_2.alpha
    n1 = float(np.linalg.norm(a1))
    n2 = float(np.linalg.norm(a2))
    scale = max(n1, n2, 1e-300)
    if n1 <= tol * scale:
        raise IrregularPair("first screw has (near-)zero alpha")
    cross = np.cross(a1, a2)
    if float(np.linalg.norm(cross)) <= tol * scale * scale:
        raise IrregularPair("alpha vectors are (near-)parallel")
    return a1, a2, n1


def axis_pair(xi_1: Screw, xi_2: Screw, tol: float = _PAIR_RTOL) -> AxisPair:
    """Validate the pair and compute the inter-axis angle.

    theta = atan2(|a1 x a2|, a1 . a2) stays accurate near 0 and pi.
    """
    a1, a2, _ = _pair(xi_1, xi_2, tol)
    cross = np.cross(a1, a2)
    theta = float(np.arctan2(np.linalg.norm(cross), np.dot(a1, a2)))
    return AxisPair(xi_1, xi_2, theta)


def alpha_relations(xi_1: Screw, xi_2: Screw,
                    tol: float = _PAIR_RTOL) -> tuple[float, float, float, np.ndarray]:
    """(u11, u12, u22, r3) from the alpha vectors alone.

    u11 = |a1|; u12 = (a1 . a2)/u11; u11 u22 r3 = a1 x a2.  These are the
    trigonometric identities of the orthonormalization and provide the
    invariant entries of the upper block without running it.
    """
    a1, a2, n1 = _pair(xi_1, xi_2, tol)
    cross = np.cross(a1, a2)
    cn = float(np.linalg.norm(cross))
    u11 = n1
    u12 = float(np.dot(a1, a2)) / u11
    u22 = cn / u11
    return u11, u12, u22, cross / cn


def common_normal_points(xi_1: Screw, xi_2: Screw,
                         tol: float = _PAIR_RTOL) -> tuple[np.ndarray, float]:
    """Foot of the common normal on the first screw axis.

    Parametrizing each axis as p_perp + t e and zeroing the gradient of
    the squared distance gives the closed-form offset

        p_par_1 = (|a1| [a1 . (a2 x b2)] + (a1 . a2)/|a1| [a2 . (a1 x b1)])
                  / (|a1|^2 |a2|^2 - (a1 . a2)^2),

    measured from the first axis point closest to the origin.  Returns
    (point_1, p_par_1) with point_1 = p_perp_1 + p_par_1 * e_1.
    """
    a1, a2, n1 = _pair(xi_1, xi_2, tol)
    b1, b2 = xi_1.beta, xi_2.beta
    dot12 = float(np.dot(a1, a2))
    denom = n1 * n1 * float(np.dot(a2, a2)) - dot12 * dot12
    num = (n1 * float(np.dot(a1, np.cross(a2, b2)))
           + dot12 / n1 * float(np.dot(a2, np.cross(a1, b1))))
    p_par_1 = num / denom
    point_1 = closest_point(xi_1) + p_par_1 * axis_direction(xi_1)
    return point_1, p_par_1


def axis_offset_projected(xi_1: Screw, xi_2: Screw,
                          tol: float = _PAIR_RTOL) -> float:
    """Common-normal foot offset via projections onto the pair frame.

    Reduced form of the same offset: with the alpha relations above and
    the beta components along the common normal,

        p_par_1 = [(b2 . r3) - (u12/u11)(b1 . r3)] / u22.

    Agrees with :func:`common_normal_points` on every regular pair; kept
    separate to validate that algebraic reduction numerically.
    """
    u11, u12, u22, r3 = alpha_relations(xi_1, xi_2, tol)
    return (float(np.dot(xi_2.beta, r3)) - u12 / u11 * float(np.dot(xi_1.beta, r3))) / u22


@dataclass(frozen=True)
class GeometryCheck:
    name: str
    passed: bool
    error: float
    tolerance: float


@dataclass(frozen=True)
class GeometryReport:
    """Outcome of the four geometric assertions for one window."""

    applicable: bool
    regularity: Regularity
    checks: tuple[GeometryCheck, ...] = ()
    window_index: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_text(self) -> str:
        head = f"window {self.window_index}: "
        if not self.applicable:
            return head + f"not applicable ({self.regularity.value})"
        lines = [head + ("ok" if self.passed else "FAILED")]
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}: error {c.error:.3e} (tol {c.tolerance:.1e})")
        return "\n".join(lines)


def verify_su_geometry(result: Decomposition, window: LocalWindow,
                       rel_tol: float = GEOMETRY_RTOL) -> GeometryReport:
    """Check a decomposition against independently computed axis geometry.

    Four assertions: r1 equals the first screw-axis direction; r3 equals
    the unit common-normal direction; p lies on the first screw axis; and
    p*_x equals the common-normal foot offset.  Expects a result from the
    exact path on a regular window; irregular windows yield a
    not-applicable report.
    """
    if result.regularity is not Regularity.REGULAR:
        return GeometryReport(False, result.regularity,
                              window_index=window.progress_index)

    xi_1, xi_2 = window.xi_prev, window.xi_curr
    R = result.transform.rotation
    p = result.transform.position

    checks = []

    e1 = axis_direction(xi_1)
    err1 = float(np.max(np.abs(R[:, 0] - e1)))
    checks.append(GeometryCheck("r1 aligned with first screw axis",
                                err1 <= rel_tol, err1, rel_tol))

    cross = np.cross(xi_1.alpha, xi_2.alpha)
    n3 = cross / np.linalg.norm(cross)
    err2 = float(np.max(np.abs(R[:, 2] - n3)))
    checks.append(GeometryCheck("r3 aligned with common normal",
                                err2 <= rel_tol, err2, rel_tol))

    d = p - closest_point(xi_1)
    off_axis = d - np.dot(d, e1) * e1
    err3 = float(np.linalg.norm(off_axis))
    tol3 = rel_tol * max(1.0, float(np.linalg.norm(p)))
    checks.append(GeometryCheck("p lies on first screw axis",
                                err3 <= tol3, err3, tol3))

    _, p_par_1 = common_normal_points(xi_1, xi_2)
    err4 = abs(float(result.p_star[0]) - p_par_1)
    tol4 = rel_tol * max(1.0, abs(p_par_1))
    checks.append(GeometryCheck("p*_x equals common-normal offset",
                                err4 <= tol4, err4, tol4))

    return GeometryReport(True, Regularity.REGULAR, tuple(checks),
                          window_index=window.progress_index)
