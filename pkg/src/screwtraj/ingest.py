"""Trajectory loading, twist extraction from pose sequences, and windowing.

File formats (UTF-8, comma separated, ``#`` starts a comment line):

* pose CSV,  header ``x,px,py,pz,qw,qx,qy,qz`` — positions in meters and a
  unit quaternion per progress sample;
* screw CSV, header ``x,a1,a2,a3,b1,b2,b3`` — raw screw samples; whether
  they are twists or wrenches is supplied out-of-band.

Pose files are differentiated on load: each consecutive pose pair yields
one twist through the displacement logarithm, anchored at the midpoint
progress value.  The twist is expressed in the world frame, with beta the
velocity of the body point passing through the world origin, so that a
fixed change of world frame acts on the extracted twists exactly as a
screw transform.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import liegroup
from .errors import (MixedKind, NonMonotoneProgress, NonPositiveStep,
                     ParseError, TooShort)
from .screws import Screw, ScrewKind, ScrewTransform, transform_screw

POSE_HEADER = "x,px,py,pz,qw,qx,qy,qz"
SCREW_HEADER = "x,a1,a2,a3,b1,b2,b3"

# 17 significant digits round-trip float64 exactly.
FLOAT_FMT = "{:.17g}"


class FileFormat(Enum):
    POSE_CSV = "pose"
    SCREW_CSV = "screw"


@dataclass(frozen=True)
class PoseSample:
    """Position plus unit quaternion (w, x, y, z); renormalized on creation."""

    position: np.ndarray
    orientation: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.position, dtype=float).reshape(3).copy()
        q = np.asarray(self.orientation, dtype=float).reshape(4).copy()
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise ValueError("pose sample has non-finite entries")
        n = float(np.linalg.norm(q))
        if n < 1e-6:
            raise ValueError("quaternion norm too small to normalize")
        if abs(n - 1.0) > 1e-9:
            q = q / n
        p.flags.writeable = False
        q.flags.writeable = False
        object.__setattr__(self, "position", p)
        object.__setattr__(self, "orientation", q)

    def rotation_matrix(self) -> np.ndarray:
        return liegroup.quat_to_matrix(self.orientation)


@dataclass(frozen=True)
class Trajectory:
    """Discrete screw trajectory: progress values and per-sample (alpha, beta)."""

    progress: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray
    kind: ScrewKind = ScrewKind.TWIST

    def __post_init__(self):
        x = np.asarray(self.progress, dtype=float).reshape(-1).copy()
        a = np.asarray(self.alphas, dtype=float).reshape(-1, 3).copy()
        b = np.asarray(self.betas, dtype=float).reshape(-1, 3).copy()
        if not (len(x) == len(a) == len(b)):
            raise ValueError("progress/alpha/beta lengths differ")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("trajectory has non-finite entries")
        if len(x) >= 2 and np.any(np.diff(x) <= 0):
            raise NonMonotoneProgress("progress must be strictly increasing")
        for arr in (x, a, b):
            arr.flags.writeable = False
        object.__setattr__(self, "progress", x)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "betas", b)

    def __len__(self) -> int:
        return len(self.progress)

    def screw(self, i: int) -> Screw:
        return Screw(self.alphas[i], self.betas[i], self.kind)

    def alpha_scale(self) -> float:
        """Characteristic |alpha| (max over samples); 1.0 for an all-zero trajectory."""
        if len(self) == 0:
            return 1.0
        m = float(np.max(np.linalg.norm(self.alphas, axis=1)))
        return m if m > 0.0 else 1.0


@dataclass(frozen=True)
class LocalWindow:
    """Three consecutive screws around sample ``progress_index``."""

    xi_prev: Screw
    xi_curr: Screw
    xi_next: Screw
    progress_index: int = 0
    delta_x: float = 1.0

    def __post_init__(self):
        kinds = {self.xi_prev.kind, self.xi_curr.kind, self.xi_next.kind}
        if len(kinds) != 1:
            raise MixedKind("window screws must share one kind")

    @property
    def kind(self) -> ScrewKind:
        return self.xi_curr.kind

    def matrix(self) -> np.ndarray:
        """6x3 matrix with the three screws as columns (alphas on top)."""
        return np.column_stack([self.xi_prev.as_vector(),
                                self.xi_curr.as_vector(),
                                self.xi_next.as_vector()])

    def transformed(self, S: ScrewTransform) -> "LocalWindow":
        """The same window re-expressed through a screw transform."""
        return LocalWindow(transform_screw(S, self.xi_prev),
                           transform_screw(S, self.xi_curr),
                           transform_screw(S, self.xi_next),
                           self.progress_index, self.delta_x)


def pose_log_twist(T_i: PoseSample, T_next: PoseSample, delta_x: float) -> Screw:
    """World-frame twist carrying pose T_i to T_next over a progress step.

    The displacement D = T_next o T_i^-1 is composed in the fixed world
    frame; its logarithm divided by ``delta_x`` is the constant twist that
    reproduces the step exactly.
    """
    if not delta_x > 0.0:
        raise NonPositiveStep(f"delta_x = {delta_x!r} must be > 0")
    R_i = T_i.rotation_matrix()
    R_n = T_next.rotation_matrix()
    R_d = R_n @ R_i.T
    p_d = T_next.position - R_d @ T_i.position
    phi, rho = liegroup.se3_log(R_d, p_d)
    return Screw(phi / delta_x, rho / delta_x, ScrewKind.TWIST)


def _rows(path: Path, n_fields: int, header: str):
    """Yield (line_number, fields) for data rows; validates the header."""
    header_seen = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if not header_seen:
                got = line.replace(" ", "").lower()
                if got != header:
                    raise ParseError(path, lineno, f"expected header {header!r}, got {line!r}")
                header_seen = True
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != n_fields:
                raise ParseError(path, lineno, f"expected {n_fields} fields, got {len(fields)}")
            try:
                values = [float(f) for f in fields]
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from None
            yield lineno, values
    if not header_seen:
        raise ParseError(path, 0, "file is empty")


def load_trajectory(path, fmt: FileFormat = FileFormat.POSE_CSV,
                    kind: ScrewKind = ScrewKind.TWIST) -> Trajectory:
    """Load a trajectory file; pose files are differentiated into twists.

    Pose input always yields twists (``kind`` is ignored); screw input is
    tagged with ``kind``.  Raises ParseError, NonMonotoneProgress or
    TooShort (fewer than three screw samples after extraction).
    """
    path = Path(path)
    if fmt is FileFormat.POSE_CSV:
        xs: list[float] = []
        poses: list[PoseSample] = []
        for lineno, v in _rows(path, 8, POSE_HEADER):
            try:
                poses.append(PoseSample(v[1:4], v[4:8]))
            except ValueError as exc:
                raise ParseError(path, lineno, str(exc)) from None
            xs.append(v[0])
        if len(xs) >= 2 and np.any(np.diff(xs) <= 0):
            raise NonMonotoneProgress(f"{path}: progress must be strictly increasing")
        if len(xs) < 4:
            raise TooShort(f"{path}: need at least 4 poses (3 twist samples), got {len(xs)}")
        mid = [(xs[i] + xs[i + 1]) / 2.0 for i in range(len(xs) - 1)]
        twists = [pose_log_twist(poses[i], poses[i + 1], xs[i + 1] - xs[i])
                  for i in range(len(xs) - 1)]
        return Trajectory(np.asarray(mid),
                          np.array([t.alpha for t in twists]),
                          np.array([t.beta for t in twists]),
                          ScrewKind.TWIST)

    xs = []
    alphas = []
    betas = []
    for _, v in _rows(path, 7, SCREW_HEADER):
        xs.append(v[0])
        alphas.append(v[1:4])
        betas.append(v[4:7])
    if len(xs) >= 2 and np.any(np.diff(xs) <= 0):
        raise NonMonotoneProgress(f"{path}: progress must be strictly increasing")
    if len(xs) < 3:
        raise TooShort(f"{path}: need at least 3 screw samples, got {len(xs)}")
    return Trajectory(np.asarray(xs), np.asarray(alphas), np.asarray(betas), kind)


def save_screw_csv(path, traj: Trajectory) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SCREW_HEADER + "\n")
        for i in range(len(traj)):
            row = [traj.progress[i], *traj.alphas[i], *traj.betas[i]]
            fh.write(",".join(FLOAT_FMT.format(v) for v in row) + "\n")


def save_pose_csv(path, progress: Sequence[float], poses: Iterable[PoseSample]) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(POSE_HEADER + "\n")
        for x, pose in zip(progress, poses):
            row = [x, *pose.position, *pose.orientation]
            fh.write(",".join(FLOAT_FMT.format(v) for v in row) + "\n")


def build_windows(traj: Trajectory) -> list[LocalWindow]:
    """All N-2 interior windows; window i holds samples (i-1, i, i+1)."""
    n = len(traj)
    if n < 3:
        raise TooShort(f"need at least 3 samples to build windows, got {n}")
    x = traj.progress
    return [LocalWindow(traj.screw(i - 1), traj.screw(i), traj.screw(i + 1),
                        progress_index=i,
                        delta_x=(x[i + 1] - x[i - 1]) / 2.0)
            for i in range(1, n - 1)]
