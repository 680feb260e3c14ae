"""Batch command line: decompose trajectory files, self-check geometry,
generate synthetic fixtures.

Exit codes: 0 success, 1 input/config error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .decomposition import Regularity, su_decompose
from .errors import IrregularWindow, ScrewTrajError
from .geometry import verify_su_geometry
from .ingest import (FileFormat, build_windows, load_trajectory,
                     save_pose_csv, save_screw_csv)
from .regularization import RegularizationConfig, su_decompose_regularized
from .screws import ScrewKind
from .synth import PROFILES, SynthSpec, synth_pose_trajectory, synth_trajectory

FLOAT_FMT = "{:.17g}"

U_COLUMNS = ("u11", "u12", "u13", "u22", "u23", "u33",
             "u41", "u42", "u43", "e51", "u52", "u53", "e61", "e62", "u63")
S_COLUMNS = ("r11", "r12", "r13", "r21", "r22", "r23", "r31", "r32", "r33",
             "px", "py", "pz")

# Row-major positions of the named U entries in the 6x3 matrix.
_U_INDEX = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2),
            (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2),
            (5, 0), (5, 1), (5, 2))


@dataclass
class RunConfig:
    input: Path
    format: str = "pose"
    output: Path | None = None
    L: float = 1.0
    w: float | None = None
    regularization: bool = True
    emit_s: bool = False
    seed: int = 0


def _load(cfg: RunConfig):
    if cfg.format == "pose":
        return load_trajectory(cfg.input, FileFormat.POSE_CSV)
    kind = ScrewKind.WRENCH if cfg.format == "wrench" else ScrewKind.TWIST
    return load_trajectory(cfg.input, FileFormat.SCREW_CSV, kind)


def _format_row(values) -> str:
    return ",".join(FLOAT_FMT.format(v) for v in values)


def cmd_decompose(cfg: RunConfig) -> int:
    """One output row per window: invariant entries, residuals, flags."""
    traj = _load(cfg)
    windows = build_windows(traj)
    reg_cfg = RegularizationConfig(L=cfg.L, w=cfg.w)

    header = ["x", *U_COLUMNS, "reg_p", "reg_R", "status"]
    if cfg.emit_s:
        header += list(S_COLUMNS)
    lines = [",".join(header)]

    # Windows are independent (pure functions); processed as an ordered map.
    for w in windows:
        x = traj.progress[w.progress_index]
        if cfg.regularization:
            res = su_decompose_regularized(w, reg_cfg)
            status = res.regularity.value
        else:
            try:
                res = su_decompose(w)
                status = res.regularity.value
            except IrregularWindow as err:
                nan_row = [FLOAT_FMT.format(x)] + ["nan"] * len(U_COLUMNS) + ["0", "0"]
                nan_row.append(f"irregular_{err.regularity.value}")
                if cfg.emit_s:
                    nan_row += ["nan"] * len(S_COLUMNS)
                lines.append(",".join(nan_row))
                continue
        m = res.invariant.matrix
        row = [FLOAT_FMT.format(x)]
        row += [FLOAT_FMT.format(m[i, j]) for i, j in _U_INDEX]
        row.append("1" if res.invariant.regularized_p else "0")
        row.append("1" if res.invariant.regularized_R else "0")
        row.append(status)
        if cfg.emit_s:
            row += [FLOAT_FMT.format(v) for v in res.transform.rotation.reshape(-1)]
            row += [FLOAT_FMT.format(v) for v in res.transform.position]
        lines.append(",".join(row))

    text = "\n".join(lines) + "\n"
    if cfg.output is None:
        sys.stdout.write(text)
    else:
        Path(cfg.output).write_text(text, encoding="utf-8")
    return 0


def cmd_check(cfg: RunConfig) -> int:
    """Verify the axis geometry of every regular window; 2 on any failure."""
    traj = _load(cfg)
    windows = build_windows(traj)
    n_checked = 0
    n_skipped = 0
    failed = []
    for w in windows:
        try:
            res = su_decompose(w)
        except IrregularWindow:
            n_skipped += 1
            continue
        report = verify_su_geometry(res, w)
        n_checked += 1
        if not report.passed:
            failed.append(report)
    for report in failed:
        print(report.to_text())
    print(f"checked {n_checked} regular windows "
          f"({n_skipped} not applicable), {len(failed)} failed")
    return 2 if failed else 0


def cmd_synth(spec: SynthSpec, output: Path, fmt: str) -> int:
    """Write a deterministic fixture file for the given spec."""
    if fmt == "pose":
        progress, poses = synth_pose_trajectory(spec)
        save_pose_csv(output, progress, poses)
    else:
        save_screw_csv(output, synth_trajectory(spec))
    return 0


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--input", required=True, type=Path, help="trajectory CSV file")
    p.add_argument("--format", choices=("pose", "twist", "wrench"), default="pose",
                   help="input interpretation (default: pose)")
    p.add_argument("--L", type=float, default=1.0, metavar="M",
                   help="geometric scale in meters (default: 1.0)")
    p.add_argument("--w", type=float, default=None, metavar="M",
                   help="Procrustes weight in meters (default: L)")
    p.add_argument("--no-regularization", action="store_true",
                   help="use the exact decomposition; irregular windows are flagged")
    p.add_argument("--seed", type=int, default=0, help="random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="screwtraj",
        description="Coordinate-invariant decomposition of twist/wrench trajectories")
    sub = parser.add_subparsers(dest="command", required=True)

    p_dec = sub.add_parser("decompose", help="write per-window invariant rows")
    _add_common(p_dec)
    p_dec.add_argument("--output", type=Path, default=None,
                       help="output CSV (default: stdout)")
    p_dec.add_argument("--emit-S", action="store_true", dest="emit_s",
                       help="append the frame columns r11..r33,px,py,pz")

    p_chk = sub.add_parser("check", help="verify axis geometry of regular windows")
    _add_common(p_chk)

    p_syn = sub.add_parser("synth", help="generate a synthetic fixture")
    p_syn.add_argument("--profile", choices=PROFILES, required=True)
    p_syn.add_argument("--output", required=True, type=Path)
    p_syn.add_argument("--format", choices=("pose", "twist", "wrench"), default="twist")
    p_syn.add_argument("--n", type=int, default=240, help="number of samples")
    p_syn.add_argument("--duration", type=float, default=2.8)
    p_syn.add_argument("--noise-sigma", type=float, default=0.0)
    p_syn.add_argument("--seed", type=int, default=0)
    p_syn.add_argument("--screw", type=float, nargs=6,
                       default=(0.0, 0.0, 1.0, 0.1, 0.0, 0.0),
                       metavar=("A1", "A2", "A3", "B1", "B2", "B3"))
    p_syn.add_argument("--velocity", type=float, nargs=3, default=(0.5, 0.0, 0.0))
    p_syn.add_argument("--axis-point", type=float, nargs=3, default=(0.0, 0.0, 0.0))
    p_syn.add_argument("--axis-dir", type=float, nargs=3, default=(0.0, 0.0, 1.0))
    p_syn.add_argument("--rate", type=float, default=1.0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            spec = SynthSpec(
                profile=args.profile,
                n_samples=args.n,
                duration=args.duration,
                noise_sigma=args.noise_sigma,
                seed=args.seed,
                kind=ScrewKind.WRENCH if args.format == "wrench" else ScrewKind.TWIST,
                screw=tuple(args.screw),
                velocity=tuple(args.velocity),
                axis_point=tuple(args.axis_point),
                axis_dir=tuple(args.axis_dir),
                rate=args.rate,
            )
            return cmd_synth(spec, args.output, args.format)

        cfg = RunConfig(
            input=args.input,
            format=args.format,
            output=getattr(args, "output", None),
            L=args.L,
            w=args.w,
            regularization=not args.no_regularization,
            emit_s=getattr(args, "emit_s", False),
            seed=args.seed,
        )
        if args.command == "decompose":
            return cmd_decompose(cfg)
        return cmd_check(cfg)
    except (ScrewTrajError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
