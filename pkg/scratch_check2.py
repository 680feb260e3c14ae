import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from screwtraj import *
from screwtraj.liegroup import matrix_to_quat, quat_to_matrix

rng = np.random.default_rng(3)


def rand_rot(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    return quat_to_matrix(q)


# --- pose covariance -----------------------------------------------------
print("== pose covariance ==")
worst = 0.0
for _ in range(300):
    T1 = PoseSample(rng.normal(size=3), rng.normal(size=4))
    T2 = PoseSample(rng.normal(size=3), rng.normal(size=4))
    dx = rng.uniform(0.05, 0.5)
    t = pose_log_twist(T1, T2, dx)
    G = ScrewTransform(rand_rot(rng), rng.normal(size=3) * 5)
    T1g = PoseSample(G.rotation @ T1.position + G.position,
                     matrix_to_quat(G.rotation @ T1.rotation_matrix()))
    T2g = PoseSample(G.rotation @ T2.position + G.position,
                     matrix_to_quat(G.rotation @ T2.rotation_matrix()))
    tg = pose_log_twist(T1g, T2g, dx)
    te = transform_screw(G, t)
    worst = max(worst, np.max(np.abs(tg.as_vector() - te.as_vector())))
print("worst:", worst)

# --- two-frame CLI equality (criterion 9 style) ----------------------------
print("== two-frame pose decompose ==")
from screwtraj.cli import main as cli_main

with tempfile.TemporaryDirectory() as td:
    td = Path(td)
    f1 = td / "a.csv"
    rc = cli_main(["synth", "--profile", "slide-lift-pour", "--format", "pose",
                   "--output", str(f1), "--n", "140", "--seed", "5"])
    assert rc == 0
    # frame 2: rotate every pose by a fixed pure rotation
    G = ScrewTransform(rand_rot(np.random.default_rng(9)), np.zeros(3))
    traj_lines = f1.read_text().strip().splitlines()
    out = [traj_lines[0]]
    for line in traj_lines[1:]:
        v = [float(s) for s in line.split(",")]
        p = G.rotation @ np.array(v[1:4]) + G.position
        R = G.rotation @ quat_to_matrix(v[4:8])
        q = matrix_to_quat(R)
        out.append(",".join("{:.17g}".format(x) for x in [v[0], *p, *q]))
    f2 = td / "b.csv"
    f2.write_text("\n".join(out) + "\n")
    o1, o2 = td / "o1.csv", td / "o2.csv"
    assert cli_main(["decompose", "--input", str(f1), "--format", "pose",
                     "--L", "0.3", "--output", str(o1)]) == 0
    assert cli_main(["decompose", "--input", str(f2), "--format", "pose",
                     "--L", "0.3", "--output", str(o2)]) == 0
    r1 = o1.read_text().strip().splitlines()
    r2 = o2.read_text().strip().splitlines()
    worst = 0.0
    stat_mismatch = 0
    for l1, l2 in zip(r1[1:], r2[1:]):
        v1 = l1.split(","); v2 = l2.split(",")
        if v1[-1] != v2[-1]:
            stat_mismatch += 1
        a1 = np.array([float(x) for x in v1[1:16]])
        a2 = np.array([float(x) for x in v2[1:16]])
        worst = max(worst, np.max(np.abs(a1 - a2)) / max(1.0, np.max(np.abs(a1))))
    print("rows:", len(r1) - 1, "status mismatches:", stat_mismatch, "worst U dev:", worst)
    # determinism
    o1b = td / "o1b.csv"
    cli_main(["decompose", "--input", str(f1), "--format", "pose",
              "--L", "0.3", "--output", str(o1b)])
    print("byte-identical rerun:", o1.read_bytes() == o1b.read_bytes())

# --- regular spiral trajectory for `check` ---------------------------------
print("== spiral regular trajectory / check ==")
def spiral_trajectory(n, seed=0):
    t = np.linspace(0.0, 1.0, n)
    # precessing direction; never parallel between neighbors
    a = np.column_stack([np.cos(3 * t), np.sin(3 * t), 0.4 + 0.3 * np.sin(7 * t)])
    a *= (1.0 + 0.5 * np.sin(5 * t))[:, None]
    rng = np.random.default_rng(seed)
    b = np.column_stack([np.sin(2 * t), np.cos(4 * t), 0.2 * t]) + 0.3
    return Trajectory(t, a, b)

traj = spiral_trajectory(1002)
wins = build_windows(traj)
print("windows:", len(wins), "all regular:",
      all(check_regularity(w) is Regularity.REGULAR for w in wins))
t0 = time.time()
ok = 0
for w in wins:
    rep = verify_su_geometry(su_decompose(w), w)
    ok += rep.passed
print("geometry ok:", ok, "/", len(wins), "time", time.time() - t0)

# --- fibonacci sphere grid minimality --------------------------------------
print("== sphere-grid minimality ==")
def fib_sphere(n, L):
    i = np.arange(n) + 0.5
    phi = np.arccos(1 - 2 * i / n)
    theta = np.pi * (1 + 5 ** 0.5) * i
    return L * np.column_stack([np.cos(theta) * np.sin(phi),
                                np.sin(theta) * np.sin(phi), np.cos(phi)])

L = 0.7
grid = fib_sphere(10000, L)
worst_gap = -1e9
for _ in range(200):
    # random regular window with |p*| > L
    while True:
        a = rng.normal(size=(3, 3)); b = rng.normal(size=(3, 3))
        w = LocalWindow(Screw(a[:, 0], b[:, 0]), Screw(a[:, 1], b[:, 1]), Screw(a[:, 2], b[:, 2]))
        if check_regularity(w) is not Regularity.REGULAR:
            continue
        res = su_decompose(w)
        if np.linalg.norm(res.p_star) > L:
            break
    R = res.transform.rotation
    M = R.T @ w.matrix()[3:]
    u11 = res.invariant.matrix[0, 0]
    p_hat, active = regularize_p(res.p_star, L)
    assert active and abs(np.linalg.norm(p_hat) - L) < 1e-12
    obj = epsilon_objective(p_hat, u11, M)
    objs = (M[1, 0] - u11 * grid[:, 2]) ** 2 + (M[2, 0] + u11 * grid[:, 1]) ** 2
    worst_gap = max(worst_gap, obj - np.min(objs))
print("max (closed-form - grid-min), should be <= 0 + eps:", worst_gap)

# --- boundary continuity ----------------------------------------------------
print("== boundary continuity ==")
L = 1.3
worst = 0.0
for _ in range(100):
    u = rng.normal(size=3); u /= np.linalg.norm(u)
    if abs(u[0]) < 0.3:
        continue
    pin, _ = regularize_p((L - 1e-6) * u, L)
    pout, _ = regularize_p((L + 1e-6) * u, L)
    worst = max(worst, np.max(np.abs(pout - pin)))
print("max diff (tol 1e-5*L):", worst, "<", 1e-5 * L)

# --- inactivity identity -----------------------------------------------------
print("== inactive == exact ==")
worst = 0.0
for _ in range(500):
    while True:
        a = rng.normal(size=(3, 3)); b = rng.normal(size=(3, 3)) * 0.3
        w = LocalWindow(Screw(a[:, 0], b[:, 0]), Screw(a[:, 1], b[:, 1]), Screw(a[:, 2], b[:, 2]))
        if check_regularity(w) is not Regularity.REGULAR:
            continue
        res = su_decompose(w)
        if np.linalg.norm(res.p_star) < 2.0:
            break
    resr = su_decompose_regularized(w, RegularizationConfig(L=2.0))
    assert not resr.invariant.regularized_p and not resr.invariant.regularized_R
    worst = max(worst,
                np.max(np.abs(resr.invariant.matrix - res.invariant.matrix)),
                np.max(np.abs(resr.transform.rotation - res.transform.rotation)),
                np.max(np.abs(resr.transform.position - res.transform.position)))
print("max dev (want 0.0):", worst)
EOF_MARKER = None
