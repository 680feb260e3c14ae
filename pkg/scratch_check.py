"""Scratch numerical experiments (deleted before commit)."""
import time

import numpy as np

from screwtraj import *
from screwtraj.liegroup import so3_exp, so3_log, se3_exp, se3_log

rng = np.random.default_rng(42)


def rand_rot(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def rand_transform(rng, tmax=1.0):
    return ScrewTransform(rand_rot(rng), rng.uniform(-tmax, tmax, 3))


def rand_window(rng, kind=ScrewKind.TWIST):
    while True:
        a = rng.normal(size=(3, 3))
        b = rng.normal(size=(3, 3))
        w = LocalWindow(Screw(a[:, 0], b[:, 0], kind),
                        Screw(a[:, 1], b[:, 1], kind),
                        Screw(a[:, 2], b[:, 2], kind))
        if check_regularity(w) is Regularity.REGULAR:
            return w


def relmax(x, y):
    return np.max(np.abs(x - y)) / max(np.max(np.abs(y)), 1e-300)


# --- 1. construct-recover ----------------------------------------------
print("== construct/recover ==")
worst = 0.0
for _ in range(200):
    S0 = rand_transform(rng, 10.0)
    U1 = np.triu(rng.normal(size=(3, 3)))
    U1[0, 0] = abs(U1[0, 0]) + 0.1
    U1[1, 1] = abs(U1[1, 1]) + 0.1
    U2 = np.triu(rng.normal(size=(3, 3)))
    U0 = np.vstack([U1, U2])
    xi = reconstruct(S0, U0)
    w = LocalWindow(Screw(xi[:3, 0], xi[3:, 0]), Screw(xi[:3, 1], xi[3:, 1]),
                    Screw(xi[:3, 2], xi[3:, 2]))
    res = su_decompose(w)
    worst = max(worst,
                relmax(res.invariant.matrix, U0),
                np.max(np.abs(res.transform.rotation - S0.rotation)),
                relmax(res.transform.position, S0.position),
                relmax(reconstruct(res.transform, res.invariant), xi))
print("worst rel err:", worst)

# --- 2. invariance with big translations --------------------------------
print("== invariance ==")
t0 = time.time()
worst = 0.0
for _ in range(100):
    w = rand_window(rng)
    U = su_decompose(w).invariant.matrix
    for _ in range(100):
        G = rand_transform(rng, 1e3)
        U2m = su_decompose(w.transformed(G)).invariant.matrix
        worst = max(worst, relmax(U2m, U))
print("worst rel dev:", worst, "time", time.time() - t0)

# --- 3. long vs reduced common-normal offset ----------------------------
print("== eq34 vs eq37 ==")
worst = 0.0
for _ in range(1000):
    x1 = Screw(rng.normal(size=3), rng.normal(size=3))
    x2 = Screw(rng.normal(size=3), rng.normal(size=3))
    try:
        _, p1 = common_normal_points(x1, x2)
        p2 = axis_offset_projected(x1, x2)
    except IrregularPair:
        continue
    worst = max(worst, abs(p1 - p2) / max(1.0, abs(p1)))
print("worst rel:", worst)

# --- 4. procrustes optimality -------------------------------------------
print("== procrustes ==")
worst_gap = 0.0
for _ in range(100):
    U1 = np.triu(rng.normal(size=(3, 3)))
    U1[0, 0] = abs(U1[0, 0])
    U1[1, 1] = abs(U1[1, 1])
    U2h = rng.normal(size=(3, 3))
    T = triangularize_u2(U2h)
    w_ = abs(rng.normal()) + 0.1
    Rc = procrustes_rc(U1, U2h, T, w_)
    obj = procrustes_objective(Rc, U1, U2h, T, w_)
    assert np.max(np.abs(Rc.T @ Rc - np.eye(3))) < 1e-12
    assert abs(np.linalg.det(Rc) - 1) < 1e-12
    gap = obj - procrustes_objective(np.eye(3), U1, U2h, T, w_)
    worst_gap = max(worst_gap, gap)
    for _ in range(50):
        Q = rand_rot(rng)
        worst_gap = max(worst_gap, obj - procrustes_objective(Q, U1, U2h, T, w_))
print("worst objective excess (should be <= ~1e-12):", worst_gap)

# --- 5. criterion 7 dry run ----------------------------------------------
print("== slide-lift-pour variance ==")
spec0 = SynthSpec("slide-lift-pour", n_samples=281, duration=2.8, noise_sigma=0.0)
clean = synth_trajectory(spec0)
peak = max(np.max(np.abs(clean.alphas)), np.max(np.abs(clean.betas)))
sigma = 0.01 * peak
spec = SynthSpec("slide-lift-pour", n_samples=281, duration=2.8,
                 noise_sigma=sigma, seed=7)
noisy = synth_trajectory(spec)
wins = build_windows(noisy)
t1 = 2.8 / 4.0
slide_idx = [i for i, w in enumerate(wins)
             if noisy.progress[w.progress_index + 1] < t1]
print("slide windows:", len(slide_idx))
cfg = RegularizationConfig(L=0.3)
u53r, u63r, u41r = [], [], []
u53u, u63u, u41u = [], [], []
nreg = 0
for i in slide_idx:
    w = wins[i]
    assert check_regularity(w) is Regularity.REGULAR
    res_u = su_decompose(w)
    res_r = su_decompose_regularized(w, cfg)
    if res_r.invariant.regularized_p:
        nreg += 1
    u53u.append(res_u.invariant.matrix[4, 2]); u63u.append(res_u.invariant.matrix[5, 2])
    u41u.append(res_u.invariant.matrix[3, 0])
    u53r.append(res_r.invariant.matrix[4, 2]); u63r.append(res_r.invariant.matrix[5, 2])
    u41r.append(res_r.invariant.matrix[3, 0])
print("p-clamped windows:", nreg, "/", len(slide_idx))
print("var u53: unreg", np.var(u53u), "reg", np.var(u53r), "ratio", np.var(u53r)/np.var(u53u))
print("var u63: unreg", np.var(u63u), "reg", np.var(u63r), "ratio", np.var(u63r)/np.var(u63u))
print("mean|u41|: unreg", np.mean(np.abs(u41u)), "reg", np.mean(np.abs(u41r)))

# --- 6. rotation-only invariance on singular windows ----------------------
print("== rotation invariance, singular ==")
cfg = RegularizationConfig(L=0.5)
worst = 0.0
for trial in range(50):
    # pure translation, independent beta columns
    b = rng.normal(size=(3, 3))
    w = LocalWindow(Screw(np.zeros(3), b[:, 0]), Screw(np.zeros(3), b[:, 1]),
                    Screw(np.zeros(3), b[:, 2]))
    U = su_decompose_regularized(w, cfg).invariant.matrix
    G = ScrewTransform(rand_rot(rng), np.zeros(3))
    U2m = su_decompose_regularized(w.transformed(G), cfg).invariant.matrix
    worst = max(worst, relmax(U2m, U))
print("pure translation worst:", worst)
worst = 0.0
for trial in range(50):
    a = rng.normal(size=3)
    scales = rng.uniform(0.5, 2.0, 3)
    b = rng.normal(size=(3, 3)) * 4.0  # push |p*| > L
    w = LocalWindow(Screw(scales[0] * a, b[:, 0]), Screw(scales[1] * a, b[:, 1]),
                    Screw(scales[2] * a, b[:, 2]))
    assert check_regularity(w) is Regularity.ALPHA_PARALLEL
    res = su_decompose_regularized(w, cfg)
    U = res.invariant.matrix
    G = ScrewTransform(rand_rot(rng), np.zeros(3))
    U2m = su_decompose_regularized(w.transformed(G), cfg).invariant.matrix
    worst = max(worst, relmax(U2m, U))
print("parallel alpha worst:", worst)

# --- 7. regularized reconstruction exactness ------------------------------
print("== regularized reconstruction ==")
cfg = RegularizationConfig(L=0.3)
worst = 0.0
for trial in range(2000):
    kind = trial % 4
    if kind == 0:
        w = rand_window(rng)
    elif kind == 1:
        b = rng.normal(size=(3, 3))
        w = LocalWindow(Screw(np.zeros(3), b[:, 0]), Screw(np.zeros(3), b[:, 1]),
                        Screw(np.zeros(3), b[:, 2]))
    elif kind == 2:
        a = rng.normal(size=3)
        s = rng.uniform(0.5, 2, 3)
        b = rng.normal(size=(3, 3))
        w = LocalWindow(Screw(s[0] * a, b[:, 0]), Screw(s[1] * a, b[:, 1]),
                        Screw(s[2] * a, b[:, 2]))
    else:
        b = rng.normal(size=(3, 3))
        a2 = rng.normal(size=3)
        w = LocalWindow(Screw(np.zeros(3), b[:, 0]), Screw(a2, b[:, 1]),
                        Screw(rng.normal(size=3), b[:, 2]))
    res = su_decompose_regularized(w, cfg)
    worst = max(worst, relmax(reconstruct(res.transform, res.invariant), w.matrix()))
print("worst reconstruction rel:", worst)

# --- 8. log/exp roundtrips -------------------------------------------------
print("== liegroup ==")
worst = 0.0
for _ in range(500):
    phi = rng.normal(size=3)
    phi *= rng.choice([1e-9, 1e-6, 0.5, 2.9, np.pi - 1e-9, np.pi - 1e-13]) / np.linalg.norm(phi)
    R = so3_exp(phi)
    phi2 = so3_log(R)
    worst = max(worst, np.max(np.abs(phi - phi2)))
print("so3 log(exp) worst:", worst)
worst = 0.0
for _ in range(500):
    phi = rng.normal(size=3) * rng.uniform(0, 3)
    rho = rng.normal(size=3)
    R, p = se3_exp(phi, rho)
    phi2, rho2 = se3_log(R, p)
    worst = max(worst, np.max(np.abs(phi - phi2)), np.max(np.abs(rho - rho2)))
print("se3 roundtrip worst:", worst)
