import numpy as np
import pytest

from conftest import (fibonacci_sphere, rand_regular_window, rand_rotation,
                      rand_transform, relmax, window_from_matrix)
from screwtraj import (DegenerateU2, LocalWindow, Regularity,
                       RegularizationConfig, Screw, check_regularity,
                       epsilon_objective, orient_from_alpha,
                       procrustes_objective, procrustes_rc, reconstruct,
                       regularize_p, solve_p_star, su_decompose,
                       su_decompose_regularized, triangularize_u2)
from screwtraj.regularization import _project_axial, _project_isotropic


def test_regularize_p_examples():
    L = 0.8
    p, active = regularize_p(np.array([0.0, 0.0, 0.5 * L]), L)
    assert not active
    np.testing.assert_array_equal(p, [0, 0, 0.5 * L])

    p, active = regularize_p(np.array([2 * L, 0.0, 0.0]), L)
    assert active
    np.testing.assert_allclose(p, [L, 0, 0], rtol=0, atol=1e-15)

    p, active = regularize_p(np.array([0.0, 2 * L, 0.0]), L)
    assert active
    np.testing.assert_allclose(p, [0, L, 0], rtol=0, atol=1e-15)


def test_regularize_p_sphere_norm():
    rng = np.random.default_rng(0)
    L = 1.7
    for _ in range(300):
        p = rng.normal(size=3) * rng.uniform(0.1, 8)
        p_hat, active = regularize_p(p, L)
        if active:
            assert abs(np.linalg.norm(p_hat) - L) < 1e-12
        else:
            np.testing.assert_array_equal(p_hat, p)


def test_regularize_p_boundary_continuity():
    L = 1.3
    rng = np.random.default_rng(1)
    delta = 1e-6
    n = 0
    while n < 50:
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        if abs(u[0]) < 0.3:
            continue
        n += 1
        inner, _ = regularize_p((L - delta) * u, L)
        outer, _ = regularize_p((L + delta) * u, L)
        assert np.max(np.abs(outer - inner)) < 1e-5 * L


def test_regularize_p_case_boundary_exact():
    # on (p_y^2 + p_z^2) == L^2 both closed forms coincide exactly
    for L in (1.0, 0.3, 2.5):
        p = np.array([0.7 * L, L, 0.0])
        np.testing.assert_array_equal(_project_axial(p, L), _project_isotropic(p, L))
        p = np.array([-0.2 * L, 0.0, -L])
        np.testing.assert_array_equal(_project_axial(p, L), _project_isotropic(p, L))


def test_regularize_p_sign_convention_at_zero():
    # sign(0) treated as +1 for the axial branch
    L = 1.0
    p, active = regularize_p(np.array([0.0, 0.6 * L, 0.0]) + [0, 0, 2 * L], L)
    assert active and p[0] == 0.0
    p_hat = _project_axial(np.array([0.0, 0.3, 0.4]), L)
    assert p_hat[0] > 0


def test_epsilon_objective_examples():
    rng = np.random.default_rng(2)
    w = rand_regular_window(rng)
    xi = w.matrix()
    R, U1 = orient_from_alpha(xi[:3])
    p_star = solve_p_star(R, xi[3:], U1)
    M = R.T @ xi[3:]
    assert epsilon_objective(p_star, U1[0, 0], M) < 1e-24
    # u11 = 0 makes the objective constant in p
    c1 = epsilon_objective(rng.normal(size=3), 0.0, M)
    c2 = epsilon_objective(rng.normal(size=3), 0.0, M)
    assert c1 == pytest.approx(c2) == pytest.approx(M[1, 0] ** 2 + M[2, 0] ** 2)


def test_regularized_p_minimizes_epsilon_on_sphere():
    rng = np.random.default_rng(3)
    L = 0.7
    grid = fibonacci_sphere(10_000, L)
    done = 0
    while done < 50:
        w = rand_regular_window(rng)
        res = su_decompose(w)
        if np.linalg.norm(res.p_star) <= L:
            continue
        done += 1
        R = res.transform.rotation
        M = R.T @ w.matrix()[3:]
        u11 = res.invariant.matrix[0, 0]
        p_hat, active = regularize_p(res.p_star, L)
        assert active
        closed = epsilon_objective(p_hat, u11, M)
        grid_vals = (M[1, 0] - u11 * grid[:, 2]) ** 2 + (M[2, 0] + u11 * grid[:, 1]) ** 2
        assert closed <= np.min(grid_vals) + 1e-12 * max(1.0, closed)


def test_triangularize_u2_examples():
    rng = np.random.default_rng(4)
    T = np.triu(rng.normal(size=(3, 3)))
    T[0, 0], T[1, 1] = 1.2, 0.7
    np.testing.assert_allclose(triangularize_u2(T), T, rtol=0, atol=1e-14)
    for _ in range(50):
        T = np.triu(rng.normal(size=(3, 3)))
        T[0, 0] = abs(T[0, 0]) + 0.1
        T[1, 1] = abs(T[1, 1]) + 0.1
        Q = rand_rotation(rng)
        np.testing.assert_allclose(triangularize_u2(Q @ T), T, rtol=0, atol=1e-12)
    with pytest.raises(DegenerateU2):
        triangularize_u2(np.zeros((3, 3)))
    with pytest.raises(DegenerateU2):
        triangularize_u2(np.column_stack([[1, 0, 0], [2, 0, 0], [0, 0, 1]]))


def test_procrustes_identity_when_triangular():
    rng = np.random.default_rng(5)
    for _ in range(50):
        U1 = np.triu(rng.normal(size=(3, 3)))
        U1[0, 0] = abs(U1[0, 0]) + 0.1
        U1[1, 1] = abs(U1[1, 1]) + 0.1
        U2 = np.triu(rng.normal(size=(3, 3)))
        U2[0, 0] = abs(U2[0, 0]) + 0.1
        U2[1, 1] = abs(U2[1, 1]) + 0.1
        Rc = procrustes_rc(U1, U2, triangularize_u2(U2), w=0.9)
        np.testing.assert_allclose(Rc, np.eye(3), rtol=0, atol=1e-12)


def test_procrustes_exact_alignment():
    rng = np.random.default_rng(6)
    for _ in range(50):
        T = np.triu(rng.normal(size=(3, 3)))
        T[0, 0] = abs(T[0, 0]) + 0.5
        T[1, 1] = abs(T[1, 1]) + 0.5
        Q = rand_rotation(rng)
        U2 = Q.T @ T
        Rc = procrustes_rc(np.zeros((3, 3)), U2, triangularize_u2(U2), w=1.0)
        np.testing.assert_allclose(Rc, Q, rtol=0, atol=1e-9)
        assert procrustes_objective(Rc, np.zeros((3, 3)), U2, T, 1.0) < 1e-18


def test_procrustes_beats_random_rotations():
    rng = np.random.default_rng(7)
    for _ in range(30):
        U1 = np.triu(rng.normal(size=(3, 3)))
        U1[0, 0], U1[1, 1] = abs(U1[0, 0]), abs(U1[1, 1])
        U2 = rng.normal(size=(3, 3))
        T = triangularize_u2(U2)
        w = abs(rng.normal()) + 0.2
        Rc = procrustes_rc(U1, U2, T, w)
        np.testing.assert_allclose(Rc.T @ Rc, np.eye(3), rtol=0, atol=1e-12)
        assert np.linalg.det(Rc) == pytest.approx(1.0, abs=1e-12)
        best = procrustes_objective(Rc, U1, U2, T, w)
        assert best <= procrustes_objective(np.eye(3), U1, U2, T, w) + 1e-12
        for _ in range(100):
            Q = rand_rotation(rng)
            assert best <= procrustes_objective(Q, U1, U2, T, w) + 1e-12


def test_config_validation():
    with pytest.raises(ValueError):
        RegularizationConfig(L=0.0)
    with pytest.raises(ValueError):
        RegularizationConfig(L=1.0, w=-1.0)
    assert RegularizationConfig(L=0.4).weight == 0.4
    assert RegularizationConfig(L=0.4, w=2.0).weight == 2.0


def test_inactive_equals_exact():
    rng = np.random.default_rng(8)
    cfg = RegularizationConfig(L=50.0)
    for _ in range(100):
        w = rand_regular_window(rng)
        exact = su_decompose(w)
        reg = su_decompose_regularized(w, cfg)
        assert not reg.invariant.regularized_p
        assert not reg.invariant.regularized_R
        np.testing.assert_allclose(reg.invariant.matrix, exact.invariant.matrix,
                                   rtol=0, atol=1e-12)
        np.testing.assert_allclose(reg.transform.rotation, exact.transform.rotation,
                                   rtol=0, atol=1e-12)
        np.testing.assert_allclose(reg.transform.position, exact.transform.position,
                                   rtol=0, atol=1e-12)


def test_disabled_is_exact_path():
    from screwtraj import IrregularWindow
    rng = np.random.default_rng(9)
    cfg = RegularizationConfig(enabled=False)
    w = rand_regular_window(rng)
    reg = su_decompose_regularized(w, cfg)
    exact = su_decompose(w)
    np.testing.assert_array_equal(reg.invariant.matrix, exact.invariant.matrix)
    singular = window_from_matrix(np.vstack([np.zeros((3, 3)),
                                             rng.normal(size=(3, 3))]))
    with pytest.raises(IrregularWindow):
        su_decompose_regularized(singular, cfg)


def test_pure_translation_constant_velocity():
    # the canonical singular case: succeeds, with the translational
    # magnitude appearing in the first lower-block row
    v = np.array([0.4, 0.0, 0.0])
    w = LocalWindow(Screw(np.zeros(3), v), Screw(np.zeros(3), v),
                    Screw(np.zeros(3), v))
    res = su_decompose_regularized(w, RegularizationConfig(L=0.3))
    assert res.regularity is Regularity.ALPHA_ZERO
    m = res.invariant.matrix
    np.testing.assert_allclose(m[:3], 0, rtol=0, atol=1e-15)
    np.testing.assert_allclose(m[3], [0.4, 0.4, 0.4], rtol=0, atol=1e-12)
    assert relmax(reconstruct(res.transform, res.invariant), w.matrix()) < 1e-12


def test_pure_translation_curving():
    # independent beta columns: the corrected frame absorbs the direction,
    # leaving the speed profile in the first lower-block row
    rng = np.random.default_rng(10)
    b = rng.normal(size=(3, 3))
    w = window_from_matrix(np.vstack([np.zeros((3, 3)), b]))
    res = su_decompose_regularized(w, RegularizationConfig(L=0.3))
    m = res.invariant.matrix
    assert res.invariant.regularized_R
    assert m[3, 0] == pytest.approx(np.linalg.norm(b[:, 0]), rel=1e-10)
    assert relmax(reconstruct(res.transform, res.invariant), w.matrix()) < 1e-10


def test_exactness_across_window_zoo():
    rng = np.random.default_rng(11)
    cfg = RegularizationConfig(L=0.3)
    for trial in range(400):
        kind = trial % 4
        if kind == 0:
            w = rand_regular_window(rng)
        elif kind == 1:  # pure translation
            w = window_from_matrix(np.vstack([np.zeros((3, 3)),
                                              rng.normal(size=(3, 3))]))
        elif kind == 2:  # parallel alphas
            a = rng.normal(size=3)
            xi = np.vstack([np.outer(a, rng.uniform(0.5, 2, 3)),
                            rng.normal(size=(3, 3)) * 3])
            w = window_from_matrix(xi)
        else:  # zero first alpha only
            xi = np.vstack([np.column_stack([np.zeros(3), rng.normal(size=3),
                                             rng.normal(size=3)]),
                            rng.normal(size=(3, 3))])
            w = window_from_matrix(xi)
        res = su_decompose_regularized(w, cfg)
        assert relmax(reconstruct(res.transform, res.invariant), w.matrix()) < 1e-10
        if res.invariant.regularized_p:
            assert abs(np.linalg.norm(res.p_star) - cfg.L) < 1e-12


def test_rotation_only_invariance_active():
    rng = np.random.default_rng(12)
    cfg = RegularizationConfig(L=0.4)
    for trial in range(60):
        if trial % 2 == 0:
            w = window_from_matrix(np.vstack([np.zeros((3, 3)),
                                              rng.normal(size=(3, 3))]))
        else:
            a = rng.normal(size=3)
            xi = np.vstack([np.outer(a, rng.uniform(0.5, 2, 3)),
                            rng.normal(size=(3, 3)) * 4])
            w = window_from_matrix(xi)
        res = su_decompose_regularized(w, cfg)
        assert res.invariant.regularized_p or res.invariant.regularized_R
        G = rand_transform(rng, 0.0)  # pure rotation
        res_g = su_decompose_regularized(w.transformed(G), cfg)
        assert relmax(res_g.invariant.matrix, res.invariant.matrix) < 1e-9


def test_rc_frames_are_rotations():
    rng = np.random.default_rng(13)
    cfg = RegularizationConfig(L=0.2)
    for _ in range(50):
        w = rand_regular_window(rng)
        res = su_decompose_regularized(w, cfg)
        R = res.transform.rotation
        np.testing.assert_allclose(R.T @ R, np.eye(3), rtol=0, atol=1e-12)
        assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)


def test_idempotence_on_reconstruction():
    rng = np.random.default_rng(14)
    cfg = RegularizationConfig(L=0.3)
    for _ in range(50):
        w = rand_regular_window(rng)
        first = su_decompose_regularized(w, cfg)
        again = su_decompose_regularized(
            window_from_matrix(reconstruct(first.transform, first.invariant)), cfg)
        np.testing.assert_allclose(again.invariant.matrix, first.invariant.matrix,
                                   rtol=0, atol=1e-12 * max(1, np.max(np.abs(w.matrix()))))


def test_active_p_flagged_and_clamped():
    rng = np.random.default_rng(15)
    cfg = RegularizationConfig(L=0.05)
    found = 0
    for _ in range(50):
        w = rand_regular_window(rng)
        exact = su_decompose(w)
        if np.linalg.norm(exact.p_star) <= cfg.L:
            continue
        found += 1
        res = su_decompose_regularized(w, cfg)
        assert res.invariant.regularized_p
        assert abs(np.linalg.norm(res.p_star) - cfg.L) < 1e-12
        assert abs(np.linalg.norm(res.transform.position) - cfg.L) < 1e-12
    assert found > 20
