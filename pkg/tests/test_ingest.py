import numpy as np
import pytest

from conftest import rand_transform, transform_pose_row
from screwtraj import (FileFormat, LocalWindow, MixedKind,
                       NonMonotoneProgress, NonPositiveStep, ParseError,
                       PoseSample, Screw, ScrewKind, TooShort, Trajectory,
                       build_windows, load_trajectory, pose_log_twist,
                       save_screw_csv, transform_screw)


def qz(angle):
    return [np.cos(angle / 2), 0.0, 0.0, np.sin(angle / 2)]


def test_pose_log_twist_identity():
    T = PoseSample([1, 2, 3], qz(0.7))
    t = pose_log_twist(T, T, 0.1)
    np.testing.assert_allclose(t.as_vector(), np.zeros(6), rtol=0, atol=1e-14)


def test_pose_log_twist_translation():
    t = pose_log_twist(PoseSample([0, 0, 0], [1, 0, 0, 0]),
                       PoseSample([0.1, 0, 0], [1, 0, 0, 0]), 0.1)
    np.testing.assert_allclose(t.alpha, [0, 0, 0], rtol=0, atol=1e-15)
    np.testing.assert_allclose(t.beta, [1, 0, 0], rtol=0, atol=1e-12)


def test_pose_log_twist_rotation_about_origin():
    t = pose_log_twist(PoseSample([0, 0, 0], [1, 0, 0, 0]),
                       PoseSample([0, 0, 0], qz(0.2)), 0.1)
    np.testing.assert_allclose(t.alpha, [0, 0, 2], rtol=0, atol=1e-12)
    np.testing.assert_allclose(t.beta, [0, 0, 0], rtol=0, atol=1e-12)


def test_pose_log_twist_rejects_bad_step():
    T = PoseSample([0, 0, 0], [1, 0, 0, 0])
    with pytest.raises(NonPositiveStep):
        pose_log_twist(T, T, 0.0)
    with pytest.raises(NonPositiveStep):
        pose_log_twist(T, T, -0.1)


def test_pose_log_twist_world_frame_covariant():
    # re-expressing both poses in another world frame maps the twist by
    # exactly the corresponding screw transform
    rng = np.random.default_rng(0)
    for _ in range(100):
        T1 = PoseSample(rng.normal(size=3), rng.normal(size=4))
        T2 = PoseSample(rng.normal(size=3), rng.normal(size=4))
        t = pose_log_twist(T1, T2, 0.2)
        G = rand_transform(rng, 5.0)
        T1g = PoseSample(*_apply(G, T1))
        T2g = PoseSample(*_apply(G, T2))
        tg = pose_log_twist(T1g, T2g, 0.2)
        want = transform_screw(G, t)
        np.testing.assert_allclose(tg.as_vector(), want.as_vector(),
                                   rtol=0, atol=1e-10)


def _apply(G, pose: PoseSample):
    from screwtraj.liegroup import matrix_to_quat
    return (G.rotation @ pose.position + G.position,
            matrix_to_quat(G.rotation @ pose.rotation_matrix()))


def test_quaternion_renormalized():
    p = PoseSample([0, 0, 0], [2.0, 0, 0, 0])
    assert abs(np.linalg.norm(p.orientation) - 1.0) < 1e-12


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_pose_constant_rotation(tmp_path):
    # uniform rotation about z: all extracted twists identical and analytic
    rows = ["x,px,py,pz,qw,qx,qy,qz"]
    for i in range(4):
        q = qz(0.15 * i)
        rows.append(",".join("{:.17g}".format(float(v))
                             for v in [0.1 * i, 0.0, 0.0, 0.0, *q]))
    f = _write(tmp_path / "rot.csv", "\n".join(rows) + "\n")
    traj = load_trajectory(f, FileFormat.POSE_CSV)
    assert len(traj) == 3
    np.testing.assert_allclose(traj.progress, [0.05, 0.15, 0.25], rtol=0, atol=1e-15)
    for i in range(3):
        np.testing.assert_allclose(traj.alphas[i], [0, 0, 1.5], rtol=0, atol=1e-10)
        np.testing.assert_allclose(traj.betas[i], [0, 0, 0], rtol=0, atol=1e-10)


def test_load_screw_minimal(tmp_path):
    f = _write(tmp_path / "s.csv",
               "# comment\nx,a1,a2,a3,b1,b2,b3\n"
               "0,1,0,0,0,0,0\n0.5,0,1,0,0,0,0\n1,0,0,1,0,0,0\n")
    traj = load_trajectory(f, FileFormat.SCREW_CSV, ScrewKind.WRENCH)
    assert len(traj) == 3
    assert traj.kind is ScrewKind.WRENCH
    assert traj.screw(1).kind is ScrewKind.WRENCH


def test_load_rejects_decreasing_progress(tmp_path):
    f = _write(tmp_path / "bad.csv",
               "x,a1,a2,a3,b1,b2,b3\n0,1,0,0,0,0,0\n-1,0,1,0,0,0,0\n2,0,0,1,0,0,0\n")
    with pytest.raises(NonMonotoneProgress):
        load_trajectory(f, FileFormat.SCREW_CSV)


def test_load_parse_errors(tmp_path):
    f = _write(tmp_path / "bad.csv",
               "x,a1,a2,a3,b1,b2,b3\n0,1,0,0,0,0,0\n1,oops,0,0,0,0,0\n")
    with pytest.raises(ParseError) as err:
        load_trajectory(f, FileFormat.SCREW_CSV)
    assert err.value.line == 3

    f2 = _write(tmp_path / "hdr.csv", "a,b,c\n1,2,3\n")
    with pytest.raises(ParseError):
        load_trajectory(f2, FileFormat.SCREW_CSV)

    f3 = _write(tmp_path / "short_row.csv",
                "x,a1,a2,a3,b1,b2,b3\n0,1,0,0\n")
    with pytest.raises(ParseError):
        load_trajectory(f3, FileFormat.SCREW_CSV)


def test_load_too_short(tmp_path):
    f = _write(tmp_path / "two.csv",
               "x,a1,a2,a3,b1,b2,b3\n0,1,0,0,0,0,0\n1,0,1,0,0,0,0\n")
    with pytest.raises(TooShort):
        load_trajectory(f, FileFormat.SCREW_CSV)
    rows = ["x,px,py,pz,qw,qx,qy,qz"]
    for i in range(3):  # 3 poses -> only 2 twists
        rows.append(",".join("{:.17g}".format(float(v))
                             for v in [0.1 * i, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]))
    f2 = _write(tmp_path / "p3.csv", "\n".join(rows) + "\n")
    with pytest.raises(TooShort):
        load_trajectory(f2, FileFormat.POSE_CSV)


def test_screw_csv_roundtrip_bit_identical(tmp_path):
    rng = np.random.default_rng(1)
    traj = Trajectory(np.sort(rng.uniform(0, 10, 7)), rng.normal(size=(7, 3)),
                      rng.normal(size=(7, 3)))
    f = tmp_path / "rt.csv"
    save_screw_csv(f, traj)
    back = load_trajectory(f, FileFormat.SCREW_CSV)
    np.testing.assert_array_equal(back.progress, traj.progress)
    np.testing.assert_array_equal(back.alphas, traj.alphas)
    np.testing.assert_array_equal(back.betas, traj.betas)


def test_build_windows_counts_and_indexing():
    rng = np.random.default_rng(2)

    def make(n):
        return Trajectory(np.arange(n, dtype=float), rng.normal(size=(n, 3)),
                          rng.normal(size=(n, 3)))

    assert len(build_windows(make(3))) == 1
    traj = make(10)
    wins = build_windows(traj)
    assert len(wins) == 8
    for w in wins:
        i = w.progress_index
        np.testing.assert_array_equal(w.xi_prev.alpha, traj.alphas[i - 1])
        np.testing.assert_array_equal(w.xi_curr.alpha, traj.alphas[i])
        np.testing.assert_array_equal(w.xi_next.beta, traj.betas[i + 1])
        assert w.delta_x == pytest.approx(1.0)
    with pytest.raises(TooShort):
        build_windows(make(2))


def test_window_delta_x_nonuniform():
    traj = Trajectory([0.0, 1.0, 4.0], np.ones((3, 3)), np.zeros((3, 3)))
    (w,) = build_windows(traj)
    assert w.delta_x == pytest.approx(2.0)


def test_window_rejects_mixed_kind():
    t = Screw([1, 0, 0], [0, 0, 0], ScrewKind.TWIST)
    w = Screw([1, 0, 0], [0, 0, 0], ScrewKind.WRENCH)
    with pytest.raises(MixedKind):
        LocalWindow(t, t, w)


def test_window_matrix_layout():
    w = LocalWindow(Screw([1, 2, 3], [4, 5, 6]), Screw([7, 8, 9], [10, 11, 12]),
                    Screw([13, 14, 15], [16, 17, 18]))
    xi = w.matrix()
    np.testing.assert_array_equal(xi[:, 0], [1, 2, 3, 4, 5, 6])
    np.testing.assert_array_equal(xi[:, 2], [13, 14, 15, 16, 17, 18])
