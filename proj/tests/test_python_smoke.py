import math

import pytest

import vitaslam as vs


def test_geometry_roundtrip():
    assert vs.wrap_angle(3.0 * math.pi) == pytest.approx(-math.pi)
    a = vs.Pose(1.0, 2.0, 0.3)
    b = vs.Pose(-0.5, 0.25, -1.1)
    d = vs.between(a, b)
    back = vs.compose(a, d)
    assert back.x == pytest.approx(b.x, abs=1e-12)
    assert back.y == pytest.approx(b.y, abs=1e-12)
    assert vs.wrap_angle(back.theta - b.theta) == pytest.approx(0.0, abs=1e-12)
    ident = vs.compose(a, vs.inverse(a))
    assert math.hypot(ident.x, ident.y) == pytest.approx(0.0, abs=1e-12)
    p = vs.transform_point(vs.Pose(0.0, 0.0, math.pi / 2.0), vs.Point2(1.0, 0.0))
    assert p.x == pytest.approx(0.0, abs=1e-12)
    assert p.y == pytest.approx(1.0, abs=1e-12)


def test_pose_cell_grid_ops():
    grid = vs.PoseCellGrid()
    assert (grid.nx, grid.ny, grid.nth) == (21, 21, 36)
    grid.reset(vs.CellCoords(10.0, 10.0, 0.0))
    grid.path_integrate(vs.Twist(0.075, 0.02))
    grid.inject(vs.CellCoords(10.0, 10.0, 0.0), 0.01)
    grid.step_attractor()
    assert grid.total_activity() == pytest.approx(1.0, abs=1e-9)
    assert len(grid.activity) == 21 * 21 * 36
    est = grid.decode()
    assert 0.0 <= est.cell_coords.x < 21.0
    cells = grid.pose_to_cells(est.pose)
    assert cells.x == pytest.approx(est.cell_coords.x, abs=1e-9)


def test_visual_profile():
    img = vs.RgbImage(8, 2, bytes([100] * (8 * 2 * 3)))
    profile = vs.extract_view_profile(img, profile_len=4)
    assert len(profile) == 4
    assert all(v == profile[0] for v in profile)
    assert vs.best_shift_distance(profile, profile, max_shift=2) == 0.0


def test_tactile_descriptors():
    points = [
        vs.Point2(0.4 * math.cos(a), 0.4 * math.sin(a))
        for a in [2.0 * math.pi * k / 12 for k in range(12)]
    ]
    normals = vs.estimate_normals(points, vs.Point2(0.0, 0.0), k=4)
    hist = vs.compute_pfh(points, normals, bins_per_feature=5)
    assert len(hist) == 125
    assert sum(hist) == pytest.approx(1.0, abs=1e-12)
    assert min(hist) >= 0.0

    sda = vs.compute_sda([0.0] * 23 + [0.2])
    assert sda[-1] == 1.0
    assert sum(sda[:-1]) == 0.0


def test_params_and_config_errors(tmp_path):
    params = vs.Params()
    params.set("pc.nx", "15")
    params.seed = 7
    assert params.seed == 7
    with pytest.raises(vs.ConfigErrorException):
        params.set("wheel.count", "4")
    with pytest.raises(vs.ConfigErrorException):
        vs.load_config_file(str(tmp_path / "missing.cfg"))

    cfg = tmp_path / "ok.cfg"
    cfg.write_text("run.max_cycles = 9\n# comment\n")
    loaded = vs.load_config_file(str(cfg))
    assert isinstance(loaded, vs.Params)


def test_run_record_replay(tmp_path):
    params = vs.Params()
    params.set("run.max_cycles", "25")
    log_path = tmp_path / "run.log"

    report = vs.run_slam("vita", params, record_path=str(log_path))
    assert report.mode == "vita"
    assert report.cycles == 25
    assert report.view_template_count > 0
    assert log_path.exists()

    replayed = vs.replay_slam("vita", params, str(log_path))
    assert vs.report_to_string(report) == vs.report_to_string(replayed)

    svg = vs.render_map_svg(report)
    assert svg.startswith("<svg")

    with pytest.raises(ValueError):
        vs.run_slam("bogus", params)


def test_trajectory_error():
    est = [vs.Pose(float(i), 0.0, 0.0) for i in range(5)]
    truth = [vs.Pose(float(i) + 2.0, 1.0, 0.0) for i in range(5)]
    ate = vs.absolute_trajectory_error(est, truth)
    assert ate.rmse_position == pytest.approx(0.0, abs=1e-9)
    assert ate.rmse_heading == pytest.approx(0.0, abs=1e-9)
