import json
import math

import pytest

from curvb._backend import USING_NUMBA
from curvb.cli import RunReport, main

REPORT_KEYS = {
    "schema",
    "version",
    "command",
    "model",
    "seed",
    "tolerances",
    "results",
    "pass",
    "wall_time_s",
}


@pytest.fixture(autouse=True)
def clean_seed_env(monkeypatch):
    monkeypatch.delenv("CURVB_SEED", raising=False)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


# ------------------------------------------------------------------- bounds


def test_bounds_real_space_form(capsys):
    code, data = run_json(
        capsys, ["bounds", "real", "--c", "5", "--dim", "3", "--budget", "200"]
    )
    assert code == 0
    assert data["pass"] is True
    assert set(data) == REPORT_KEYS
    assert data["schema"] == 1
    assert data["command"] == "bounds"
    assert data["seed"] == 0
    res = data["results"]
    assert res["theorem_lo"] == 5.0 and res["theorem_hi"] == 5.0
    assert abs(res["est_lo"] - 5.0) < 1e-6 and abs(res["est_hi"] - 5.0) < 1e-6
    assert data["model"]["kind"] == "real" and data["model"]["n"] == 3


def test_bounds_negative_holomorphic_range_flips(capsys):
    code, data = run_json(
        capsys, ["bounds", "complex", "--c", "-4", "--dim", "6", "--budget", "400"]
    )
    assert code == 0 and data["pass"] is True
    res = data["results"]
    assert res["theorem_lo"] == -4.0 and res["theorem_hi"] == -1.0
    assert res["est_lo"] >= -4.0 - 1e-6 and res["est_hi"] <= -1.0 + 1e-6


def test_bounds_m_shorthand_sets_grassmannian_dimension(capsys):
    code, data = run_json(
        capsys, ["bounds", "grassmannian", "--m", "2", "--budget", "300"]
    )
    assert code == 0 and data["pass"] is True
    assert data["model"]["n"] == 8
    res = data["results"]
    assert res["theorem_lo"] == -1.0 and res["theorem_hi"] == 8.0


def test_bounds_seed_sources(capsys, monkeypatch):
    _, data = run_json(capsys, ["bounds", "real", "--c", "1", "--budget", "50"])
    assert data["seed"] == 0
    monkeypatch.setenv("CURVB_SEED", "42")
    _, data = run_json(capsys, ["bounds", "real", "--c", "1", "--budget", "50"])
    assert data["seed"] == 42
    _, data = run_json(
        capsys, ["bounds", "real", "--c", "1", "--budget", "50", "--seed", "7"]
    )
    assert data["seed"] == 7
    monkeypatch.setenv("CURVB_SEED", "quux")
    assert main(["bounds", "real", "--c", "1", "--budget", "50"]) == 2


def test_bounds_reports_are_reproducible(capsys):
    argv = ["bounds", "quadric", "--budget", "300", "--seed", "3"]
    _, first = run_json(capsys, argv)
    _, second = run_json(capsys, argv)
    first.pop("wall_time_s")
    second.pop("wall_time_s")
    assert first == second


def test_bounds_out_flag_writes_file(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main(
        ["bounds", "real", "--c", "2", "--budget", "50", "--out", str(out)]
    )
    assert code == 0
    assert capsys.readouterr().out == ""
    data = json.loads(out.read_text())
    assert set(data) == REPORT_KEYS and data["pass"] is True


def test_report_round_trips_through_dataclass(capsys):
    _, data = run_json(capsys, ["bounds", "real", "--c", "1", "--budget", "50"])
    assert RunReport.from_dict(data).to_dict() == data


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "real"],  # space form without --c
        ["bounds", "grassmannian", "--c", "4"],  # unit-normalized with --c
        ["bounds", "sasakian", "--m", "2"],  # no m-shorthand for contact
        ["bounds", "complex", "--c", "4", "--dim", "5"],  # odd complex dim
        ["bounds", "quaternionic", "--c", "4", "--dim", "6"],
    ],
)
def test_bounds_usage_errors_exit_2(argv):
    assert main(argv) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["bounds", "octonionic", "--c", "1"],
        ["bounds", "real", "--c", "1", "--budget", "0"],
        ["bounds", "real", "--c", "1", "--dim", "3", "--m", "2"],
        ["surface", "--resolution", "1"],
        ["frobnicate"],
        [],
    ],
)
def test_argparse_rejections_exit_2(argv):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 2


# ---------------------------------------------------------------- certify-h


def test_certify_h_passes_claimed_bound(capsys):
    code, data = run_json(capsys, ["certify-h", "--tol", "1e-3"])
    assert code == 0 and data["pass"] is True
    assert data["tolerances"]["lower_bound_claim"] == -3.3
    res = data["results"]
    assert res["converged"] is True
    assert res["enclosure_lo"] >= -3.3
    assert res["enclosure_hi"] <= -3.25


def test_certify_h_default_tolerance_regression(capsys):
    code, data = run_json(capsys, ["certify-h"])
    assert code == 0
    res = data["results"]
    assert abs(res["enclosure_lo"] - (-3.2666676231429648)) < 1e-9
    if USING_NUMBA:
        assert res["enclosure_lo"] == -3.2666676231429648
        assert res["enclosure_hi"] == -3.2666666661276254
        assert res["boxes_processed"] == 239


def test_certify_h_budget_exhaustion_fails(capsys):
    code, data = run_json(capsys, ["certify-h", "--tol", "1e-12", "--max-boxes", "20"])
    assert code == 1
    assert data["pass"] is False
    assert data["results"]["converged"] is False


def test_certify_h_optional_surface_dump(capsys, tmp_path):
    csv_path = tmp_path / "surf.csv"
    code = main(
        [
            "certify-h",
            "--tol",
            "1e-3",
            "--surface",
            "3",
            "--surface-out",
            str(csv_path),
            "--out",
            str(tmp_path / "r.json"),
        ]
    )
    assert code == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "x,y,h"
    assert len(lines) == 10
    center = [float(v) for v in lines[5].split(",")]
    assert center[0] == pytest.approx(math.pi / 4) and abs(center[2] + 3.25) < 1e-12


# -------------------------------------------------------------------- check


def test_check_plane_fixture(capsys):
    code, data = run_json(capsys, ["check", "--fixture", "plane", "--points", "9"])
    assert code == 0 and data["pass"] is True
    assert data["model"] == {"fixture": "plane", "points": 9}
    assert len(data["results"]) == 9
    assert all(r["passed"] for r in data["results"])


def test_check_sphere_fixture_hits_eigenvalue(capsys):
    code, data = run_json(
        capsys, ["check", "--fixture", "sphere-in-sphere", "--points", "9"]
    )
    assert code == 0 and data["pass"] is True
    assert data["model"]["c"] == 1.0
    for r in data["results"]:
        assert abs(r["delta_f_over_f"] - 1.0) <= 1e-3


def test_check_cylinder_radius_flag(capsys):
    code, data = run_json(
        capsys,
        ["check", "--fixture", "cylinder", "--radius", "2.0", "--points", "4"],
    )
    assert code == 0
    assert data["model"]["radius"] == 2.0
    for r in data["results"]:
        assert abs(r["H2"] - 0.0625) < 1e-8
        assert r["chen"]["upper"] == pytest.approx(0.0625, abs=1e-8)


def test_check_spec_file_fixture_form(capsys, tmp_path):
    path = tmp_path / "drum.json"
    path.write_text(json.dumps({"fixture": "plane", "points": 4}))
    code, data = run_json(capsys, ["check", str(path)])
    assert code == 0
    assert data["model"] == {"file": str(path), "name": "drum", "points": 4}


def test_check_spec_file_inline_form(capsys, tmp_path):
    path = tmp_path / "tube.json"
    path.write_text(
        json.dumps(
            {
                "m1": 1,
                "m2": 1,
                "vars": ["u", "v"],
                "map": ["cos(v)", "sin(v)", "u"],
                "warping": "1",
                "base_domain": [[-1.0, 1.0]],
                "fiber_domain": [[0.0, 2.0]],
            }
        )
    )
    code, data = run_json(capsys, ["check", str(path), "--points", "4"])
    assert code == 0 and data["pass"] is True
    assert len(data["results"]) == 4


def test_check_inline_warping_mismatch_is_math_failure(tmp_path, capsys):
    path = tmp_path / "liar.json"
    path.write_text(
        json.dumps(
            {
                "m1": 1,
                "m2": 1,
                "vars": ["u", "v"],
                "map": ["cos(v)", "sin(v)", "u"],
                "warping": "2",
                "base_domain": [[-1.0, 1.0]],
                "fiber_domain": [[0.0, 2.0]],
            }
        )
    )
    assert main(["check", str(path), "--points", "4"]) == 1


def test_check_usage_errors(tmp_path):
    assert main(["check"]) == 2
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"fixture": "plane"}))
    assert main(["check", str(path), "--fixture", "plane"]) == 2
    assert main(["check", str(tmp_path / "absent.json")]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{oops")
    assert main(["check", str(broken)]) == 2


# ------------------------------------------------------------------ surface


def test_surface_writes_corner_grid_to_stdout(capsys):
    code = main(["surface", "--resolution", "2"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,y,h"
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    assert len(rows) == 4
    values = sorted(r[2] for r in rows)
    assert values == pytest.approx([-1.0, -1.0, 0.0, 1.0], abs=1e-12)


def test_surface_out_file_matches_stdout(capsys, tmp_path):
    main(["surface", "--resolution", "3"])
    stdout_text = capsys.readouterr().out
    path = tmp_path / "grid.csv"
    assert main(["surface", "--resolution", "3", "--out", str(path)]) == 0
    assert path.read_text() == stdout_text
