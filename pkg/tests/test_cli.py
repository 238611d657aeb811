import json

import pytest

import nearopt as no
from nearopt import cli
from _support import island_storage_config, scenario_to_dict


@pytest.fixture
def workspace(tmp_path):
    scen = tmp_path / "island.json"
    scen.write_text(json.dumps(scenario_to_dict(island_storage_config())))
    manifest = {
        "scenario": "island.json",
        "epsilon_grid": [0.0, 0.1],
        "directions": [{"kind": "storage"}],
        "output_dir": "out",
    }
    man = tmp_path / "manifest.json"
    man.write_text(json.dumps(manifest))
    return tmp_path, scen, man


def test_sweep_end_to_end(workspace):
    tmp_path, _, man = workspace
    code = cli.main(["sweep", str(man)])
    assert code == 0
    out = tmp_path / "out"
    assert (out / "optimal_solution.json").exists()
    assert (out / "sweep.csv").exists()
    svg = out / "curves" / "storage.svg"
    assert svg.exists() and "<svg" in svg.read_text()[:500]
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "direction,epsilon,c_star,status"
    assert len(lines) == 3  # two grid points x one direction


def test_sweep_reproducible(workspace):
    tmp_path, _, man = workspace
    assert cli.main(["sweep", str(man), "--out", str(tmp_path / "a")]) == 0
    assert cli.main(["sweep", str(man), "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "sweep.csv").read_bytes()
    b = (tmp_path / "b" / "sweep.csv").read_bytes()
    assert a == b


def test_persisted_solution_reverifies(workspace):
    tmp_path, scen, man = workspace
    assert cli.main(["sweep", str(man)]) == 0
    doc = json.loads((tmp_path / "out" / "optimal_solution.json").read_text())
    config = no.load_scenario(scen)
    lp, _ = no.compile_scenario(config)
    sol = no.solve(lp)
    space = no.build_epsilon_space(lp, sol, 0.0)
    assert doc["status"] == "optimal"
    assert no.contains(space, doc["primal"])


def test_solve_subcommand(workspace, capsys):
    tmp_path, scen, _ = workspace
    code = cli.main(["solve", str(scen), "--out", str(tmp_path / "solved")])
    assert code == 0
    doc = json.loads((tmp_path / "solved" / "optimal_solution.json").read_text())
    assert doc["status"] == "optimal"
    assert "objective" in capsys.readouterr().out


def test_missing_series_file_is_fatal(workspace, capsys):
    tmp_path, scen, man = workspace
    doc = json.loads(scen.read_text())
    doc["network"]["nodes"][0]["load"] = "gone.csv"
    scen.write_text(json.dumps(doc))
    code = cli.main(["sweep", str(man)])
    assert code == 1
    assert "gone.csv" in capsys.readouterr().err


def test_negative_epsilon_fails_before_solving(workspace, capsys):
    tmp_path, _, man = workspace
    doc = json.loads(man.read_text())
    doc["epsilon_grid"] = [-0.1, 0.0]
    man.write_text(json.dumps(doc))
    code = cli.main(["sweep", str(man)])
    assert code == 1
    assert "NegativeEpsilon" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


def test_validate_ok(workspace, capsys):
    _, _, man = workspace
    assert cli.main(["validate", str(man)]) == 0
    assert "valid" in capsys.readouterr().out


def test_validate_unknown_node(workspace, capsys):
    tmp_path, _, man = workspace
    doc = json.loads(man.read_text())
    doc["directions"].append({"kind": "country", "node": "ZZ"})
    man.write_text(json.dumps(doc))
    assert cli.main(["validate", str(man)]) == 1
    assert "UnknownNode" in capsys.readouterr().out


def test_validate_duplicate_labels(workspace, capsys):
    tmp_path, _, man = workspace
    doc = json.loads(man.read_text())
    doc["directions"] = [{"kind": "storage"}, {"kind": "storage"}]
    man.write_text(json.dumps(doc))
    assert cli.main(["validate", str(man)]) == 1
    assert "DuplicateLabel" in capsys.readouterr().out


def test_validate_missing_scenario(tmp_path, capsys):
    man = tmp_path / "manifest.json"
    man.write_text(json.dumps({"scenario": "absent.json", "directions": []}))
    assert cli.main(["validate", str(man)]) == 1
    assert "MissingFile" in capsys.readouterr().out


def test_eps_override(workspace):
    tmp_path, _, man = workspace
    code = cli.main(["sweep", str(man), "--eps", "0,0.05,0.1",
                     "--out", str(tmp_path / "o2")])
    assert code == 0
    lines = (tmp_path / "o2" / "sweep.csv").read_text().splitlines()
    assert len(lines) == 4


def test_unreadable_manifest_is_fatal(tmp_path, capsys):
    man = tmp_path / "nope.json"
    assert cli.main(["sweep", str(man)]) == 1
    assert "BadManifest" in capsys.readouterr().err


def test_partial_row_failure_exits_2(workspace, monkeypatch, capsys):
    import nearopt.conditions as conditions
    real = conditions.compute_nonimplied

    def flaky(space, d, options=None):
        if space.epsilon > 0:
            raise no.errors.EpsilonSpaceInfeasibleError("injected")
        return real(space, d, options)

    monkeypatch.setattr(conditions, "compute_nonimplied", flaky)
    tmp_path, _, man = workspace
    code = cli.main(["sweep", str(man)])
    assert code == 2
    err = capsys.readouterr().err
    assert "RowFailed" in err and "EpsilonSpaceInfeasible" in err
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    assert lines[1].endswith("Found")
    assert lines[2].endswith("EpsilonSpaceInfeasible")


def test_curve_data_is_non_increasing(workspace):
    tmp_path, _, man = workspace
    assert cli.main(["sweep", str(man), "--eps", "0,0.02,0.05,0.1"]) == 0
    rows = (tmp_path / "out" / "sweep.csv").read_text().splitlines()[1:]
    by_label = {}
    for row in rows:
        label, eps, c_star, status = row.split(",")
        assert status == "Found"
        by_label.setdefault(label, []).append(float(c_star))
    for series in by_label.values():
        assert all(b <= a + 1e-6 for a, b in zip(series, series[1:]))


def test_manifest_tolerance_overrides(workspace):
    tmp_path, _, man = workspace
    doc = json.loads(man.read_text())
    doc["tolerances"] = {"feas": 1e-8, "dual": 1e-5}
    man.write_text(json.dumps(doc))
    manifest = cli.load_manifest(man, tol_feas_override=1e-9)
    opts = manifest.solver_options()
    assert opts.tol_feas == 1e-9  # flag beats the manifest
    assert opts.tol_dual == 1e-5
    assert opts.tol_pivot == 1e-9  # untouched default


def test_validate_all_direction_kinds(tmp_path):
    from _support import ring_config, scenario_to_dict
    scen = tmp_path / "ring.json"
    scen.write_text(json.dumps(scenario_to_dict(ring_config())))
    man = tmp_path / "manifest.json"
    man.write_text(json.dumps({
        "scenario": "ring.json",
        "epsilon_grid": [0.0, 0.1],
        "directions": [
            {"kind": "all_lines"},
            {"kind": "country", "node": "N1"},
            {"kind": "line", "line": "L12"},
            {"kind": "storage"},
            {"kind": "res", "techs": ["wind", "pv"]},
        ],
        "output_dir": "out",
    }))
    assert cli.main(["validate", str(man)]) == 0


def test_validate_unknown_direction_kind(workspace, capsys):
    tmp_path, _, man = workspace
    doc = json.loads(man.read_text())
    doc["directions"] = [{"kind": "mystery"}]
    man.write_text(json.dumps(doc))
    assert cli.main(["validate", str(man)]) == 1
    assert "InvalidConfig" in capsys.readouterr().out
