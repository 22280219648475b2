import json
from pathlib import Path

import pytest

from wildmoduli.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, main

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_kpartite(capsys):
    code, out, _ = run(capsys, "graph", "kpartite", "--partition", "2,2,1")
    g = json.loads(out)
    assert code == EXIT_OK
    assert len(g["nodes"]) == 5 and sum(map(sum, g["adj"])) // 2 == 8


def test_empty_partition(capsys):
    code, _, err = run(capsys, "graph", "kpartite", "--partition", "")
    assert code == EXIT_INPUT and "/partition" in err


def test_quiver_dim(capsys):
    code, out, _ = run(capsys, "quiver", "dim", "--graph", FIXTURES / "d4tilde.json", "--dims", "2,1,1,1,1")
    assert code == EXIT_OK and json.loads(out)["dim"] == 2


def test_fission_and_dims(capsys):
    code, out, _ = run(capsys, "graph", "fission", "--irregular-type", FIXTURES / "pii_irregular_type.json")
    assert code == EXIT_OK
    code, out, _ = run(capsys, "orbit", "dim", "--point", FIXTURES / "pii_point.json", "--group", "SL2")
    assert code == EXIT_OK and json.loads(out)["orbit_dim"] == 8
    for curve in ("pii_curve", "four_poles_curve"):
        code, out, _ = run(capsys, "orbit", "mstar-dim", "--curve", FIXTURES / f"{curve}.json", "--group", "SL2")
        assert code == EXIT_OK and json.loads(out)["mstar_dim"] == 2


def test_schema_error_pointer(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "poles": [{"a": [0, "x"], "parts": []}]}))
    code, _, err = run(capsys, "spectral", "invariants", "--matrix", bad)
    assert code == EXIT_INPUT and "/poles/0/a/1" in err


def test_fkv_out_has_provenance(capsys, tmp_path):
    out = tmp_path / "fkv.json"
    code, _, _ = run(capsys, "betti", "fkv", "--traces", "0.5,1.2,-0.3,0.7", "--seed", 3, "--out", out)
    assert code == EXIT_OK
    data = json.loads(out.read_text())
    assert data["provenance"]["seeds"][0] == [3, 0]


def test_report_reproducible(capsys, tmp_path):
    reports = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        code, _, _ = run(capsys, "betti", "fn", "--q0", "2", "--seed", 1, "--report", path)
        assert code == EXIT_OK
        rep = json.loads(path.read_text())
        assert set(rep["tolerances"]) >= {"fit", "relation"}
        rep.pop("created")
        rep.pop("wall_time")
        reports.append(json.dumps(rep, sort_keys=True))
    assert reports[0] == reports[1]


def test_spectral_commands(capsys, tmp_path):
    m = FIXTURES / "garnier3.json"
    assert run(capsys, "spectral", "bracket", "--matrix", m)[0] == EXIT_OK
    code, out, _ = run(capsys, "spectral", "bracket", "--matrix", m, "--f", 3, "--probe", "0,0,1")
    assert code == EXIT_OK and abs(complex(*json.loads(out)["bracket"])) > 1e-3
    assert run(capsys, "spectral", "flow", "--matrix", m, "--hamiltonian", 3, "--time", 0.2,
               "--steps", 50)[0] == EXIT_OK
    assert run(capsys, "spectral", "monodromy", "--matrix", FIXTURES / "balanced3.json")[0] == EXIT_OK
    assert run(capsys, "spectral", "schlesinger", "--matrix", FIXTURES / "pvi.json", "--moving", 1,
               "--path", "0.3,0;0.35,0", "--base=-0.5,-1")[0] == EXIT_OK


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_failed_check_exit(capsys):
    code, _, err = run(capsys, "spectral", "flow", "--matrix", FIXTURES / "garnier3.json",
                       "--hamiltonian", 3, "--time", 1.0, "--steps", 10, "--tol", 1e-30)
    assert code == EXIT_CHECK and "check failed" in err


def test_reproduce(capsys):
    code, out, _ = run(capsys, "reproduce", "dimensions")
    assert code == EXIT_OK and json.loads(out)["count"] > 10
    assert run(capsys, "reproduce", "surfaces")[0] == EXIT_OK
    assert run(capsys, "reproduce", "nosuch")[0] == EXIT_INPUT


def test_missing_file(capsys):
    code, _, _ = run(capsys, "quiver", "dim", "--graph", "/nonexistent.json", "--dims", "1")
    assert code == EXIT_INPUT
