import csv
import io
import json
import os
import subprocess

import pytest

BIN = os.environ.get("LSPEC_BIN", os.path.join(os.path.dirname(__file__), "..", "..", "build", "tools", "lspec"))


def run(*args, env=None, cwd=None):
    e = dict(os.environ)
    if env:
        e.update(env)
    p = subprocess.run([BIN, *args], capture_output=True, text=True, env=e, cwd=cwd)
    return p.returncode, p.stdout, p.stderr


def doc(out):
    d = json.loads(out)
    assert d["schema"] == "lspec/1"
    return d


def test_elem_json_and_number_strings():
    code, out, _ = run("elem", "--alpha", "2.5", "--z", "2i")
    assert code == 0
    d = doc(out)
    v = d["result"]["value"]
    assert isinstance(v["re"], str)
    # 17 significant digits round-trip
    assert float(v["re"]) == pytest.approx(-0.0014030243916028642, rel=1e-15)
    assert d["manifest"]["config"]["alpha"] == "2.5"
    assert all(c["pass"] for c in d["checks"])


def test_residues_minkowski_flat():
    code, out, _ = run("residues", "--metric", "minkowski")
    assert code == 0
    d = doc(out)
    assert float(d["result"]["curvature_residue_max"]) <= 1e-10
    for z in d["result"]["non_poles"]:
        assert abs(complex(float(z["circle"]["re"]), float(z["circle"]["im"]))) <= 1e-10


def test_contour_csv_is_rfc4180(tmp_path):
    out_csv = tmp_path / "c.csv"
    code, out, err = run("--csv", str(out_csv), "contour-check", "--alpha", "1.5,2.3", "--k", "0,2")
    assert code == 0
    raw = out_csv.read_bytes()
    assert raw.endswith(b"\r\n")
    rows = list(csv.reader(io.StringIO(raw.decode(), newline="")))
    assert rows[0][:3] == ["alpha", "k", "eps"]
    assert len(rows) == 1 + 2 * 2 * 2
    assert out.replace("\r\n", "\n") == raw.decode().replace("\r\n", "\n")
    # manifest goes to stderr when stdout is CSV and no JSON path is given
    assert json.loads(err)["command"] == "contour-check"


def test_determinism(tmp_path):
    p = tmp_path / "a.json"
    seen = []
    for _ in range(2):
        assert run("--json", str(p), "flow", "--samples", "8", "--seed", "5")[0] == 0
        seen.append(p.read_bytes())
    assert seen[0] == seen[1]


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.toml"
    out = tmp_path / "o.json"
    cfg.write_text(f'json = "{out}"\n[elem]\nalpha = "3.5"\nz = "1+2i"\n')
    code, _, _ = run("--config", str(cfg), "elem", "--z", "2i")
    assert code == 0
    d = doc(out.read_text())
    assert d["manifest"]["config"]["alpha"] == "3.5"
    assert d["manifest"]["config"]["z"] == "2i"


@pytest.mark.parametrize(
    "body",
    [
        '[elem]\nalpha = "3.5"\nbogus = 1\n',
        'bogus = 1\n[elem]\nalpha = "3.5"\n',
        '[elem]\nz = "2q"\n',
        '[elem]\nn = "four"\n',
        '[elem]\ntol = -1\n',
    ],
)
def test_malformed_config_exit_2_without_artifacts(tmp_path, body):
    cfg = tmp_path / "bad.toml"
    out = tmp_path / "o.json"
    man = tmp_path / "m.json"
    cfg.write_text(f'json = "{out}"\nmanifest = "{man}"\n' + body)
    code, stdout, _ = run("--config", str(cfg))
    assert code == 2
    assert json.loads(stdout)["error"]["kind"] == "ConfigError"
    assert not out.exists() and not man.exists()
    assert list(tmp_path.iterdir()) == [cfg]


def test_computation_error_exit_1(tmp_path):
    out = tmp_path / "o.json"
    code, stdout, _ = run("--json", str(out), "hadamard", "--order", "1", "--radial-nodes", "7")
    assert code == 1
    d = json.loads(stdout)
    assert d["error"]["kind"] == "GridError"
    assert not out.exists()


def test_threads_env_overrides():
    code, out, _ = run("--threads", "3", "elem", env={"LSPEC_THREADS": "2"})
    assert code == 0
    assert doc(out)["manifest"]["threads"] == 2
    code, out, _ = run("--threads", "3", "elem", env={"LSPEC_THREADS": ""})
    assert doc(out)["manifest"]["threads"] == 3


def test_flow_csv_rows(tmp_path):
    p = tmp_path / "t.csv"
    code, out, _ = run("--csv", str(p), "flow", "--samples", "5")
    assert code == 0
    rows = list(csv.reader(open(p, newline="")))
    assert len(rows) == 6
    assert rows[1][rows[0].index("forward")] == "reached_L_plus"
    assert doc(out)["result"]["classified"] == 5


def test_no_table_for_csv_is_config_error(tmp_path):
    p = tmp_path / "x.csv"
    code, _, _ = run("--csv", str(p), "elem")
    assert code == 2
    assert not p.exists()


def test_help():
    code, out, _ = run("--help")
    assert code == 0
    for sub in ["curvature", "hadamard", "elem", "contour-check", "residues", "spectral-action",
                "ultrastatic-fit", "flow", "accept"]:
        assert sub in out
