import io
import json
import subprocess
import sys

import pytest

from monoext.cli import main

GRID_POSET = {"grid": {"n": 2, "order": "product"}}
SCALE = {"values": [1, 2, 3, 4]}
QUERY = {"query": [[1, 2]]}


@pytest.fixture
def fixtures(tmp_path):
    paths = {}
    for name, doc in [("poset", GRID_POSET), ("scale", SCALE), ("query", QUERY)]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    tau = tmp_path / "tau.csv"
    tau.write_text("".join(f"{(i + 0.5) / 50}\n" for i in range(50)))
    paths["tau"] = str(tau)
    paths["dir"] = tmp_path
    return paths


def run_cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


class TestSolve:
    def test_min_objective_fixture(self, fixtures):
        code, out, _ = run_cli(
            ["solve", "--poset", fixtures["poset"], "--scale", fixtures["scale"],
             "--query", fixtures["query"], "--mode", "min"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["objective"] == "2/1"

    def test_both_modes_with_witness(self, fixtures):
        code, out, _ = run_cli(
            ["solve", "--poset", fixtures["poset"], "--scale", fixtures["scale"],
             "--query", fixtures["query"], "--witness"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["min"]["objective"] == "2/1"
        assert payload["max"]["objective"] == "3/1"
        assert payload["min"]["per_node_values"] == ["2/1"]
        assert [[1, 2], "2/1"] in payload["min"]["witness_fn"]

    def test_byte_stable(self, fixtures):
        argv = ["solve", "--poset", fixtures["poset"], "--scale", fixtures["scale"],
                "--query", fixtures["query"], "--witness"]
        assert run_cli(argv) == run_cli(argv)


class TestOracle:
    def test_count_and_agreement(self, fixtures):
        code, out, _ = run_cli(
            ["oracle", "--poset", fixtures["poset"], "--scale", fixtures["scale"],
             "--query", fixtures["query"]]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["count"] == 2
        assert payload["min"]["objective"] == "2/1"
        assert payload["max"]["objective"] == "3/1"

    def test_cap_exit_code(self, fixtures):
        code, _, err = run_cli(
            ["oracle", "--poset", fixtures["poset"], "--scale", fixtures["scale"],
             "--query", fixtures["query"], "--cap", "1"]
        )
        assert code == 3
        assert json.loads(err)["error"]["type"] == "CapExceeded"


class TestContinuous:
    def test_cont_bound_constant_path(self):
        code, out, _ = run_cli(["cont-bound", "--m", "id", "--t", "const:0.5"])
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["bound"] - 0.25) <= 1e-9

    def test_cont_extremal_writes_csv(self, fixtures):
        out_path = str(fixtures["dir"] / "surface.csv")
        code, out, _ = run_cli(
            ["cont-extremal", "--m", "id", "--t", "const:0.5",
             "--grid", "20", "--out", out_path]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["membership"]["ok"] is True
        lines = open(out_path).read().splitlines()
        assert lines[0] == "x,y,value"
        assert len(lines) == 1 + 20 * 20

    def test_grid_exp(self):
        code, out, _ = run_cli(["grid-exp", "--alpha", "0.5", "--n", "20", "--k", "10"])
        assert code == 0
        payload = json.loads(out)
        assert payload["discrete_bound"] == "21/4"
        assert payload["column"] == 10


class TestProcess:
    def test_proc_bound(self, fixtures):
        code, out, _ = run_cli(
            ["proc-bound", "--m", "id", "--tau", fixtures["tau"], "--simplified"]
        )
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["bound"] - 1 / 6) <= 5e-3
        assert "/" in payload["simplified"]

    def test_proc_sim_reproducible(self, fixtures):
        argv = ["proc-sim", "--m", "id", "--tau", fixtures["tau"],
                "--trials", "2000", "--seed", "4", "--verify", "60,60"]
        first = run_cli(argv)
        assert first[0] == 0
        assert run_cli(argv) == first
        payload = json.loads(first[1])
        assert payload["membership_report"]["ok"] is True
        assert payload["stderr"] > 0

    def test_env_seed_override(self, fixtures, monkeypatch):
        argv = ["proc-sim", "--m", "id", "--tau", fixtures["tau"], "--trials", "500"]
        monkeypatch.setenv("MONOEXT_SEED", "11")
        a = run_cli(argv)
        monkeypatch.setenv("MONOEXT_SEED", "12")
        b = run_cli(argv)
        assert a[0] == b[0] == 0
        assert a[1] != b[1]


class TestErrorsAndConfig:
    def test_unknown_flag_is_usage_error(self):
        code, _, _ = run_cli(["solve", "--unknown-flag"])
        assert code == 64

    def test_missing_subcommand_is_usage_error(self):
        code, _, _ = run_cli([])
        assert code == 64

    def test_validation_error_exit(self, fixtures, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"query": [[9, 9]]}')
        code, _, err = run_cli(
            ["solve", "--poset", fixtures["poset"], "--scale", fixtures["scale"],
             "--query", str(bad)]
        )
        assert code == 2
        assert json.loads(err)["error"]["type"] == "UnknownElement"

    def test_config_file_merges(self, fixtures, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text('{"cap": 1}')
        code, _, _ = run_cli(
            ["--config", str(cfg), "oracle", "--poset", fixtures["poset"],
             "--scale", fixtures["scale"], "--query", fixtures["query"]]
        )
        assert code == 3

    def test_bad_env_seed(self, fixtures, monkeypatch):
        monkeypatch.setenv("MONOEXT_SEED", "not-a-number")
        code, _, err = run_cli(
            ["proc-bound", "--m", "id", "--tau", fixtures["tau"]]
        )
        assert code == 2


class TestMapShorthand:
    @pytest.mark.parametrize(
        "spec,x,expected",
        [
            ("id", 0.3, 0.3),
            ("power:2", 0.5, 0.25),
            ("const:0.7", 0.2, 0.7),
            ("pwl:0,0;0.5,0.25;1,1", 0.5, 0.25),
        ],
    )
    def test_shorthand(self, spec, x, expected):
        from monoext.cli import load_map

        assert abs(load_map(spec).eval(x) - expected) <= 1e-12

    def test_map_json_file(self, tmp_path):
        from monoext.cli import load_map

        p = tmp_path / "m.json"
        p.write_text('{"kind": "power", "p": 2.0}')
        assert load_map(str(p)).p == 2.0


class TestSelftest:
    def test_quick_selftest_passes(self):
        code, out, _ = run_cli(["selftest", "--quick"])
        assert code == 0
        lines = [ln for ln in out.splitlines() if ln]
        assert len(lines) == 10
        assert all(ln.startswith("PASS") for ln in lines)


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "monoext.cli", "cont-bound", "--m", "id",
         "--t", "const:0.25"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["bound"] - 0.125) <= 1e-9
