import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from szccs.cli import main, parse_params, UsageError
from szccs.codeset import CodeSet, verify_szccs
from szccs.construct import Theorem2Params, czcp_fixture, theorem2_szccs
from szccs.training import TrainingMatrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ex2_file(tmp_path, capsys):
    p = tmp_path / "ex2.json"
    assert run(capsys, "generate", "theorem2", "{q:2,m:4,pi:identity}", "--out", str(p))[0] == 0
    return p


def test_parse_params():
    assert parse_params("{q:2,m:4,pi:identity}") == {"q": 2, "m": 4, "pi": "identity"}
    assert parse_params('{"L": 32, "roots": [1, 3]}') == {"L": 32, "roots": [1, 3]}
    assert parse_params("{member:S', flag:true}") == {"member": "S'", "flag": True}
    assert parse_params(None) == {}
    with pytest.raises(UsageError):
        parse_params("{q:")
    with pytest.raises(UsageError):
        parse_params("[1, 2]")


def test_generate_binary_m4_set(ex2_file):
    S = CodeSet.from_json(ex2_file.read_text())
    assert S == theorem2_szccs(Theorem2Params(2, 4))
    assert S.provenance["generator"] == "theorem2"


def test_generate_czcp_fixture(capsys):
    code, out, _ = run(capsys, "generate", "czcp-fixture", "{layout:pair}")
    assert code == 0
    S = CodeSet.from_json(out)
    a, b = czcp_fixture()
    assert np.array_equal(S.values[0], np.stack([a.complex(), b.complex()]))


@pytest.mark.parametrize(
    "family,params",
    [
        ("lemma1", "{q:4,m:3,variant:c-end,pi:[2,3,1]}"),
        ("theorem3", "{q:2,m:5,v:3,member:S'}"),
        ("zadoff-chu", "{L:32,roots:[1,3,5,7],M:2}"),
        ("random-binary", "{L:16,K:2,M:2,seed:4}"),
    ],
)
def test_generate_other_families(capsys, family, params):
    code, out, _ = run(capsys, "generate", family, params)
    assert code == 0 and CodeSet.from_json(out).L > 0


@pytest.mark.parametrize(
    "argv,msg",
    [
        (("generate", "theorem2", "{q:3,m:4}"), "q must be even"),
        (("generate", "nope"), "unknown family"),
        (("generate", "theorem2", "{q:2}"), "'m'"),
        (("generate", "theorem2", "{q:2,m:4,bogus:1}"), "bogus"),
        (("generate", "theorem3", "{q:2,m:4,v:3}"), "invalid theorem3"),
    ],
)
def test_generate_usage_errors(capsys, argv, msg):
    code, _, err = run(capsys, *argv)
    assert code == 2 and msg in err


def test_random_binary_prints_seed(capsys):
    code, out, err = run(capsys, "generate", "random-binary", "{L:8}")
    assert code == 0 and err.startswith("seed: ")
    s = int(err.split()[1])
    code2, out2, _ = run(capsys, "generate", "random-binary", "{L:8}", "--seed", str(s))
    assert json.loads(out)["codes"] == json.loads(out2)["codes"]


def test_verify_round_trip(capsys, ex2_file):
    code, out, _ = run(capsys, "verify", str(ex2_file), "--Z", "3")
    rep = json.loads(out)["report"]
    direct = verify_szccs(theorem2_szccs(Theorem2Params(2, 4)), 3)
    assert code == 0 and rep["verdict"] == "pass" and rep["optimal"] is True
    assert rep == json.loads(json.dumps(direct.to_dict()))


def test_verify_failure_exit_1(capsys, ex2_file):
    code, out, _ = run(capsys, "verify", str(ex2_file), "-Z", "4", "--float")
    rep = json.loads(out)["report"]
    assert code == 1 and rep["verdict"] == "fail"
    assert any(v["shift"] == 4 and v["abs"] == 24 for v in rep["violations"])


def test_verify_bad_inputs(capsys, tmp_path, ex2_file):
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert run(capsys, "verify", str(empty))[0] == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(capsys, "verify", str(junk))[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "verify", str(ex2_file), "--Z", "99")[0] == 2


def test_corr_csv(capsys, ex2_file):
    code, out, _ = run(capsys, "corr", str(ex2_file), "--i", "0", "--j", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 31
    assert {int(r["shift"]): float(r["abs"]) for r in rows}[4] > 0
    code, out, _ = run(capsys, "corr", str(ex2_file))
    assert len(json.loads(out)["pairs"]) == 64


def test_train(capsys, tmp_path):
    p = tmp_path / "s32.json"
    run(capsys, "generate", "theorem2", "{q:2,m:5}", "--out", str(p))
    code, out, _ = run(capsys, "train", str(p), "--n-t", "4", "--n-active", "2", "--lam", "7", "--check")
    doc = json.loads(out)
    assert code == 0 and doc["criteria"]["optimal"]
    om = TrainingMatrix.from_dict(doc["omega"])
    assert om.L_total == 2 * (2 * 32 + 7)
    code, out, err = run(capsys, "train", str(p), "--n-t", "4", "--n-active", "2", "--lam", "8", "--check", "--format", "csv")
    assert code == 1 and len(out.splitlines()) == 4 and '"optimal": false' in err
    assert run(capsys, "train", str(p), "--n-t", "4", "--n-active", "3", "--lam", "1")[0] == 2
    code, out, _ = run(capsys, "train", str(p), "--n-t", "4", "--n-active", "2", "--lam", "3", "--enlarge", "3")
    assert json.loads(out)["omega"]["meta"]["J"] == 6


def _config(tmp_path, **kw):
    cfg = {
        "codeset": {"family": "theorem2", "params": {"q": 2, "m": 5}},
        "paths": 6, "ebn0_db": {"start": 0, "stop": 4, "step": 2}, "trials": 50, "seed": 9,
    }
    cfg.update(kw)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return p


def test_simulate_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", str(_config(tmp_path, enlarge=[1, 3])))
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# config: ")
    assert json.loads(lines[0][len("# config: "):])["ebn0_db"] == [0.0, 2.0, 4.0]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert len(rows) == 6 and {r["J"] for r in rows} == {"2", "6"}
    for r in rows:
        assert float(r["mse"]) == pytest.approx(float(r["min_mse"]), rel=0.3)
    _, again, _ = run(capsys, "simulate", str(_config(tmp_path, enlarge=[1, 3])))
    assert again == out


def test_simulate_json_and_seed(capsys, tmp_path):
    p = _config(tmp_path, seed=None, paths=[1, 2])
    code, out, err = run(capsys, "simulate", str(p), "--format", "json")
    assert code == 0 and err.startswith("seed: ")
    doc = json.loads(out)
    assert [s["key"]["paths"] for s in doc["sweeps"]] == [1, 2]
    assert doc["config"]["seed"] == int(err.split()[1])


@pytest.mark.parametrize(
    "kw",
    [{"trials": 0}, {"trials": 1.5}, {"paths": 0}, {"ebn0_db": []}, {"bogus": 1}, {"codeset": 3}, {"convention": "x"}],
)
def test_simulate_rejects(capsys, tmp_path, kw):
    code, _, err = run(capsys, "simulate", str(_config(tmp_path, **kw)))
    assert code == 2 and err.startswith("error:")


def test_report(capsys, tmp_path):
    out_dir = tmp_path / "rep"
    code, out, _ = run(capsys, "report", str(_config(tmp_path, trials=20)), "--out", str(out_dir))
    assert code == 0
    names = {"codeset.json", "verify.json", "corr.csv", "criteria.json", "mse.csv"}
    assert set(json.loads(out)["written"]) == names
    assert json.loads((out_dir / "verify.json").read_text())["verdict"] == "pass"
    assert json.loads((out_dir / "criteria.json").read_text())[0]["optimal"]


def test_report_needs_out(capsys, tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["report", str(_config(tmp_path))])
    assert e.value.code == 2


def test_module_entry_point_and_stdin():
    gen = subprocess.run(
        [sys.executable, "-m", "szccs", "generate", "theorem3", "{q:2,m:5,v:3}"],
        capture_output=True, text=True, check=True,
    )
    ver = subprocess.run(
        [sys.executable, "-m", "szccs", "verify", "-", "--Z", "7"], input=gen.stdout, capture_output=True, text=True
    )
    assert ver.returncode == 0 and json.loads(ver.stdout)["report"]["verdict"] == "pass"
