import json
import subprocess
import sys

import jsonschema
import pytest

from cnsmorph.cli import report as rpt
from cnsmorph.cli.main import SEED_ENV, main

DIAG123 = "[[[1,0],[0,0],[0,0]],[[0,0],[2,0],[0,0]],[[0,0],[0,0],[3,0]]]"
SCHEMA = rpt.schema()


def run(capsys, *argv):
    """Run the CLI in-process with the report on stdout; returns ``(code, report, stderr)``."""
    code = main([*argv, "--json", "-"])
    out, err = capsys.readouterr()
    report = json.loads(out) if out.strip() else None
    if report is not None:
        jsonschema.validate(report, SCHEMA)
        assert report["exit_code"] == code
    return code, report, err


def test_sigma(capsys):
    code, rep, err = run(capsys, "sigma", "--k", "2", "--vec", "1,4,9")
    assert code == 0 and rep["result"]["sigma"] == 49.0
    assert "sigma_2 = 49.0" in err


def test_cone_verdicts(capsys):
    code, rep, _ = run(capsys, "cone", "--k", "2", "--vec=1,1,-0.5")
    assert code == 0 and rep["result"]["verdict"] == "boundary"
    code, rep, _ = run(capsys, "cone", "--k", "3", "--vec=1,1,-0.5")
    assert code == 1 and rep["result"]["verdict"] == "outside"


def test_hessian(capsys):
    code, rep, _ = run(capsys, "hessian", "--dim", "3", "--expr", "abs2(z1)+abs2(z2)-0.5*abs2(z3)", "--at", "0.1,0.2,0.3")
    assert code == 0
    H = rpt.decode_complex(rep["result"]["hessian"])
    assert abs(H[2][2] + 0.5) < 1e-6 and abs(H[0][1]) < 1e-6


def test_classify_fn(capsys):
    u = "abs2(z1)+abs2(z2)-0.5*abs2(z3)"
    assert run(capsys, "classify-fn", "--dim", "3", "--expr", u, "--k", "2")[0] == 0
    code, rep, _ = run(capsys, "classify-fn", "--dim", "3", "--expr", u, "--k", "3")
    assert code == 1 and rep["result"]["verdict"] == "outside"


def test_classify_map_example(capsys):
    code, rep, _ = run(capsys, "classify-map", "--matrix", DIAG123, "--m", "2", "--n", "2")
    assert code == 1
    res = rep["result"]
    assert res["verdict"] == "not_morphism" and res["singular_values"] == [3.0, 2.0, 1.0]
    assert sorted(res["witness"]["phi_spectrum"]) == pytest.approx([-0.5, 1.0, 1.0])


def test_classify_map_positive_and_file_input(capsys, tmp_path):
    path = tmp_path / "A.json"
    path.write_text("[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]]]")
    code, rep, _ = run(capsys, "classify-map", "--matrix", str(path), "--m", "1", "--n", "1")
    assert code == 0 and rep["result"]["verdict"] == "projection_type"


def test_probe_map(capsys):
    code, rep, _ = run(capsys, "probe-map", "--exprs", "conj(z1);conj(z2)", "--dims", "2,2", "--grid", "lattice:0.5:2")
    assert code == 0 and rep["result"]["verdict"] == "anti_holomorphic" and not rep["result"]["failing"]
    code, rep, _ = run(capsys, "probe-map", "--exprs", "z1;conj(z2)", "--dims", "2,2", "--grid", "lattice:0.5:2")
    assert code == 1


def test_singular_value_condition(capsys):
    assert run(capsys, "thm44", "--singvals", "1,2,3")[0] == 0
    code, rep, _ = run(capsys, "thm44", "--singvals", "1,2,3", "--variant", "printed")
    assert code == 1 and rep["result"]["verdict"] != "holds"
    assert rep["result"]["sides"]["derived_correct"] == [196.0, 196.0]


@pytest.mark.parametrize(
    "argv",
    [
        ["hessian", "--dim", "2", "--expr", "z1^", "--at", "0,0"],
        ["hessian", "--dim", "2", "--expr", "abs2(z1)", "--at", "0,0,0"],
        ["classify-fn", "--dim", "2", "--expr", "abs2(z1)", "--k", "1", "--grid", "cube:1"],
        ["classify-map", "--matrix", "not-a-file", "--m", "1", "--n", "1"],
        ["classify-map", "--matrix", "[[[1,0],[0,0]],[[0,0],[1,0]]]", "--m", "1", "--n", "3"],
        ["sigma", "--k", "4", "--vec", "1,2,3"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["sigma", "--k", "x", "--vec", "1"])
    assert info.value.code == 2


def test_numerical_failure_exits_3(capsys):
    assert main(["hessian", "--dim", "1", "--expr", "abs2(z1^200)", "--at", "1e2"]) == 3
    assert "numerical error" in capsys.readouterr().err


def test_expression_error_reports_offset(capsys):
    main(["hessian", "--dim", "1", "--expr", "z1^", "--at", "0"])
    assert "at offset 3" in capsys.readouterr().err


def test_verify_and_replay(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "3")
    path = tmp_path / "verify.json"
    assert main(["verify", "--json", str(path)]) == 0
    capsys.readouterr()
    rep = json.loads(path.read_text())
    jsonschema.validate(rep, SCHEMA)
    assert rep["command"]["config"]["seed"] == 3
    assert rep["result"]["passed"] is True and len(rep["result"]["items"]) == 10
    assert "--json" not in rep["command"]["argv"]
    assert main(["replay", str(path)]) == 0
    assert "identical" in capsys.readouterr().out


def test_replay_detects_differences(capsys, tmp_path):
    path = tmp_path / "sigma.json"
    assert main(["sigma", "--k", "2", "--vec", "1,4,9", "--json", str(path)]) == 0
    rep = json.loads(path.read_text())
    rep["result"]["sigma"] = 50.0
    path.write_text(json.dumps(rep))
    capsys.readouterr()
    assert main(["replay", str(path)]) == 1
    assert "DIFFERS" in capsys.readouterr().out


def test_replay_rejects_garbage(tmp_path, capsys):
    path = tmp_path / "x.json"
    path.write_text("{}")
    assert main(["replay", str(path)]) == 2


def test_verify_tight_tolerance_fails_with_attribution(capsys):
    code, rep, _ = run(capsys, "verify", "--seed", "0", "--tolerance-scale", "0.01")
    assert code == 1
    failed = [i for i in rep["result"]["items"] if not i["passed"]]
    assert failed and all(i["attribution"] for i in failed)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cnsmorph", "sigma", "--k", "2", "--vec", "1,4,9", "--json", "-"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["sigma"] == 49.0


def test_encode_round_trip():
    enc = rpt.encode({"z": [1 + 2j, 3.0], "nan": float("nan"), "inf": float("inf")})
    assert enc["nan"] is None and enc["inf"] is None
    assert rpt.decode_complex([[1, 2], [3, 0]]).tolist() == [1 + 2j, 3 + 0j]
