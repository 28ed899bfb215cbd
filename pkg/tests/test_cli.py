import json

import pytest

from qlich.cli import main, run

SO3 = ["--dim", "3", "--entry", "P[1,2]=x3", "--entry", "P[2,3]=x1", "--entry", "P[1,3]=-x2"]
P2 = ["--dim", "2", "--entry", "P[1,2]=x1*x2"]


def test_check_jacobi_pass_and_fail():
    doc, status = run(["check-jacobi"] + SO3)
    assert status == 0 and doc["passed"]
    doc, status = run(["check-jacobi", "--dim", "3", "--entry", "P[1,2]=1", "--entry", "P[2,3]=x2"])
    assert status == 1
    names = {c["name"]: c["passed"] for c in doc["checks"]}
    assert names == {"jacobi": False, "schouten_agrees": True}


def test_qcohomology_weight_zero():
    doc, status = run(["qcohomology"] + P2 + ["--page", "hbar1", "--weight", "0", "--max-letters", "6", "--format", "json"])
    assert status == 0
    reps = [r for cell in doc["cells"] for r in cell["representatives"]]
    assert sorted(reps) == sorted(["1", "g1*c1", "g2*c2", "c1*c2", "g1*g2*c1*c2"])


def test_verify_nilpotent():
    doc, status = run(["verify-nilpotent", "--dim", "2", "--entry", "P[1,2]=x2^2", "--weight", "1", "--max-letters", "5"])
    assert status == 0 and doc["page"] == "full"


def test_parse_errors_exit_2():
    assert run(["check-jacobi", "--dim", "2", "--entry", "P[1,2]=x1*+"])[1] == 2
    assert run(["check-jacobi", "--dim", "2", "--entry", "P[2,1]=x1"])[1] == 2
    assert run(["check-jacobi", "--dim", "2", "--entry", "P[1,2]=x5"])[1] == 2
    assert run(["check-jacobi", "--entry", "P[1,2]=x1"])[1] == 2
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 2


def test_json_is_deterministic(capsys):
    argv = ["nambu-check", "--dim", "3", "--entry", "P[1,2,3]=x1", "--seed", "5", "--trials", "4", "--format", "json"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    assert doc["schema"] == "1"
    assert {c["name"] for c in doc["checks"]} == {"takhtajan", "leibniz", "filippov"}


def test_spec_files(tmp_path):
    flat = tmp_path / "p2.txt"
    flat.write_text("dim = 2\nentry = P[1,2]=x1*x2\nmax-poly-degree = 4\n")
    doc, status = run(["lp-cohomology", "--spec-file", str(flat)])
    assert status == 0 and doc["total_dims"] == {"0": 1, "1": 2, "2": 2}
    toml = tmp_path / "so3.toml"
    toml.write_text('dim = 3\nentry = ["P[1,2]=x3", "P[2,3]=x1", "P[1,3]=-x2"]\n')
    assert run(["check-jacobi", "--spec-file", str(toml)])[1] == 0
    bad = tmp_path / "bad.toml"
    bad.write_text("dim = = 3\n")
    assert run(["check-jacobi", "--spec-file", str(bad)])[1] == 2


def test_out_file_and_text(tmp_path, capsys):
    out = tmp_path / "report.txt"
    assert main(["build-operator"] + P2 + ["--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert out.read_text() == text
    assert "density: " in text and "PASS self_ope_total_derivative" in text


def test_verify_chiral_conventions():
    assert run(["verify-chiral"] + P2 + ["--weight", "1", "--max-letters", "4"])[1] == 0
    doc, status = run(["verify-chiral"] + P2 + ["--weight", "1", "--max-letters", "4", "--convention", "section4"])
    assert status == 1
    assert {c["name"]: c["passed"] for c in doc["checks"]}["delta_squared"]


def test_nambu_even_order_bridge():
    doc, status = run(["nambu-check", "--dim", "4", "--entry", "P[1,2,3,4]=1", "--trials", "2", "--weight", "1", "--max-letters", "4"])
    assert status == 0
    assert "bridge_nilpotent" in {c["name"] for c in doc["checks"]}
