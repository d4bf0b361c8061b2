import json

import pytest

from unicover import documents as docs
from unicover.cli import main
from unicover.geom import Cone, LatticePolytope


@pytest.fixture
def cone_file(tmp_path):
    p = tmp_path / "cone.json"
    p.write_text(docs.dumps(docs.cone_doc(Cone([(1, 0), (1, 2)]))))
    return p


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cover_then_verify(cone_file, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    assert run(["cover-cone", cone_file, "--out", cert], capsys)[0] == 0
    code, out, _ = run(["verify", cert], capsys)
    assert code == 0 and json.loads(out)["verdict"] == "pass"


def test_tampered_certificate(cone_file, tmp_path, capsys):
    cert = tmp_path / "cert.json"
    run(["cover-cone", cone_file, "--out", cert], capsys)
    doc = json.loads(cert.read_text())
    doc["members"] = doc["members"][:1]
    cert.write_text(json.dumps(doc))
    code, out, _ = run(["verify", cert], capsys)
    report = json.loads(out)
    assert code == 2 and report["coverage"]["witness"] == ["1/2", "3/4"]


def test_inconclusive_exit(tmp_path, capsys):
    cone = tmp_path / "c.json"
    cone.write_text(docs.dumps(docs.cone_doc(Cone([(1, 0, 0), (0, 1, 0), (1, 1, 5)]))))
    cert = tmp_path / "cert.json"
    run(["cover-cone", cone, "--out", cert], capsys)
    assert run(["verify", cert, "--max-depth", "1"], capsys)[0] == 3


def test_malformed_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "cone", "format_version": "1", "dim": 2, "generators": [["1", "x"], ["1", "2"]]}')
    code, _, err = run(["hilbert", bad], capsys)
    assert code == 1 and "generators[0][1]" in err
    bad.write_text("{not json")
    assert run(["hilbert", bad], capsys)[0] == 1
    assert run(["hilbert", tmp_path / "missing.json"], capsys)[0] == 1
    assert run(["bounds"], capsys)[0] == 1


def test_bounds_table(capsys):
    code, out, _ = run(["bounds", "--dmax", "3", "--format", "tsv"], capsys)
    assert code == 0
    assert out.splitlines() == ["d\tgamma\tkappa\tpol_factor\tpol_bound", "2\t1\t2\t5\t10", "3\t4\t54\t7\t378"]
    code, out, _ = run(["bounds", "--dmax", "4"], capsys)
    doc = json.loads(out)
    assert doc["kind"] == "bounds-table" and doc["rows"][2][:3] == ["4", "6", "1215/4"]


def test_hseq_table(capsys):
    code, out, _ = run(["hseq", "--d", "3", "--kmax", "3", "--format", "tsv"], capsys)
    assert out.splitlines() == ["k\th", "-1\t1", "0\t1", "1\t1", "2\t3/2", "3\t7/4"]


def test_other_subcommands(cone_file, tmp_path, capsys):
    code, out, _ = run(["hilbert", cone_file], capsys)
    assert json.loads(out)["elements"] == [["1", "0"], ["1", "1"], ["1", "2"]]
    code, out, _ = run(["triangulate", cone_file], capsys)
    assert len(json.loads(out)["members"]) == 2
    code, out, _ = run(["resolve", cone_file], capsys)
    assert json.loads(out)["kind"] == "resolution"
    code, out, _ = run(["probe", cone_file, "--range", "1..3", "--format", "tsv"], capsys)
    assert out.splitlines()[1:] == ["1\tpass", "2\tpass", "3\tpass"]
    poly = tmp_path / "p.json"
    poly.write_text(docs.dumps(docs.polytope_doc(LatticePolytope([(0, 0), (1, 0), (0, 1)]))))
    code, _, err = run(["cover-poly", poly, "--multiple", "4"], capsys)
    assert code == 1 and "5" in err
    cert = tmp_path / "pc.json"
    assert run(["cover-poly", poly, "--out", cert], capsys)[0] == 0
    assert json.loads(cert.read_text())["multiple"] == "5"
    assert run(["verify", cert], capsys)[0] == 0


def test_ensemble_deterministic_across_jobs(capsys):
    args = ["ensemble", "--d", "2", "--count", "6", "--max-entry", "9", "--seed", "3"]
    code1, out1, _ = run(args, capsys)
    code2, out2, _ = run(["--jobs", "2"] + args, capsys)
    assert code1 == code2 == 0 and out1 == out2
    assert json.loads(out1)["summary"]["pass"] == "6"
    _, out3, _ = run(args[:-1] + ["4"], capsys)
    assert out3 != out1


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "unicover", "bounds", "--dmax", "2", "--format", "tsv"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.splitlines()[1] == "2\t1\t2\t5\t10"
