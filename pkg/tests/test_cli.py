import json
import subprocess
import sys
import time

import jsonschema
import pytest

from stabil import cli
from stabil.analysis import canonical
from stabil.operators import OperatorTruncation, make_product_composition
from stabil.polycore import ComplexPoly

OPEN_DISK = {"kind": "disk", "center": [0, 0], "radius": 1}
OUTSIDE_DISK = {"kind": "convex_complement", "hull": {"kind": "disk", "center": [0, 0], "radius": 1}}


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    doc = json.loads(out)
    schema = cli.load_schema("error" if code == cli.EXIT_INPUT else argv[0])
    jsonschema.validate(doc, schema)
    return code, doc


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
        return p

    write("disk.json", OPEN_DISK)
    write("outside.json", OUTSIDE_DISK)
    write("pc.json", make_product_composition(ComplexPoly([-2, 1]), ComplexPoly([0, 0, 1]), 5).to_json())
    write("bad.json", OperatorTruncation.from_columns([[1.0], [0.0, 1.0], [3.0]]).to_json())
    write("h2op.json", make_product_composition(ComplexPoly([1, -0.5]), ComplexPoly([0, 0, 1]), 6).to_json())
    write.dir = tmp_path
    return write


def test_schemas_are_valid():
    for name in set(cli.SCHEMAS.values()) | {"error"}:
        jsonschema.Draft202012Validator.check_schema(cli.load_schema(name))


@pytest.mark.parametrize("poly,code,witness", [("[-2, 1]", 0, None), ("[-1, 2]", 1, 0.5), ("[-1, 1]", 2, 1.0)])
def test_stable(capsys, files, poly, code, witness):
    got, doc = run(capsys, "stable", poly, files.dir / "disk.json")
    assert got == code
    if witness is not None:
        assert doc["witness"][0] == pytest.approx(witness)


def test_stable_accepts_comma_list(capsys, files):
    assert run(capsys, "stable", "3, 1", files.dir / "disk.json")[0] == 0


def test_classify_product_composition(capsys, files):
    code, doc = run(capsys, "classify", files.dir / "pc.json", files.dir / "disk.json", files.dir / "disk.json")
    assert code == 0 and doc["verdict"] == "ProductComposition"
    psi = ComplexPoly.from_json(doc["psi"])
    assert psi.allclose(ComplexPoly([-2, 1]), 1e-10)


def test_classify_violation(capsys, files):
    code, doc = run(capsys, "classify", files.dir / "bad.json", files.dir / "disk.json", files.dir / "disk.json")
    assert code == 1 and doc["verdict"] == "NotPreserving"
    assert len(doc["witness"]["coeffs"]) >= 1


def test_classify_unbounded_source(capsys, files):
    code, doc = run(capsys, "classify", files.dir / "bad.json", files.dir / "outside.json", files.dir / "disk.json")
    assert code == 3 and "bounded" in doc["error"]


def test_falsify_and_bb(capsys, files):
    code, doc = run(capsys, "falsify", files.dir / "bad.json", files.dir / "disk.json", files.dir / "disk.json")
    assert code == 1 and doc["found"]
    code, doc = run(capsys, "falsify", files.dir / "pc.json", files.dir / "disk.json", files.dir / "disk.json",
                    "--budget", 50)
    assert code == 2 and not doc["found"]
    code, doc = run(capsys, "bb", files.dir / "pc.json", "--samples", 50)
    assert code == 0 and doc["passes"]


def test_construct_and_apply(capsys, files):
    code, doc = run(capsys, "construct", "product-composition", "-N", 3, "--psi=1", "--phi=0,0,1")
    assert code == 0 and doc["N"] == 3
    files("sq.json", doc)
    code, doc = run(capsys, "apply", files.dir / "sq.json", "1,1")
    assert code == 0
    assert ComplexPoly.from_json(doc).allclose(ComplexPoly([1, 0, 1]), 1e-14)
    for kind in ("identity", "dilation", "pcd"):
        assert run(capsys, "construct", kind, "-N", 3)[0] == 0
    assert run(capsys, "construct", "rank1", "-N", 3, "--nu=1,0.5,0.25,0.125")[0] == 0
    assert run(capsys, "construct", "rank1", "-N", 3, "--nu=1")[0] == 3


def test_minphase(capsys, files):
    files("good.txt", "1\n-0.5\n")
    files("bad.json", {"samples": [-0.5, 1]})
    files("shift.json", {"samples": [0, 1, -0.5]})
    code, doc = run(capsys, "minphase", files.dir / "good.txt")
    assert code == 0 and doc["minimum_phase"]
    code, doc = run(capsys, "minphase", files.dir / "bad.json")
    assert code == 1 and doc["witness"][0] == pytest.approx(0.5)
    code, doc = run(capsys, "minphase", files.dir / "shift.json")
    assert code == 1 and doc["shift"] == 1 and doc["shifted_minimum_phase"]


def test_outer(capsys, files):
    files("f.json", {"coeffs": [1, -0.5]})
    files("g.json", {"coeffs": [-0.5, 1, 0.1]})
    assert run(capsys, "outer", files.dir / "f.json")[0] == 0
    assert run(capsys, "outer", files.dir / "g.json")[0] == 1
    # truncating to the constant term leaves an outer function
    assert run(capsys, "outer", files.dir / "g.json", "--truncation", 0)[0] == 0


def test_classify_h2(capsys, files):
    code, doc = run(capsys, "classify-h2", files.dir / "h2op.json", "--mode", "outer")
    assert code == 0 and doc["verdict"] == "ProductComposition"
    assert ComplexPoly.from_json(doc["psi"]).allclose(ComplexPoly([1, -0.5]), 1e-10)
    assert ComplexPoly.from_json(doc["phi"]).allclose(ComplexPoly([0, 0, 1]), 1e-10)
    # z - 2 has no zero in the disk, so M_{z-2} C_{z^2} preserves outer functions
    code, doc = run(capsys, "classify-h2", files.dir / "pc.json")
    assert code == 0
    files("inner.json", make_product_composition(ComplexPoly([-1, 2]), ComplexPoly([0, 1]), 4).to_json())
    code, doc = run(capsys, "classify-h2", files.dir / "inner.json")
    assert code == 1 and doc["verdict"] == "NotPreserving"


@pytest.mark.parametrize("argv", [
    ["stable", "not-a-poly", "missing.json"],
    ["stable", "[1, 2]", "missing.json"],
    ["classify", "missing.json", "missing.json", "missing.json"],
    ["minphase", "missing.txt"],
    ["nonsense-command"],
])
def test_input_errors(capsys, argv):
    code = cli.main(argv)
    assert code == 3


def test_malformed_files(capsys, files):
    files("junk.json", "{not json")
    files("region.json", {"kind": "hexagon"})
    files("sig.txt", "1\nfoo\n")
    d = files.dir
    assert run(capsys, "classify", d / "junk.json", d / "disk.json", d / "disk.json")[0] == 3
    assert run(capsys, "stable", "[1, 2]", d / "region.json")[0] == 3
    assert run(capsys, "minphase", d / "sig.txt")[0] == 3
    assert run(capsys, "stable", "[1, x]", d / "disk.json")[0] == 3


def test_env_default_tol(capsys, files, monkeypatch):
    d = files.dir
    monkeypatch.setenv("STABIL_DEFAULT_TOL", "1e-5")
    _, doc = run(capsys, "classify", d / "pc.json", d / "disk.json", d / "disk.json")
    assert doc["tol"] == 1e-5
    _, doc = run(capsys, "classify", d / "pc.json", d / "disk.json", d / "disk.json", "--tol", "1e-7")
    assert doc["tol"] == 1e-7
    monkeypatch.setenv("STABIL_DEFAULT_TOL", "tiny")
    assert run(capsys, "classify", d / "pc.json", d / "disk.json", d / "disk.json")[0] == 3


def test_determinism(files):
    d = files.dir
    argv = [sys.executable, "-m", "stabil.cli", "classify", str(d / "bad.json"), str(d / "disk.json"),
            str(d / "disk.json"), "--seed", "7"]
    a = subprocess.run(argv, capture_output=True)
    b = subprocess.run(argv, capture_output=True)
    assert a.returncode == b.returncode == 1
    assert a.stdout == b.stdout


def test_selfcheck_fast(capsys):
    t0 = time.perf_counter()
    code, doc = run(capsys, "selfcheck", "--level", "fast", "--timings")
    assert time.perf_counter() - t0 < 10
    assert code == 0 and doc["passed"] and doc["first_failure"] is None
    assert [s["suite"] for s in doc["suites"]] == ["exact-identity", "coefficient-bound", "moment-formula"]


def test_selfcheck_full(capsys):
    code, doc = run(capsys, "selfcheck", "--level", "full")
    assert code == 0, doc
    assert len(doc["suites"]) == 7


def test_selfcheck_catches_sign_flip(capsys, monkeypatch):
    orig = canonical.moment_formula

    def flipped(c, beta_val, n):
        return orig(c, -beta_val, n)

    monkeypatch.setattr(canonical, "moment_formula", flipped)
    code, doc = run(capsys, "selfcheck", "--level", "fast")
    assert code == 1 and doc["first_failure"] == "moment-formula"
