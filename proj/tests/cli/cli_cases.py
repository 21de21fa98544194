"""Command-line cases, one per ctest entry: cli_cases.py LAGREP CASE."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent
TOYS = HERE.parent.parent / "data" / "toys"


def run(*args, expect):
    p = subprocess.run([LAGREP, *args], capture_output=True, text=True)
    if p.returncode != expect:
        sys.exit(f"{' '.join(args)}: exit {p.returncode}, wanted {expect}\n{p.stderr}")
    return p


def report(*args, expect=0):
    out = run(*args, "--json", expect=expect).stdout
    r = json.loads(out)
    assert r["schema"] == "lagrep-report/1", r["schema"]
    return r


def transform_fixture():
    p = run("transform", "--fixture", "wdvv3", "--operator", "A2", expect=0)
    assert "-1/(u1-u2)^2" in p.stdout
    assert "leading metric" in p.stderr


def transform_identity():
    src = json.loads((HERE / "identity_transform.json").read_text())
    r = report("transform", "--input", str(HERE / "identity_transform.json"))
    assert json.dumps(r["operator"], indent=2) == json.dumps(src["operator"], indent=2)


def transform_singular():
    p = run("transform", "--input", str(HERE / "singular_transform.json"), expect=2)
    assert "singular" in p.stderr


def derive_fixture():
    r = report("derive", "--fixture", "wdvv3")
    assert r["pass"] and r["stage"] == "certify", r["residual"]
    assert set(r["artifacts"]) == {"G", "R", "L", "T", "Ln", "tau"}
    assert all(c["status"] == "pass" for c in r["expected"])


def derive_deterministic():
    with tempfile.TemporaryDirectory() as d:
        a, b = Path(d, "a.json"), Path(d, "b.json")
        run("derive", "--input", str(TOYS / "constant.json"), "--output", str(a), "--json", expect=0)
        run("derive", "--input", str(TOYS / "constant.json"), "--output", str(b), "--json", expect=0)
        assert a.read_bytes() == b.read_bytes()


def derive_constant_toy():
    r = report("derive", "--input", str(TOYS / "constant.json"))
    assert r["pass"]
    flat = json.dumps([r["artifacts"]["R"], r["artifacts"]["L"]])
    assert set(flat.replace("[", "").replace("]", "").replace(",", " ").split()) == {'"0"'}


def derive_symmetric_perturbation():
    r = report("derive", "--input", str(HERE / "wdvv3_symmetric_perturbation.json"), expect=1)
    assert not r["pass"] and r["stage"] == "skew-adjointness"
    assert r["residual"].startswith("entry (1,2)"), r["residual"]


def check_fixture():
    r = report("check", "--fixture", "wdvv3", "--operator", "A1")
    assert r["pass"] and r["operators"][0]["jacobi"]["failed"] == 0
    r = report("check", "--fixture", "wdvv3")
    assert r["pass"] and r["compatibility"]["failed"] == 0
    assert r["compatibility"]["checked"] > 0


def check_identity_operator():
    r = report("check", "--input", str(HERE / "identity_operator.json"), expect=1)
    assert not r["operators"][0]["skew_adjoint"]


def curvature_fixture():
    r = report("curvature", "--fixture", "wdvv3")
    assert r["pass"] and r["kappa"] == "-1/16" and r["signature"] == [2, 1]


def recursion_fixture():
    r = report("recursion", "--fixture", "wdvv3")
    assert r["pass"] and all(s["matches_KL"] for s in r["steps"])


def conservation_fixture():
    r = report("conservation", "--fixture", "wdvv3")
    assert r["pass"] and r["uL_total_divergence"]


def input_errors():
    run("derive", "--fixture", "unknown", expect=2)
    run("derive", "--input", str(HERE / "missing.json"), expect=2)
    run("derive", expect=2)
    run("derive", "--fixture", "wdvv3", "--jet-bound", "0", expect=2)
    run("derive", "--fixture", "wdvv3", "--jet-bound", "1", expect=3)


CASES = {f.__name__: f for f in [
    transform_fixture, transform_identity, transform_singular, derive_fixture,
    derive_deterministic, derive_constant_toy, derive_symmetric_perturbation, check_fixture,
    check_identity_operator, curvature_fixture, recursion_fixture, conservation_fixture,
    input_errors,
]}

if __name__ == "__main__":
    LAGREP = sys.argv[1]
    names = sys.argv[2:] or list(CASES)
    for name in names:
        CASES[name]()
        print(f"{name}: ok")
