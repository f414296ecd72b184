import io
import json
import subprocess
import sys

import pytest

from surfbu import cli


def run(argv):
    out = io.StringIO()
    code = cli.run(argv, out)
    return code, out.getvalue()


@pytest.fixture
def case_file(tmp_path):
    def write(data):
        path = tmp_path / "case.json"
        path.write_text(json.dumps(data))
        return str(path)
    return write


N3_HOLDS = {"domain": {"kind": "nonorientable", "genus": 3}, "theta": {"v": 1, "a1": 1, "a2": 0},
            "target": {"kind": "orientable", "genus": 2}, "dim_x": 4}


def test_decide_holds(case_file, tmp_path):
    cert_path = tmp_path / "out.json"
    code, text = run(["decide", "--input", case_file(N3_HOLDS), "--certificate", str(cert_path)])
    assert code == 0
    verdict = json.loads(text)
    assert verdict["outcome"] == "holds"
    assert json.loads(cert_path.read_text()) == verdict


def test_decide_exit_codes(case_file):
    fails = dict(N3_HOLDS, theta={"v": 1})
    assert run(["decide", "--input", case_file(fails)])[0] == 1
    sphere = {"domain": {"kind": "orientable", "genus": 1}, "theta": {"a1": 1}, "target": {"kind": "sphere"},
              "dim_x": 4}
    assert run(["decide", "--input", case_file(sphere)])[0] == 2


def test_decide_output_is_deterministic(case_file):
    path = case_file(dict(N3_HOLDS, theta={"v": 1}))
    assert run(["decide", "--input", path]) == run(["decide", "--input", path])


def test_verify_phi(case_file):
    code, text = run(["verify-phi", "--input", case_file(dict(N3_HOLDS, theta={"a1": 1})), "--format", "json"])
    assert code == 0
    assert json.loads(text)["verified"] is True


def test_classify():
    code, text = run(["classify", "--surface", "N3", "--theta", "v=1,a1=1,a2=0", "--format", "json"])
    assert code == 0
    assert json.loads(text)["class"] == "NOdd3"
    code, text = run(["classify", "--surface", "N4", "--theta", "a2=1"])
    assert text.startswith("class: NEven2")


def test_q16():
    assert run(["q16", "order", "x"]) == (0, "8\n")
    assert run(["q16", "mul", "x^4", "x^4"]) == (0, "e\n")
    code, text = run(["q16", "table"])
    assert len(text.splitlines()) == 17


def test_nil_commands():
    code, text = run(["nil-eval", "--genus", "1", "--word", "[r1_1, r2_2]", "--format", "json"])
    assert json.loads(text)["central"] == {"B": 1}
    code, text = run(["qbar-project", "--genus", "1", "--word", "B"])
    assert text.strip() == "Bbar=1"
    code, text = run(["nil-commutator", "--genus", "2", "--left", "r1_1", "--right", "r2_2"])
    assert "B^1" in text


def test_search():
    code, text = run(["search", "--relations", "scott", "--genus", "2",
                      "--word", "r2_1 r1_1 s r1_1^-1 r2_1^-1", "--rhs", "s^-1", "--format", "json"])
    assert code == 0
    assert json.loads(text)["status"] == "Verified"
    code, text = run(["search", "--relations", "b2", "--word", "r1_1", "--max-states", "100", "--max-depth", "2"])
    assert code == 1 and text.startswith("Unknown")


def test_show_presentation():
    code, text = run(["show-presentation", "--relations", "surface", "--surface", "S2"])
    assert json.loads(text)["relators"][0]["word"] == "a1*a2*a1^-1*a2^-1*a3*a4*a3^-1*a4^-1"


def test_usage_errors(case_file, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["nonsense"])
    assert exc.value.code == 64
    assert run(["classify", "--surface", "Q1", "--theta", "a1=1"])[0] == 64
    assert run(["nil-eval", "--genus", "1", "--word", "r1_1^"])[0] == 64
    assert run(["decide", "--input", case_file({"domain": {"kind": "x"}, "target": {}})])[0] == 64


def test_selftest_is_reproducible():
    first = run(["selftest", "--genus-max", "2"])
    assert first == run(["selftest", "--genus-max", "2"])
    assert first[0] == 0
    assert "FAIL" not in first[1]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "surfbu", "q16", "order", "x*y"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "4\n"
