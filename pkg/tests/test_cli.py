import io
import json
import subprocess
import sys

import pytest

from divcontract import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_classify():
    code, out, _ = run("classify", "--eq", "u^2+v^2+w^2")
    assert code == 0
    assert json.loads(out)["verdict"] == "A1"


def test_classify_undetermined_exits_2():
    code, _, err = run("classify", "--eq", "u^2+v^2")
    assert code == 2 and "inconclusive" in err


def test_parse_error_exits_1():
    code, _, err = run("classify", "--eq", "u^^2")
    assert code == 1 and err.startswith("error")


def test_missing_argument_exits_1():
    assert run("contract", "--eq", "x^2")[0] == 1


def test_cycle():
    code, out, _ = run("cycle", "--type", "D7", "--meeting", "E6")
    v = json.loads(out)["verdict"]
    assert code == 0 and v == {"E": "E7", "d": 3, "coefficients": [1, 2, 3, 4, 5, 3, 3]}


def test_contract_report():
    code, out, _ = run("contract", "--eq", "x^2+y^2*z+2*y*z^4+t^3+t*y^3", "--curve", "x,y,t")
    rep = json.loads(out)
    assert code == 0
    assert rep["schema"] == 1 and rep["command"] == "contract"
    assert rep["verdict"]["kind"] == "Terminal" and rep["verdict"]["index"] == 2
    assert rep["verdict"]["stratum"] == "D8 FD_r"
    assert rep["inputs"]["seed"] == 0 and rep["inputs"]["jet_order"] == 12


def test_output_is_deterministic():
    argv = ("contract", "--eq", "x^2+y^2*z+z^4+t^4", "--curve", "x,z,t")
    assert run(*argv)[1] == run(*argv)[1]


def test_no_evidence_and_text_format():
    code, out, _ = run("classify", "--eq", "u^2+v^2+w^3", "--no-evidence")
    assert "evidence" not in json.loads(out)
    code, out, _ = run("classify", "--eq", "u^2+v^2+w^3", "--format", "text")
    assert out.startswith('classify: "A2"')


def test_jet_order_from_environment(monkeypatch):
    monkeypatch.setenv(cli.ORDER_ENV, "7")
    code, out, _ = run("classify", "--eq", "u^2+v^2+w^3")
    assert json.loads(out)["jet_order"] == 7
    monkeypatch.setenv(cli.ORDER_ENV, "seven")
    assert run("classify", "--eq", "u^2+v^2+w^3")[0] == 1


def test_round_trip_of_canonical_input():
    _, out, _ = run("normal-form", "--eq", "x^2+y^2*z+z^3+t^5", "--curve", "x,z,t")
    rep = json.loads(out)
    eq = rep["inputs"]["eq"]
    _, out2, _ = run("normal-form", "--eq", eq, "--curve", "x,z,t")
    assert json.loads(out2) == rep
    assert rep["evidence"]["certificate_holds"] is True


@pytest.mark.parametrize("argv,key", [
    (("section", "--eq", "x^2+y^2*z+z^5+t^5", "--curve", "x,z,t"), "position"),
    (("blowup", "--eq", "x^2+y^2*z+2*y*z^3+t^3", "--curve", "x,y,t"), "verdict"),
    (("verify", "--eq", "x^2+y^2*z+2*y*z^3+t^3", "--curve", "x,y,t"), "budgets"),
    (("sympow", "--eq", "x^2+y^2+z*t", "--curve", "x,y,z", "--dmax", "3"), "verdict"),
])
def test_other_commands(argv, key):
    code, out, _ = run(*argv)
    assert code == 0 and key in json.loads(out)


def test_cross_check_failure_exits_1():
    code, _, err = run("contract", "--eq", "x^2+y^2*z+2*y*z^3+t^2*z+t^4", "--curve", "x,y,t")
    assert code == 1 and "cross-check" in err


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "divcontract", "cycle", "--type", "A5", "--meeting", "E2"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["verdict"]["d"] == 2
