import json
import os
import subprocess
import sys

import pytest

from motivic_vg import run_command
from motivic_vg.cli import main, run
from motivic_vg.serialize import deserialize

NAT = "{x in Z^1: x>=0}"


def test_null_example():
    code, out, err = run(["null", f"L^(x+1) - L*L^x on {NAT}"])
    assert (code, out.strip(), err) == (0, "NULL", "")


def test_nonnull_reports_witness():
    code, out, _ = run(["null", f"x on {NAT}"])
    assert code == 1 and out.startswith("NONNULL witness (1)")


def test_integrable_example():
    code, out, _ = run(["integrable", f"1 on {NAT}", "--fibers", "x"])
    assert code == 1 and "(a,b)=(0,0)" in out
    code, out, _ = run(["integrable", f"L^(-x) on {NAT}", "--fibers", "x"])
    assert (code, out.strip()) == (0, "INTEGRABLE")


def test_integrate_example():
    code, out, _ = run(["integrate", f"x*L^(-2x) on {NAT}"])
    assert (code, out) == (0, "L^2/((L^2-1)^2)\n")


def test_integrate_relative_prints_function():
    code, out, _ = run(["integrate", "L^(-x-z) on {(x,z) in Z^2: x>=0 and z>=0}", "--fibers", "x"])
    assert code == 0 and " on { z in Z^1 : true }" in out
    code, out, _ = run(["eval", out.strip(), "--at", "2"])
    assert (code, out.strip()) == (0, "1/(L * (L^1-1))")


def test_eq_and_canon():
    assert run(["eq", "L^(x+1) on {x in Z^1}", "L*L^x on {x in Z^1}"])[0] == 0
    assert run(["eq", "L^(x+1) on {x in Z^1}", "L^x on {x in Z^1}"])[0] == 1
    code, out, _ = run(["canon", f"L^x + L^x on {NAT}"])
    assert code == 0 and out.startswith("canonical dim=1 params=0") and "entry a=[0] b=[1]" in out
    assert deserialize(out.encode(), "text").pieces[0].table[0][2][0][1].as_int() == 2


def test_rectilinearize_and_validation():
    code, out, _ = run(["rectilinearize", "{(x,y) in Z^2: 0<=x<=y}", "--box", "10"])
    assert code == 0 and "M=[[1, 0], [1, 1]]" in out and "validated on [-10, 10]^2" in out


def test_specialize_and_crosscheck():
    code, out, _ = run(["specialize", "L/(L^1-1)", "--q", "2,3"])
    assert (code, out) == (0, "q=2: 2\nq=3: 3/2\n")
    code, out, _ = run(["specialize", f"x*L^(-x) on {NAT}", "--q", "2", "--at", "3"])
    assert (code, out.strip()) == (0, "q=2: 3/8")
    code, out, _ = run(["crosscheck", f"x^2*L^(-x) on {NAT}", "--fibers", "x"])
    assert code == 0 and out.count(" pass") == 3


def test_crosscheck_with_q_one_reports_error_and_fails():
    code, out, _ = run(["crosscheck", f"L^(-x) on {NAT}", "--q", "2,1", "--format", "structured"])
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 1 and [r["value"]["verdict"] for r in recs] == ["pass", "error"]


def test_structured_output_parses():
    code, out, _ = run(["integrate", f"x*L^(-2x) on {NAT}", "--format", "structured"])
    rec = json.loads(out)
    assert code == 0 and rec["format"] == "motivic-vg/1" and rec["kind"] == "motconst"


def test_selftest():
    code, out, _ = run(["selftest"])
    assert code == 0 and out.count("PASS") == len(out.splitlines())


@pytest.mark.parametrize("argv, fragment", [
    (["null", "{ x in Z^1 : x = 1 mod 0 }"], "modulus must be >= 2 at 1:24"),
    (["bogus"], "invalid choice"),
    (["null"], "usage: motivic-vg null"),
    (["integrate", f"1 on {NAT}"], "(a,b)=(0,0)"),
    (["eval", f"x on {NAT}"], "--at"),
    (["specialize", "L", "--q", "1"], "q > 1"),
    (["integrable", f"x on {NAT}", "--fibers", "w"], "unknown fiber coordinate"),
    ([], "usage"),
])
def test_errors_exit_two(argv, fragment):
    code, out, err = run(argv)
    assert code == 2 and out == "" and fragment in err


def test_run_command_and_main(capsys):
    assert run_command("null", [f"L - L on {NAT}"]) == (0, "NULL\n")
    assert main(["null", f"L - L on {NAT}"]) == 0
    assert capsys.readouterr().out == "NULL\n"


def test_console_script_is_deterministic(tmp_path):
    argv = [sys.executable, "-m", "motivic_vg.cli", "canon", "x^2 * L^(-x) - x on {(x,y) in Z^2: 0 <= x <= y}",
            "--format", "structured"]
    outs = []
    for seed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        outs.append(subprocess.run(argv, capture_output=True, env=env, cwd=tmp_path, check=True).stdout)
    assert outs[0] == outs[1] == outs[2] and outs[0]
