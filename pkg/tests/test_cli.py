import io
import subprocess
import sys

import pytest

from dihedral_tate.arithmetic import DATA_DIR
from dihedral_tate.cli import run
from dihedral_tate.dmodule import SIGMA, permutation_module, sign_module, trivial_module

GOLDEN_VERIFY = """\
DATASET splitting field of x^3 - x - 1 over Q
main_theorem PASS left=1/3 right=1/3 rhs_odd=1/3 rhs_full=1/3
unit_index PASS left=1/3 right=1/3 index=1 s=1
s_divides_q PASS left=1 right=3
bounds_general PASS a=1 b=0 v3=-1 in [-1,0]
bounds_cm PASS s=1 t=1 v3=-1 in [-1,0]
bounds_rational PASS v3=-1 in [-1,0]
bounds_rational_prime PASS left=1/3 allowed=[1,1/3,1/9]
bartel PASS left=1/3 right=1/3 delta=1 alpha=-2 index=1
local_orders PASS left=1 right=1 h0_D=2 h1_D=2 h1_G=1
RESULT PASS
"""


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def module_file(tmp_path):
    def write(M, name="m.json"):
        path = tmp_path / name
        path.write_text(M.dumps())
        return str(path)

    return write


def test_verify_golden():
    code, text = cli("verify", "--field", str(DATA_DIR / "x3-x-1.json"))
    assert code == 0 and text == GOLDEN_VERIFY


def test_verify_subset():
    code, text = cli("verify", "--field", str(DATA_DIR / "x3-x-1.json"), "--checks", "main,local")
    assert code == 0
    assert [line.split()[0] for line in text.splitlines()] == ["DATASET", "main_theorem", "local_orders", "RESULT"]


def test_verify_corrupted_exits_1():
    code, text = cli("verify", "--field", str(DATA_DIR / "x3-x-1-corrupted.json"))
    assert code == 1
    assert "main_theorem FAIL left=1/4 right=1/3" in text and text.endswith("RESULT FAIL\n")


def test_verify_bad_inputs(tmp_path):
    assert cli("verify", "--field", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"q": 3}')
    assert cli("verify", "--field", str(bad))[0] == 2
    assert cli("verify", "--field", str(DATA_DIR / "x3-x-1.json"), "--checks", "nope")[0] == 2


def test_local():
    code, text = cli("local", "--field", str(DATA_DIR / "x5-5x+12.json"))
    assert code == 0
    assert text.splitlines()[-1] == "h1_G = h1_D*h0_D (odd parts) PASS"


def test_cohomology_command(module_file):
    path = module_file(trivial_module(3))
    assert cli("cohomology", "--module", path, "--subgroup", "G", "--degree", "0") == (0, "3\nplus 3\nminus 1\n")
    assert cli("cohomology", "--module", path, "--subgroup", "G", "--degree", "-1") == (0, "1\nplus 1\nminus 1\n")
    assert cli("cohomology", "--module", path, "--subgroup", "D", "--degree", "0") == (0, "6\n")
    assert cli("cohomology", "--module", path, "--subgroup", "Sigma", "--degree", "0") == (0, "2\n")
    path = module_file(sign_module(5), "s.json")
    assert cli("cohomology", "--module", path, "--subgroup", "G", "--degree", "2")[1] == "5\nplus 1\nminus 5\n"


def test_cohomology_bad_subgroup(module_file):
    path = module_file(trivial_module(3))
    assert cli("cohomology", "--module", path, "--subgroup", "rot:2", "--degree", "0")[0] == 2
    assert cli("cohomology", "--module", path, "--subgroup", "bogus", "--degree", "0")[0] == 2


def test_herbrand_command(module_file):
    assert cli("herbrand", "--module", module_file(trivial_module(5)), "--subgroup", "G") == (0, "5\n")
    assert cli("herbrand", "--module", module_file(permutation_module(3, SIGMA)), "--subgroup", "G") == (0, "1\n")
    assert cli("herbrand", "--module", module_file(trivial_module(3)), "--subgroup", "D")[0] == 2


def test_bad_module_file(tmp_path):
    p = tmp_path / "m.json"
    p.write_text("not json")
    assert cli("herbrand", "--module", str(p), "--subgroup", "G")[0] == 2


def test_fuzz_exit_codes():
    assert cli("fuzz", "--q", "3", "--trials", "2", "--seed", "5")[0] == 0
    assert cli("fuzz", "--q", "4", "--trials", "2", "--seed", "5")[0] == 2
    assert cli("fuzz", "--q", "3", "--trials", "0", "--seed", "5")[0] == 2
    assert cli("fuzz", "--q", "3", "--trials", "2", "--seed", str(2**64))[0] == 2
    assert cli("fuzz", "--q", "3", "--trials", "2", "--seed", "1", "--quiet", "--verbose")[0] == 2
    assert cli("nonsense")[0] == 2
    assert cli()[0] == 2


def test_fuzz_quiet_and_options():
    code, text = cli("fuzz", "--q", "5", "--trials", "3", "--seed", "9", "--quiet", "--max-rank", "4",
                     "--torsion-bound", "12")
    assert code == 0 and text.startswith("SUMMARY\n") and text.endswith("RESULT PASS\n")


def test_fuzz_deterministic_and_job_independent():
    argv = ("fuzz", "--q", "3,9", "--trials", "4", "--seed", "123")
    first, second, parallel = cli(*argv), cli(*argv), cli(*argv, "--jobs", "2")
    assert first == second == parallel


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "dihedral_tate.cli", "verify", "--field", str(DATA_DIR / "x3-x-1.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == GOLDEN_VERIFY
