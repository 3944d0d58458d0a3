import io
import shutil
import subprocess

import pytest

from mzlab.cli import run


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def fields(text):
    return dict(line.split("\t", 1) for line in text.strip().splitlines())


def test_image_member_with_preimage():
    code, out, _ = cli("--machine", "image", "--endo", "phi(x1)=2*x1,phi(x2)=3*x2", "--f", "x1*x2^-1")
    assert code == 0
    got = fields(out)
    assert got["verdict"] == "member" and got["preimage"] == "3*x1*x2^-1"


def test_image_non_member_is_a_violation():
    code, out, _ = cli("--machine", "image", "--endo", "phi(x1)=2*x1,phi(x2)=3*x2", "--f", "1 + x1")
    assert code == 1 and fields(out)["obstructions"] == "{(0,0)}"


def test_image_bounded_exit_codes():
    assert cli("image", "--char", "5", "--derivation", "D(x1)=1", "--f", "x1^4", "--bound", "15")[0] == 1
    assert cli("image", "--derivation", "D(x1)=x1*x2,D(x2)=x2^2", "--f", "x1", "--bound", "2")[0] == 3
    assert cli("image", "--derivation", "D(x1)=1", "--f", "x1^3", "--bound", "4")[0] == 0


def test_image_needs_bound_for_non_diagonal():
    code, _, err = cli("image", "--derivation", "D(x1)=x2", "--f", "x1")
    assert code == 2 and "--bound" in err


def test_radical_witness():
    code, out, _ = cli("--machine", "radical", "--f", "x1+x2+(x1*x2)^-1", "--support", "{(0,0)}",
                       "--mmax", "10")
    assert code == 1 and fields(out)["witness"] == "3"


def test_mz_local_counterexample():
    code, out, _ = cli("--machine", "mz", "--local", "--a", "x^-1", "--b", "1/(1-x)",
                       "--support", "{(0)}", "--mmax", "12", "--order", "20")
    assert code == 1 and fields(out)["b1.violations"] == "12"


def test_repro_single_and_all():
    code, out, _ = cli("repro", "dk-image")
    assert code == 0 and out.rstrip().endswith("result: PASS")
    code, out, _ = cli("--machine", "repro", "--all")
    assert code == 0
    assert all(line.endswith("\tPASS") for line in out.strip().splitlines())


def test_repro_overrides():
    code, out, _ = cli("--machine", "repro", "telescope", "--p", "7")
    got = fields(out)
    assert code == 0 and got["sum"] == "6" and got["result"] == "PASS"
    assert "golden" not in got                  # non-default parameters skip the snapshot
    code, out, _ = cli("--machine", "repro", "series-counterexample", "--mmax", "50", "--order", "60")
    assert code == 0 and fields(out)["result"] == "PASS"


def test_unknown_repro_case_is_input_error():
    assert cli("repro", "no-such-case")[0] == 2


@pytest.mark.parametrize("argv", [
    ("apply", "--derivation", "D(x1)=1", "--f", "x1 +"),
    ("apply", "--series", "--derivation", "D(x1)=1", "--f", "x1^-1"),
    ("apply", "--f", "x1"),
    ("jc", "--matrix", "1 2; 3"),
    ("nonsense",),
    ("normalize", "--endo", "phi(x1)=x2,phi(x2)=x3,phi(x3)=x1"),
])
def test_input_errors_exit_2(argv):
    assert cli(*argv)[0] == 2


def test_inconclusive_exit_3():
    assert cli("ddeg", "--derivation", "D(x1)=x1^2", "--f", "x1", "--cap", "5")[0] == 3
    assert cli("cyclic", "--derivation", "D(x1)=x1^2", "--f", "x1", "--cap", "5")[0] == 3
    assert cli("periodicity", "--endo", "phi(x1)=2*x1", "--imax", "6")[0] == 3


def test_cyclo_and_periodicity():
    code, out, _ = cli("--machine", "cyclo", "--matrix", "-1")
    got = fields(out)
    assert code == 0 and (got["period.N"], got["period.d"]) == ("1", "2")
    code, out, _ = cli("--machine", "cyclo", "--matrix", "2")
    assert code == 1 and "not a root of unity" in fields(out)["period.reason"]
    code, out, _ = cli("--machine", "periodicity", "--endo", "phi(x1)=x2,phi(x2)=x1")
    assert code == 0 and (fields(out)["i"], fields(out)["j"]) == ("1", "3")


def test_other_subcommands():
    assert fields(cli("--machine", "apply", "--derivation", "D(x1)=1", "--f", "x1^3*x2")[1])["result"] \
        == "3*x1^2*x2"
    assert fields(cli("--machine", "iterate", "--derivation", "D(x1)=x2", "--f", "x1^2",
                      "--m", "2")[1])["result"] == "2*x2^2"
    assert fields(cli("--machine", "ddeg", "--derivation", "D(x1)=x2", "--f", "x1^2")[1])["d_degree"] == "2"
    assert fields(cli("--machine", "jc", "--matrix", "2 1; 0 2")[1])["N_index"] == "2"
    assert fields(cli("--machine", "grade", "--derivation", "D(x1)=x1^2+x2, D(x2)=1",
                      "--weight", "(1,1)")[1])["shifts"] == "-1,0,1"
    assert fields(cli("--machine", "inverse", "--F", "x1+x1^2", "--order", "3")[1])["G1"] \
        == "x1 - x1^2 + 2*x1^3"
    got = fields(cli("--machine", "normalize", "--endo", "phi(x1)=x2,phi(x2)=x1", "--order", "6")[1])
    assert (got["y1"], got["c2"]) == ("x2 + x1", "-1")


def test_config_file_and_at_files(tmp_path):
    (tmp_path / "f.txt").write_text("x1^5 + x2\n")
    cfg = tmp_path / "mz.cfg"
    cfg.write_text("# defaults\nmachine = true\norder = 8\n")
    code, out, _ = cli("apply", "--config", str(cfg), "--derivation", "D(x1)=1",
                       "--f", "@" + str(tmp_path / "f.txt"))
    assert code == 0 and fields(out)["result"] == "5*x1^4"
    cfg.write_text("bogus = 1\n")
    assert cli("apply", "--config", str(cfg), "--derivation", "D(x1)=1", "--f", "x1")[0] == 2


def test_output_is_deterministic():
    argv = ("--machine", "repro", "radical-comparison")
    assert cli(*argv) == cli(*argv)


@pytest.mark.skipif(shutil.which("mz-lab") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["mz-lab", "repro", "dk-image"], capture_output=True, text=True)
    assert proc.returncode == 0 and "PASS" in proc.stdout
