import json
import subprocess
import sys

import pytest

from wpline.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_wave_r1_is_normalized(capsys):
    code, out, _ = run(capsys, "wave", "--r", "1", "--dmax", "2")
    obj = json.loads(out)
    assert code == 0 and obj["schema"] == "wpline/1"
    assert obj["wave"]["normalized_r1"] is True


def test_gw_table_genus_zero(capsys):
    code, out, _ = run(capsys, "gw-table", "--r", "1", "--dmax", "3", "--g", "0")
    rows = json.loads(out)["invariants"]
    hit = [row for row in rows if row["d"] == 2 and row["k"] == [2]]
    assert code == 0 and len(hit) == 1
    assert (hit[0]["numerator"], hit[0]["denominator"]) == ("1", "4")


def test_char_table_shape(capsys):
    code, out, _ = run(capsys, "char", "--n", "4")
    table = json.loads(out)["table"]
    assert code == 0 and len(table) == 5 and all(len(row) == 5 for row in table)


@pytest.mark.parametrize("argv", [
    ("qc-check", "--r", "2", "--dmax", "4"),
    ("qc-check", "--r", "1", "--dmax", "3", "--t", "1/2", "--horder", "3"),
    ("xd-check", "--r", "3", "--dmax", "2", "--xorder", "8"),
    ("vev", "--r", "2", "--dmax", "1", "--n", "2", "--zorder", "3"),
    ("bilinear-check", "--r", "1", "--dmax", "1", "--n", "4"),
])
def test_checks_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    obj = json.loads(out)
    assert obj["schema"] == "wpline/1"


def test_tamper_gives_exit_one(capsys):
    code, out, _ = run(capsys, "qc-check", "--r", "2", "--dmax", "2", "--tamper")
    assert code == 1 and json.loads(out)["pass"] is False
    code, _, _ = run(capsys, "bilinear-check", "--r", "2", "--dmax", "1", "--n", "3", "--tamper")
    assert code == 1


@pytest.mark.parametrize("argv,needle", [
    (("char", "--xorder", "0"), "--xorder"),
    (("gw-table", "--dmax", "3", "--zorder", "2"), "--zorder"),
    (("wave", "--r", "0"), "--r"),
    (("vev", "--n", "9"), "--n"),
])
def test_out_of_range_exit_two(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 2 and needle in err


def test_bad_argument_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["wave", "--t", "abc"])
    assert exc.value.code == 2


def test_out_file_and_sidecar(tmp_path, capsys):
    target = tmp_path / "table.csv"
    code, out, _ = run(capsys, "char", "--n", "3", "--format", "text", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("lambda,")
    meta = json.loads((tmp_path / "table.csv.meta.json").read_text())
    assert meta["command"] == "char" and meta["schema"] == "wpline/1"


def test_deterministic_output(capsys):
    _, a, _ = run(capsys, "gw-table", "--r", "2", "--dmax", "2")
    _, b, _ = run(capsys, "gw-table", "--r", "2", "--dmax", "2")
    assert a == b


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wpline", "vev", "--r", "2", "--dmax", "2",
                           "--k", "2,2", "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "D = 192"
