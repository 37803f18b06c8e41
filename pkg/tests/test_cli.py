from __future__ import annotations

import csv
import io
import math
import subprocess
import sys

import pytest

from magnetomech.cli import FIELDMAP_COLUMNS, MEM_COLUMNS, main
from magnetomech.report import SWEEP_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_report_text(capsys):
    code, out, _ = run(capsys, "report", "--scenario", "paper-flagship")
    assert code == 0
    assert "two_eta" in out and "g0_over_kappa" in out


def test_global_flags_before_command(capsys):
    code, out, _ = run(capsys, "--scenario", "paper-homogeneous", "--format", "csv", "report")
    assert code == 0
    header, values = rows(out)
    assert len(header) == len(values)


def test_report_csv_warnings_to_stderr(capsys):
    code, out, err = run(capsys, "report", "--scenario", "paper-two-wire", "--format", "csv")
    assert code == 0
    assert "warning:" in err and "pinned" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.txt"
    code, out, _ = run(capsys, "report", "--out", str(target))
    assert code == 0 and out == ""
    assert "paper-flagship" in target.read_text()


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--parameter", "coil.height_over_width", "--start", "0.1",
                       "--stop", "100", "--steps", "4", "--log")
    assert code == 0
    table = rows(out)
    assert table[0] == ["coil.height_over_width", *SWEEP_COLUMNS]
    xs = [float(r[0]) for r in table[1:]]
    assert xs == pytest.approx([0.1, 1.0, 10.0, 100.0])


def test_sweep_with_units(capsys):
    code, out, _ = run(capsys, "sweep", "--parameter", "strip.thickness", "--start", "20 nm",
                       "--stop", "80 nm", "--steps", "3")
    assert code == 0
    assert [float(r[0]) for r in rows(out)[1:]] == pytest.approx([2e-8, 5e-8, 8e-8])


def test_sweep_zero_steps_is_header_only(capsys):
    code, out, _ = run(capsys, "sweep", "--parameter", "coil.height", "--start", "1 um", "--stop", "2 um",
                       "--steps", "0")
    assert code == 0
    assert len(rows(out)) == 1


@pytest.mark.parametrize("argv", [
    ("sweep", "--parameter", "strip.colour", "--start", "1", "--stop", "2"),
    ("sweep", "--parameter", "coil.height", "--start", "1 T", "--stop", "2 um"),
    ("sweep", "--parameter", "coil.height", "--start", "-1", "--stop", "2", "--log"),
    ("report", "--scenario", "no-such-scenario"),
])
def test_configuration_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_domain_error_exit_3(capsys):
    code, _, err = run(capsys, "sweep", "--parameter", "strip.width", "--start", "-1 um", "--stop", "1 um",
                       "--steps", "2")
    assert code == 3
    assert "domain error" in err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_fieldmap_masks_the_strip(capsys):
    code, out, _ = run(capsys, "fieldmap", "--resolution", "5", "5", "--y-range", "-1", "1",
                       "--z-range", "-1", "1", "--offset", "0 nm")
    assert code == 0
    table = rows(out)
    assert table[0] == FIELDMAP_COLUMNS
    masked = [r for r in table[1:] if r[-1] == "1"]
    # the centre row z = 0 crosses the strip at y = -0.5w, 0, 0.5w
    assert len(masked) == 3
    assert all(r[2] == "nan" for r in masked)
    assert all(not math.isnan(float(r[2])) for r in table[1:] if r[-1] == "0")


def test_fieldmap_wire_pair_total_and_locus(capsys):
    code, out, _ = run(capsys, "fieldmap", "--scenario", "paper-two-wire", "--which", "total",
                       "--resolution", "3", "4", "--locus")
    assert code == 0
    table = rows(out)
    assert table[0][-1] == "wc_star_half_m"
    assert len(table) == 1 + 12


def test_fieldmap_applied_quadrupole(capsys):
    code, out, _ = run(capsys, "fieldmap", "--which", "applied", "--resolution", "3", "3")
    y, z, A, By, Bz, m = (float(v) for v in rows(out)[1 + 8])
    b = By / -y
    assert Bz == pytest.approx(b * z) and A == pytest.approx(-b * y * z)


def test_mem_command(capsys):
    code, out, err = run(capsys, "mem", "--lengths", "5", "--cells", "200,800,3200")
    assert code == 0
    table = rows(out)
    assert table[0] == MEM_COLUMNS
    assert len(table) == 4
    assert all(r[-1] == "ok" for r in table[1:])
    assert len({r[7] for r in table[1:]}) == 1


def test_mem_single_grid_warns(capsys):
    code, out, err = run(capsys, "mem", "--lengths", "5", "--cells", "200")
    assert code == 0
    assert rows(out)[1][7] == ""
    assert "warning" in err


def test_mem_rejects_homogeneous(capsys):
    code, _, _ = run(capsys, "mem", "--scenario", "paper-homogeneous", "--lengths", "5", "--cells", "200")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ("sweep", "--parameter", "coil.height_over_width", "--start", "0.5", "--stop", "5", "--steps", "6"),
    ("fieldmap", "--which", "total", "--resolution", "9", "7"),
    ("mem", "--lengths", "5,10", "--cells", "200,800,3200"),
])
def test_thread_count_does_not_change_output(capsys, argv):
    outs = []
    for threads in ("1", "3"):
        code, out, _ = run(capsys, *argv, "--threads", threads)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "magnetomech", "report", "--format", "csv"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.count("\n") == 2
