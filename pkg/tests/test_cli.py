"""Command-line behavior: exit codes, file formats, certificate output."""

import json
import subprocess
import sys

import pytest

from liaisonlab.cli import run
from liaisonlab.ideal_ops import Ideal, read_ideal_text, write_ideal_text


def test_usage_error_bad_prime(capsys):
    code = run(["verify", "--pipeline", "h10-8", "--prime", "15"])
    assert code == 64
    assert "not prime" in capsys.readouterr().err


def test_usage_error_missing_pipeline():
    assert run(["verify"]) == 64


def test_usage_error_small_prime(capsys):
    code = run(["verify", "--pipeline", "m10-n", "--prime", "997"])
    assert code in (2, 64)  # below the documented floor


def test_gb_command(tmp_path, ring):
    I = Ideal(ring, ["x0*y0 - x1*y1", "x0*y1 + x1*y2"])
    src = tmp_path / "ideal.txt"
    src.write_text(write_ideal_text(I))
    out = tmp_path / "gb.txt"
    code = run(["gb", "--input", str(src), "--output", str(out)])
    assert code == 0
    J = read_ideal_text(out.read_text())
    assert J.ring == ring
    assert I.groebner().elements == tuple(J.generators)


def test_gb_block_order(tmp_path, ring):
    I = Ideal(ring, ["x0*y0 - x1*y1"])
    src = tmp_path / "ideal.txt"
    src.write_text(write_ideal_text(I))
    code = run(["gb", "--input", str(src), "--order", "block:x,y"])
    assert code == 0


def test_invariants_command(tmp_path, ring, capsys):
    I = Ideal(ring, ["x0 - 3*x1", "y0 + y1 - 2*y2"], saturated=True)
    src = tmp_path / "line.txt"
    src.write_text(write_ideal_text(I))
    code = run(["invariants", "--input", str(src)])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["degree"] == [0, 1]
    assert payload["p_a"] == 0


def test_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "liaisonlab.cli", "verify", "--pipeline", "h10-8", "--prime", "15"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 64
