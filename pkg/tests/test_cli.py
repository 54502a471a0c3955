import time

import numpy as np
import pytest

from mgcd.cli import BENCH_HEADER, EXIT_COPRIME, EXIT_ERROR, EXIT_OK, RunRecord, main
from mgcd.poly import Polynomial, distance, read_poly, write_poly


@pytest.fixture
def pair(tmp_path):
    f = tmp_path / "f.txt"
    g = tmp_path / "g.txt"
    write_poly(f, Polynomial.from_roots([1, 2]))
    write_poly(g, Polynomial.from_roots([1, -3]))
    return f, g


def fields(text):
    out = {}
    for line in text.splitlines():
        if line and not line.startswith("#") and "\t" in line:
            key, value = line.split("\t", 1)
            out.setdefault(key, value)
    return out


def test_gen_writes_instance(tmp_path, capsys):
    d = tmp_path / "inst"
    assert main(["gen", "10", "8", "3", "1e-5", "4", str(d)]) == EXIT_OK
    f, g, ge = (read_poly(d / n) for n in ("f.txt", "g.txt", "g_exact.txt"))
    assert (f.degree, g.degree) == (10, 8)
    assert 0 < np.abs(g.coeffs - ge.coeffs).max() <= 1e-5
    meta = (d / "meta.txt").read_text().splitlines()
    assert meta[0].startswith("# n\tm")
    first = (d / "g.txt").read_text()
    assert main(["gen", "10", "8", "3", "1e-5", "4", str(d)]) == EXIT_OK
    assert (d / "g.txt").read_text() == first
    assert "wrote" in capsys.readouterr().out


def test_gen_eta_zero(tmp_path):
    d = tmp_path / "exact"
    main(["gen", "6", "5", "2", "0", "1", str(d)])
    assert read_poly(d / "g.txt") == read_poly(d / "g_exact.txt")


def test_agcd_command(pair, tmp_path, capsys):
    out = tmp_path / "gt.txt"
    assert main(["agcd", str(pair[0]), str(pair[1]), "--out", str(out)]) == EXIT_OK
    info = fields(capsys.readouterr().out)
    assert info["status"] == "refined" and info["gcd_degree"] == "1"
    assert float(info["residual"]) <= 1e-12
    assert distance(read_poly(out), Polynomial.from_roots([1, -3])) <= 1e-10


@pytest.mark.parametrize("extra", [["--dense"], ["--degree", "1"]])
def test_agcd_command_options(pair, capsys, extra):
    assert main(["agcd", str(pair[0]), str(pair[1]), *extra]) == EXIT_OK
    assert fields(capsys.readouterr().out)["gcd_degree"] == "1"


def test_agcd_coprime(tmp_path, capsys):
    f, g = tmp_path / "f.txt", tmp_path / "g.txt"
    write_poly(f, Polynomial.from_roots([1, 2]))
    write_poly(g, Polynomial([1, 1, 1]))
    assert main(["agcd", str(f), str(g)]) == EXIT_COPRIME
    assert fields(capsys.readouterr().out)["status"] == "coprime"


def test_agcd_noisy_instance(tmp_path, capsys):
    d = tmp_path / "inst"
    main(["gen", "15", "14", "5", "1e-5", "0", str(d)])
    capsys.readouterr()
    assert main(["agcd", str(d / "f.txt"), str(d / "g.txt"), "--degree", "5"]) == EXIT_OK
    info = fields(capsys.readouterr().out)
    assert info["gcd_degree"] == "5" and float(info["residual"]) <= 1e-10


def test_missing_file(tmp_path, capsys):
    assert main(["agcd", str(tmp_path / "nope.txt"), str(tmp_path / "nope.txt")]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_parse_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("# header\n1.0 0.0\nnot-a-number 0\n")
    good = tmp_path / "g.txt"
    write_poly(good, Polynomial([1, 1]))
    assert main(["gcd", str(bad), str(good)]) == EXIT_ERROR
    err = capsys.readouterr().err
    assert "bad.txt" in err and "line 3" in err


def test_rank_command(tmp_path, capsys):
    d = tmp_path / "inst"
    main(["gen", "10", "8", "3", "0", "2", str(d)])
    capsys.readouterr()
    assert main(["rank", str(d / "f.txt"), str(d / "g.txt")]) == EXIT_OK
    text = capsys.readouterr().out
    info = fields(text)
    assert info["corank"] == "3" and info["rank"] == "7"
    assert "# pivot magnitudes" in text
    one = tmp_path / "one.txt"
    write_poly(one, Polynomial([1]))
    assert main(["rank", str(d / "f.txt"), str(one), "--dense"]) == EXIT_OK
    assert fields(capsys.readouterr().out)["corank"] == "0"


def test_gcd_command(tmp_path, capsys):
    f, g = tmp_path / "f.txt", tmp_path / "g.txt"
    write_poly(f, Polynomial.from_roots([1, 2, 3]))
    write_poly(g, Polynomial.from_roots([1, 2, -5]))
    assert main(["gcd", str(f), str(g)]) == EXIT_OK
    text = capsys.readouterr().out
    assert "(degree 2)" in text
    write_poly(g, Polynomial.from_roots([4, 5]))
    assert main(["gcd", str(f), str(g)]) == EXIT_COPRIME


def test_bench_smoke(tmp_path, capsys):
    rec = tmp_path / "runs.tsv"
    t0 = time.perf_counter()
    assert main(["bench", "--table", "1", "--seeds", "1", "--records", str(rec)]) == EXIT_OK
    assert time.perf_counter() - t0 < 10
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# " + BENCH_HEADER
    assert len(lines) == 5 and all(len(ln.split("\t")) == 11 for ln in lines[1:])
    runs = [RunRecord.from_line(ln) for ln in rec.read_text().splitlines()[1:]]
    assert len(runs) == 4 and all(r.status == "refined" for r in runs)


def test_run_record_round_trip():
    r = RunRecord(8, 7, 3, 1e-5, 2, "refined", 3, 1.5e-30, 2e-5, 3e-5, 2, 0.01)
    assert RunRecord.from_line(r.to_line()) == r
