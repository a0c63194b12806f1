"""End-to-end exercises of the hfb executable: one pass per subcommand plus
the error paths, on grids small enough to keep the whole file under a few
seconds.  Usage: cli_smoke.py /path/to/hfb"""

import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

HFB = sys.argv[1]


def run(*args, expect=0):
    r = subprocess.run([HFB, *args], capture_output=True, text=True)
    if expect is not None and r.returncode != expect:
        raise AssertionError(
            f"{args}: exit {r.returncode}, wanted {expect}\n"
            f"stdout:\n{r.stdout}\nstderr:\n{r.stderr}"
        )
    return r


def load(path):
    return json.loads(Path(path).read_text())


def main():
    top = Path(tempfile.mkdtemp(prefix="hfb_smoke_"))

    # the constant-datum problem with the penalty off keeps the boundary
    # value everywhere: the field must be 0.3 on every non-exterior node
    m0 = top / "m0"
    run("minimize", "--out", str(m0), "--override", "energy.lambda=0")
    rows = list(csv.reader((m0 / "u_star.csv").open()))
    assert len(rows) == 33 and len(rows[0]) == 33
    vals = [float(x) for row in rows for x in row if float(x) != 0.0]
    assert vals and all(abs(v - 0.3) < 1e-12 for v in vals), (
        min(vals), max(vals))
    rep = load(m0 / "report.json")
    assert rep["ok"] is True
    assert rep["pgm_scale"]["max"] >= rep["pgm_scale"]["min"]
    assert "wall_seconds" in rep["timing"]
    for f in ("u_star.pgm", "history.json", "config.json"):
        assert (m0 / f).is_file(), f

    # identical run: every byte equal except the quarantined timing object
    m0b = top / "m0b"
    run("minimize", "--out", str(m0b), "--override", "energy.lambda=0")
    a, b = load(m0 / "report.json"), load(m0b / "report.json")
    a.pop("timing"), b.pop("timing")
    assert a == b
    assert (m0 / "u_star.csv").read_bytes() == (m0b / "u_star.csv").read_bytes()

    # penalized solve; the echoed config must reproduce it bit-for-bit
    m1 = top / "m1"
    bump17 = ["--override", "boundary.builtin=bump", "--override", "grid.n=17"]
    run("minimize", "--out", str(m1), *bump17)
    rep = load(m1 / "report.json")
    named = {c["name"]: c for c in rep["checks"]}
    assert named["minimizer nonnegative"]["hard"]
    assert named["minimizer nonnegative"]["passed"]
    m1b = top / "m1b"
    run("minimize", "--config", str(m1 / "config.json"), "--out", str(m1b))
    assert (m1 / "u_star.csv").read_bytes() == (m1b / "u_star.csv").read_bytes()

    # the extracted pair must satisfy the pointwise identity exactly at p=2
    mfg = top / "mfg"
    run("check-mfg", "--in", str(m1 / "u_star.csv"), "--out", str(mfg),
        *bump17, "--override", "mfg.tau=0.06")
    rep = load(mfg / "report.json")
    assert rep["ok"] is True
    assert rep["hj_sup"] == 0.0
    assert len(rep["fp_residuals"]) == 10
    assert rep["lp_norm"] > 0.0
    assert (mfg / "m.csv").is_file()

    fb = top / "fb"
    run("check-fb", "--in", str(m1 / "u_star.csv"), "--out", str(fb),
        *bump17, "--override", "mfg.tau=0.06",
        "--override", "fb.levels=[0.0,0.1]")
    fbrep = load(fb / "fb_report.json")
    assert len(fbrep["levels"]) == 2 and (fb / "curve_01.csv").is_file()
    assert fbrep["levels"][1]["length"] > 0.0
    rep = load(fb / "report.json")
    assert rep["ok"] is True  # slab overshoot is a flag, never an exit code

    var = top / "var"
    run("check-firstvar", "--in", str(m1 / "u_star.csv"), "--out", str(var),
        *bump17)
    vrep = load(var / "var_report.json")
    rotated = [f for f in vrep["fields"] if f["kind"] == "rotated-gradient"]
    assert len(rotated) == 2
    assert all(f["measure"] == 0.0 for f in rotated)
    assert load(var / "report.json")["ok"] is True

    sw = top / "sw"
    run("sweep", "--out", str(sw), "--override", "grid.n=17",
        "--override", "sweep.schedule=[1.0,0.5,0.25,0.125]")
    recs = load(sw / "records.json")
    assert len(recs["records"]) == 4 and not recs["aborted"]
    assert recs["verdict"]["all_ok"] is True
    assert (sw / "sweep.svg").is_file()
    assert (sw / "u_lambda_03.csv").is_file()

    # error paths: usage problems and invalid configs must not exit 0
    assert run("frobnicate", "--out", "x", expect=None).returncode != 0
    assert run("minimize", expect=None).returncode != 0
    bad = run("minimize", "--out", str(top / "bad"),
              "--override", "grid.n=16", expect=2)
    assert "grid.n" in bad.stderr
    missing = run("check-mfg", "--in", str(top / "nope.csv"),
                  "--out", str(top / "x2"), expect=2)
    assert "nope.csv" in missing.stderr

    print("cli smoke: all checks passed")


if __name__ == "__main__":
    main()
