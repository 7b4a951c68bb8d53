#!/usr/bin/env python3
"""Run every shipped example end to end through the CLI and check the
expected exit codes.

Usage: python3 scripts/run_paper_examples.py [--quick]

--quick shrinks the scan windows so the whole run stays under a few
seconds; the default windows match the acceptance suite."""

import argparse
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()

    window_hi = "2000" if args.quick else "100000"
    density_n = "20000" if args.quick else "1000000"
    r_check_n = "200" if args.quick else "10000"

    tmp = Path(tempfile.mkdtemp(prefix="beattycover-"))
    built_48 = tmp / "six_sequence_built.json"
    built_graham = tmp / "two_block_built.json"

    def d(name):
        return str(DATA / name)

    # (description, argv, expected exit code)
    runs = [
        ("classical pair covers once",
         ["verify", "--family", d("golden_pair.json"),
          "--window", "1", window_hi], 0),
        ("multiplicity-2 pair covers twice",
         ["verify", "--family", d("sqrt2_pair_m2.json"),
          "--window", "1", window_hi], 0),
        ("multiplicity-2 pair certificate",
         ["certify-homogeneous", "--family", d("sqrt2_pair_m2.json")], 0),
        ("integral-offset pair certificate",
         ["certify-pair", "--family", d("offset_pair_integral.json")], 0),
        ("integral-offset pair window",
         ["verify", "--family", d("offset_pair_integral.json"),
          "--window", "1", window_hi], 0),
        ("defect-offset pair refuted",
         ["certify-pair", "--family", d("offset_pair_defect.json")], 1),
        ("defect-offset pair violates in window",
         ["verify", "--family", d("offset_pair_defect.json"),
          "--window", "1", window_hi], 1),
        ("three-term systems complementary",
         ["complementary", "--system", d("system_3x3.json"),
          "--system2", d("system_2x4x4.json")], 0),
        ("three-term pair irreducible",
         ["decompose", "--system", d("system_3x3.json"),
          "--system2", d("system_2x4x4.json"), "--mode", "reducible"], 1),
        ("progression multisets equal",
         ["ap-equal", "--lhs", d("ap_multiset_16.json"),
          "--rhs", d("ap_multiset_2366.json")], 0),
        ("left system inexact, witness residue 0",
         ["exactness", "--system", d("system_16.json")], 1),
        ("inexact pair irreducible",
         ["decompose", "--system", d("system_16.json"),
          "--system2", d("system_2366.json"), "--mode", "reducible"], 1),
        ("six-sequence family built",
         ["build-example48", "--theta", d("theta_minus_sqrt2_over_10.json"),
          "--out", str(built_48)], 0),
        ("six-sequence family derivation",
         ["derive-systems", "--family", d("six_sequence_family.json")], 0),
        ("two-block construction built",
         ["build-graham", "--spec", d("graham_two_cover_spec.json"),
          "--out", str(built_graham)], 0),
        ("p/q = 5/3 low-cell classification",
         ["fractional-classify", "--p", "5", "--q", "3",
          "--theta1", d("sqrt2_minus_1.json")], 0),
        ("p/q = 5/3 high-cell classification",
         ["fractional-classify", "--p", "5", "--q", "3",
          "--theta1", d("inv_sqrt2.json")], 0),
        ("partial-sum closed form, low cell",
         ["fractional-check-R", "--p", "5", "--q", "3",
          "--theta1", d("sqrt2_minus_1.json"), "--max-N", r_check_n], 0),
        ("partial-sum closed form, high cell",
         ["fractional-check-R", "--p", "5", "--q", "3",
          "--theta1", d("inv_sqrt2.json"), "--max-N", r_check_n], 0),
        ("densities, low cell",
         ["fractional-densities", "--p", "5", "--q", "3",
          "--theta1", d("sqrt2_minus_1.json"), "--max-N", density_n,
          "--tolerance", "0.005" if not args.quick else "0.02"], 0),
        ("orbit discrepancy diagnostic",
         ["discrepancy", "--theta", d("sqrt2_minus_1.json"),
          "--max-N", "10000"], 0),
        ("six-term fractional sum constant (value 3)",
         ["f-identity", "--theta", d("sqrt2_minus_1.json"),
          "--count", "1000", "--expected", "3"], 0),
    ]

    failures = 0
    for desc, argv, expected in runs:
        proc = subprocess.run([sys.executable, "-m", "beattycover.cli", *argv],
                              capture_output=True, text=True, cwd=ROOT)
        ok = proc.returncode == expected
        status = "ok  " if ok else "FAIL"
        print(f"[{status}] exit {proc.returncode} (want {expected})  {desc}")
        if not ok:
            failures += 1
            sys.stderr.write(proc.stdout + proc.stderr)

    # chain: the built six-sequence family must itself verify clean
    proc = subprocess.run([sys.executable, "-m", "beattycover.cli", "verify",
                           "--family", str(built_48), "--window", "1", window_hi],
                          capture_output=True, text=True, cwd=ROOT)
    ok = proc.returncode == 0
    print(f"[{'ok  ' if ok else 'FAIL'}] exit {proc.returncode} (want 0)  "
          f"built six-sequence family verifies clean")
    failures += 0 if ok else 1

    # chain: the two-block construction is exact past its finite prefix
    proc = subprocess.run([sys.executable, "-m", "beattycover.cli", "verify",
                           "--family", str(built_graham),
                           "--window", "11", window_hi],
                          capture_output=True, text=True, cwd=ROOT)
    ok = proc.returncode == 0
    print(f"[{'ok  ' if ok else 'FAIL'}] exit {proc.returncode} (want 0)  "
          f"built two-block family verifies clean past its prefix")
    failures += 0 if ok else 1

    print(f"\n{len(runs) + 2 - failures} of {len(runs) + 2} example runs "
          f"behaved as expected")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
