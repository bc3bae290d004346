"""
Where a naive real-coefficient pipeline breaks
==============================================

A line-by-line port of an R routine that mirrors roots through a
non-conjugating normalisation. The worked cases show each failure mode:
a vector of zero non-conjugate norm, huge non-all-pass outputs, and a
root configuration that changes when imaginary parts are dropped.
"""
from allpass.gmr_replica import CASES, diagnose

for case in CASES:
    for run in diagnose(case)["runs"]:
        print(f"{case:15s} params={run['params']} status={run['status']}")
        for line in run["console"]:
            print("    console:", line)
        for k, v in run["checks"].items():
            print(f"    {k}: {v}")
