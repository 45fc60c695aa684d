"""Tabulate fitted decay exponents from a finished sweep.

Walks <root>/*/report.json, pulls every power-law-fit certificate, and
prints an aligned table: scenario, channel, fitted exponent, allowed
band, fit window, verdict.  Also writes <root>/rates.csv for downstream
plotting.  Run scripts/run_registry.py first (or point --root at any
batch output directory).
"""

import argparse
import csv
import json
import sys
from pathlib import Path


def collect(root):
    rows = []
    for report_path in sorted(root.glob("*/report.json")):
        rep = json.loads(report_path.read_text())
        for cert in rep["certificates"]:
            m = cert["measured"]
            if "alpha" not in m:
                continue
            alphas = m["alpha"] if isinstance(m["alpha"], dict) else {"l2": m["alpha"]}
            for channel, alpha in sorted(alphas.items()):
                rows.append({
                    "scenario": rep["scenario"],
                    "channel": channel,
                    "alpha": alpha,
                    "band_lo": m["band"][0],
                    "band_hi": m["band"][1],
                    "t0": m["window"][0],
                    "t1": m["window"][1],
                    "passed": cert["passed"],
                })
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--root", default="runs/registry", help="batch output root")
    args = ap.parse_args()
    root = Path(args.root)

    rows = collect(root)
    if not rows:
        print(f"no fit certificates under {root}", file=sys.stderr)
        return 1

    print(f"{'scenario':22s} {'channel':8s} {'alpha':>8s} {'band':>16s} "
          f"{'window':>12s}  verdict")
    for r in rows:
        band = f"[{r['band_lo']:g}, {r['band_hi']:g}]"
        window = f"[{r['t0']:g}, {r['t1']:g}]"
        verdict = "ok" if r["passed"] else "FAIL"
        print(f"{r['scenario']:22s} {r['channel']:8s} {r['alpha']:8.4f} "
              f"{band:>16s} {window:>12s}  {verdict}")

    out_csv = root / "rates.csv"
    with open(out_csv, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    print(f"\nwrote {out_csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
