"""Run the full scenario registry through the batch driver.

Materializes every registry config as JSON under <out>/configs/, runs
them share-nothing, and prints one status line per scenario.  The exit
code is the worst exit code over the runs (0 ok, 2 config rejected,
3 numerical failure, 4 certificate failed), so this script doubles as a
reproduction gate: a zero exit means every certificate passed.

Outputs land under <out>/<scenario>/ (series.csv, snapshots, report.json,
timing.json) plus <out>/batch_report.json.  Re-running with a different
--jobs value must reproduce every non-timing file byte for byte.
"""

import argparse
import json
import sys
from pathlib import Path

from hypodecay.experiment import batch, scenario_doc, scenario_names


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/registry", help="output root")
    ap.add_argument("--jobs", type=int, default=4, help="worker processes")
    ap.add_argument("names", nargs="*", help="subset of scenarios (default: all)")
    args = ap.parse_args()

    names = args.names or scenario_names()
    unknown = sorted(set(names) - set(scenario_names()))
    if unknown:
        ap.error(f"unknown scenarios: {unknown}; try `hypodecay list`")

    out = Path(args.out)
    cfg_dir = out / "configs"
    cfg_dir.mkdir(parents=True, exist_ok=True)
    for name in names:
        with open(cfg_dir / f"{name}.json", "w") as fh:
            json.dump(scenario_doc(name), fh, indent=2)

    agg = batch(sorted(cfg_dir.glob("*.json")), out, jobs=args.jobs)
    for r in agg["runs"]:
        status = r.get("error") or ("ok" if r["exit_code"] == 0 else "certificate failure")
        print(f"[{r['exit_code']}] {r['name']}: {status}")
    print(f"batch report: {out / 'batch_report.json'}")
    return agg["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
