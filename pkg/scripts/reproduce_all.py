"""Rerun every worked example through the CLI and time it.

    python scripts/reproduce_all.py [--skip bell33,eq29] [--outdir results]
"""
import argparse
import time
from pathlib import Path

from adhesive.cli import REPRODUCTIONS, main


def run():
    ap = argparse.ArgumentParser()
    ap.add_argument("--skip", default="", help="comma separated examples to skip")
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()
    out = Path(args.outdir)
    out.mkdir(exist_ok=True)
    skip = {s for s in args.skip.split(",") if s}
    for name in sorted(REPRODUCTIONS):
        if name in skip:
            continue
        t = time.perf_counter()
        code = main(["reproduce", name, "--out", str(out / f"{name}.txt")])
        print(f"{name:15s} exit {code}  {time.perf_counter() - t:8.1f} s")


if __name__ == "__main__":
    run()
