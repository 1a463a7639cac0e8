"""Regenerate the variance heatmaps for every setup.

Writes one CSV and one PGM per (setup, field) pair into the output directory.
The diagonal of the two-bath two-qubit interferometer map renders white since
the bounds diverge at equal temperatures.

Usage:
    python3 scripts/reproduce_heatmaps.py --outdir heatmaps --grid 46
"""
import argparse
import os
import time

from duotherm import SETUP_IDS, SweepSpec, emit_csv, emit_pgm_heatmap, run_sweep


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", default="heatmaps")
    parser.add_argument("--setups", default=",".join(SETUP_IDS),
                        help="comma-separated setup ids")
    parser.add_argument("--grid", type=int, default=46)
    parser.add_argument("--tmin", type=float, default=0.1)
    parser.add_argument("--tmax", type=float, default=1.0)
    parser.add_argument("--fields", default="var_t1,total_var",
                        help="record fields to render as PGM")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker processes (default auto)")
    args = parser.parse_args()

    os.makedirs(args.outdir, exist_ok=True)
    fields = [f for f in args.fields.split(",") if f]
    for setup_id in args.setups.split(","):
        spec = SweepSpec(setup_id=setup_id, t_min=args.tmin, t_max=args.tmax,
                         grid_n=args.grid)
        start = time.perf_counter()
        records = run_sweep(spec, workers=args.workers)
        elapsed = time.perf_counter() - start
        base = os.path.join(args.outdir, setup_id)
        emit_csv(records, base + ".csv")
        for field in fields:
            emit_pgm_heatmap(records, field, f"{base}_{field}.pgm")
        singular = sum(r.singular for r in records)
        print(f"{setup_id:10s} {len(records):5d} points  {singular:4d} singular  "
              f"{elapsed:6.1f} s  -> {base}.csv")


if __name__ == "__main__":
    main()
