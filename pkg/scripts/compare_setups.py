"""Compare variance ranges across all thermometer setups on a common grid.

Prints the per-setup min/max of the single-temperature variance bound and of
the total variance, plus the two headline orderings: the switch hierarchy
(more switched channels never hurt the worst case) and the best achievable
variance among the qubit-probe setups.

Usage:
    python3 scripts/compare_setups.py --grid 19
"""
import argparse
import json

from duotherm import SETUP_IDS, SweepSpec, run_sweep, summarize_ranges


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--grid", type=int, default=19)
    parser.add_argument("--tmin", type=float, default=0.1)
    parser.add_argument("--tmax", type=float, default=1.0)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--json-out", help="optional path for the raw summaries")
    args = parser.parse_args()

    by_setup = {}
    for setup_id in SETUP_IDS:
        spec = SweepSpec(setup_id=setup_id, t_min=args.tmin, t_max=args.tmax,
                         grid_n=args.grid)
        by_setup[setup_id] = run_sweep(spec, workers=args.workers)
    summaries = summarize_ranges(by_setup)

    print(f"{'setup':10s} {'dim':>4s} {'min_var':>10s} {'max_var':>10s} "
          f"{'min_total':>10s} {'max_total':>10s}")
    for s in summaries:
        if s.empty:
            print(f"{s.setup_id:10s} {s.effective_dimension:4d}   all grid points singular")
        else:
            print(f"{s.setup_id:10s} {s.effective_dimension:4d} {s.min_var:10.4f} "
                  f"{s.max_var:10.4f} {s.min_total:10.4f} {s.max_total:10.4f}")

    by_id = {s.setup_id: s for s in summaries}
    swi = [by_id[i] for i in ("swi2", "swi3", "swi4")]
    print("\nswitch worst-case totals:",
          " <= ".join(f"{s.setup_id} {s.max_total:.4f}" for s in reversed(swi)))
    qubit_probe = [by_id[i] for i in ("mz1b_wc", "mz1b_2q", "mz2b_wc", "mz2b_2q", "swi2")]
    best = min(qubit_probe, key=lambda s: s.min_var)
    print("best qubit-probe variance:",
          f"{best.setup_id} reaches min_var {best.min_var:.4f}")

    if args.json_out:
        with open(args.json_out, "w") as handle:
            json.dump([s.__dict__ for s in summaries], handle, indent=2)
        print(f"wrote {args.json_out}")


if __name__ == "__main__":
    main()
