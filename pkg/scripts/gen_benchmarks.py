#!/usr/bin/env python3
"""Generate the standard benchmark bundle: designs plus DIMACS instances.

Writes, under --outdir:

* design files for the polynomial designs q in {2, 3, 4, 5, 7};
* the full 512-instance tau sweep for the q=3, d=2 design (parity base by
  default), with a verdict summary in sweep_summary.txt.

Everything is produced through the library, so the output agrees byte for
byte with `nwtaut design` / `nwtaut gen-tau` runs of the same parameters.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from nwtaut import designs as dg  # noqa: E402
from nwtaut import nwcore as nw  # noqa: E402


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="benchmarks")
    ap.add_argument("--base", default="parity", choices=["parity", "tabular", "toy-owp"])
    ap.add_argument("--table", help="truth table for the tabular base (8 bits)")
    ap.add_argument("--no-sweep", action="store_true",
                    help="skip the 512-instance tau sweep")
    args = ap.parse_args()

    os.makedirs(args.outdir, exist_ok=True)

    for q in (2, 3, 4, 5, 7):
        d = min(q, 3)
        params = dg.poly_design(q, d)
        path = os.path.join(args.outdir, f"poly_q{q}_d{d}.design")
        with open(path, "w") as fh:
            fh.write(dg.serialize_design(params))
        print(f"wrote {path} (n={params.n}, m={params.m}, l={params.l})")

    if args.no_sweep:
        return 0

    params = dg.poly_design(3, 2)
    base = nw.builtin_base(args.base, params.l, table=args.table)
    spec = nw.GeneratorSpec(params, base)
    taudir = os.path.join(args.outdir, "tau_sweep_q3_d2")
    os.makedirs(taudir, exist_ok=True)
    n_taut = 0
    summary = []
    for v in range(1 << params.m):
        b = format(v, f"0{params.m}b")
        tau = nw.tau_of(spec, b)
        with open(os.path.join(taudir, f"tau_{b}.cnf"), "w") as fh:
            fh.write(tau.clauses.to_dimacs())
        taut = nw.tau_verdict(tau)
        n_taut += taut
        summary.append(f"{b} {'taut' if taut else 'sat'}")
    with open(os.path.join(args.outdir, "sweep_summary.txt"), "w") as fh:
        fh.write("\n".join(summary) + "\n")
    print(f"tau sweep: {n_taut}/{1 << params.m} tautologies under base={args.base}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
