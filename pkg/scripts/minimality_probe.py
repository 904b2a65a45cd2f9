"""Compare the straight-segment length with random perturbed polylines for a few pairs.

    python3 scripts/minimality_probe.py bodies/ellipse.json --pairs 5 --trials 200
"""

import argparse

import numpy as np

from funkgeom.bodyio import load_body
from funkgeom.finsler import infimum_estimate
from funkgeom.sampling import sample_interior


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("body")
    ap.add_argument("--pairs", type=int, default=5)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    body = load_body(args.body)
    rng = np.random.default_rng(args.seed)
    print(f"{'closed form':>14} {'segment quad':>14} {'minimum':>14} {'margin':>10}  best path")
    for i in range(args.pairs):
        x, y = sample_interior(body, rng, 2)
        rep = infimum_estimate(body, x, y, trials=args.trials, seed=args.seed + i)
        kind = "chord" if len(rep.best_path.vertices) == 2 else f"{len(rep.best_path.vertices)}-vertex polyline"
        print(f"{rep.closed_form:14.10f} {rep.segment_quadrature:14.10f} {rep.minimum:14.10f} "
              f"{rep.minimum - rep.closed_form:10.2e}  {kind}")


if __name__ == "__main__":
    main()
