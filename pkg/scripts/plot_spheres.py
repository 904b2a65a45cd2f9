"""Draw forward and backward spheres of several radii about one centre (matplotlib).

    python3 scripts/plot_spheres.py bodies/square.json --center 0.35,0.6 --out spheres.png
"""

import argparse
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from funkgeom.bodyio import load_body
from funkgeom.cli import parse_point
from funkgeom.funk import backward_sphere, forward_sphere
from funkgeom.svg import boundary_polyline


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("body")
    ap.add_argument("--center", type=parse_point, required=True)
    ap.add_argument("--deltas", type=float, nargs="*", default=[0.1, math.log(2), 1.0, 2.0])
    ap.add_argument("--dirs", type=int, default=720)
    ap.add_argument("--out", default="spheres.png")
    args = ap.parse_args(argv)

    body = load_body(args.body)
    fig, axes = plt.subplots(1, 2, figsize=(10, 5), sharex=True, sharey=True)
    outline = boundary_polyline(body, args.dirs, clip=4.0)
    for ax, make, title in ((axes[0], forward_sphere, "forward S(x, d)"),
                            (axes[1], backward_sphere, "backward S'(x, d)")):
        ax.plot(*np.vstack([outline, outline[:1]]).T, color="black", lw=1)
        for d in args.deltas:
            s = make(body, args.center, d, args.dirs)
            if len(s.points):
                ax.plot(*s.points.T, ".", ms=1.5, label=f"d={d:.3g}{' (clipped)' if s.truncated else ''}")
        ax.plot(*args.center, "k+")
        ax.set_title(title)
        ax.set_aspect("equal")
        ax.legend(fontsize=7, loc="lower right")
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
