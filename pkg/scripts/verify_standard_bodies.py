"""Run every property suite on the shipped bodies and write one JSON report per body.

    python3 scripts/verify_standard_bodies.py --out reports/ [--samples 10000] [--seed 0]
"""

import argparse
import json
import sys
import time
from pathlib import Path

from funkgeom.bodyio import load_body
from funkgeom.verify import run_suites

ROOT = Path(__file__).resolve().parents[1]
STANDARD = ("disk", "square", "polygon12", "ellipse")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--bodies", nargs="*", default=list(STANDARD))
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args(argv)

    ok = True
    t0 = time.perf_counter()
    for name in args.bodies:
        rep = run_suites(load_body(ROOT / "bodies" / f"{name}.json"), "all", seed=args.seed,
                         samples=args.samples, name=name)
        ok &= rep.passed
        print(f"== {name}: {'PASS' if rep.passed else 'FAIL'} ({rep.wall_time:.1f} s)")
        print(rep.table())
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"{name}.json").write_text(json.dumps(rep.as_dict(), indent=1) + "\n")
    print(f"total {time.perf_counter() - t0:.1f} s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
