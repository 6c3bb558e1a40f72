"""Near-extremal perturbation sampling for the fractional family, where exhaustive runs are out of reach."""

import argparse
import json

from spectral_kmatch.verify import SampleSpec, TheoremRunConfig, verify_theorem


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[12, 14])
    ap.add_argument("--k", type=int, nargs="+", default=[1, 3])
    ap.add_argument("--count", type=int, default=10_000)
    ap.add_argument("--radius", type=int, default=3)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--offset", type=float, default=0.0, help="shift the threshold (negative control)")
    args = ap.parse_args()
    spec = SampleSpec("near-extremal", args.count, radius=args.radius)
    for n in args.n:
        for k in args.k:
            cfg = TheoremRunConfig("14", n, 1, k, corpus="sample", sample=spec, seed=args.seed,
                                   workers=args.workers, threshold_offset=args.offset)
            r = verify_theorem(cfg)
            print(f"n={n} k={k} offset={args.offset}: {json.dumps(r.counts)} "
                  f"spot-check failures={r.spot_check['failed']} elapsed={r.elapsed_s:.1f}s")


if __name__ == "__main__":
    main()
