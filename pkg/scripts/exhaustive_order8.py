"""Exhaustive run over all 11117 connected graphs of order 8 (t=1), with a negative control."""

import argparse
import json

from spectral_kmatch.verify import TheoremRunConfig, verify_theorem, write_report


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+", default=[1, 3])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None, help="directory for JSON reports")
    args = ap.parse_args()
    for k in args.k:
        for offset in (0.0, -0.5):
            cfg = TheoremRunConfig("12", 8, 1, k, workers=args.workers, threshold_offset=offset)
            r = verify_theorem(cfg)
            tag = "control" if offset else "run"
            print(f"k={k} {tag}: threshold={r.threshold:.10f} elapsed={r.elapsed_s:.1f}s")
            print("  " + json.dumps(r.counts))
            for tie in r.ties:
                print(f"  tie: {tie['graph6']} rho={tie['rho']!r} perfect_k_matching={tie['perfect_k_matching']}")
            if args.out:
                write_report(r, f"{args.out}/order8_k{k}_{tag}.json")


if __name__ == "__main__":
    main()
