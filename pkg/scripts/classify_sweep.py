"""Run the Poisson-structure classification over a sweep of lambdas.

    python3 scripts/classify_sweep.py --samples 100 --seed 42
"""

import argparse
import json
import time

from oscpoisson.classify import classify_oscillator
from oscpoisson.oscillator import Lambda, is_generic

DEFAULT = ["1", "3/2", "7", "1,3", "1,2", "2,5", "1/2,4", "1,1"]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lambdas", nargs="*", default=DEFAULT)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--json", action="store_true", help="print full reports")
    args = ap.parse_args()

    rows = []
    for text in args.lambdas:
        lam = Lambda.parse(text)
        t = time.perf_counter()
        rep = classify_oscillator(lam, seed=args.seed, samples=args.samples)
        dt = time.perf_counter() - t
        rows.append({"lambda": text, "generic": is_generic(lam), "seconds": round(dt, 2), **rep.to_json()})

    if args.json:
        print(json.dumps(rows, indent=2, ensure_ascii=False))
        return
    print(f"{'lambda':>8} {'generic':>7} {'lindim':>6} {'rank':>5} {'family':>6} {'excluded':>9} {'checks':>6} {'s':>6}")
    for r in rows:
        checks = all(c["passed"] for c in r["checkpoints"])
        excl = f"{r['samples']['excluded']}/{r['samples']['total']}"
        print(
            f"{r['lambda']:>8} {str(r['generic']):>7} {r['linear_dim']:>6} {r['constraints']['linear_rank']:>5} "
            f"{str(r['family_contained']):>6} {excl:>9} {str(checks):>6} {r['seconds']:>6}"
        )


if __name__ == "__main__":
    main()
