"""Probe the six symmetric Leibniz bialgebra conditions around the family.

Three slices on n = 1 with seeded random data:
  * the family with γ ≠ 0 (expected to pass),
  * the same data with γ = 0,
  * the family plus a symmetric perturbation Δ_a(e_{-1}) += t·x⊙y for every
    pair of basis vectors, listing which conditions break.

    python3 scripts/leibniz_bialgebra_slices.py --seed 3 --trials 20
"""

import argparse
import random
from fractions import Fraction

from oscpoisson.bialgebra import (
    Coproduct,
    RTensor,
    build_delta_leibniz,
    check_leibniz_bialgebra,
)
from oscpoisson.oscillator import E_M1, e, ec, leibniz_product, oscillator_basis


def rq(rng, nonzero=False):
    while True:
        x = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if x or not nonzero:
            return x


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--trials", type=int, default=20)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    basis = oscillator_basis(1)

    passed = {"gamma!=0": 0, "gamma=0": 0}
    for _ in range(args.trials):
        c, g, a = rq(rng), rq(rng, True), rq(rng)
        u0, mu = (0, 0, rq(rng), rq(rng)), [rq(rng)]
        r = RTensor.from_pairs(basis, [(e(1), ec(1), a)])
        prod = leibniz_product((1,), c)
        passed["gamma!=0"] += check_leibniz_bialgebra(prod, build_delta_leibniz((1,), g, r, u0, mu)).passed
        passed["gamma=0"] += check_leibniz_bialgebra(prod, build_delta_leibniz((1,), 0, r, u0, mu)).passed
    print(f"trials={args.trials} " + " ".join(f"{k}:{v}" for k, v in passed.items()))

    r = RTensor.from_pairs(basis, [(e(1), ec(1), 1)])
    base = build_delta_leibniz((1,), 1, r, (0, 0, 1, 0), [1])
    prod = leibniz_product((1,), 2)
    labels = basis.labels
    print("perturbation Δ_a(e-1) += x⊙y  ->  failing conditions")
    for i in range(4):
        for j in range(i, 4):
            extra = [(E_M1, i, j, 1), (E_M1, j, i, 1)] if i != j else [(E_M1, i, i, 2)]
            bad = base + Coproduct.from_entries(basis, extra)
            print(f"  {labels[i]}⊙{labels[j]}: {check_leibniz_bialgebra(prod, bad).failed()}")


if __name__ == "__main__":
    main()
