"""Compare the r-condition with the dual Jacobi identity on random data.

For random r in ∧²S, u0 in S and μ (small integer entries so that the
condition holds reasonably often), build Δ(u) = ad_u r + 2 e0 ∧ (J^μ + ad_{u0})u
and record whether the residual vanishes and whether the dual bracket is Lie.
The two verdicts should always agree; the cocycle condition always holds.

    python3 scripts/r_condition_probe.py --trials 400 --seed 0
"""

import argparse
import random
from collections import Counter

from oscpoisson.algebra import check_jacobi
from oscpoisson.bialgebra import (
    RTensor,
    build_delta_lie,
    check_cocycle,
    check_r_condition,
    dual_product,
    is_zero_tensor,
)
from oscpoisson.oscillator import Lambda, build_oscillator, oscillator_basis, s_indices


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lambdas", nargs="*", default=["1,3", "1,2", "2,5"])
    ap.add_argument("--trials", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    for text in args.lambdas:
        lam = Lambda.parse(text)
        n, d = lam.n, lam.dim
        basis = oscillator_basis(n)
        bracket = build_oscillator(lam)
        S = s_indices(n)
        tally = Counter()
        for _ in range(args.trials):
            pairs = [(j, k, rng.randint(-1, 1)) for j in S for k in S if j < k]
            r = RTensor.from_pairs(basis, pairs)
            u0 = tuple(rng.randint(-2, 2) if i in S else 0 for i in range(d))
            mu = [rng.randint(-1, 1) for _ in range(n)]
            res_zero = is_zero_tensor(check_r_condition(lam, r, mu).matrix)
            delta = build_delta_lie(lam, r, u0, mu)
            tally["cocycle_ok"] += check_cocycle(bracket, delta).passed
            jac = check_jacobi(dual_product(delta)).passed
            tally[(res_zero, jac)] += 1
        agree = tally[(True, True)] + tally[(False, False)]
        print(
            f"lambda=({text}): trials={args.trials} cocycle_ok={tally['cocycle_ok']} "
            f"residual0&jacobi={tally[(True, True)]} residual!=0&!jacobi={tally[(False, False)]} "
            f"disagree={args.trials - agree}"
        )


if __name__ == "__main__":
    main()
