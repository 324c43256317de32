"""Compare the innermost and RB-orientation-first strategies on tensor presentations.

For each presentation, normalize seeded random expressions under both
strategies and count how often the normal forms agree. Disagreement shows
the rewriting system is not confluent for that presentation.
"""

import argparse
import random

from rbx.base import Algebra, BaseOperator
from rbx.errors import GuardError
from rbx.expressions import format_expression
from rbx.presented import LocalizationTensorInstance, TensorProduct, normalize
from rbx.sampling import random_expression

QX = Algebra.polynomial("x")
QY = Algebra.polynomial("y")
QXY = Algebra.polynomial("x", "y")
INTEGRAL = BaseOperator.integral("x")


def presentations():
    yield "laurent(x) integral (x) Q[x,y] integral, over Q[x]", LocalizationTensorInstance().presentation
    yield "Q[x] integral (x) Q[x,y] integral, over Q[x]", TensorProduct(("x",), QX, INTEGRAL, QXY, INTEGRAL)
    yield "Q[x] integral (x) Q[y] zero, over Q", TensorProduct((), QX, INTEGRAL, QY, BaseOperator.zero())
    yield "Q[x] identity (x) Q[y] identity, over Q", TensorProduct(
        (), QX, BaseOperator.identity(), QY, BaseOperator.identity())
    yield "Q[x] integral (x) Q[y] integral in y, over Q", TensorProduct(
        (), QX, INTEGRAL, QY, BaseOperator.integral("y"))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-depth", type=int, default=3)
    ap.add_argument("--max-steps", type=int, default=20_000)
    args = ap.parse_args()

    for label, pres in presentations():
        rng = random.Random(args.seed)
        agree = guarded = 0
        example = None
        for _ in range(args.samples):
            e = random_expression(pres.carrier, rng, args.max_depth, max_exp=1, max_dp=1)
            try:
                forms = [normalize(e, pres, s, max_steps=args.max_steps).element for s in ("innermost", "rb-first")]
            except GuardError:
                guarded += 1
                continue
            if forms[0] == forms[1]:
                agree += 1
            elif example is None:
                example = (e, *forms)
        print(f"{label}: {agree}/{args.samples - guarded} agree, {guarded} hit the step guard")
        if example:
            e, inner, first = example
            print(f"  e = {format_expression(e)}\n  innermost: {inner}\n  rb-first:  {first}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
