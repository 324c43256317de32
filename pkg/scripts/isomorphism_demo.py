"""Walk through the isomorphism between the RB localization of Q[x] at x
tensored with Q[x,y] and the RB localization of Q[x,y] at x.

Prints a few worked round trips, then a seeded sampled report.
"""

import argparse

from rbx.base import BasisKey
from rbx.expressions import P, Leaf, Product, format_expression, lift
from rbx.localize import structure_map
from rbx.presented import LocalizationTensorInstance, check_localization_tensor


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=25)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-len", type=int, default=2)
    ap.add_argument("--max-depth", type=int, default=3)
    args = ap.parse_args()

    inst = LocalizationTensorInstance()
    tgt, carrier = inst.target, inst.presentation.carrier
    y, xinv = carrier.var("y"), carrier.var("x").inverse()

    print("target:", tgt.header)
    for t in (tgt.embed(tgt.algebra.var("x").inverse()),
              structure_map(tgt, tgt.algebra.polynomial_part.var("y")),
              tgt.op(tgt.element({(BasisKey((0, 1), 0), BasisKey((0, 0), 1)): 1}))):
        image = inst.h(t)
        print(f"t = {t}\n  h(t) = {image}\n  g(h(t)) = {inst.g(lift(image))}")

    e = P(Product((Leaf(y), P(Leaf(xinv)))))
    print(f"e = {format_expression(e)}\n  g(e) = {inst.g(e)}")

    report = check_localization_tensor(args.samples, args.samples, seed=args.seed, instance=inst,
                                       max_depth=args.max_depth, max_len=args.max_len)
    print("\n".join(report.lines()))
    for line in report.failures:
        print("  ", line)
    return 0 if report.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
