"""Build the mixed maximum clique over Z_6, scramble it by a random change of
basis, and recover its type from the family alone."""
import argparse
import random

from grassmann_zh import extremal as E
from grassmann_zh import graph as G
from grassmann_zh.ring import factorize
from grassmann_zh.verify import random_invertible


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--h", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    ctx = factorize(args.h)
    if ctx.t < 2:
        raise SystemExit("mixed families need at least two distinct primes")
    spec = G.GraphSpec(ctx, 4, 2, 2)
    rng = random.Random(args.seed)
    for I in ({0}, set(range(1, ctx.t))):
        desc = E.Mixed(frozenset(I), random_invertible(ctx, 4, rng))
        fam = E.build_family(spec, desc)
        rng.shuffle(fam)
        got = E.classify_maximum_clique(spec, fam)
        print(f"I={sorted(I)} size={len(fam)} clique={G.is_clique(spec, fam)} "
              f"omega={E.clique_number(spec)} classified={E.describe(got)['name']} I'={sorted(got.I)}")


if __name__ == "__main__":
    main()
