"""Independence-number bounds, with the exact solver where it fits."""
import argparse

from grassmann_zh import extremal as E
from grassmann_zh import graph as G
from grassmann_zh.ring import factorize

INSTANCES = [(2, 4, 2, 2), (3, 4, 2, 2), (4, 4, 2, 2), (6, 4, 2, 2), (2, 5, 2, 2),
             (2, 6, 3, 2), (2, 6, 2, 2), (12, 6, 3, 3)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--solve-up-to", type=int, default=200,
                    help="run the exact solver on graphs with at most this many vertices")
    args = ap.parse_args()
    cols = ("graph", "|V|", "omega", "lower", "floor", "trans", "exact")
    print("".join(f"{c:>12}" for c in cols))
    for h, n, m, r in INSTANCES:
        spec = G.GraphSpec(factorize(h), n, m, r)
        b = E.alpha_bounds(spec, exact=spec.vertex_count() <= args.solve_up_to,
                           cap=args.solve_up_to)
        row = (str(spec), b.vertices, b.omega, b.alpha_lower, b.alpha_upper_floor_chain,
               b.alpha_upper_transitive, b.alpha_exact)
        print("".join(f"{str(v):>12}" for v in row))
        assert b.consistent(), b


if __name__ == "__main__":
    main()
