"""Brute-force clique numbers next to the closed form on desk-scale graphs."""
import argparse
import time

from grassmann_zh import extremal as E
from grassmann_zh import graph as G
from grassmann_zh.ring import factorize

INSTANCES = [(2, 4, 2, 2), (3, 4, 2, 2), (4, 4, 2, 2), (2, 3, 1, 2), (4, 3, 1, 2),
             (6, 2, 1, 2), (2, 5, 2, 2), (3, 5, 2, 2)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-vertices", type=int, default=G.VERTEX_CAP)
    args = ap.parse_args()
    print(f"{'graph':<18}{'|V|':>7}{'formula':>9}{'solver':>8}{'secs':>8}")
    for h, n, m, r in INSTANCES:
        spec = G.GraphSpec(factorize(h), n, m, r)
        nv = spec.vertex_count()
        t0 = time.time()
        solved = G.brute_force_max_clique(spec).size if nv <= args.max_vertices else None
        print(f"{str(spec):<18}{nv:>7}{E.clique_number(spec):>9}{str(solved):>8}{time.time() - t0:>8.1f}")


if __name__ == "__main__":
    main()
