"""Randomized invariant suites behind ``grzh verify``.

Every (modulus, suite) task draws from its own ``random.Random`` seeded by a
string built from the run seed, so reports do not depend on how tasks are
scheduled across threads.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

from . import extremal as E
from . import graph as G
from . import matrix as M
from . import ring as R
from . import subspace as S
from .matrix import ZhMatrix
from .ring import RingContext

SUITES = ("ranks", "crt", "dimension", "duality", "cliques")
DEFAULT_MODULI = (2, 3, 4, 6, 12)


def random_matrix(ctx: RingContext, m: int, n: int, rng: random.Random) -> ZhMatrix:
    return ZhMatrix.from_rows(ctx, [[rng.randrange(ctx.h) for _ in range(n)] for _ in range(m)], n)


def random_subspace(ctx: RingContext, n: int, m: int, rng: random.Random) -> S.Subspace:
    while True:
        A = random_matrix(ctx, m, n, rng)
        if M.mccoy_rank(A) == m:
            return S.subspace_from_matrix(A)


def random_invertible(ctx: RingContext, n: int, rng: random.Random) -> ZhMatrix:
    while True:
        T = random_matrix(ctx, n, n, rng)
        if M.is_invertible(T):
            return T


@dataclass
class Impl:
    """The operations under test; a fault swaps one for a broken stand-in."""
    mccoy_rank: Callable = M.mccoy_rank
    inner_rank: Callable = M.inner_rank
    crt_lift: Callable = R.crt_lift
    dim_intersection: Callable = S.dim_intersection
    dual: Callable = S.dual
    clique_number: Callable = E.clique_number


FAULTS = {
    "ranks": {"mccoy_rank": lambda A: min(A.shape)},
    "crt": {"crt_lift": lambda ctx, res: sum(res) % ctx.h},
    "dimension": {"dim_intersection": lambda A, B: 0},
    "duality": {"dual": lambda A: A},
    "cliques": {"clique_number": lambda spec: E.clique_number(spec) + 1},
}


class _Tally:
    def __init__(self):
        self.rows: dict[str, list[int]] = {}

    def check(self, name: str, ok: bool) -> None:
        row = self.rows.setdefault(name, [0, 0])
        row[0] += 1
        row[1] += 0 if ok else 1

    def records(self, h: int, suite: str) -> list[dict]:
        return [{"h": h, "suite": suite, "property": k, "checked": c, "failures": f, "passed": f == 0}
                for k, (c, f) in self.rows.items()]


def suite_ranks(ctx, rng, samples, impl, tally):
    for _ in range(samples):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        A = random_matrix(ctx, m, n, rng)
        tally.check("mccoy rank equals annihilator definition",
                    impl.mccoy_rank(A) == M.mccoy_rank_by_annihilator(A))
        tally.check("inner rank equals max over local projections",
                    impl.inner_rank(A) == max(M.inner_rank(M.pi_matrix(A, i)) for i in range(ctx.t)))
        tally.check("mccoy rank at most inner rank", impl.mccoy_rank(A) <= impl.inner_rank(A))
        nf = M.normal_form(A)
        tally.check("normal form reconstructs", nf.S @ nf.D @ nf.T == A
                    and nf.S @ nf.S_inv == ZhMatrix.identity(ctx, m)
                    and nf.T @ nf.T_inv == ZhMatrix.identity(ctx, n))
        if m == n:
            tally.check("determinant matches permutation expansion", M.det(A) == M.det_by_permutations(A))
            if M.is_invertible(A):
                tally.check("inverse is two-sided", A @ M.inverse(A) == ZhMatrix.identity(ctx, n))


def suite_crt(ctx, rng, samples, impl, tally):
    for _ in range(samples):
        x, y = rng.randrange(ctx.h), rng.randrange(ctx.h)
        tally.check("crt lift inverts projections",
                    impl.crt_lift(ctx, [R.pi(ctx, x, i) for i in range(ctx.t)]) == x)
        tally.check("projections are ring maps", all(
            R.pi(ctx, x * y, i) == R.pi(ctx, x, i) * R.pi(ctx, y, i) % ctx.prime_powers[i]
            and R.pi(ctx, x + y, i) == (R.pi(ctx, x, i) + R.pi(ctx, y, i)) % ctx.prime_powers[i]
            for i in range(ctx.t)))
        d = R.unit_decompose(ctx, x)
        tally.check("unit decomposition", R.is_unit(ctx, d.unit)
                    and d.unit * R.ideal_generator(ctx, d.exponents) % ctx.h == x)
        A = random_matrix(ctx, 2, 3, rng)
        tally.check("matrix crt round trip",
                    M.crt_lift_matrix(ctx, [M.pi_matrix(A, i) for i in range(ctx.t)]) == A)
        X = random_subspace(ctx, 3, rng.randint(0, 3), rng)
        tally.check("projected subspace keeps its dimension",
                    all(X.project(i).dim == X.dim for i in range(ctx.t)))


def suite_dimension(ctx, rng, samples, impl, tally):
    for _ in range(samples):
        n = rng.randint(1, 3)
        A = random_subspace(ctx, n, rng.randint(0, n), rng)
        B = random_subspace(ctx, n, rng.randint(0, n), rng)
        d = impl.dim_intersection(A, B)
        tally.check("rank formula equals module intersection", d == S.dim_intersection_brute(A, B))
        tally.check("rank formula equals min over local projections",
                    d == S.dim_intersection_by_projection(A, B))
        if ctx.t > 1:
            tally.check("rank formula equals min over complement projections",
                        d == S.dim_intersection_by_complement(A, B))
        big, small = (A, B) if A.dim >= B.dim else (B, A)
        if 1 <= small.dim and big.dim < n and not S.contains(big, small):
            pnf = S.pair_normal_form(big, small)
            tally.check("pair normal form reconstructs the pair", pnf.reconstruct() == (big, small))
        tally.check("dimension formula", S.dim_join(A, B) + d == A.dim + B.dim)


def suite_duality(ctx, rng, samples, impl, tally):
    for _ in range(samples):
        n = rng.randint(1, 4)
        m = rng.randint(0, n)
        A, B = random_subspace(ctx, n, m, rng), random_subspace(ctx, n, m, rng)
        Ap, Bp = impl.dual(A), impl.dual(B)
        tally.check("dual has complementary dimension", Ap.dim == n - m)
        tally.check("dual annihilates", m == 0 or n == m or (A.rep @ Ap.rep.T).is_zero())
        tally.check("dual is an involution", impl.dual(Ap) == A)
        tally.check("codimension of intersections is preserved",
                    m - S.dim_intersection(A, B) == (n - m) - S.dim_intersection(Ap, Bp))
        if m:
            keep = sorted(rng.sample(range(m), rng.randint(0, m)))
            C = S.subspace_from_matrix(A.rep.select_rows(keep)) if keep else S.zero_subspace(ctx, n)
            tally.check("containment reverses", S.contains(impl.dual(C), Ap))


def suite_cliques(ctx, rng, samples, impl, tally):
    for n in range(2, 9):
        for m in range(0, n // 2 + 1):
            for r in range(0, m):
                spec = G.GraphSpec(ctx, n, m, m - r + 1)
                tally.check("intersecting bound equals clique number",
                            E.ekr_bound(ctx, n, m, r) == impl.clique_number(spec))
    spec = G.GraphSpec(ctx, 4, 2, 2)
    if E.clique_number(spec) > 100:
        spec = G.GraphSpec(ctx, 3, 1, 2)
    n, m, r = spec.n, spec.m, spec.r
    T = random_invertible(ctx, n, rng)
    P = random_subspace(ctx, n, m - r + 1, rng)
    descs = [E.Star(P)]
    if n == 2 * m:
        descs.append(E.Within(random_subspace(ctx, n, m + r - 1, rng)))
        if ctx.t > 1:
            I = frozenset(sorted(rng.sample(range(ctx.t), rng.randint(1, ctx.t - 1))))
            descs.append(E.Mixed(I, T))
    for desc in descs:
        fam = E.build_family(spec, desc)
        kind = type(desc).__name__.lower()
        tally.check(f"{kind} family has clique-number size",
                    len(set(fam)) == impl.clique_number(spec))
        tally.check(f"{kind} family is a clique", G.is_clique(spec, fam))
        got = E.classify_maximum_clique(spec, fam)
        if isinstance(desc, E.Star):
            ok = isinstance(got, E.Star) and got.P == desc.P
        elif isinstance(desc, E.Within):
            ok = isinstance(got, E.Within) and got.Q == desc.Q
        else:
            ok = isinstance(got, E.Mixed) and got.I == desc.I
        tally.check(f"{kind} family classifies back", ok)
        if isinstance(desc, E.Mixed):
            members = set(fam)
            V = G.materialize_vertices(spec)
            for X in rng.sample(V, min(samples, len(V))):
                tally.check("mixed membership test agrees with construction",
                            E.in_mixed_family(spec, desc, X) == (X in members))


SUITE_FUNCS = {"ranks": suite_ranks, "crt": suite_crt, "dimension": suite_dimension,
               "duality": suite_duality, "cliques": suite_cliques}


def run_task(h: int, suite: str, seed: int, samples: int, fault: str | None = None) -> list[dict]:
    ctx = R.factorize(h)
    impl = Impl(**FAULTS[suite]) if fault == suite else Impl()
    rng = random.Random(f"{seed}/{h}/{suite}")
    tally = _Tally()
    SUITE_FUNCS[suite](ctx, rng, samples, impl, tally)
    return tally.records(h, suite)


def run_verify(moduli=DEFAULT_MODULI, suites=SUITES, seed: int = 0, samples: int = 200,
               threads: int = 1, fault: str | None = None) -> dict:
    tasks = [(h, s) for h in moduli for s in suites]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        chunks = list(pool.map(lambda hs: run_task(hs[0], hs[1], seed, samples, fault), tasks))
    results = [rec for chunk in chunks for rec in chunk]
    return {"schema": 1, "seed": seed, "samples": samples, "moduli": list(moduli),
            "suites": list(suites), "results": results,
            "all_passed": all(r["passed"] for r in results)}
