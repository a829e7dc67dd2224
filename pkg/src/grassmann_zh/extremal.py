"""Clique numbers, maximum-clique families, the intersecting-family bound and
independence-number bounds for G_r(m, n, Z_h).

Prime indices in :class:`Mixed` are 0-based positions in ``ctx.primes``.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import product
from math import floor, prod
from typing import Sequence, Union

from . import graph as G
from . import matrix as M
from . import ring as R
from . import subspace as S
from .errors import CapExceeded, PreconditionError
from .graph import GraphSpec
from .matrix import ZhMatrix
from .ring import RingContext
from .subspace import Subspace

FAMILY_CAP = 10**5
NOT_MAXIMUM = "not-maximum"
UNCLASSIFIED = "unclassified"


# --------------------------------------------------------------------------
# closed forms


def clique_number(spec: GraphSpec) -> int:
    ctx, n, m, r = spec.ctx, spec.n, spec.m, spec.r
    if spec.is_complete or (n < 2 * m and r >= n - m + 1):
        return spec.vertex_count()
    if n < 2 * m:
        m = n - m   # X -> X-perp identifies G_r(m, n) with G_r(n - m, n)
    return prod(p ** ((s - 1) * (n - m) * (r - 1)) * S.gaussian_binomial(n - m + r - 1, r - 1, p)
                for p, s in ctx.primes)


def ekr_bound(ctx: RingContext, n: int, m: int, r: int) -> int:
    """Largest size of an r-intersecting family of m-subspaces of Z_h^n."""
    if not n // 2 >= m >= r >= 0:
        raise PreconditionError(f"need floor(n/2) >= m >= r >= 0, got n={n}, m={m}, r={r}")
    return prod(p ** ((s - 1) * (n - m) * (m - r)) * S.gaussian_binomial(n - r, m - r, p)
                for p, s in ctx.primes)


# --------------------------------------------------------------------------
# family descriptors


@dataclass(frozen=True)
class Star:
    """All m-subspaces containing P (dim P = m - r + 1)."""
    P: Subspace


@dataclass(frozen=True)
class Within:
    """All m-subspaces inside Q (dim Q = m + r - 1)."""
    Q: Subspace


@dataclass(frozen=True)
class Mixed:
    """The block family F^{(m-r+1, m, n, I)} moved by T; star-like at the
    primes in I and within-like at the others."""
    I: frozenset[int]
    T: ZhMatrix


FamilyDescriptor = Union[Star, Within, Mixed]


def _check_descriptor(spec: GraphSpec, desc: FamilyDescriptor) -> None:
    m, n, r = spec.m, spec.n, spec.r
    if isinstance(desc, Star):
        if desc.P.dim != m - r + 1 or desc.P.n != n:
            raise PreconditionError(f"star centre must have dim {m - r + 1}")
    elif isinstance(desc, Within):
        if desc.Q.dim != m + r - 1 or desc.Q.n != n:
            raise PreconditionError(f"within space must have dim {m + r - 1}")
        if n != 2 * m:
            raise PreconditionError("within families are maximum cliques only when n = 2m")
    elif isinstance(desc, Mixed):
        t = spec.ctx.t
        if n != 2 * m:
            raise PreconditionError("mixed families need n = 2m")
        if not desc.I or len(desc.I) >= t or not desc.I <= set(range(t)):
            raise PreconditionError(f"I must be a nonempty proper subset of range({t})")
        if desc.T.shape != (n, n) or not M.is_invertible(desc.T):
            raise PreconditionError("T must be an invertible n x n matrix")
    else:
        raise PreconditionError(f"unknown descriptor {desc!r}")


def _star_reps(ctx: RingContext, n: int, m: int, k0: int, cap: int):
    """Canonical reps of diag(X, I_k0), X over all (m-k0)-subspaces of Z^(n-k0)."""
    Ik = ZhMatrix.identity(ctx, k0)
    for X in S.enumerate_subspaces(ctx, n - k0, m - k0, cap=cap):
        yield M.block_diag(X.rep, Ik)


def _within_reps(ctx: RingContext, n: int, m: int, k1: int, cap: int):
    Z = ZhMatrix.zeros(ctx, m, n - k1)
    for X in S.enumerate_subspaces(ctx, k1, m, cap=cap):
        yield M.hstack(X.rep, Z)


def family_size(spec: GraphSpec, desc: FamilyDescriptor) -> int:
    ctx, n, m, r = spec.ctx, spec.n, spec.m, spec.r
    if isinstance(desc, Star):
        return S.count_containing(ctx, n, m, m - r + 1)
    if isinstance(desc, Within):
        return S.count_inside(ctx, m + r - 1, m)
    size = 1
    for i in range(ctx.t):
        loc = ctx.local(i)
        size *= (S.count_containing(loc, n, m, m - r + 1) if i in desc.I
                 else S.count_inside(loc, m + r - 1, m))
    return size


def build_family(spec: GraphSpec, desc: FamilyDescriptor, cap: int = FAMILY_CAP) -> list[Subspace]:
    _check_descriptor(spec, desc)
    ctx, n, m, r = spec.ctx, spec.n, spec.m, spec.r
    size = family_size(spec, desc)
    if size > cap:
        raise CapExceeded(f"family of size {size} exceeds cap {cap}")
    k0, k1 = m - r + 1, m + r - 1
    if isinstance(desc, Star):
        T = S.adapted_basis(desc.P)
        return [S.subspace_from_matrix(X @ T) for X in _star_reps(ctx, n, m, k0, cap)]
    if isinstance(desc, Within):
        T = M.extend_to_basis(desc.Q.rep)
        return [S.subspace_from_matrix(X @ T) for X in _within_reps(ctx, n, m, k1, cap)]
    local_lists = []
    for i in range(ctx.t):
        loc = ctx.local(i)
        reps = (_star_reps(loc, n, m, k0, cap) if i in desc.I
                else _within_reps(loc, n, m, k1, cap))
        local_lists.append(list(reps))
    out = []
    for combo in product(*local_lists):
        X = M.crt_lift_matrix(ctx, combo)
        out.append(S.subspace_from_matrix(X @ desc.T))
    return out


def mixed_family_literal(ctx: RingContext, n: int, m: int, b: int, I: Sequence[int],
                         cap: int = 10**6) -> list[Subspace]:
    """The block family written out matrix by matrix: all m-subspaces with a
    representation [[X, 0], [Y, x I_b]] where x = 1 at primes in I and 0
    elsewhere, and Y has entries in J_alpha (alpha_i = s_i on I, 0 off I)."""
    I = set(I)
    x = R.crt_lift(ctx, [1 if i in I else 0 for i in range(ctx.t)])
    alphas = [s if i in I else 0 for i, (_, s) in enumerate(ctx.primes)]
    g = R.ideal_generator(ctx, alphas)
    ideal = sorted({g * k % ctx.h for k in range(ctx.h)})
    nx, ny = (m - b) * (n - b), b * (n - b)
    if ctx.h**nx * len(ideal) ** ny > cap:
        raise CapExceeded("literal mixed-family enumeration too large")
    seen = set()
    for xs in product(range(ctx.h), repeat=nx):
        top = [list(xs[i * (n - b):(i + 1) * (n - b)]) + [0] * b for i in range(m - b)]
        for ys in product(ideal, repeat=ny):
            bottom = [list(ys[i * (n - b):(i + 1) * (n - b)]) + [x * (i == j) for j in range(b)]
                      for i in range(b)]
            A = ZhMatrix.from_rows(ctx, top + bottom, n)
            if M.mccoy_rank(A) == m:
                seen.add(S.subspace_from_matrix(A))
    return sorted(seen)


def in_mixed_family(spec: GraphSpec, desc: Mixed, X: Subspace) -> bool:
    """Membership in build_family(desc) without enumerating it: in the
    coordinates X T^-1, each local projection must contain the last m-r+1
    unit vectors (primes in I) or vanish on the last n-m-r+1 columns."""
    _check_descriptor(spec, desc)
    n, m, r = spec.n, spec.m, spec.r
    if X.dim != m or X.n != n:
        return False
    B = S.subspace_from_matrix(X.rep @ M.inverse(desc.T))
    k0, k1 = m - r + 1, m + r - 1
    for i in range(spec.ctx.t):
        Bi = B.project(i)
        if i in desc.I:
            P = S.subspace(Bi.ctx, [[int(c == j) for c in range(n)] for j in range(n - k0, n)], n)
            if not S.contains(Bi, P):
                return False
        elif any(row[c] for row in Bi.rep.rows for c in range(k1, n)):
            return False
    return True


# --------------------------------------------------------------------------
# classification


def common_subspace(ctx: RingContext, n: int, family: Sequence[Subspace]) -> Subspace | None:
    """The intersection of all members when that intersection is free
    (a subspace); None otherwise."""
    duals = [S.dual(X).rep for X in family if X.dim < n]
    if not duals:
        return S.whole_space(ctx, n)
    N = M.vstack(*duals)
    nf = M.normal_form(N.T)   # v in the intersection  <=>  v N^t = 0
    kernel_rows = []
    for c in range(n):
        if c < len(nf.omega):
            d = R.ideal_generator(ctx, nf.omega[c])
            if d == 0:
                kernel_rows.append(c)
            elif not R.is_unit(ctx, d):
                return None
        else:
            kernel_rows.append(c)
    if not kernel_rows:
        return S.zero_subspace(ctx, n)
    return S.subspace_from_matrix(nf.S_inv.select_rows(kernel_rows))


def join_subspace(ctx: RingContext, n: int, family: Sequence[Subspace]) -> Subspace | None:
    """The submodule generated by all members when it is free; else None."""
    reps = [X.rep for X in family if X.dim]
    if not reps:
        return S.zero_subspace(ctx, n)
    nf = M.normal_form(M.vstack(*reps))
    keep = []
    for c, a in enumerate(nf.omega):
        d = R.ideal_generator(ctx, a)
        if R.is_unit(ctx, d):
            keep.append(c)
        elif d != 0:
            return None
    return S.subspace_from_matrix(nf.T.select_rows(keep)) if keep else S.zero_subspace(ctx, n)


def classify_maximum_clique(spec: GraphSpec, family: Sequence[Subspace]) -> FamilyDescriptor | str:
    fam = sorted(set(family))
    ctx, n, m, r = spec.ctx, spec.n, spec.m, spec.r
    if len(fam) != clique_number(spec) or not G.is_clique(spec, fam):
        return NOT_MAXIMUM
    k0, k1 = m - r + 1, m + r - 1
    P = common_subspace(ctx, n, fam)
    if P is not None and P.dim == k0:
        return Star(P)
    if n == 2 * m:
        Q = join_subspace(ctx, n, fam)
        if Q is not None and Q.dim == k1:
            return Within(Q)
    if n != 2 * m or ctx.t == 1:
        return UNCLASSIFIED
    I, Ts = set(), []
    for i in range(ctx.t):
        loc = ctx.local(i)
        local_fam = sorted({X.project(i) for X in fam})
        Pi = common_subspace(loc, n, local_fam)
        if Pi is not None and Pi.dim == k0:
            I.add(i)
            Ts.append(S.adapted_basis(Pi))
            continue
        Qi = join_subspace(loc, n, local_fam)
        if Qi is not None and Qi.dim == k1:
            Ts.append(M.extend_to_basis(Qi.rep))
            continue
        return UNCLASSIFIED
    if not I or len(I) == ctx.t:
        return UNCLASSIFIED
    desc = Mixed(frozenset(I), M.crt_lift_matrix(ctx, Ts))
    if set(build_family(spec, desc)) != set(fam):
        return UNCLASSIFIED
    return desc


def describe(desc: FamilyDescriptor | str) -> dict:
    if isinstance(desc, str):
        return {"type": desc}
    if isinstance(desc, Star):
        return {"type": "a", "name": "star", "center": [list(r) for r in desc.P.rep.rows]}
    if isinstance(desc, Within):
        return {"type": "b", "name": "within", "space": [list(r) for r in desc.Q.rep.rows]}
    return {"type": "c", "name": "mixed", "I": sorted(desc.I),
            "T": [list(r) for r in desc.T.rows]}


# --------------------------------------------------------------------------
# intersecting families


def is_r_intersecting(family: Sequence[Subspace], r: int) -> bool:
    fam = list(family)
    return all(S.dim_intersection(fam[i], fam[j]) >= r
               for i in range(len(fam)) for j in range(i + 1, len(fam)))


def verify_ekr(ctx: RingContext, n: int, m: int, r: int, family: Sequence[Subspace]) -> dict:
    bound = ekr_bound(ctx, n, m, r)
    fam = sorted(set(family))
    intersecting = is_r_intersecting(fam, r)
    report = {"schema": 1, "params": {"h": ctx.h, "n": n, "m": m, "r": r},
              "bound": bound, "achieved": len(fam), "r_intersecting": intersecting}
    if not intersecting:
        report["status"] = "not r-intersecting"
    elif len(fam) < bound:
        report["status"] = "below bound"
    elif len(fam) > bound:
        report["status"] = "exceeds bound"   # impossible if the bound is right
    else:
        report["status"] = "meets bound"
        if r == m:
            report["classification"] = describe(Star(fam[0]))
        else:
            spec = GraphSpec(ctx, n, m, m - r + 1)
            report["classification"] = describe(classify_maximum_clique(spec, fam))
    return report


# --------------------------------------------------------------------------
# independence number


@dataclass
class BoundsReport:
    omega: int
    vertices: int
    ekr_bound: int | None = None
    alpha_lower: int | None = None
    alpha_lower_source: str | None = None
    alpha_lower_product: int | None = None
    alpha_lower_partial_spread: int | None = None
    alpha_upper_transitive: int | None = None
    alpha_upper_floor_chain: int | None = None
    alpha_exact: int | None = None
    alpha_exact_source: str | None = None
    alpha_local: list[int] | None = None
    notes: list[str] = field(default_factory=list)

    def upper(self) -> int | None:
        ups = [u for u in (self.alpha_upper_transitive, self.alpha_upper_floor_chain) if u is not None]
        return min(ups) if ups else None

    def consistent(self) -> bool:
        a = self.alpha_exact
        if a is None:
            return True
        lows = [x for x in (self.alpha_lower, self.alpha_lower_product,
                            self.alpha_lower_partial_spread) if x is not None]
        ups = [x for x in (self.alpha_upper_transitive, self.alpha_upper_floor_chain) if x is not None]
        return all(x <= a for x in lows) and all(a <= x for x in ups) \
            and a * self.omega <= self.vertices

    def to_dict(self) -> dict:
        return asdict(self)


def floor_chain_bound(ctx: RingContext, n: int, m: int, r: int) -> int:
    val = 1
    for j in range(m - r, -1, -1):
        beta = prod((Fraction(p ** ((s - 1) * (n - m)) * (p ** (n - j) - 1), p ** (m - j) - 1)
                     for p, s in ctx.primes), start=Fraction(1))
        val = floor(beta * val)
    return val


def transitive_upper_bound(ctx: RingContext, n: int, m: int, r: int) -> int:
    val = Fraction(1)
    for p, s in ctx.primes:
        val *= Fraction(p ** ((s - 1) * (n - m) * (m - r + 1)) * S.gaussian_binomial(n, m, p),
                        S.gaussian_binomial(n - m + r - 1, r - 1, p))
    return floor(val)


def spread_value(ctx: RingContext, n: int, m: int) -> int:
    return prod(p ** ((s - 1) * (n - m)) * (p**n - 1) // (p**m - 1) for p, s in ctx.primes)


def partial_spread_bound(ctx: RingContext, n: int, m: int) -> int:
    ell = n % m
    val = Fraction(1)
    for p, s in ctx.primes:
        val *= Fraction(p ** ((s - 1) * (n - m)) * (p**n - p**m * (p**ell - 1) - 1), p**m - 1)
    assert val.denominator == 1
    return int(val)


def local_alpha(spec: GraphSpec, cap: int = G.VERTEX_CAP) -> list[int | None]:
    """Exact alpha(G_r(m, n, Z_p)) for each prime p of h, when under cap."""
    out = []
    for p, _ in spec.ctx.primes:
        loc = GraphSpec(R.factorize(p), spec.n, spec.m, spec.r)
        if loc.is_complete:
            out.append(1)
        elif loc.vertex_count() <= cap:
            out.append(G.brute_force_max_independent_set(loc, cap=cap).size)
        else:
            out.append(None)
    return out


def alpha_bounds(spec: GraphSpec, alpha_local: Sequence[int] | None = None,
                 exact: bool = False, local_cap: int = 200,
                 cap: int = G.VERTEX_CAP) -> BoundsReport:
    """Independence-number bounds; a bound outside its hypotheses is left
    empty and noted.

    ``alpha_local`` gives exact alpha(G_r(m, n, Z_p)) per prime; when omitted
    they are brute-forced for prime-field graphs of at most ``local_cap``
    vertices.  ``exact`` runs the exact solver on the graph itself.
    """
    ctx, n, m, r = spec.ctx, spec.n, spec.m, spec.r
    rep = BoundsReport(omega=clique_number(spec), vertices=spec.vertex_count())
    if n // 2 >= m >= m - r + 1 >= 0:
        rep.ekr_bound = ekr_bound(ctx, n, m, m - r + 1)
    if spec.is_complete:
        rep.alpha_exact, rep.alpha_exact_source = 1, "complete graph"
        rep.alpha_lower, rep.alpha_lower_source = 1, "complete graph"
    if n >= 2 * m:
        rep.alpha_upper_transitive = transitive_upper_bound(ctx, n, m, r)
        locs = list(alpha_local) if alpha_local is not None else local_alpha(spec, local_cap)
        rep.alpha_local = locs
        if all(a is not None for a in locs):
            rep.alpha_lower_product = prod(p ** ((s - 1) * (n - m) * (m - r + 1)) * a
                                           for (p, s), a in zip(ctx.primes, locs))
    else:
        rep.notes.append("n < 2m: product and transitive bounds omitted")
    if n > m >= 2 and r <= m:
        rep.alpha_upper_floor_chain = floor_chain_bound(ctx, n, m, r)
    if r == m and n > m >= 2:
        rep.alpha_lower_partial_spread = partial_spread_bound(ctx, n, m)
        if n % m == 0:
            rep.alpha_exact, rep.alpha_exact_source = spread_value(ctx, n, m), "spread formula"
    lows = [(v, src) for v, src in ((rep.alpha_lower_product, "product of local alphas"),
                                     (rep.alpha_lower_partial_spread, "partial spread formula"))
            if v is not None]
    if lows and rep.alpha_lower is None:
        rep.alpha_lower, rep.alpha_lower_source = max(lows)
    if exact and not spec.is_complete:
        if rep.vertices > cap:
            rep.notes.append(f"exact solver skipped: {rep.vertices} vertices > cap {cap}")
        else:
            a = G.brute_force_max_independent_set(spec, cap=cap).size
            if rep.alpha_exact is not None and rep.alpha_exact != a:
                rep.notes.append(f"solver alpha {a} disagrees with {rep.alpha_exact_source}")
            rep.alpha_exact, rep.alpha_exact_source = a, "exact solver"
    return rep


def lift_independent_product(spec: GraphSpec, locals_: Sequence[Sequence[Subspace]]) -> list[Subspace]:
    """All CRT combinations of one member from each local family."""
    ctx = spec.ctx
    if len(locals_) != ctx.t:
        raise PreconditionError(f"need {ctx.t} local families")
    for i, fam in enumerate(locals_):
        for X in fam:
            if X.ctx.h != ctx.prime_powers[i] or X.dim != spec.m or X.n != spec.n:
                raise PreconditionError(f"local family {i} has a member of the wrong shape/ring")
    return [S.subspace_from_matrix(M.crt_lift_matrix(ctx, [X.rep for X in combo]))
            for combo in product(*locals_)]


# --------------------------------------------------------------------------
# code search


@dataclass
class CodeResult:
    code: list[Subspace]
    method: str
    optimal: bool
    complete: bool
    certificate: dict


def _greedy_independent(spec: GraphSpec, vertices: Sequence[Subspace]) -> list[Subspace]:
    chosen: list[Subspace] = []
    for X in vertices:
        if all(not G.adjacent(spec, X, Y) for Y in chosen):
            chosen.append(X)
    return chosen


def _local_code(spec: GraphSpec, budget: int | None, cap: int) -> tuple[list[Subspace], bool]:
    if spec.is_complete:
        return [next(S.enumerate_subspaces(spec.ctx, spec.n, spec.m))], True
    if spec.vertex_count() <= cap:
        V = G.materialize_vertices(spec)
        bits = G.complement_bitsets(G.adjacency_bitsets(spec, V, cap))
        idx, done = G.max_clique_bitsets_budget(bits, budget)
        return [V[i] for i in idx], done
    V = G.materialize_vertices(spec, cap=max(cap, G.MATERIALIZE_CAP))
    return _greedy_independent(spec, V), False


def search_code(ctx: RingContext, n: int, m: int, d: int, budget: int | None = None,
                cap: int = G.VERTEX_CAP) -> CodeResult:
    """An (n, d, m) code over Z_h: pairwise subspace distance >= d."""
    if d % 2:
        raise PreconditionError("minimum distance must be even (d = 2r)")
    spec = GraphSpec(ctx, n, m, d // 2)
    bounds = alpha_bounds(spec, exact=False)
    if spec.vertex_count() <= cap:
        code, complete = _local_code(spec, budget, cap)
        method = "exact" if complete else "exact search (budget exhausted)"
    else:
        per_prime, complete = [], True
        for (p, s) in ctx.primes:
            loc_spec = GraphSpec(R.factorize(p**s), n, m, spec.r)
            fam, done = _local_code(loc_spec, budget, cap)
            per_prime.append(fam)
            complete &= done
        code = lift_independent_product(spec, per_prime)
        method = "product lift of local codes"
    met = []
    size = len(code)
    if bounds.alpha_exact is not None and size == bounds.alpha_exact:
        met.append(bounds.alpha_exact_source)
    for name, val in (("transitive upper bound", bounds.alpha_upper_transitive),
                      ("floor-chain upper bound", bounds.alpha_upper_floor_chain)):
        if val is not None and size == val:
            met.append(name)
    optimal = (method == "exact") or bool(met)
    cert = {"schema": 1, "h": ctx.h, "n": n, "m": m, "d": d, "size": size, "method": method,
            "optimal": optimal, "bounds_met": met, "complete": complete,
            "bounds": bounds.to_dict()}
    return CodeResult(code, method, optimal, complete, cert)


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"
