"""Subspaces of Z_h^n: canonical representatives, enumeration, counting,
intersection dimensions, duals and the pair normal form.

A subspace is stored through a canonical m x n representative.  Over a local
ring Z_{p^s} that is the row-reduced echelon form ``(A_1, I_m) P`` whose
pivot columns are chosen greedily from the left.  Over a general Z_h the
pivot columns may differ from prime to prime (the row (2, 3) spans a line of
Z_6^2 although neither entry is a unit), so the canonical representative is
the CRT lift of the local echelon forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from . import matrix as M
from . import ring as R
from .errors import CapExceeded, NotASubspace, PreconditionError, ShapeError
from .matrix import ZhMatrix
from .ring import ExponentVector, RingContext

ENUMERATION_CAP = 10**6


@dataclass(frozen=True)
class Subspace:
    rep: ZhMatrix

    @property
    def ctx(self) -> RingContext:
        return self.rep.ctx

    @property
    def dim(self) -> int:
        return self.rep.nrows

    @property
    def n(self) -> int:
        return self.rep.ncols

    def key(self) -> tuple[tuple[int, ...], ...]:
        return self.rep.rows

    def __lt__(self, other: "Subspace") -> bool:
        return (self.dim, self.rep.rows) < (other.dim, other.rep.rows)

    def project(self, i: int) -> "Subspace":
        return subspace_from_matrix(M.pi_matrix(self.rep, i))

    def project_complement(self, i: int) -> "Subspace":
        return subspace_from_matrix(M.theta_matrix(self.rep, i))

    def transform(self, T: ZhMatrix) -> "Subspace":
        """The image X -> X T under an invertible coordinate change."""
        return subspace_from_matrix(self.rep @ T)

    def __str__(self) -> str:
        return M.format_matrix(self.rep)


# --------------------------------------------------------------------------
# canonical forms


def _local_echelon(rows: Sequence[Sequence[int]], n: int, p: int, q: int) -> list[list[int]] | None:
    """Reduced echelon form over Z_q (q = p^s) with unit pivots, or None if
    the rows are not linearly independent."""
    A = [[x % q for x in r] for r in rows]
    m = len(A)
    k = 0
    for j in range(n):
        if k == m:
            break
        piv = next((i for i in range(k, m) if A[i][j] % p), None)
        if piv is None:
            continue
        A[k], A[piv] = A[piv], A[k]
        uinv = pow(A[k][j], -1, q)
        A[k] = [x * uinv % q for x in A[k]]
        for i in range(m):
            if i != k and A[i][j]:
                c = A[i][j]
                A[i] = [(a - c * b) % q for a, b in zip(A[i], A[k])]
        k += 1
    return A if k == m else None


def canonical_rows(ctx: RingContext, rows: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    m = len(rows)
    locs = []
    for p, s in ctx.primes:
        ech = _local_echelon(rows, n, p, p**s)
        if ech is None:
            raise NotASubspace(f"rows have McCoy rank < {m} over {ctx}")
        locs.append(ech)
    if ctx.t == 1:
        return tuple(tuple(r) for r in locs[0])
    h, idem = ctx.h, ctx.idempotents
    return tuple(tuple(sum(L[i][j] * e for L, e in zip(locs, idem)) % h for j in range(n))
                 for i in range(m))


def subspace_from_matrix(A: ZhMatrix) -> Subspace:
    m, n = A.shape
    if m > n:
        raise NotASubspace(f"{m} vectors cannot be independent in Z_h^{n}")
    rows = canonical_rows(A.ctx, A.rows, n)
    return Subspace(ZhMatrix(A.ctx, m, n, rows))


def subspace(ctx: RingContext, rows: Iterable[Sequence[int]], n: int | None = None) -> Subspace:
    return subspace_from_matrix(ZhMatrix.from_rows(ctx, rows, n))


def zero_subspace(ctx: RingContext, n: int) -> Subspace:
    return Subspace(ZhMatrix.zeros(ctx, 0, n))


def whole_space(ctx: RingContext, n: int) -> Subspace:
    return Subspace(ZhMatrix.identity(ctx, n))


# --------------------------------------------------------------------------
# counting


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for j in range(k):
        num *= q ** (n - j) - 1
        den *= q ** (k - j) - 1
    return num // den


def count_subspaces(ctx: RingContext, n: int, k: int) -> int:
    """Number of k-subspaces of Z_h^n."""
    if k < 0 or k > n:
        return 0
    return prod(p ** ((s - 1) * k * (n - k)) * gaussian_binomial(n, k, p) for p, s in ctx.primes)


def count_inside(ctx: RingContext, k: int, m: int) -> int:
    """Number of m-subspaces inside a fixed k-subspace."""
    return count_subspaces(ctx, k, m)


def count_containing(ctx: RingContext, n: int, k: int, m: int) -> int:
    """Number of k-subspaces of Z_h^n containing a fixed m-subspace."""
    if not 0 <= m <= k <= n:
        return 0
    return prod(p ** ((s - 1) * (k - m) * (n - k)) * gaussian_binomial(n - m, k - m, p)
                for p, s in ctx.primes)


# --------------------------------------------------------------------------
# enumeration


def _local_canonical_forms(p: int, s: int, n: int, m: int) -> list[tuple[tuple[int, ...], ...]]:
    q = p**s
    nonunits = range(0, q, p)
    out = []
    for piv in combinations(range(n), m):
        pivset = set(piv)
        free_cells, choices = [], []
        for c in range(n):
            if c in pivset:
                continue
            for j, pc in enumerate(piv):
                free_cells.append((j, c))
                # entries below a later pivot must vanish mod p, else column c
                # would have been chosen as a pivot
                choices.append(range(q) if pc < c else nonunits)
        for vals in product(*choices):
            rows = [[0] * n for _ in range(m)]
            for j, pc in enumerate(piv):
                rows[j][pc] = 1
            for (j, c), v in zip(free_cells, vals):
                rows[j][c] = v
            out.append(tuple(map(tuple, rows)))
    return out


def enumerate_subspaces(ctx: RingContext, n: int, m: int,
                        cap: int = ENUMERATION_CAP) -> Iterator[Subspace]:
    """Every m-subspace of Z_h^n exactly once, in a fixed order."""
    if not 0 <= m <= n:
        raise PreconditionError(f"need 0 <= m <= n, got m={m}, n={n}")
    total = count_subspaces(ctx, n, m)
    if total > cap:
        raise CapExceeded(f"{total} subspaces exceed enumeration cap {cap}")
    locs = [_local_canonical_forms(p, s, n, m) for p, s in ctx.primes]
    h, idem = ctx.h, ctx.idempotents
    for combo in product(*locs):
        if ctx.t == 1:
            rows = combo[0]
        else:
            rows = tuple(tuple(sum(L[i][j] * e for L, e in zip(combo, idem)) % h
                               for j in range(n)) for i in range(m))
        yield Subspace(ZhMatrix(ctx, m, n, rows))


# --------------------------------------------------------------------------
# intersections, joins, containment, distance


def _check_same_ambient(A: Subspace, B: Subspace) -> None:
    if A.n != B.n or A.ctx.h != B.ctx.h:
        raise ShapeError(f"ambient mismatch: Z_{A.ctx.h}^{A.n} vs Z_{B.ctx.h}^{B.n}")


def dim_join(A: Subspace, B: Subspace) -> int:
    _check_same_ambient(A, B)
    if A.dim == 0 or B.dim == 0:
        return max(A.dim, B.dim)
    return M.inner_rank(M.vstack(A.rep, B.rep))


def dim_intersection(A: Subspace, B: Subspace) -> int:
    return A.dim + B.dim - dim_join(A, B)


def dim_intersection_by_projection(A: Subspace, B: Subspace) -> int:
    """min over primes of the local intersection dimensions."""
    _check_same_ambient(A, B)
    return min(dim_intersection(A.project(i), B.project(i)) for i in range(A.ctx.t))


def dim_intersection_by_complement(A: Subspace, B: Subspace) -> int:
    _check_same_ambient(A, B)
    if A.ctx.t == 1:
        raise PreconditionError("complementary projections need at least two primes")
    return min(dim_intersection(A.project_complement(i), B.project_complement(i))
               for i in range(A.ctx.t))


def contains(A: Subspace, B: Subspace) -> bool:
    """True iff B is a subspace of A."""
    _check_same_ambient(A, B)
    if B.dim > A.dim:
        return False
    return dim_intersection(A, B) == B.dim


def subspace_distance(A: Subspace, B: Subspace) -> int:
    return A.dim + B.dim - 2 * dim_intersection(A, B)


# --------------------------------------------------------------------------
# duals


def adapted_basis(A: Subspace) -> ZhMatrix:
    """An invertible T with A = (0, I_m) T."""
    m, n = A.dim, A.n
    E = M.extend_to_basis(A.rep)
    return M.vstack(E.select_rows(range(m, n)), A.rep)


def dual(A: Subspace) -> Subspace:
    m, n = A.dim, A.n
    if m == 0:
        return whole_space(A.ctx, n)
    Tinv = M.inverse(adapted_basis(A))
    return subspace_from_matrix(Tinv.select_cols(range(n - m)).T)


# --------------------------------------------------------------------------
# pair normal form


@dataclass(frozen=True)
class PairNormalForm:
    """A = (0, I_k) T and B = (D, I_m) T with D = diag(d_1..d_r, 0)."""
    T: ZhMatrix
    k: int
    m: int
    r: int
    D_exponents: tuple[ExponentVector, ...]

    @property
    def D(self) -> ZhMatrix:
        ctx, n = self.T.ctx, self.T.nrows
        d = [R.ideal_generator(ctx, a) for a in self.D_exponents]
        return ZhMatrix.diag(ctx, d, self.m, n - self.m)

    def reconstruct(self) -> tuple[Subspace, Subspace]:
        ctx, n = self.T.ctx, self.T.nrows
        A = M.hstack(ZhMatrix.zeros(ctx, self.k, n - self.k), ZhMatrix.identity(ctx, self.k))
        B = M.hstack(self.D, ZhMatrix.identity(ctx, self.m))
        return subspace_from_matrix(A @ self.T), subspace_from_matrix(B @ self.T)


def _local_pair_form(A: Subspace, B: Subspace) -> tuple[ZhMatrix, list[int]]:
    """Local version over a prime-power ring: returns (T, exponents)."""
    ctx = A.ctx
    (p, s), = ctx.primes
    k, m, n = A.dim, B.dim, A.n
    T0 = adapted_basis(A)
    Bc = B.rep @ M.inverse(T0)
    X = Bc.select_cols(range(n - k))
    Y = Bc.select_cols(range(n - k, n))
    nf = M.normal_form(X)
    exps = [a[0] for a in nf.omega]
    Y1 = nf.S_inv @ Y
    unit_rows = [c for c, a in enumerate(exps) if a == 0]
    other_rows = [c for c in range(m) if c not in unit_rows]
    Z = Y1.select_rows(other_rows)
    E2 = M.extend_to_basis(Z) if other_rows else ZhMatrix.identity(ctx, k)
    spare = list(E2.rows[len(other_rows):])
    new_rows = list(Y1.rows)
    P = [[0] * k for _ in range(n - k)]
    for c in unit_rows:
        w = spare.pop(0)
        P[c] = [(a - b) % ctx.h for a, b in zip(w, Y1.rows[c])]
        new_rows[c] = w
    Mk = ZhMatrix.from_rows(ctx, spare + new_rows, k)
    # G^-1 = diag(I, Mk) [[I, -P], [0, I]] diag(U, I), U the column transform of X
    Pm = ZhMatrix.from_rows(ctx, P, k) if n - k else ZhMatrix.zeros(ctx, 0, k)
    ginv = M.block_diag(ZhMatrix.identity(ctx, n - k), Mk) @ M.vstack(
        M.hstack(ZhMatrix.identity(ctx, n - k), Pm.scale(-1)),
        M.hstack(ZhMatrix.zeros(ctx, k, n - k), ZhMatrix.identity(ctx, k)),
    ) @ M.block_diag(nf.T, ZhMatrix.identity(ctx, k))
    return ginv @ T0, exps


def pair_normal_form(A: Subspace, B: Subspace) -> PairNormalForm:
    """Simultaneous form of a k-subspace A and an m-subspace B (m <= k < n,
    B not inside A)."""
    _check_same_ambient(A, B)
    ctx, k, m, n = A.ctx, A.dim, B.dim, A.n
    if not 1 <= m <= k < n:
        raise PreconditionError(f"need 1 <= dim B <= dim A < n, got {m}, {k}, {n}")
    if contains(A, B):
        raise PreconditionError("B is contained in A")
    Ts, exps = [], []
    for i in range(ctx.t):
        T_i, e_i = _local_pair_form(A.project(i), B.project(i))
        Ts.append(T_i)
        exps.append(e_i)
    r = max(sum(a < s for a in e) for e, (_, s) in zip(exps, ctx.primes))
    alphas = tuple(tuple(e[c] for e in exps) for c in range(r))
    T = [list(row) for row in M.crt_lift_matrix(ctx, Ts).rows]
    if ctx.t > 1:
        for c, a in enumerate(alphas):
            u = _correction_unit(ctx, a)
            uinv = R.inv(ctx, u)
            T[c] = [x * uinv % ctx.h for x in T[c]]
    return PairNormalForm(ZhMatrix.from_rows(ctx, T, n), k, m, r, alphas)


def _correction_unit(ctx: RingContext, alphas: ExponentVector) -> int:
    """Unit u with u * crt(p_i^alpha_i) = prod p_i^alpha_i."""
    res = []
    for i, q in enumerate(ctx.prime_powers):
        res.append(prod(pj**a for j, ((pj, _), a) in enumerate(zip(ctx.primes, alphas))
                        if j != i) % q)
    return R.crt_lift(ctx, res)


# --------------------------------------------------------------------------
# brute-force module oracles (tiny scale only)


def span_set(rep: ZhMatrix) -> frozenset[tuple[int, ...]]:
    h, n = rep.ctx.h, rep.ncols
    out = set()
    for coeffs in product(range(h), repeat=rep.nrows):
        out.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rep.rows)) % h for j in range(n)))
    return frozenset(out)


def _unimodular(ctx: RingContext, vecs: Sequence[tuple[int, ...]]) -> bool:
    A = ZhMatrix.from_rows(ctx, vecs, len(vecs[0]))
    return M.minor_ideal_generator(A, len(vecs)) == 1


def module_dimension(ctx: RingContext, vectors: Iterable[tuple[int, ...]],
                     upper: int | None = None) -> int:
    """Size of a largest unimodular subset of a linear subset of Z_h^n."""
    h = ctx.h
    cand = sorted(v for v in vectors if gcd(*v, h) == 1)
    if not cand:
        return 0
    n = len(cand[0])
    upper = n if upper is None else upper
    best = 1

    def grow(chosen: list[tuple[int, ...]], start: int) -> bool:
        nonlocal best
        if len(chosen) > best:
            best = len(chosen)
        if best >= upper:
            return True
        for idx in range(start, len(cand)):
            trial = chosen + [cand[idx]]
            if _unimodular(ctx, trial) and grow(trial, idx + 1):
                return True
        return False

    grow([], 0)
    return best


def dim_intersection_brute(A: Subspace, B: Subspace) -> int:
    _check_same_ambient(A, B)
    common = span_set(A.rep) & span_set(B.rep)
    return module_dimension(A.ctx, common, upper=min(A.dim, B.dim))


# --------------------------------------------------------------------------
# family files: header "h n m count", one canonical rep per line (row-major)


def format_family(ctx: RingContext, n: int, m: int, family: Sequence[Subspace]) -> str:
    lines = [f"{ctx.h} {n} {m} {len(family)}"]
    for X in family:
        lines.append(" ; ".join(" ".join(map(str, r)) for r in X.rep.rows))
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> tuple[RingContext, int, int, list[Subspace]]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    h, n, m, count = map(int, lines[0].split())
    ctx = R.factorize(h)
    body = lines[1:]
    if len(body) != count:
        raise ValueError(f"family header says {count} members, found {len(body)}")
    fam = []
    for ln in body:
        vals = [int(x) for x in ln.replace(";", " ").split()]
        if len(vals) != m * n or any(not 0 <= v < h for v in vals):
            raise ValueError(f"bad family line: {ln!r}")
        fam.append(subspace(ctx, [vals[i * n:(i + 1) * n] for i in range(m)], n))
    return ctx, n, m, fam
