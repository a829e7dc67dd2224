"""Dense matrices over Z_h and their diagonal normal form.

The normal form ``A = S * D * T`` is computed one prime at a time: each
projection ``pi_i(A)`` is reduced over the local ring Z_{p^s} by Smith
elimination (the pivot is an entry of least p-adic valuation, ties broken
row-major), and the local transforms are glued back together entrywise with
the CRT.  The glued diagonal only agrees with ``prod p_i^alpha_ic`` up to a
unit per column; that unit is moved into ``T``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import comb, gcd, prod
from typing import Iterable, Sequence

from . import ring as R
from .errors import NotInvertible, OracleTooLarge, PreconditionError, ShapeError
from .ring import ExponentVector, RingContext

MINOR_CAP = 10**6
FACTOR_SEARCH_CAP = 10**7

Rows = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ZhMatrix:
    ctx: RingContext
    nrows: int
    ncols: int
    rows: Rows

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ShapeError(f"rows do not match shape {self.nrows}x{self.ncols}")

    @classmethod
    def from_rows(cls, ctx: RingContext, rows: Iterable[Sequence[int]],
                  ncols: int | None = None) -> "ZhMatrix":
        h = ctx.h
        data = tuple(tuple(int(x) % h for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ShapeError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        return cls(ctx, len(data), ncols, data)

    @classmethod
    def zeros(cls, ctx: RingContext, m: int, n: int) -> "ZhMatrix":
        return cls(ctx, m, n, tuple((0,) * n for _ in range(m)))

    @classmethod
    def identity(cls, ctx: RingContext, n: int) -> "ZhMatrix":
        return cls(ctx, n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, ctx: RingContext, entries: Sequence[int], m: int | None = None,
             n: int | None = None) -> "ZhMatrix":
        m = len(entries) if m is None else m
        n = len(entries) if n is None else n
        rows = [[0] * n for _ in range(m)]
        for c, d in enumerate(entries):
            rows[c][c] = d
        return cls.from_rows(ctx, rows, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "ZhMatrix") -> "ZhMatrix":
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        h = self.ctx.h
        cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
        data = tuple(tuple(sum(a * b for a, b in zip(r, c)) % h for c in cols)
                     for r in self.rows)
        return ZhMatrix(self.ctx, self.nrows, other.ncols, data)

    def __add__(self, other: "ZhMatrix") -> "ZhMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        h = self.ctx.h
        return ZhMatrix(self.ctx, self.nrows, self.ncols, tuple(
            tuple((a + b) % h for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def scale(self, c: int) -> "ZhMatrix":
        h = self.ctx.h
        return ZhMatrix(self.ctx, self.nrows, self.ncols,
                        tuple(tuple(a * c % h for a in r) for r in self.rows))

    @property
    def T(self) -> "ZhMatrix":
        return ZhMatrix(self.ctx, self.ncols, self.nrows, tuple(zip(*self.rows))
                        if self.nrows else tuple(() for _ in range(self.ncols)))

    def select_rows(self, idx: Sequence[int]) -> "ZhMatrix":
        return ZhMatrix(self.ctx, len(idx), self.ncols, tuple(self.rows[i] for i in idx))

    def select_cols(self, idx: Sequence[int]) -> "ZhMatrix":
        return ZhMatrix(self.ctx, self.nrows, len(idx),
                        tuple(tuple(r[j] for j in idx) for r in self.rows))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        return format_matrix(self)


def vstack(*mats: ZhMatrix) -> ZhMatrix:
    n = mats[0].ncols
    if any(M.ncols != n for M in mats):
        raise ShapeError("vstack needs equal column counts")
    rows = tuple(r for M in mats for r in M.rows)
    return ZhMatrix(mats[0].ctx, len(rows), n, rows)


def hstack(*mats: ZhMatrix) -> ZhMatrix:
    m = mats[0].nrows
    if any(M.nrows != m for M in mats):
        raise ShapeError("hstack needs equal row counts")
    rows = tuple(sum((M.rows[i] for M in mats), ()) for i in range(m))
    return ZhMatrix(mats[0].ctx, m, sum(M.ncols for M in mats), rows)


def block_diag(*mats: ZhMatrix) -> ZhMatrix:
    ctx = mats[0].ctx
    n = sum(M.ncols for M in mats)
    rows, offset = [], 0
    for M in mats:
        for r in M.rows:
            rows.append((0,) * offset + r + (0,) * (n - offset - M.ncols))
        offset += M.ncols
    return ZhMatrix(ctx, len(rows), n, tuple(rows))


# --------------------------------------------------------------------------
# local Smith elimination over Z_{p^s}


@dataclass
class _LocalSmith:
    exps: list[int]
    L: list[list[int]] | None = None      # L A R = D
    Linv: list[list[int]] | None = None
    R: list[list[int]] | None = None
    Rinv: list[list[int]] | None = None
    det_Linv: int = 1
    det_Rinv: int = 1


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _local_smith(rows: Sequence[Sequence[int]], m: int, n: int, p: int, s: int,
                 transforms: bool = True) -> _LocalSmith:
    q = p**s
    A = [[x % q for x in r] for r in rows]
    k_max = min(m, n)
    exps = [s] * k_max
    out = _LocalSmith(exps)
    if transforms:
        L, Linv, Rm, Rinv = _eye(m), _eye(m), _eye(n), _eye(n)
    dL = dR = 1
    for k in range(k_max):
        best, bi, bj = s, -1, -1
        for i in range(k, m):
            Ai = A[i]
            for j in range(k, n):
                x = Ai[j]
                if x:
                    v = 0
                    while x % p == 0:
                        x //= p
                        v += 1
                    if v < best:
                        best, bi, bj = v, i, j
                        if v == 0:
                            break
            if best == 0:
                break
        if bi < 0:
            break
        if bi != k:
            A[k], A[bi] = A[bi], A[k]
            dL = -dL
            if transforms:
                L[k], L[bi] = L[bi], L[k]
                for r in Linv:
                    r[k], r[bi] = r[bi], r[k]
        if bj != k:
            for r in A:
                r[k], r[bj] = r[bj], r[k]
            dR = -dR
            if transforms:
                for r in Rm:
                    r[k], r[bj] = r[bj], r[k]
                Rinv[k], Rinv[bj] = Rinv[bj], Rinv[k]
        pv = p**best
        u = A[k][k] // pv
        if u != 1:
            uinv = pow(u, -1, q)
            A[k] = [x * uinv % q for x in A[k]]
            dL = dL * u % q
            if transforms:
                L[k] = [x * uinv % q for x in L[k]]
                for r in Linv:
                    r[k] = r[k] * u % q
        Ak = A[k]
        for i in range(k + 1, m):
            c = A[i][k] // pv
            if c:
                A[i] = [(a - c * b) % q for a, b in zip(A[i], Ak)]
                if transforms:
                    L[i] = [(a - c * b) % q for a, b in zip(L[i], L[k])]
                    for r in Linv:
                        r[k] = (r[k] + c * r[i]) % q
        for j in range(k + 1, n):
            c = Ak[j] // pv
            if c:
                for r in A:
                    r[j] = (r[j] - c * r[k]) % q
                if transforms:
                    for r in Rm:
                        r[j] = (r[j] - c * r[k]) % q
                    Rinv[k] = [(a + c * b) % q for a, b in zip(Rinv[k], Rinv[j])]
        exps[k] = best
    out.det_Linv, out.det_Rinv = dL % q, dR % q
    if transforms:
        out.L, out.Linv, out.R, out.Rinv = L, Linv, Rm, Rinv
    return out


def local_exponents(A: ZhMatrix) -> tuple[tuple[int, ...], ...]:
    """Per-prime sorted exponent lists of the normal form (no transforms)."""
    m, n = A.shape
    return tuple(tuple(_local_smith(A.rows, m, n, p, s, transforms=False).exps)
                 for p, s in A.ctx.primes)


# --------------------------------------------------------------------------
# normal form


@dataclass(frozen=True)
class DiagonalNormalForm:
    """``A = S * D(omega) * T`` with S, T invertible.

    ``omega[c]`` is the exponent vector of the c-th diagonal entry; for every
    prime the exponents are nondecreasing in c.
    """
    S: ZhMatrix
    T: ZhMatrix
    S_inv: ZhMatrix
    T_inv: ZhMatrix
    omega: tuple[ExponentVector, ...]

    @property
    def ctx(self) -> RingContext:
        return self.S.ctx

    @property
    def omega_by_prime(self) -> tuple[tuple[int, ...], ...]:
        return tuple(zip(*self.omega)) if self.omega else tuple(() for _ in self.ctx.primes)

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(R.ideal_generator(self.ctx, a) for a in self.omega)

    @property
    def D(self) -> ZhMatrix:
        return ZhMatrix.diag(self.ctx, self.diagonal, self.S.nrows, self.T.nrows)


def _crt_matrix(ctx: RingContext, locals_: Sequence[Sequence[Sequence[int]]],
                m: int, n: int) -> ZhMatrix:
    h, idem = ctx.h, ctx.idempotents
    rows = tuple(tuple(sum(L[i][j] * e for L, e in zip(locals_, idem)) % h
                       for j in range(n)) for i in range(m))
    return ZhMatrix(ctx, m, n, rows)


def normal_form(A: ZhMatrix) -> DiagonalNormalForm:
    ctx = A.ctx
    m, n = A.shape
    k = min(m, n)
    local = [_local_smith(A.rows, m, n, p, s) for p, s in ctx.primes]
    omega = tuple(tuple(loc.exps[c] for loc in local) for c in range(k))
    S = _crt_matrix(ctx, [loc.Linv for loc in local], m, m)
    S_inv = _crt_matrix(ctx, [loc.L for loc in local], m, m)
    T = [list(r) for r in _crt_matrix(ctx, [loc.Rinv for loc in local], n, n).rows]
    T_inv = [list(r) for r in _crt_matrix(ctx, [loc.R for loc in local], n, n).rows]
    if ctx.t > 1:
        h = ctx.h
        for c, alphas in enumerate(omega):
            # u_c with pi_i(u_c) = pi_i(prod_{j != i} p_j^alpha_jc)
            u = R.crt_lift(ctx, [
                prod(pj**a for (pj, _), a, jj in zip(ctx.primes, alphas, range(ctx.t)) if jj != i) % q
                for i, q in enumerate(ctx.prime_powers)])
            if u != 1:
                uinv = R.inv(ctx, u)
                T[c] = [x * uinv % h for x in T[c]]
                for r in T_inv:
                    r[c] = r[c] * u % h
    return DiagonalNormalForm(S, ZhMatrix.from_rows(ctx, T, n), S_inv,
                              ZhMatrix.from_rows(ctx, T_inv, n), omega)


def inner_rank(A: ZhMatrix) -> int:
    return max((sum(v < s for v in exps) for exps, (_, s) in
                zip(local_exponents(A), A.ctx.primes)), default=0)


def mccoy_rank(A: ZhMatrix) -> int:
    return min(sum(v == 0 for v in exps) for exps in local_exponents(A))


def rank_report(A: ZhMatrix) -> tuple[int, int]:
    """(inner rank, McCoy rank) from a single normal-form pass."""
    exps = local_exponents(A)
    rho = max((sum(v < s for v in e) for e, (_, s) in zip(exps, A.ctx.primes)), default=0)
    rk = min(sum(v == 0 for v in e) for e in exps)
    return rho, rk


# --------------------------------------------------------------------------
# definition-level oracles


def _det_leibniz(rows: Sequence[Sequence[int]], h: int) -> int:
    n = len(rows)
    if n == 0:
        return 1 % h
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(perm[a] > perm[b] for a in range(n) for b in range(a + 1, n))
        term = 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += -term if inversions % 2 else term
    return total % h


def _det_laplace(rows: Sequence[Sequence[int]], h: int) -> int:
    n = len(rows)
    if n == 0:
        return 1 % h
    if n == 1:
        return rows[0][0] % h
    if n == 2:
        return (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]) % h
    total = 0
    for j, a in enumerate(rows[0]):
        if a:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * a * _det_laplace(minor, h)
    return total % h


def minor_ideal_generator(A: ZhMatrix, k: int, cap: int = MINOR_CAP) -> int:
    """gcd(h, all k x k minors): a generator of I_k(A)."""
    m, n = A.shape
    if k == 0:
        return 1
    if k > min(m, n):
        return A.ctx.h
    if comb(m, k) * comb(n, k) > cap:
        raise OracleTooLarge(f"{comb(m, k) * comb(n, k)} minors exceed cap {cap}")
    h = A.ctx.h
    g = h
    for ri in combinations(range(m), k):
        for ci in combinations(range(n), k):
            g = gcd(g, _det_laplace([[A.rows[i][j] for j in ci] for i in ri], h))
            if g == 1:
                return 1
    return g


def mccoy_rank_by_annihilator(A: ZhMatrix, cap: int = MINOR_CAP) -> int:
    """McCoy rank straight from its definition via minor ideals.

    Ann((g)) = (h / gcd(g, h)) is zero exactly when gcd(g, h) = 1.
    """
    m, n = A.shape
    total = sum(comb(m, k) * comb(n, k) for k in range(1, min(m, n) + 1))
    if total > cap:
        raise OracleTooLarge(f"{total} minors exceed cap {cap}")
    rk = 0
    for k in range(1, min(m, n) + 1):
        if minor_ideal_generator(A, k, cap) == 1:
            rk = k
        else:
            break
    return rk


def inner_rank_by_factorization(A: ZhMatrix, cap: int = FACTOR_SEARCH_CAP) -> int:
    """Least r with A = B C, found by exhaustive search over C (r x n)."""
    ctx, (m, n) = A.ctx, A.shape
    h = ctx.h
    if A.is_zero():
        return 0
    targets = set(A.rows)
    for r in range(1, min(m, n) + 1):
        if h ** (r * n) * h**r > cap:
            raise OracleTooLarge(f"factorization search for r={r} exceeds cap {cap}")
        coeffs = list(product(range(h), repeat=r))
        for flat in product(range(h), repeat=r * n):
            C = [flat[i * n:(i + 1) * n] for i in range(r)]
            span = {tuple(sum(c * C[i][j] for i, c in enumerate(cf)) % h for j in range(n))
                    for cf in coeffs}
            if targets <= span:
                return r
    return min(m, n)


def det_by_permutations(A: ZhMatrix) -> int:
    if A.nrows != A.ncols:
        raise ShapeError("determinant of a non-square matrix")
    return _det_leibniz(A.rows, A.ctx.h)


# --------------------------------------------------------------------------
# invertibility and friends


def det(A: ZhMatrix) -> int:
    """Determinant via the local normal forms (product of diagonals and of
    the transform determinants), glued with the CRT."""
    if A.nrows != A.ncols:
        raise ShapeError("determinant of a non-square matrix")
    ctx, n = A.ctx, A.nrows
    locals_ = []
    for p, s in ctx.primes:
        q = p**s
        loc = _local_smith(A.rows, n, n, p, s, transforms=False)
        d = loc.det_Linv * loc.det_Rinv
        for v in loc.exps:
            d = d * p**v % q
        locals_.append(d % q)
    return R.crt_lift(ctx, locals_)


def is_invertible(A: ZhMatrix) -> bool:
    if A.nrows != A.ncols:
        raise ShapeError("invertibility of a non-square matrix")
    return R.is_unit(A.ctx, det(A))


def inverse(A: ZhMatrix) -> ZhMatrix:
    if A.nrows != A.ncols:
        raise ShapeError("inverse of a non-square matrix")
    nf = normal_form(A)
    if any(any(a) for a in nf.omega):
        raise NotInvertible("determinant is not a unit")
    return nf.T_inv @ nf.S_inv


def right_inverse(A: ZhMatrix) -> ZhMatrix | None:
    """``T^-1 (I_m; 0) S^-1`` when rk(A) = m, else None."""
    m, n = A.shape
    if m > n:
        raise ShapeError("right inverse needs rows <= cols")
    nf = normal_form(A)
    if any(any(a) for a in nf.omega):
        return None
    I0 = ZhMatrix.from_rows(A.ctx, [[int(i == j) for j in range(m)] for i in range(n)], m)
    return nf.T_inv @ I0 @ nf.S_inv


def linearly_independent(ctx: RingContext, rows: Sequence[Sequence[int]], n: int) -> bool:
    if not rows:
        return True
    A = ZhMatrix.from_rows(ctx, rows, n)
    return A.nrows <= n and mccoy_rank(A) == A.nrows


def extend_to_basis(A: ZhMatrix) -> ZhMatrix:
    """Invertible n x n matrix whose first m rows are the rows of A."""
    m, n = A.shape
    if m > n or mccoy_rank(A) != m:
        raise PreconditionError("rows are not linearly independent")
    nf = normal_form(A)
    tail = nf.T.select_rows(range(m, n))
    return vstack(A, tail)


def pi_matrix(A: ZhMatrix, i: int) -> ZhMatrix:
    loc = A.ctx.local(i)
    return ZhMatrix.from_rows(loc, A.rows, A.ncols)


def theta_matrix(A: ZhMatrix, i: int) -> ZhMatrix:
    comp = A.ctx.complement(i)
    return ZhMatrix.from_rows(comp, A.rows, A.ncols)


def crt_lift_matrix(ctx: RingContext, locals_: Sequence[ZhMatrix]) -> ZhMatrix:
    if len(locals_) != ctx.t:
        raise ValueError(f"expected {ctx.t} local matrices")
    shape = locals_[0].shape
    for L, q in zip(locals_, ctx.prime_powers):
        if L.shape != shape:
            raise ShapeError("local matrices must share a shape")
        if L.ctx.h != q:
            raise ValueError(f"local matrix over Z_{L.ctx.h}, expected Z_{q}")
    return _crt_matrix(ctx, [L.rows for L in locals_], *shape)


# --------------------------------------------------------------------------
# text format: "h m n" then m rows of n integers


def parse_matrix(text: str) -> ZhMatrix:
    lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 3:
        raise ValueError("matrix header must be 'h m n'")
    h, m, n = map(int, lines[0])
    ctx = R.factorize(h)
    body = lines[1:]
    if len(body) != m:
        raise ValueError(f"expected {m} rows, got {len(body)}")
    rows = []
    for ln in body:
        vals = [int(x) for x in ln]
        if len(vals) != n:
            raise ValueError(f"expected {n} entries per row, got {len(vals)}")
        if any(not 0 <= x < h for x in vals):
            raise ValueError(f"entry out of range [0,{h}) in row {ln}")
        rows.append(vals)
    return ZhMatrix.from_rows(ctx, rows, n)


def format_matrix(A: ZhMatrix) -> str:
    lines = [f"{A.ctx.h} {A.nrows} {A.ncols}"]
    lines += [" ".join(map(str, r)) for r in A.rows]
    return "\n".join(lines) + "\n"
