"""The generalized Grassmann graph G_r(m, n, Z_h) and exact solvers.

Vertices are the m-subspaces of Z_h^n; distinct A, B are adjacent when
dim(A cap B) > m - r.  Adjacency is evaluated on demand.  For the exact
solvers the graph is materialized as one Python-int bitset per vertex.

For a fixed m-subspace A with dual basis N (rows spanning A-perp),
``dim(A cap B) = dim B - rho(B N^t)``; the adjacency matrix builder uses this
small product instead of the stacked (2m x n) matrix.
"""
from __future__ import annotations

import json
import warnings
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import matrix as M
from . import subspace as S
from .errors import CapExceeded, PreconditionError
from .ring import RingContext
from .subspace import Subspace

VERTEX_CAP = 2000
EDGE_CAP = 10**6
MATERIALIZE_CAP = 10**5


@dataclass(frozen=True)
class GraphSpec:
    ctx: RingContext
    n: int
    m: int
    r: int

    def __post_init__(self):
        if not 2 <= self.r <= self.m + 1 <= self.n:
            raise PreconditionError(
                f"G_r(m,n) needs 2 <= r <= m+1 <= n, got r={self.r}, m={self.m}, n={self.n}")

    @property
    def threshold(self) -> int:
        """Adjacent iff the intersection dimension exceeds this."""
        return self.m - self.r

    @property
    def is_complete(self) -> bool:
        return self.r == self.m + 1 or self.m == 1

    def vertex_count(self) -> int:
        return S.count_subspaces(self.ctx, self.n, self.m)

    def __str__(self) -> str:
        return f"G_{self.r}({self.m},{self.n},Z_{self.ctx.h})"


def adjacent(spec: GraphSpec, A: Subspace, B: Subspace) -> bool:
    if A == B:
        return False
    return S.dim_intersection(A, B) > spec.threshold


def materialize_vertices(spec: GraphSpec, cap: int = MATERIALIZE_CAP) -> list[Subspace]:
    return list(S.enumerate_subspaces(spec.ctx, spec.n, spec.m, cap=cap))


def _dual_bases(vertices: Sequence[Subspace]) -> list[M.ZhMatrix]:
    return [S.dual(X).rep.T for X in vertices]


def adjacency_bitsets(spec: GraphSpec, vertices: Sequence[Subspace],
                      cap: int = VERTEX_CAP) -> list[int]:
    """Row i has bit j set iff vertices i and j are adjacent."""
    nv = len(vertices)
    if nv > cap:
        raise CapExceeded(f"{nv} vertices exceed the solver cap {cap}")
    if spec.is_complete:
        full = (1 << nv) - 1
        return [full ^ (1 << i) for i in range(nv)]
    duals = _dual_bases(vertices)
    limit = spec.r   # adjacent iff rho(B N_A^t) < r
    bits = [0] * nv
    for i in range(nv):
        Ni = duals[i]
        row = 0
        for j in range(i + 1, nv):
            if M.inner_rank(vertices[j].rep @ Ni) < limit:
                row |= 1 << j
        bits[i] |= row
        j_bits = row
        while j_bits:
            low = j_bits & -j_bits
            bits[low.bit_length() - 1] |= 1 << i
            j_bits ^= low
    return bits


def complement_bitsets(bits: Sequence[int]) -> list[int]:
    nv = len(bits)
    full = (1 << nv) - 1
    return [(full ^ b) & ~(1 << i) for i, b in enumerate(bits)]


def edge_count(bits: Sequence[int]) -> int:
    return sum(b.bit_count() for b in bits) // 2


# --------------------------------------------------------------------------
# exact maximum clique: branch and bound with a greedy colouring bound


def _iter_bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _BudgetExhausted(Exception):
    pass


def max_clique_bitsets_budget(bits: Sequence[int],
                              budget: int | None = None) -> tuple[list[int], bool]:
    """Best clique found and whether the search finished within ``budget``
    branch nodes (None means unlimited)."""
    nv = len(bits)
    if nv == 0:
        return [], True
    # relabel so that high-degree vertices come first; ties keep input order
    order = sorted(range(nv), key=lambda v: (-bits[v].bit_count(), v))
    pos = {v: i for i, v in enumerate(order)}
    adj = []
    for v in order:
        row = 0
        for u in _iter_bits(bits[v]):
            row |= 1 << pos[u]
        adj.append(row)

    # greedy incumbent
    best: list[int] = []
    P = (1 << nv) - 1
    while P:
        v = max(_iter_bits(P), key=lambda w: (P & adj[w]).bit_count())
        best.append(v)
        P &= adj[v]
    nodes = 0

    def colour(P: int) -> tuple[list[int], list[int]]:
        verts, cols = [], []
        uncoloured, c = P, 0
        while uncoloured:
            c += 1
            Q = uncoloured
            while Q:
                low = Q & -Q
                v = low.bit_length() - 1
                Q &= ~low & ~adj[v]
                uncoloured &= ~low
                verts.append(v)
                cols.append(c)
        return verts, cols

    def expand(clique: list[int], P: int) -> None:
        nonlocal best, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise _BudgetExhausted
        verts, cols = colour(P)
        for idx in range(len(verts) - 1, -1, -1):
            if len(clique) + cols[idx] <= len(best):
                return
            v = verts[idx]
            clique.append(v)
            newP = P & adj[v]
            if newP:
                expand(clique, newP)
            elif len(clique) > len(best):
                best = list(clique)
            clique.pop()
            P &= ~(1 << v)

    try:
        expand([], (1 << nv) - 1)
        complete = True
    except _BudgetExhausted:
        complete = False
    return sorted(order[i] for i in best), complete


def max_clique_bitsets(bits: Sequence[int]) -> list[int]:
    """Indices of a maximum clique of the graph given by adjacency bitsets."""
    return max_clique_bitsets_budget(bits)[0]


def maximal_cliques_bitsets(bits: Sequence[int]) -> Iterator[list[int]]:
    """Bron-Kerbosch with pivoting; yields every maximal clique once."""

    def bk(Rc: list[int], P: int, X: int) -> Iterator[list[int]]:
        if not P and not X:
            yield sorted(Rc)
            return
        pivot_pool = P | X
        u = max(_iter_bits(pivot_pool), key=lambda w: (P & bits[w]).bit_count())
        for v in list(_iter_bits(P & ~bits[u])):
            yield from bk(Rc + [v], P & bits[v], X & bits[v])
            P &= ~(1 << v)
            X |= 1 << v

    yield from bk([], (1 << len(bits)) - 1, 0)


@dataclass(frozen=True)
class SolverResult:
    size: int
    witness: tuple[Subspace, ...]


def brute_force_max_clique(spec: GraphSpec, vertices: Sequence[Subspace] | None = None,
                           bits: Sequence[int] | None = None,
                           cap: int = VERTEX_CAP) -> SolverResult:
    if vertices is None:
        if spec.vertex_count() > cap:
            raise CapExceeded(f"{spec.vertex_count()} vertices exceed the solver cap {cap}")
        vertices = materialize_vertices(spec)
    if bits is None:
        bits = adjacency_bitsets(spec, vertices, cap)
    idx = max_clique_bitsets(bits)
    return SolverResult(len(idx), tuple(vertices[i] for i in idx))


def brute_force_max_independent_set(spec: GraphSpec, vertices: Sequence[Subspace] | None = None,
                                    bits: Sequence[int] | None = None,
                                    cap: int = VERTEX_CAP) -> SolverResult:
    if vertices is None:
        if spec.vertex_count() > cap:
            raise CapExceeded(f"{spec.vertex_count()} vertices exceed the solver cap {cap}")
        vertices = materialize_vertices(spec)
    if bits is None:
        bits = adjacency_bitsets(spec, vertices, cap)
    idx = max_clique_bitsets(complement_bitsets(bits))
    return SolverResult(len(idx), tuple(vertices[i] for i in idx))


def is_clique(spec: GraphSpec, family: Sequence[Subspace]) -> bool:
    fam = list(family)
    return all(adjacent(spec, fam[i], fam[j])
               for i in range(len(fam)) for j in range(i + 1, len(fam)))


def is_independent(spec: GraphSpec, family: Sequence[Subspace]) -> bool:
    fam = list(family)
    return all(fam[i] != fam[j] and not adjacent(spec, fam[i], fam[j])
               for i in range(len(fam)) for j in range(i + 1, len(fam)))


def is_connected(bits: Sequence[int]) -> bool:
    nv = len(bits)
    if nv <= 1:
        return True
    seen, queue = 1, deque([0])
    while queue:
        v = queue.popleft()
        new = bits[v] & ~seen
        seen |= new
        queue.extend(_iter_bits(new))
    return seen == (1 << nv) - 1


def in_duality_range(spec: GraphSpec) -> bool:
    return spec.n <= 2 * spec.m and spec.r <= max(spec.m + 1, spec.n - spec.m + 1)


def dual_isomorphism_check(spec: GraphSpec, cap: int = VERTEX_CAP) -> bool:
    """Check that X -> X-perp is an adjacency-preserving bijection from
    G_r(m, n) onto G_r(n - m, n)."""
    other = GraphSpec(spec.ctx, spec.n, spec.n - spec.m, spec.r)
    if not in_duality_range(spec):
        warnings.warn(f"{spec} lies outside n <= 2m, r <= max(m+1, n-m+1); "
                      "checking anyway", stacklevel=2)
    V = materialize_vertices(spec)
    W = materialize_vertices(other)
    if len(V) > cap or len(W) > cap:
        raise CapExceeded(f"{len(V)} vertices exceed the cap {cap}")
    image = [S.dual(X) for X in V]
    if len(set(image)) != len(V) or set(image) != set(W):
        return False
    index = {X: i for i, X in enumerate(W)}
    bits_v = adjacency_bitsets(spec, V, cap)
    bits_w = adjacency_bitsets(other, W, cap)
    for i, Xp in enumerate(image):
        mapped = 0
        for j in _iter_bits(bits_v[i]):
            mapped |= 1 << index[image[j]]
        if mapped != bits_w[index[Xp]]:
            return False
    return True


# --------------------------------------------------------------------------
# export


def format_edge_list(bits: Sequence[int]) -> str:
    lines = [f"{i} {j}" for i, b in enumerate(bits) for j in _iter_bits(b) if j > i]
    return "\n".join(lines) + ("\n" if lines else "")


def stats_record(spec: GraphSpec, vertices: int, edges: int | None,
                 omega: int | None = None, alpha: int | None = None) -> dict:
    rec = {"schema": 1, "h": spec.ctx.h, "n": spec.n, "m": spec.m, "r": spec.r,
           "vertices": vertices, "edges": edges}
    if omega is not None:
        rec["omega"] = omega
    if alpha is not None:
        rec["alpha"] = alpha
    return rec


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"
