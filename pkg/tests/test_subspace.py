import pytest
from hypothesis import given
from hypothesis import strategies as st

from grassmann_zh import matrix as M
from grassmann_zh import subspace as S
from grassmann_zh.errors import NotASubspace, PreconditionError
from grassmann_zh.ring import factorize
from conftest import subspaces


def test_gaussian_binomial():
    assert S.gaussian_binomial(4, 2, 2) == 35
    assert S.gaussian_binomial(4, 2, 3) == 130
    assert S.gaussian_binomial(5, 0, 7) == 1
    assert S.gaussian_binomial(3, 4, 2) == 0


@pytest.mark.parametrize("h,n,k,expected", [
    (6, 4, 2, 4550), (2, 4, 2, 35), (4, 2, 1, 6), (12, 3, 0, 1), (6, 2, 1, 12)])
def test_count_examples(h, n, k, expected):
    assert S.count_subspaces(factorize(h), n, k) == expected


def test_count_inside_containing():
    assert S.count_containing(factorize(4), 2, 1, 0) == 6
    assert S.count_containing(factorize(2), 4, 2, 1) == 7
    assert S.count_inside(factorize(6), 2, 1) == 12


@pytest.mark.parametrize("h", [2, 4, 6, 12])
def test_enumeration_is_canonical_and_complete(h):
    ctx = factorize(h)
    for n in range(1, 4):
        for m in range(n + 1):
            fam = list(S.enumerate_subspaces(ctx, n, m))
            assert len(fam) == len(set(fam)) == S.count_subspaces(ctx, n, m)
            for X in fam[:20]:
                assert S.subspace_from_matrix(X.rep) == X


def test_enumeration_order_is_deterministic():
    ctx = factorize(6)
    assert list(S.enumerate_subspaces(ctx, 3, 1)) == list(S.enumerate_subspaces(ctx, 3, 1))


def test_not_a_subspace():
    ctx = factorize(4)
    with pytest.raises(NotASubspace):
        S.subspace(ctx, [[2, 0]], 2)
    with pytest.raises(NotASubspace):
        S.subspace(ctx, [[1, 0], [2, 0]], 2)


@given(subspaces(), st.integers(0, 2**32))
def test_canonical_form_ignores_basis_change(X, seed):
    import random
    from grassmann_zh.verify import random_invertible
    if X.dim == 0:
        return
    U = random_invertible(X.ctx, X.dim, random.Random(seed))
    assert S.subspace_from_matrix(U @ X.rep) == X


@given(st.data())
def test_intersection_agrees_with_oracles(data):
    h = data.draw(st.sampled_from([2, 3, 4, 6, 12]))
    n = data.draw(st.integers(1, 3))
    A = data.draw(subspaces(n=n, h=h))
    B = data.draw(subspaces(n=n, h=h))
    d = S.dim_intersection(A, B)
    assert d == S.dim_intersection_brute(A, B)
    assert d == S.dim_intersection_by_projection(A, B)
    if A.ctx.t > 1:
        assert d == S.dim_intersection_by_complement(A, B)
    assert S.dim_join(A, B) == A.dim + B.dim - d
    assert S.subspace_distance(A, B) == A.dim + B.dim - 2 * d


@given(subspaces())
def test_dual(A):
    Ap = S.dual(A)
    assert Ap.dim == A.n - A.dim
    assert S.dual(Ap) == A
    if 0 < A.dim < A.n:
        assert (A.rep @ Ap.rep.T).is_zero()


@given(st.data())
def test_dual_preserves_codimension_of_intersection(data):
    h = data.draw(st.sampled_from([2, 4, 6, 12]))
    n = data.draw(st.integers(2, 4))
    m = data.draw(st.integers(1, n - 1))
    A = data.draw(subspaces(n=n, m=m, h=h))
    B = data.draw(subspaces(n=n, m=m, h=h))
    assert m - S.dim_intersection(A, B) == (n - m) - S.dim_intersection(S.dual(A), S.dual(B))


@given(st.data())
def test_pair_normal_form(data):
    h = data.draw(st.sampled_from([2, 4, 6, 12, 36]))
    n = data.draw(st.integers(2, 4))
    m = data.draw(st.integers(1, n - 1))
    k = data.draw(st.integers(1, m))
    A = data.draw(subspaces(n=n, m=m, h=h))
    B = data.draw(subspaces(n=n, m=k, h=h))
    if S.contains(A, B):
        with pytest.raises(PreconditionError):
            S.pair_normal_form(A, B)
        return
    pnf = S.pair_normal_form(A, B)
    assert M.is_invertible(pnf.T)
    assert pnf.reconstruct() == (A, B)


def test_contains_and_projection():
    ctx = factorize(6)
    A = S.subspace(ctx, [[1, 0, 0], [0, 1, 0]], 3)
    B = S.subspace(ctx, [[1, 1, 0]], 3)
    assert S.contains(A, B) and not S.contains(B, A)
    assert A.project(0).ctx.h == 2 and A.project(1).dim == 2


@given(st.data())
def test_family_file_round_trip(data):
    h = data.draw(st.sampled_from([2, 6, 12]))
    fam = [data.draw(subspaces(n=3, m=2, h=h)) for _ in range(3)]
    ctx, n, m, back = S.parse_family(S.format_family(factorize(h), 3, 2, fam))
    assert (ctx.h, n, m) == (h, 3, 2) and back == fam


@pytest.mark.slow
@pytest.mark.parametrize("h", [2, 3, 4, 6])
def test_canonical_form_exhaustive(h):
    from itertools import product as iproduct
    ctx = factorize(h)
    gl = {}
    for m in (1, 2, 3):
        mats = (M.ZhMatrix.from_rows(ctx, [v[i * m:(i + 1) * m] for i in range(m)], m)
                for v in iproduct(range(h), repeat=m * m)) if h ** (m * m) <= 10**5 else ()
        gl[m] = [U for U in mats if M.is_invertible(U)]
    for n in (1, 2, 3):
        for m in range(1, n + 1):
            for X in S.enumerate_subspaces(ctx, n, m):
                for U in gl[m][:: max(1, len(gl[m]) // 50)]:
                    assert S.subspace_from_matrix(U @ X.rep) == X


def test_canonical_example_over_z4():
    ctx = factorize(4)
    assert S.subspace(ctx, [[2, 1]], 2) == S.subspace(ctx, [[2, 3]], 2)
    assert S.subspace(ctx, [[2, 1]], 2).rep.rows == ((2, 1),)
