import pytest
from hypothesis import given, strategies as st

from alglab import liealg
from alglab.errors import InvalidStructureError, PreconditionError
from alglab.exactla import RationalMatrix, Subspace
from alglab.random_models import random_lie_pair


def test_abelian_valid():
    assert liealg.validate(liealg.abelian(2)) == []


def test_sl2_valid():
    g = liealg.sl2()
    assert liealg.validate(g) == []
    assert g.bracket_basis(0, 1) == (0, 2, 0)
    assert g.bracket_basis(1, 2) == (1, 0, 0)


def test_antisymmetry_violation_located():
    c = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    c[0][1][0] = 1
    c[1][0][0] = 1
    report = liealg.validate(c)
    assert report[0].kind == "antisymmetry"
    assert report[0].indices == (0, 1, 0)
    with pytest.raises(InvalidStructureError):
        liealg.LieAlgebra(c)


def test_jacobi_violation_reported():
    # [e0,e1] = e2, [e1,e2] = e0, [e0,e2] = e0 breaks Jacobi
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j), v in {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0), (0, 2): (1, 0, 0)}.items():
        c[i][j] = list(v)
        c[j][i] = [-x for x in v]
    report = liealg.validate(c)
    assert report and all(v.kind == "jacobi" for v in report)


def test_adjoint_abelian_is_zero():
    r = liealg.adjoint_rep(liealg.abelian(2))
    assert all(a.is_zero() for a in r.action)


def test_adjoint_sl2_h_eigenvalues(oracle):
    adh = liealg.adjoint_rep(liealg.sl2()).action[0]
    assert adh == RationalMatrix.diagonal([0, 2, -2])
    assert sorted(adh[i, i] for i in range(3)) == oracle["sl2_ad_h_eigenvalues"]


def test_adjoint_heisenberg_single_entry(oracle):
    adx = liealg.adjoint_rep(liealg.heisenberg()).action[0]
    nonzero = [[i, j, str(adx[i, j])] for i in range(3) for j in range(3) if adx[i, j]]
    assert nonzero == oracle["heis_ad_x_nonzero"] == [[2, 1, "1"]]  # y -> z


def test_exterior_square_examples(oracle):
    g = liealg.sl2()
    one = liealg.trivial_rep(g, 1)
    assert liealg.exterior_square_rep(one).module_dim == 0
    triv = liealg.exterior_square_rep(liealg.trivial_rep(g, 3))
    assert triv.module_dim == 3 and triv.is_trivial()
    w = liealg.exterior_square_rep(liealg.adjoint_rep(g))
    assert w.module_dim == 3
    assert liealg.invariants(w).dim == oracle["invariants_dim"]["sl2_wedge2_adjoint"] == 0


def test_invariants_examples(oracle):
    assert liealg.invariants(liealg.trivial_rep(liealg.sl2(), 3)).dim == 3
    assert liealg.invariants(liealg.adjoint_rep(liealg.sl2())).dim == oracle["invariants_dim"]["sl2_adjoint"]
    center = liealg.invariants(liealg.adjoint_rep(liealg.heisenberg()))
    assert center == Subspace.span(oracle["heisenberg_center"], 3)


def test_killing_examples(oracle):
    assert not liealg.killing_is_nondegenerate(liealg.abelian(2))
    assert liealg.killing_is_nondegenerate(liealg.sl2()) == (oracle["killing_rank"]["sl2"] == 3)
    assert liealg.killing_is_nondegenerate(liealg.so3()) == (oracle["killing_rank"]["so3"] == 3)
    assert not liealg.killing_is_nondegenerate(liealg.heisenberg())
    assert oracle["killing_rank"]["heisenberg"] == 0


def test_quotient_examples():
    r = liealg.adjoint_rep(liealg.heisenberg())
    full, _ = liealg.quotient_rep(r, Subspace.full(3))
    assert full.module_dim == 0
    same, proj = liealg.quotient_rep(r, Subspace.zero(3))
    assert same.module_dim == 3 and proj == RationalMatrix.identity(3)
    assert [a for a in same.action] == list(r.action)
    q, proj = liealg.quotient_rep(r, liealg.invariants(r))
    assert q.module_dim == 2 and q.is_trivial()
    assert proj.shape == (2, 3)


def test_quotient_requires_invariant_subspace():
    r = liealg.adjoint_rep(liealg.heisenberg())
    with pytest.raises(PreconditionError):
        liealg.quotient_rep(r, Subspace.span([(1, 0, 0)], 3))


def test_bad_representation_rejected():
    g = liealg.sl2()
    with pytest.raises(InvalidStructureError):
        liealg.Representation(g, [RationalMatrix.identity(2)] * 3)


def test_so3_standard_is_a_representation():
    r = liealg.so3_standard_rep()
    assert r.violations() == []
    assert liealg.invariants(r).dim == 0


# -- properties ------------------------------------------------------------

seeds = st.integers(0, 10**6)


@given(seeds)
def test_adjoint_of_valid_algebra_is_representation(seed):
    g, _ = random_lie_pair(seed)
    assert liealg.validate(g) == []
    assert liealg.adjoint_rep(g).violations() == []


@given(seeds)
def test_invariants_are_action_invariant_and_quotient_defined(seed):
    _, r = random_lie_pair(seed)
    u = liealg.invariants(r)
    for a in r.action:
        for v in u.vectors():
            assert not any(a.apply(v))
    q, proj = liealg.quotient_rep(r, u)
    assert q.module_dim == r.module_dim - u.dim
    # projection intertwines the actions
    for a, b in zip(r.action, q.action):
        assert proj @ a == b @ proj


@given(seeds)
def test_exterior_square_is_representation(seed):
    _, r = random_lie_pair(seed)
    w = liealg.exterior_square_rep(r)
    assert w.violations() == []
    assert w.module_dim == r.module_dim * (r.module_dim - 1) // 2
