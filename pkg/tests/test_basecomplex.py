import pytest
from hypothesis import given, strategies as st

from alglab.basecomplex import (
    BaseComplex,
    LocalSystem,
    format_word,
    h_dims,
    holonomy,
    parse_word,
    twisted_complex,
)
from alglab.errors import InvalidStructureError, UsageError
from alglab.exactla import RationalMatrix
from alglab.random_models import random_model

from conftest import torus_base

I1 = RationalMatrix.identity(1)
SWAP = RationalMatrix([[0, 1], [1, 0]])


def circle(t, dim=1):
    return LocalSystem(BaseComplex(1, [(0, 0)]), dim, [t])


def test_word_parsing_round_trip():
    w = parse_word(["+0", "-1", (2, 1)])
    assert w == ((0, 1), (1, -1), (2, 1))
    assert format_word(w) == ["+0", "-1", "+2"]
    with pytest.raises(UsageError):
        parse_word(["0"])


def test_holonomy_examples():
    ls = circle(RationalMatrix([[2]]))
    assert holonomy(ls, []) == I1
    assert holonomy(ls, ["+0", "-0"]) == I1
    assert holonomy(ls, ["+0", "+0"]) == RationalMatrix([[4]])
    torus = LocalSystem(torus_base(), 2, [SWAP, RationalMatrix.identity(2)])
    assert holonomy(torus, torus.base.cells[0]) == RationalMatrix.identity(2)


def test_flatness_enforced():
    with pytest.raises(InvalidStructureError):
        LocalSystem(torus_base(), 2, [SWAP, RationalMatrix([[1, 1], [0, 1]])])


def test_connectivity_and_closed_cells_enforced():
    with pytest.raises(InvalidStructureError):
        BaseComplex(2, [])
    with pytest.raises(InvalidStructureError):
        BaseComplex(2, [(0, 1)], [["+0"]])


def test_circle_differentials():
    tc = twisted_complex(circle(I1))
    assert tc.d0 == RationalMatrix([[0]])
    assert tc.d1.rows == 0
    assert twisted_complex(circle(RationalMatrix([[2]]))).d0 == RationalMatrix([[1]])


def test_examples_match_oracle(oracle):
    ref = oracle["local"]
    torus = LocalSystem.trivial(torus_base(), 1)
    cases = {
        "circle_id_Q1": circle(I1),
        "circle_2_Q1": circle(RationalMatrix([[2]])),
        "circle_id_Q2": circle(RationalMatrix.identity(2), 2),
        "circle_swap_Q2": circle(SWAP, 2),
        "torus_trivial_Q1": torus,
        "point_Q3": LocalSystem(BaseComplex(1), 3, []),
        "two_vertex_circle_Q1": LocalSystem.trivial(BaseComplex(2, [(0, 1), (1, 0)]), 1),
        "klein_swap_Q2": LocalSystem(
            BaseComplex(1, [(0, 0), (0, 0)], [["+0", "+1", "-0", "+1"]]), 2, [SWAP, RationalMatrix.identity(2)]
        ),
    }
    for name, ls in cases.items():
        r = h_dims(ls)
        assert [r.h0, r.h1] == ref[name], name


def test_torus_d1_vanishes():
    tc = twisted_complex(LocalSystem.trivial(torus_base(), 1))
    assert tc.d0.is_zero() and tc.d1.is_zero()


def test_spanning_tree_and_loops():
    b = BaseComplex(3, [(0, 1), (1, 2), (2, 0)])
    assert len(b.tree_edges) == 2
    loops = b.fundamental_loops()
    assert len(loops) == 1
    assert b.path_endpoints(loops[0]) == (0, 0)
    assert b.path_endpoints(b.tree_path(2, 1)) == (1, 2)


# -- properties ------------------------------------------------------------

seeds = st.integers(0, 10**6)


@given(seeds)
def test_d1_after_d0_is_zero(seed):
    ls = random_model(seed).module_system
    tc = twisted_complex(ls)
    if tc.d1.rows and tc.d0.cols:
        assert (tc.d1 @ tc.d0).is_zero()


@given(seeds, st.data())
def test_subdivision_invariance(seed, data):
    ls = random_model(seed).module_system
    if not ls.base.edges:
        return
    e = data.draw(st.integers(0, len(ls.base.edges) - 1))
    before, after = h_dims(ls), h_dims(ls.subdivide(e))
    assert (before.h0, before.h1) == (after.h0, after.h1)


@given(seeds)
def test_tree_has_no_h1(seed):
    ls = random_model(seed, tree=True).module_system
    assert ls.base.is_tree()
    assert h_dims(ls).h1 == 0


@given(seeds)
def test_representatives_are_cocycles(seed):
    ls = random_model(seed).module_system
    r = h_dims(ls)
    d1 = twisted_complex(ls).d1
    for v in r.representatives:
        assert not any(d1.apply(v))
