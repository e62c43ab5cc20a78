import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from multbound.linalg import (
    AbelianType,
    abelian_multiplier,
    embed_mixed_moduli,
    hom_ext_type,
    mixed_span_size,
    smith_normal_form,
    smith_valuations_mod,
    span_order_from_valuations,
    span_size_mod,
    tensor_type,
)


def test_abelian_type_basics():
    t = AbelianType.from_orders([3, 9])
    assert t.exps == (2, 1) and t.order == 27 and t.rank == 2
    assert str(t) == "C9 x C3"
    assert str(AbelianType(2)) == "1"
    with pytest.raises(ValueError):
        AbelianType.from_orders([4, 3])
    with pytest.raises(ValueError):
        AbelianType(2, (0,))


def test_closed_forms():
    a = AbelianType.from_orders([9, 3])
    b = AbelianType.from_orders([27, 3, 3])
    assert tensor_type(a, b).orders == [9, 3, 3, 3, 3, 3]
    assert hom_ext_type(a, 1)[0].orders == [3, 3]
    assert hom_ext_type(a, 5)[1].orders == [9, 3]
    assert abelian_multiplier(AbelianType.from_orders([16, 4, 2])).orders == [4, 2, 2]
    assert abelian_multiplier(AbelianType.from_orders([5])).orders == []
    with pytest.raises(ValueError):
        tensor_type(a, AbelianType.from_orders([2]))
    with pytest.raises(ValueError):
        hom_ext_type(a, 0)


def _sympy_factors(rows):
    m = Matrix(rows)
    d = sympy_snf(m, domain=ZZ)
    k = min(m.shape)
    return sorted(abs(int(d[i, i])) for i in range(k))


small_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_matches_sympy(rows):
    ours = smith_normal_form(rows)
    assert sorted(ours) == _sympy_factors(rows)
    nz = [x for x in ours if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def _closure(vectors, p, local):
    """Brute-force subgroup generated by vectors in prod Z/p^m_c."""
    mods = np.array([p**m for m in local])
    seen = {tuple([0] * len(local))}
    frontier = list(seen)
    gens = [tuple(np.asarray(v) % mods) for v in vectors]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple((np.array(x) + g) % mods)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


@st.composite
def span_problem(draw):
    p = draw(st.sampled_from([2, 3]))
    cols = draw(st.integers(1, 3))
    local = draw(st.lists(st.integers(1, 3 if p == 2 else 2), min_size=cols, max_size=cols))
    rows = draw(st.integers(0, 4))
    vecs = draw(st.lists(st.lists(st.integers(0, 26), min_size=cols, max_size=cols), min_size=rows, max_size=rows))
    return p, local, vecs


@settings(max_examples=150, deadline=None)
@given(span_problem())
def test_mixed_span_matches_closure(problem):
    p, local, vecs = problem
    assert mixed_span_size(np.array(vecs).reshape(-1, len(local)), p, local) == _closure(vecs, p, local)


@settings(max_examples=80, deadline=None)
@given(span_problem())
def test_valuations_give_every_lower_level(problem):
    p, _, vecs = problem
    if not vecs:
        return
    e = 3
    vals = smith_valuations_mod(vecs, p, e)
    for j in range(1, e + 1):
        assert span_order_from_valuations(vals, p, j) == _closure(vecs, p, [j] * len(vecs[0]))


def test_span_size_examples():
    assert span_size_mod([[2, 0], [0, 3]], 3, 2) == 9 * 3
    assert span_size_mod([[3, 6]], 3, 2) == 3
    assert span_size_mod(np.zeros((2, 2), int), 5, 1) == 1
    with pytest.raises(ValueError):
        smith_valuations_mod([[1]], 2, 40)


def test_embed_mixed_moduli():
    emb, top = embed_mixed_moduli([[1, 1]], 2, [1, 3])
    assert top == 3 and emb.tolist() == [[4, 1]]
