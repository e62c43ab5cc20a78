import numpy as np
import pytest

from multbound.groups import GroupError, TableGroup, direct_product_table
from multbound.structure import (
    Quotient,
    abelian_invariants,
    agemo,
    center,
    frattini_agemo,
    group_profile,
    lower_central_series,
    nilpotency_class,
    quotient,
    rank_d,
)


def cyclic(m, p):
    i = np.arange(m)
    return TableGroup(p, (i[:, None] + i[None, :]) % m)


def test_table_validation():
    with pytest.raises(GroupError, match="power of 2"):
        cyclic(6, 2)
    bad = cyclic(4, 2).table.copy()
    bad[1, 1], bad[1, 2] = bad[1, 2], bad[1, 1]
    with pytest.raises(GroupError):
        TableGroup(2, bad)


def test_associativity_spot_check(group):
    assert group("dihedral(16)").check_associativity()
    assert group("direct_product(heisenberg(3), abelian([3]))").check_associativity()


def test_element_orders_and_abelian(group):
    g = group("abelian([8, 2])")
    assert g.is_abelian
    assert sorted(np.bincount(g.element_orders())[[1, 2, 4, 8]]) == sorted([1, 3, 4, 8])


@pytest.mark.parametrize(
    "expr, z",
    [("dihedral(8)", 2), ("quaternion(8)", 2), ("heisenberg(3)", 3), ("dihedral(16)", 2),
     ("abelian([4, 2])", 8), ("extraspecial(2, 2, 'minus')", 2), ("wreath_pp(3)", 3)],
)
def test_center_orders(group, expr, z):
    assert len(center(group(expr))) == z


@pytest.mark.parametrize(
    "expr, sizes",
    [
        ("wreath_pp(3)", [81, 9, 3, 1]),
        ("dihedral(32)", [32, 8, 4, 2, 1]),
        ("heisenberg(5)", [125, 5, 1]),
        ("abelian([9])", [9, 1]),
        ("free_class2_exp_p(3, 3)", [729, 27, 1]),
    ],
)
def test_lower_central_series(group, expr, sizes):
    g = group(expr) if expr != "free_class2_exp_p(3, 3)" else None
    if g is None:
        from multbound.families import parse_entry

        g = parse_entry(expr).table()
    assert [len(s) for s in lower_central_series(g)] == sizes
    assert nilpotency_class(g) == len(sizes) - 1


def test_agemo_and_frattini(group):
    g = group("abelian([9, 3])")
    phi, gp = frattini_agemo(g)
    assert len(gp) == 3 and len(phi) == 3
    assert rank_d(g) == 2
    d8 = group("dihedral(8)")
    assert len(agemo(d8)) == 2
    assert rank_d(group("extraspecial(2, 2, 'plus')")) == 4


def test_quotient_by_center_of_d8(group):
    g = group("dihedral(8)")
    q = Quotient(g, center(g))
    assert q.group.order == 4 and q.group.is_abelian
    assert (q.group.element_orders() <= 2).all()
    # projection is a homomorphism
    x, y = np.meshgrid(np.arange(8), np.arange(8))
    assert np.array_equal(q.proj[g.table[x, y]], q.group.table[q.proj[x], q.proj[y]])


def test_quotient_rejects_non_normal(group):
    g = group("dihedral(8)")
    s = g.generate([g.generators[-1]])
    non_normal = next(
        g.generate([x]) for x in range(8) if len(g.generate([x])) == 2 and not g.is_normal(g.generate([x]))
    )
    assert len(s) >= 2
    with pytest.raises(GroupError, match="not normal"):
        quotient(g, non_normal)


@pytest.mark.parametrize("orders", [[8, 2, 2], [9, 9, 3], [25, 5], [2], [4, 4, 2, 2]])
def test_abelian_invariants(group, orders):
    g = group(f"abelian({orders})")
    assert abelian_invariants(g).orders == sorted(orders, reverse=True)


def test_abelian_invariants_of_section(group):
    g = group("dihedral(16)")
    lcs = lower_central_series(g)
    assert abelian_invariants(g, lcs[1]).orders == [4]


PROFILES = {
    "heisenberg(3)": dict(n=3, k=1, d=2, c=2, delta=2, gamma=1, t=0),
    "direct_product(heisenberg(3), abelian([3]))": dict(n=4, k=1, d=3, c=2, delta=2, gamma=1, t=0),
    "wreath_pp(3)": dict(n=4, k=2, d=2, c=3, delta=2, gamma=1, t=1),
    "extraspecial(3, 1, 'p2')": dict(n=3, k=1, d=2, c=2, delta=2, gamma=1, t=1),
    "dihedral(16)": dict(n=4, k=2, d=2, c=3, delta=2, gamma=1, t=2),
    "direct_product(dihedral(8), dihedral(8))": dict(n=6, k=2, d=4, c=2, delta=4, gamma=2, t=2),
    "abelian([9, 3])": dict(n=3, k=0, d=2, c=1, delta=0, gamma=0, t=1),
}


@pytest.mark.parametrize("expr", sorted(PROFILES))
def test_profiles(group, expr):
    pr = group_profile(group(expr))
    for key, value in PROFILES[expr].items():
        assert getattr(pr, key) == value, key


def test_profile_flags(group):
    from multbound.families import parse_entry

    f = group_profile(parse_entry("free_class2_exp_p(3, 3)").table())
    assert (f.n, f.k, f.d, f.gamma, f.t, f.delta) == (6, 3, 3, 3, 0, 3)
    assert f.is_special and not f.has_Gp_cyclic_p
    es = group_profile(group("extraspecial(3, 1, 'p2')"))
    assert es.is_special and es.has_Gp_cyclic_p and es.has_Gp_equal_gamma2 and es.is_maximal_class
    w = group_profile(group("wreath_pp(3)"))
    assert w.is_maximal_class and not w.is_special and (w.mu, w.nu) == (2, 2)
    m = group_profile(group("modular(2, 5)"))
    assert not m.has_Gp_in_gamma2
    assert group_profile(group("abelian([4])")).is_abelian


def test_profile_invariant_under_relabelling(group):
    g = group("direct_product(dihedral(8), abelian([4]))")
    perm = np.random.default_rng(7).permutation(g.order)
    assert group_profile(g).as_dict() == group_profile(g.relabel(perm)).as_dict()


def test_direct_product_table():
    a, b = cyclic(4, 2), cyclic(2, 2)
    g = direct_product_table(a, b)
    assert g.order == 8 and g.is_abelian
    assert abelian_invariants(g).orders == [4, 2]
    with pytest.raises(GroupError):
        direct_product_table(a, cyclic(3, 3))


def test_subgroup_machinery(group):
    g = group("quaternion(16)")
    gens = g.generators
    assert len(g.generate(gens)) == 16
    assert len(gens) == 2
    z = center(g)
    assert g.is_subgroup(z) and g.is_normal(z)
    sub, emb = g.subgroup_group(lower_central_series(g)[1])
    assert sub.order == 4 and np.array_equal(np.sort(emb), emb)
