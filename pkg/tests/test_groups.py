import itertools

import numpy as np
import pytest

from cloneforge import (
    FiniteGroup,
    direct_product,
    group_from_name,
    make_named_group,
    regular_representation,
    validate,
)
from conftest import ALL_ORDER_LE8, named_groups


def test_cyclic_two_is_forced():
    g = make_named_group("cyclic", 2)
    assert g.cayley.tolist() == [[0, 1], [1, 0]]
    assert g.identity == 0
    assert g.inverses.tolist() == [0, 1]


def test_klein_four_everything_self_inverse():
    g = make_named_group("direct_product", 2, 2)
    assert g.order == 4
    assert all(g.inv(f) == f for f in range(4))
    assert g.is_abelian()


def test_symmetric_three_matches_permutation_composition():
    # independent oracle: compose permutations of three symbols directly
    g = make_named_group("symmetric", 3)
    perms = sorted(itertools.permutations(range(3)))
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            composed = tuple(p[q[x]] for x in range(3))
            assert perms[g.mul(i, j)] == composed
    assert g.order == 6
    assert not g.is_abelian()
    # a witness pair with fg != gf
    assert any(g.mul(f, h) != g.mul(h, f) for f in range(6) for h in range(6))


def test_dihedral_and_quaternion_order_profiles():
    d4 = group_from_name("D4")
    assert d4.order == 8
    assert sorted(d4.element_orders()) == [1, 2, 2, 2, 2, 2, 4, 4]
    q8 = group_from_name("Q8")
    assert q8.order == 8
    assert sorted(q8.element_orders()) == [1, 2, 4, 4, 4, 4, 4, 4]
    assert not q8.is_abelian()
    # i * j = k and j * i = -k (indices: 1->2, i->2? see labeling: 2u+s)
    i, j, k = 2, 4, 6
    assert q8.mul(i, j) == k
    assert q8.mul(j, i) != k


def test_validate_accepts_cyclic_three():
    assert validate(make_named_group("cyclic", 3)).ok


def test_validate_reports_swapped_entry():
    g3 = make_named_group("cyclic", 3)
    bad = g3.cayley.copy()
    bad[1, 1], bad[1, 2] = bad[1, 2], bad[1, 1]
    broken = FiniteGroup(3, bad, 0, g3.inverses, "broken")
    verdict = validate(broken)
    assert not verdict.ok
    assert any("latin" in v for v in verdict.violations)


def test_validate_reports_identity_and_latin_failures():
    broken = FiniteGroup(2, np.array([[0, 1], [1, 1]]), 0, np.array([0, 1]), "bad")
    verdict = validate(broken)
    assert not verdict.ok
    text = " ".join(verdict.violations)
    assert "latin" in text
    assert "identity" in text or "inverse" in text


def test_validate_reports_malformed_sizes_as_violation():
    broken = FiniteGroup(3, np.array([[0, 1], [1, 0]]), 0, np.array([0, 1, 2]), "bad")
    verdict = validate(broken)
    assert not verdict.ok
    assert any("shape" in v for v in verdict.violations)


def test_make_named_group_errors():
    with pytest.raises(ValueError):
        make_named_group("cyclic", 0)
    with pytest.raises(ValueError):
        make_named_group("frobnicate", 3)
    with pytest.raises(ValueError):
        make_named_group("quaternion", 4)
    with pytest.raises(ValueError):
        make_named_group("dihedral", 7)
    with pytest.raises(ValueError):
        group_from_name("X9")


def test_group_from_name_products():
    g = group_from_name("Z2xZ4")
    assert g.order == 8
    assert g.is_abelian()
    assert sorted(g.element_orders()) == [1, 2, 2, 2, 4, 4, 4, 4]
    g3 = group_from_name("Z2xZ2xZ2")
    assert g3.order == 8
    assert all(g3.inv(f) == f for f in range(8))


def test_regular_representation_swap_and_identity():
    z2 = group_from_name("Z2")
    rep = regular_representation(z2)
    assert rep[0].tolist() == [[1, 0], [0, 1]]
    assert rep[1].tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("name,group", named_groups(ALL_ORDER_LE8))
def test_regular_representation_is_exact_homomorphism(name, group):
    rep = regular_representation(group)
    assert np.array_equal(rep[group.identity], np.eye(group.order, dtype=np.int64))
    for f in range(group.order):
        assert rep[f].sum(axis=0).tolist() == [1] * group.order
        assert rep[f].sum(axis=1).tolist() == [1] * group.order
        for g in range(group.order):
            assert np.array_equal(rep[f] @ rep[g], rep[group.mul(f, g)])


@pytest.mark.parametrize("name,group", named_groups(ALL_ORDER_LE8))
def test_regular_representation_traces_and_inverses(name, group):
    rep = regular_representation(group)
    for f in range(group.order):
        expected = group.order if f == group.identity else 0
        assert int(np.trace(rep[f])) == expected
        assert group.inv(group.inv(f)) == f


def test_direct_product_indexing_is_row_major():
    z2 = group_from_name("Z2")
    z3 = group_from_name("Z3")
    g = direct_product(z2, z3)
    # element (a, b) -> a*3 + b; (1,2)*(1,1) = (0, 0)
    assert g.mul(1 * 3 + 2, 1 * 3 + 1) == 0
    assert g.label == "Z2xZ3"
