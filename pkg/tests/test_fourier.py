from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nafourier.exactnum import CycNum
from nafourier.fourier import (
    MParam,
    brute_force_pairing,
    build_m_set,
    commuting_pair_orbit_count,
    coset_setup,
    flip_pattern_families,
    ft_coset,
    ft_matrix,
    gl_cyclic_families,
    inner_form_unipotent_count,
    lusztig_pairing,
    verify_flip_group,
)
from nafourier.chars import char_table
from nafourier.errors import UnsupportedConstruction
from nafourier.groups import (
    automorphism_action,
    cyclic,
    elementary_abelian_2,
    flip,
    parse_group,
    product,
    semidirect_cyclic,
    symmetric,
    trivial_group,
)

half = Fraction(1, 2)


@pytest.mark.parametrize("desc,size", [("Z2", 4), ("S3", 8), ("Z2^2", 16), ("trivial", 1)])
def test_m_set_sizes(desc, size):
    g = parse_group(desc)
    assert len(build_m_set(g)) == size
    assert size == commuting_pair_orbit_count(g)


def test_z2_pairing_values():
    z2 = cyclic(2)
    assert lusztig_pairing(MParam((0,), 0), MParam((1,), 1), z2) == half
    assert lusztig_pairing(MParam((0,), 0), MParam((0,), 0), z2) == half


@pytest.mark.parametrize("desc", ["Z3", "Z2^2", "Z4"])
def test_abelian_pairing_formula(desc):
    g = parse_group(desc)
    table = char_table(g)
    mset = build_m_set(g)
    for a in mset.params:
        for b in mset.params:
            sigma, tau = table.rows[a.sigma], table.rows[b.sigma]
            closed = sigma(b.x) * tau(g.inv(a.x)) / g.order
            assert lusztig_pairing(a, b, g) == closed == brute_force_pairing(a, b, g)


def test_z2_matrix():
    ft = ft_matrix(cyclic(2))
    mset = ft.domain
    order = [MParam((0,), 0), MParam((1,), 0), MParam((0,), 1), MParam((1,), 1)]
    want = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]]
    for i, a in enumerate(order):
        for j, b in enumerate(order):
            assert ft.entries[mset.index[a]][mset.index[b]] == Fraction(want[i][j], 2)


def test_trivial_group_matrix():
    assert ft_matrix(trivial_group()).entries == [[CycNum(1)]]


@pytest.mark.parametrize("desc", ["S3", "S4", "flip(Z2)", "B2", "semidirect(Z5,inv,2)"])
def test_involution_unitarity_symmetry(desc):
    ft = ft_matrix(parse_group(desc))
    assert ft.squared_is_identity()
    assert ft.is_unitary()
    assert ft.entries == ft.transposed()


@given(st.integers(1, 9))
def test_cyclic_ft_properties(n):
    ft = ft_matrix(cyclic(n))
    assert ft.squared_is_identity() and ft.is_unitary()


@given(st.integers(1, 3))
def test_elementary_abelian_ft_properties(k):
    ft = ft_matrix(elementary_abelian_2(k))
    assert ft.squared_is_identity() and ft.is_unitary()


def test_coset_transform_z2_in_z4():
    c = ft_coset(*coset_setup(cyclic(4), 2))
    assert len(c.bar_params) == len(c.params) == 4
    assert all(p.x in ((1,), (3,)) for p in c.bar_params)
    assert c.inverse_holds(c.adjoint_inverse())


def test_coset_transform_degenerates():
    g = cyclic(4)
    c = ft_coset(*coset_setup(g, 1))
    assert c.entries == ft_matrix(g).entries


def test_coset_transform_swap():
    base = product(cyclic(2), cyclic(2))
    swap = automorphism_action(base, lambda x: (x[1], x[0]))
    c = ft_coset(*coset_setup(semidirect_cyclic(base, swap, 2)))
    assert len(c.bar_params) == len(c.params)
    assert c.inverse_holds(c.adjoint_inverse())


@pytest.mark.parametrize("desc", ["trivial", "Z2", "S3", "S4", "S5", "Z2^2", "flip(Z3)"])
def test_flip_lemma(desc):
    checks = verify_flip_group(parse_group(desc))
    assert checks and all(c.passed for c in checks)


def test_gl_cyclic_families():
    single = gl_cyclic_families(1, 3)
    assert len(single) == 1 and single[0].gamma.order == 3
    fams = gl_cyclic_families(2, 2)
    assert sorted(f.gamma.order for f in fams) == [1, 2, 2]
    total = sum(len(f.members) for f in fams)
    assert total == sum(inner_form_unipotent_count(2, 2, r) for r in range(2))


@pytest.mark.parametrize("k,m", [(2, 3), (3, 2), (2, 4)])
def test_gl_member_double_count(k, m):
    fams = gl_cyclic_families(k, m)
    assert sum(len(f.members) for f in fams) == sum(inner_form_unipotent_count(k, m, r) for r in range(m))


def test_flip_pattern_families():
    assert len(flip_pattern_families(trivial_group()).members) == 4
    fam = flip_pattern_families(cyclic(2))
    assert fam.gamma.num_classes == 5
    assert len(fam.members) == len(build_m_set(flip(cyclic(2))))
    with pytest.raises(UnsupportedConstruction):
        flip_pattern_families(symmetric(3))
