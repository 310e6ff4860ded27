from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nafourier.affine import affine_diagram
from nafourier.chars import ClassFunction, char_table, inner_product, trivial_character
from nafourier.elliptic import (
    affine_elliptic_count,
    affine_finite_order_classes,
    compact_flip,
    compact_pair_classes_typeA,
    ell_basis,
    ell_basis_checks,
    elliptic_classes,
    elliptic_classes_wreath,
    elliptic_pairing,
    elliptic_quotient_dimension,
    indicator,
    linear_delta,
    mackey_comparison_cases,
    mackey_elliptic_checks,
    o2_oracle,
    parse_descriptor,
    pgl_unipotent_strata,
    reflection_delta,
    signed_permutation_delta,
    trivial_delta,
    twisted_elliptic_pairing,
    weyl_elliptic_class_count,
    wreath_elliptic_bruteforce,
    wreath_group,
    y_ell,
)
from nafourier.errors import DescriptorError, InvalidParameters
from nafourier.exactnum import CycNum, determinant, euler_phi, root_of_unity
from nafourier.groups import cycle_type, cyclic, elementary_abelian_2, signed_permutation, subgroup, symmetric, trivial_group


def sign_delta(group):
    return linear_delta(lambda x: CycNum(-1) ** x[0], group)


def test_zero_dimensional_delta_gives_inner_product():
    s4 = symmetric(4)
    delta = trivial_delta(s4)
    assert delta.dim == 0
    for a in char_table(s4).rows:
        for b in char_table(s4).rows:
            assert elliptic_pairing(a, b, delta) == inner_product(a, b)


def test_sign_delta_on_z2():
    z2 = cyclic(2)
    triv = trivial_character(z2)
    assert elliptic_pairing(triv, triv, sign_delta(z2)) == 1


def test_mismatched_groups_rejected():
    with pytest.raises(InvalidParameters):
        elliptic_pairing(trivial_character(cyclic(2)), trivial_character(cyclic(2)), sign_delta(cyclic(2)))


def test_twisted_pairing_reductions():
    z2 = cyclic(2)
    delta = sign_delta(z2)
    f = trivial_character(z2)
    g = char_table(z2).rows[1]
    assert twisted_elliptic_pairing(f, g, delta, z2.identity, z2) == elliptic_pairing(f, g, delta)
    one = subgroup(z2, [])
    theta = (1,)
    val = twisted_elliptic_pairing(f, g, delta, theta, one)
    assert val == 2 * f(theta).conjugate() * g(theta)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_reflection_rep_elliptic_class_is_the_n_cycle(n):
    g = symmetric(n)
    classes = elliptic_classes(g, reflection_delta(g))
    assert [cycle_type(x) for x in classes] == [(n,)]


def test_b2_elliptic_classes_against_determinant_scan():
    b2 = signed_permutation(2)
    delta = signed_permutation_delta(b2)
    structural = elliptic_classes(b2, delta)
    scan = {b2.class_index(x) for x in b2.elements if determinant([[int(i == j) - v for j, v in enumerate(row)] for i, row in enumerate(b2.matrix(x))]) != 0}
    assert sorted(b2.class_index(x) for x in structural) == sorted(scan)
    assert len(structural) == 2


def test_faithful_character_on_abelian_group():
    z5 = cyclic(5)
    delta = linear_delta(lambda x: root_of_unity(5, x[0]), z5)
    assert elliptic_classes(z5, delta) == [x for x in z5.class_reps if x != (0,)]


@pytest.mark.parametrize("n", range(1, 9))
def test_wreath_degenerate_cases(n):
    assert len(elliptic_classes_wreath(1, n)) == euler_phi(n)
    assert len(elliptic_classes_wreath(n, 1)) == 1


def test_wreath_brute_force_small():
    assert wreath_elliptic_bruteforce(2, 2) == 1
    assert wreath_elliptic_bruteforce(2, 3) == euler_phi(3)
    assert wreath_elliptic_bruteforce(3, 2) == 1


@pytest.mark.parametrize("n", range(1, 13))
def test_pgl_strata_total(n):
    assert sum(len(p.classes) for p in pgl_unipotent_strata(n).values()) == n


def test_pgl6_and_o2():
    assert len(y_ell("PGL(6)").classes) == 2
    o2 = y_ell("O2")
    assert len(o2.classes) == 6
    fixed = sorted((c.s_label, c.h_label) for c, v in o2.flip.items() if c == v)
    assert fixed == [("delta", "-delta"), ("delta", "delta")]
    assert all(c.passed for c in o2_oracle())


def test_pgl_flip_inverts_exponent():
    pairs = y_ell("PGL(5)")
    for c in pairs.classes:
        n, k = c.data
        assert pairs.flip[c].data == (n, (-k) % n)


def test_center_flip_swaps():
    pairs = y_ell("CENTER(3)")
    assert len(pairs.classes) == 9
    for c, v in pairs.flip.items():
        assert (v.s_label, v.h_label) == (c.h_label, c.s_label)


@pytest.mark.parametrize("bad", ["GL(3)", "PGL()", "PGL(0)", "SL_dual(a)"])
def test_bad_reductive_descriptors(bad):
    with pytest.raises(DescriptorError):
        parse_descriptor(bad)


def test_ell_basis_examples():
    z2 = cyclic(2)
    basis = ell_basis(z2, sign_delta(z2))
    assert len(basis) == 1
    assert basis[0].pi == indicator(z2, (1,)) * 2
    e2 = elementary_abelian_2(2)
    assert len(ell_basis(e2, trivial_delta(e2))) == 4
    one = trivial_group()
    assert len(ell_basis(one, trivial_delta(one))) == 1
    s4 = symmetric(4)
    for comp, delta in [(z2, sign_delta(z2)), (e2, trivial_delta(e2)), (s4, reflection_delta(s4))]:
        assert all(c.passed for c in ell_basis_checks(comp, delta))


@pytest.mark.parametrize("name,group,normal,delta", mackey_comparison_cases(), ids=lambda v: v if isinstance(v, str) else "")
def test_mackey_comparison(name, group, normal, delta):
    checks = mackey_elliptic_checks(group, normal, delta)
    assert checks and all(c.passed for c in checks)


def test_compact_pairs():
    assert len(compact_pair_classes_typeA(1)) == 1
    for n in (2, 3):
        got = len(compact_pair_classes_typeA(n))
        assert got == affine_finite_order_classes(n, 2) == affine_finite_order_classes(n, 3)
    for c in compact_pair_classes_typeA(6):
        assert compact_flip(compact_flip(c)) == c


def test_affine_counts():
    for n in range(2, 13):
        assert affine_elliptic_count(affine_diagram("A", n - 1))[0] == n
    assert affine_elliptic_count(affine_diagram("A", 1), brute_force=True)[0] == 2
    c2 = affine_diagram("C", 2, "sc")
    total, parts = affine_elliptic_count(c2)
    b2 = signed_permutation(2)
    signed = len(elliptic_classes(b2, signed_permutation_delta(b2)))
    assert parts == {0: signed, 1: 1, 2: signed}
    assert total == 5


def test_weyl_count_matches_reflection_rep():
    # Cartan matrix of A_3 and the S_4 determinant count
    cartan = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    s4 = symmetric(4)
    assert weyl_elliptic_class_count(cartan) == len(elliptic_classes(s4, reflection_delta(s4)))


@given(st.lists(st.integers(-3, 3), min_size=5, max_size=5), st.lists(st.integers(-3, 3), min_size=5, max_size=5), st.integers(0, 3))
def test_pairing_hermitian_and_linear(a, b, k):
    s4 = symmetric(4)
    delta = reflection_delta(s4)
    f = ClassFunction(s4, tuple(root_of_unity(4, k) * v for v in a))
    g = ClassFunction(s4, tuple(b))
    assert elliptic_pairing(f, g, delta) == elliptic_pairing(g, f, delta).conjugate()
    assert elliptic_pairing(f, g + g, delta) == 2 * elliptic_pairing(f, g, delta)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_gram_rank_equals_class_count(n):
    g = symmetric(n)
    delta = reflection_delta(g)
    assert elliptic_quotient_dimension(delta) == len(elliptic_classes(g, delta)) == 1
