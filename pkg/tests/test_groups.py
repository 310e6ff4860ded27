from __future__ import annotations

import math

import pytest

from nafourier.errors import DescriptorError, InvalidAutomorphism
from nafourier.groups import (
    automorphism_action,
    brute_force_classes,
    class_equation_holds,
    cyclic,
    flip,
    parse_group,
    product,
    semidirect_cyclic,
    signed_permutation,
    symmetric,
    wreath_cyclic,
)


def test_s3_classes():
    s3 = symmetric(3)
    assert sorted(s3.class_sizes) == [1, 2, 3]
    assert s3.class_sizes[0] == 1


def test_centralizer_of_double_transposition():
    s4 = symmetric(4)
    x = (1, 0, 3, 2)
    z = s4.centralizer(x)
    assert z.order == 8
    # independent scan
    assert sum(1 for g in s4.elements if s4.commutes(g, x)) == 8


def test_abelian_centralizer_is_whole_group():
    g = cyclic(6)
    assert all(g.centralizer(x).order == 6 for x in g.elements)


@pytest.mark.parametrize("ell", [2, 3, 4])
def test_flip_class_count(ell):
    assert flip(cyclic(ell)).num_classes == ell * (ell + 3) // 2


def test_flip_centralizer_of_twisted_element():
    gam = cyclic(3)
    big = flip(gam)
    x = (((1,), (0,)), 1)
    z = big.centralizer(x)
    # diagonal copy of Gamma together with x itself
    assert z.order == 2 * gam.order
    assert z.contains(x)
    assert all(z.contains(((g, g), 0)) for g in gam.elements)


@pytest.mark.parametrize("m,d", [(2, 2), (3, 2), (2, 3), (3, 3), (4, 2)])
def test_wreath_structural_classes_match_brute_force(m, d):
    w = wreath_cyclic(symmetric(m), d)
    assert w.order == math.factorial(m) ** d * d
    assert w.num_classes == len(brute_force_classes(w))
    assert class_equation_holds(w)


@pytest.mark.parametrize("m,d", [(2, 2), (3, 2), (3, 3)])
def test_wreath_generator_coset_matches_sm(m, d):
    w = wreath_cyclic(symmetric(m), d)
    in_coset = [r for r in w.class_reps if r[1] == 1]
    assert len(in_coset) == symmetric(m).num_classes


@pytest.mark.parametrize("desc", ["Z5", "Z2^3", "S4", "B3", "wreath(S3,2)", "flip(Z3)", "semidirect(Z5,inv,2)", "product(Z2,S3)"])
def test_class_equation_and_orbit_stabilizer(desc):
    g = parse_group(desc)
    assert class_equation_holds(g)
    for i, size in enumerate(g.class_sizes):
        assert size * g.centralizer_order(i) == g.order
        assert g.order % size == 0


def test_class_reps_are_minimal():
    for g in (symmetric(4), signed_permutation(2), flip(cyclic(2))):
        for idx, rep in enumerate(g.class_reps):
            assert rep == min(g.class_members(idx))


def test_automorphisms():
    z7 = cyclic(7)
    inv = automorphism_action(z7, lambda x: ((-x[0]) % 7,))
    assert inv.order == 2
    base = product(cyclic(2), cyclic(2), cyclic(2))
    shift = automorphism_action(base, lambda x: (x[2], x[0], x[1]))
    assert shift.order == 3
    assert semidirect_cyclic(z7, inv, 2).order == 14


def test_non_homomorphic_bijection_rejected():
    s3 = symmetric(3)
    elems = list(s3.elements)
    images = {x: x for x in elems}
    a, b = elems[1], elems[2]
    images[a], images[b] = b, a
    with pytest.raises(InvalidAutomorphism):
        automorphism_action(s3, images)


@pytest.mark.parametrize("bad", ["Q8", "S", "wreath(S3)", "Z0", "flip("])
def test_bad_descriptors(bad):
    with pytest.raises(DescriptorError):
        parse_group(bad)
