from __future__ import annotations


import pytest
from hypothesis import given
from hypothesis import strategies as st

from nafourier.chars import (
    ClassFunction,
    char_table,
    induce,
    inner_product,
    mackey_data,
    mn_character,
    permutation_character,
    regular_character,
    restrict,
    trivial_character,
)
from nafourier.exactnum import CycNum, root_of_unity
from nafourier.groups import (
    cyclic,
    elementary_abelian_2,
    flip,
    parse_group,
    partitions,
    permutation_sign,
    subgroup,
    symmetric,
    wreath_cyclic,
)


def test_klein_four_table():
    t = char_table(elementary_abelian_2(2))
    assert len(t) == 4
    assert all(v in (CycNum(1), CycNum(-1)) for r in t.rows for v in r.values)


def test_s3_table():
    t = char_table(symmetric(3))
    assert t.labels == [(3,), (2, 1), (1, 1, 1)]
    assert [r.degree for r in t.degrees()] if False else t.degrees() == [1, 2, 1]


def test_s5_degrees_and_brute_force_characters():
    s5 = symmetric(5)
    t = char_table(s5)
    assert sorted(int(d.to_fraction()) for d in t.degrees()) == sorted([1, 4, 5, 6, 5, 4, 1])
    assert sum(int(d.to_fraction()) ** 2 for d in t.degrees()) == 120
    # permutation character minus trivial is the (4,1) row
    perm = permutation_character(s5, lambda x: x)
    assert perm - trivial_character(s5) == t.row((4, 1))
    # sign row from the permutation sign
    sign = ClassFunction(s5, tuple(permutation_sign(r) for r in s5.class_reps))
    assert sign == t.row((1, 1, 1, 1, 1))


def test_murnaghan_nakayama_against_determinant_formula():
    # chi_(n-1,1)(w) = fixed points - 1
    for n in range(2, 7):
        for shape in partitions(n):
            fixed = shape.count(1)
            assert mn_character((n - 1, 1), shape) == fixed - 1


@pytest.mark.parametrize("desc", ["Z6", "S4", "B2", "B3", "flip(Z3)", "wreath(S3,2)", "semidirect(Z7,pow2,3)", "product(Z2,S3)"])
def test_orthogonality(desc):
    t = char_table(parse_group(desc))
    assert len(t) == t.group.num_classes
    assert t.row_orthonormal()
    assert t.column_orthogonal()


def test_mackey_rows_for_s3():
    s3 = symmetric(3)
    data = mackey_data(s3, subgroup(s3, [(1, 2, 0)]))
    table = data.table()
    assert sorted(int(r.degree.to_fraction()) for r in table.rows) == [1, 1, 2]
    reference = char_table(s3)
    assert sorted(map(str, (r.values for r in table.rows))) == sorted(map(str, (r.values for r in reference.rows)))


def test_mackey_rows_for_flip():
    big = flip(cyclic(2))
    normal = subgroup(big, [(((1,), (0,)), 0), (((0,), (1,)), 0)])
    table = mackey_data(big, normal).table()
    assert len(table.rows) == big.num_classes == 5
    assert table.row_orthonormal()


@pytest.mark.parametrize("m,d", [(2, 2), (3, 2), (2, 3)])
def test_wreath_sign_twist_row(m, d):
    w = wreath_cyclic(symmetric(m), d)
    t = char_table(w)
    for ell in range(d):
        values = []
        for x in w.class_reps:
            hs, a = x
            s = 1
            for h in hs:
                s *= permutation_sign(h)
            values.append(root_of_unity(d, ell * a) * s)
        assert ClassFunction(w, tuple(values)) in t.rows


def test_induction_examples():
    s3 = symmetric(3)
    a3 = subgroup(s3, [(1, 2, 0)])
    triv = trivial_character(a3)
    table = char_table(s3)
    assert induce(triv, s3) == table.row((3,)) + table.row((1, 1, 1))
    one = subgroup(s3, [])
    assert induce(trivial_character(one), s3) == regular_character(s3)
    reg = restrict(regular_character(s3), a3)
    assert reg == regular_character(a3) * 2
    std = restrict(table.row((2, 1)), a3)
    nontriv = [r for r in char_table(a3).rows if r != trivial_character(a3)]
    assert std == nontriv[0] + nontriv[1]


@given(st.data())
def test_frobenius_reciprocity(data):
    s4 = symmetric(4)
    gens = data.draw(st.sampled_from([[(1, 0, 2, 3)], [(1, 2, 0, 3)], [(1, 0, 3, 2), (2, 3, 0, 1)], [(1, 2, 3, 0)]]))
    sub = subgroup(s4, gens)
    chi = data.draw(st.sampled_from(char_table(sub).rows))
    psi = data.draw(st.sampled_from(char_table(s4).rows))
    assert inner_product(induce(chi, s4), psi) == inner_product(chi, restrict(psi, sub))
