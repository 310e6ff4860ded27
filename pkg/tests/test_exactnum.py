from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nafourier.exactnum import (
    CycNum,
    cyc_matmul,
    cyc_sum,
    determinant,
    euler_phi,
    is_identity,
    rank,
    root_of_unity,
    solve_scalar,
)
from strategies import cycnums, nonzero_cycnums

z = root_of_unity


def test_root_of_unity_values():
    assert z(4, 2) == -1
    assert z(3, 1) + z(3, 2) == -1
    assert z(1, 0) == 1


def test_arithmetic_examples():
    assert z(8) * z(8, 3) == -1
    assert Fraction(1, 2) * (1 + z(2)) == 0
    assert z(6) ** 3 == -1
    # zeta_6 - zeta_3 equals 1 since zeta_6 = 1 + zeta_3
    assert z(6) - z(3) == 1


def test_conjugate_examples():
    assert z(3).conjugate() == z(3, 2)
    assert CycNum(Fraction(1, 2)).conjugate() == Fraction(1, 2)
    x = z(5) + z(5, 4)
    assert x.conjugate() == x


def test_canonical_form_across_conductors():
    assert z(3) == z(6, 2) == z(12, 4)
    assert hash(z(3)) == hash(z(12, 4))
    assert z(4) ** 2 == CycNum(-1)
    assert str(z(4) ** 2) == "-1"


def test_euler_phi():
    assert [euler_phi(n) for n in range(1, 13)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    for n in range(1, 30):
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        assert sum(euler_phi(d) for d in divisors) == n


def test_as_root_of_unity():
    assert z(12, 5).as_root_of_unity() == (12, 5)
    assert CycNum(-1).as_root_of_unity() == (2, 1)
    assert CycNum(2).as_root_of_unity() is None


def test_matrix_helpers():
    m = [[z(4), CycNum(0)], [CycNum(0), z(4, 3)]]
    assert is_identity(cyc_matmul(m, [[z(4, 3), CycNum(0)], [CycNum(0), z(4)]]))
    assert determinant([[1, 2], [3, 4]]) == -2
    assert rank([[1, 2], [2, 4]]) == 1
    assert solve_scalar([z(3), CycNum(1)], [CycNum(1), z(3, 2)]) == z(3)
    assert solve_scalar([CycNum(1), CycNum(1)], [CycNum(1), CycNum(2)]) is None


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        CycNum(1) / CycNum(0)


@given(cycnums(), cycnums(), cycnums())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@given(nonzero_cycnums)
def test_inverse(a):
    assert a * a.inverse() == 1


@given(cycnums(), cycnums())
def test_conjugation_is_a_field_automorphism(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.conjugate().conjugate() == a
    norm = a * a.conjugate()
    assert norm.conjugate() == norm


@given(cycnums(), st.sampled_from([1, 5, 7, 11]))
def test_galois_is_multiplicative(a, k):
    assert (a * a).galois(k) == a.galois(k) * a.galois(k)


@given(cycnums())
def test_json_round_trip(a):
    data = json.loads(json.dumps(a.to_json()))
    assert CycNum.from_json(data) == a
    assert CycNum.from_json(data).to_json() == a.to_json()


@given(st.lists(cycnums(), max_size=6))
def test_cyc_sum_matches_fold(values):
    total = CycNum(0)
    for v in values:
        total = total + v
    assert cyc_sum(values) == total
