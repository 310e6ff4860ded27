from __future__ import annotations

import math
import shutil

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nafourier.affine import affine_diagram
from nafourier.chars import ClassFunction
from nafourier.elliptic import EllipticPairClass, affine_finite_order_classes, y_ell
from nafourier.errors import GoldenDataError, InvalidParameters
from nafourier.exactnum import CycNum, root_of_unity
from nafourier.fourier import pi_family
from nafourier.groups import permutation_sign
from nafourier.padic import (
    GOLDEN_ENV,
    CompactSpace,
    EllipticLabel,
    UnregisteredLabel,
    VirtualUnipotentChar,
    affine_restrict_oracle,
    classes_by_twist,
    compact_basis_sl,
    ft_cpt,
    ft_dual,
    golden_dir,
    induced_sign_twist,
    load_golden,
    pgl2_restriction_rows,
    pi_ush,
    res_sl,
    smax,
    sp4_packet,
    sp4_space,
    verify_pgl,
    verify_sl,
    verify_sp4,
    verify_steinberg,
)

# ---- maximal compact classes


def test_smax_sp4():
    classes = smax(affine_diagram("C", 2, "sc"))
    assert [c.quotient_type for c in classes] == [("C2",), ("C1", "C1"), ("C2",)]


def test_smax_pgl2_and_twists():
    classes = smax(affine_diagram("A", 1))
    assert [(c.a_order, c.orbit) for c in classes] == [(1, (0,)), (2, (0, 1))]
    by_twist = classes_by_twist(affine_diagram("A", 1))
    assert sorted(len(v) for v in by_twist.values()) == [1, 2]


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_smax_pgl_one_class_per_divisor(n):
    classes = smax(affine_diagram("A", n - 1))
    assert sorted(c.a_order for c in classes) == [m for m in range(1, n + 1) if n % m == 0]
    for c in classes:
        k = n // c.a_order
        assert c.quotient_type == ((f"A{k - 1}",) * c.a_order if k > 1 else ())


# ---- compact Fourier transform


def _k0_family():
    return next(f for f in sp4_space().families["K0"] if f.gamma.order == 2)


def test_sp4_family_combinations():
    fam = _k0_family()
    assert pi_family(fam, x=(0,), y=(0,)) == {"1x1": 1, "-x2": 1}
    assert pi_family(fam, x=(1,), y=(1,)) == {"11x-": 1, "theta": -1}
    assert fam.ft({"1x1": CycNum(1), "-x2": CycNum(-1)}) == {"11x-": 1, "theta": 1}


def test_ft_cpt_involution_and_unregistered_label():
    space = sp4_space()
    for v in space.basis():
        assert ft_cpt(space, ft_cpt(space, v)) == v
    with pytest.raises(UnregisteredLabel):
        ft_cpt(space, VirtualUnipotentChar({("K0", "nonsense"): CycNum(1)}))


@given(st.dictionaries(st.sampled_from(range(16)), st.integers(-4, 4), max_size=6))
def test_ft_cpt_is_linear_involution(coeffs):
    space = sp4_space()
    labels = space.labels()
    v = VirtualUnipotentChar({labels[i % len(labels)]: CycNum(c) for i, c in coeffs.items() if c})
    assert ft_cpt(space, ft_cpt(space, v)) == v
    assert ft_cpt(space, v + v) == ft_cpt(space, v) + ft_cpt(space, v)


# ---- elliptic labels and the dual transform


def test_ft_dual_examples():
    pgl = y_ell("PGL(5)")
    for c in pgl.classes:
        image = ft_dual(EllipticLabel("1", c), pgl)
        assert image.pair.data == (5, (-c.data[1]) % 5)
        assert ft_dual(image, pgl).pair == c
    o2 = y_ell("O2")
    dd = next(c for c in o2.classes if (c.s_label, c.h_label) == ("delta", "delta"))
    assert ft_dual(EllipticLabel("311", dd), o2).pair == dd
    center = y_ell("CENTER(4)")
    c = next(c for c in center.classes if (c.s_label, c.h_label) == ("z^1", "z^3"))
    assert (ft_dual(EllipticLabel("u", c), center).pair.s_label, ft_dual(EllipticLabel("u", c), center).pair.h_label) == ("z^3", "z^1")


def test_pi_ush_sp4_and_rejection():
    packet = sp4_packet()
    pair = next(c for c in packet.pairs.classes if (c.s_label, c.h_label) == ("1", "delta"))
    v = pi_ush("311", pair, packet)
    assert sorted(v.terms.values(), key=str) == sorted([CycNum(1), CycNum(-1)], key=str)
    assert set(v.terms) == {("s0:1",), ("s0:eps",)}
    assert v.coefficient(("s0:1",)) == 1 and v.coefficient(("s0:eps",)) == -1
    with pytest.raises(InvalidParameters):
        pi_ush("311", EllipticPairClass("O2", "1", "1"), packet)


# ---- SL_n restriction


@pytest.mark.parametrize("n", range(2, 7))
def test_res_sl_d1_is_sign(n):
    res = res_sl(n, 1, 0, 0)
    sym = res.group
    assert sym.order == math.factorial(n)
    assert res == ClassFunction(sym, tuple(permutation_sign(r) for r in sym.class_reps))


@pytest.mark.parametrize("n", range(2, 8))
def test_regular_induced_degree(n):
    # Ind from the cyclic group of order n has degree n!/n
    assert induced_sign_twist(n, n, 0).degree == math.factorial(n) // n
    assert res_sl(n, n, 1, 0).degree == sum(root_of_unity(n, ell) for ell in range(n)) * (math.factorial(n) // n)


@pytest.mark.parametrize("n,d", [(4, 2), (6, 3), (6, 2), (8, 4)])
def test_induced_twists_are_contragredient(n, d):
    for ell in range(d):
        assert induced_sign_twist(n, d, ell) == induced_sign_twist(n, d, (-ell) % d)


@pytest.mark.parametrize("n", range(2, 8))
def test_shift_covariance(n):
    for d in range(1, n + 1):
        if n % d:
            continue
        m = n // d
        for k in range(d):
            if math.gcd(k, d) != 1:
                continue
            for i in range(n):
                assert res_sl(n, d, k, i) == res_sl(n, d, k, 0) * root_of_unity(d, (-k * (i // m)) % d)


def test_verify_sl_examples():
    assert verify_sl(2).ok
    report = verify_sl(4)
    assert report.ok
    check = next(c for c in report.checks if c.check_id.startswith("sl.n04.d04.k03.i01") and not c.check_id.endswith("shift"))
    assert check.scalar == CycNum(-1)
    assert verify_sl(6).ok


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_oracle_at_base_vertex_is_plain_induction(n):
    for d in range(1, n + 1):
        if n % d == 0:
            for ell in range(d):
                assert affine_restrict_oracle(n, d, ell, 0) == induced_sign_twist(n, d, ell)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_oracle_matches_closed_form(n):
    """The affine induction oracle against the closed-form phi-shift floor(i/m)."""
    mismatches = []
    for d in range(1, n + 1):
        if n % d:
            continue
        m = n // d
        for ell in range(d):
            for i in range(n):
                if affine_restrict_oracle(n, d, ell, i) != induced_sign_twist(n, d, (ell + i // m) % d):
                    mismatches.append((d, ell, i))
    assert not mismatches


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_oracle_shift_by_vertex_index(n):
    for d in range(1, n + 1):
        if n % d == 0:
            for ell in range(d):
                for i in range(n):
                    assert affine_restrict_oracle(n, d, ell, i) == induced_sign_twist(n, d, (ell + i) % d)


# ---- PGL_n and the Steinberg family


def test_pgl2_rows():
    rows = pgl2_restriction_rows()
    assert {k: {a: str(b) for a, b in v.items()} for k, v in rows.items()} == {
        ("1", "1"): {"St_K0": "1", "St_I": "1", "St_I'": "1"},
        ("1", "-1"): {"St_K0": "1", "St_I": "1", "St_I'": "-1"},
        ("-1", "1"): {"St_K0": "1", "St_I(x)sgn": "1", "St_I'(x)sgn": "1"},
        ("-1", "-1"): {"St_K0": "1", "St_I(x)sgn": "1", "St_I'(x)sgn": "-1"},
    }


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_verify_steinberg(n):
    report = verify_pgl(n)
    assert report.ok
    assert all(c.scalar == 1 for c in report.checks if c.check_id.startswith("steinberg") and ".ft2." not in c.check_id)


def test_steinberg_trivial_a_class():
    report = verify_steinberg(3, "K0")
    assert report.ok and report.checks


# ---- Sp_4 golden data


def test_sp4_verification():
    report = verify_sp4()
    assert report.ok
    flips = [c for c in report.checks if c.check_id.startswith("sp4.flip.")]
    assert len(flips) == 6
    table2 = load_golden("sp4_table2.csv")
    assert sum(len(v.terms) for v in table2.values()) == 48


def test_corrupted_golden_data(tmp_path, monkeypatch):
    for f in golden_dir().iterdir():
        if f.is_file():
            shutil.copy(f, tmp_path / f.name)
    path = tmp_path / "sp4_table1.csv"
    path.write_text(path.read_text().replace("theta,1", "theta,2", 1))
    monkeypatch.setenv(GOLDEN_ENV, str(tmp_path))
    assert golden_dir() == tmp_path
    with pytest.raises(GoldenDataError):
        verify_sp4()


# ---- compact basis


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_compact_basis_prime(p):
    basis = compact_basis_sl(p)
    assert len(basis.elliptic_labels) == p
    assert basis.flip_is_involution()


def test_compact_basis_dimension_n2():
    assert len(compact_basis_sl(2).labels) == affine_finite_order_classes(2, 3)
