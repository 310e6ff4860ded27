from __future__ import annotations

import pytest

from nafourier.affine import affine_diagram, parse_diagram, subgroups
from nafourier.elliptic import weyl_elliptic_class_count
from nafourier.errors import DescriptorError

COXETER = {("A", 1): 2, ("A", 4): 5, ("B", 2): 4, ("B", 4): 8, ("C", 2): 4, ("C", 3): 6, ("D", 4): 6, ("D", 5): 8,
           ("E", 6): 12, ("E", 7): 18, ("E", 8): 30, ("F", 4): 12, ("G", 2): 6}

OMEGA_ADJOINT = {("A", 1): 2, ("A", 4): 5, ("B", 2): 2, ("B", 4): 2, ("C", 2): 2, ("C", 3): 2, ("D", 4): 4, ("D", 5): 4,
                 ("E", 6): 3, ("E", 7): 2, ("E", 8): 1, ("F", 4): 1, ("G", 2): 1}


@pytest.mark.parametrize("kind,rank", sorted(COXETER))
def test_marks_sum_to_coxeter_number(kind, rank):
    d = affine_diagram(kind, rank)
    assert d.marks[0] == 1
    assert sum(d.marks) == COXETER[(kind, rank)]


@pytest.mark.parametrize("kind,rank", sorted(OMEGA_ADJOINT))
def test_omega_order(kind, rank):
    d = affine_diagram(kind, rank, "adjoint")
    assert len(d.omega) == OMEGA_ADJOINT[(kind, rank)]
    assert all(d.preserves_structure(w) for w in d.omega)
    # Omega preserves the marks
    assert all(d.marks[w[i]] == d.marks[i] for w in d.omega for i in d.nodes)
    assert len(affine_diagram(kind, rank, "sc").omega) == 1


def test_klein_versus_cyclic_for_type_d():
    even = affine_diagram("D", 4)
    odd = affine_diagram("D", 5)
    ident = tuple(even.nodes)
    assert all(tuple(w[w[i]] for i in even.nodes) == ident for w in even.omega)
    assert any(tuple(w[w[i]] for i in odd.nodes) != tuple(odd.nodes) for w in odd.omega)


@pytest.mark.parametrize("kind,rank", sorted(COXETER))
def test_affine_cartan_matrix_is_singular_with_marks_kernel(kind, rank):
    d = affine_diagram(kind, rank)
    if rank == 1:
        pytest.skip("rank one uses the infinite bond")
    c = d.cartan_matrix()
    # the marks (coroot form) or their transpose annihilate the affine Cartan matrix
    rows = [sum(c[i][j] * d.marks[j] for j in d.nodes) for i in d.nodes]
    cols = [sum(d.marks[i] * c[i][j] for i in d.nodes) for j in d.nodes]
    assert not any(cols) or not any(rows)


# elliptic class counts of finite Weyl groups: B_n has p(n), D_4 has 3, F_4 has 9, G_2 has 3
@pytest.mark.parametrize(
    "kind,rank,drop,count", [("A", 3, 0, 1), ("B", 2, 0, 2), ("B", 3, 0, 3), ("D", 4, 0, 3), ("F", 4, 0, 9), ("G", 2, 0, 3), ("C", 3, 0, 3)]
)
def test_finite_weyl_elliptic_counts(kind, rank, drop, count):
    d = affine_diagram(kind, rank)
    keep = tuple(i for i in d.nodes if i != drop)
    assert weyl_elliptic_class_count(d.cartan_matrix(keep)) == count


def test_component_types():
    c2 = affine_diagram("C", 2, "sc")
    assert c2.component_type((1, 2)) == "C2"
    assert [c2.component_type(c) for c in c2.components({0, 2})] == ["C1", "C1"]
    assert affine_diagram("B", 3).component_type((1, 2, 3)) == "B3"
    assert affine_diagram("E", 6).component_type(tuple(range(1, 7))) == "E6"
    assert affine_diagram("G", 2).component_type((1, 2)) == "G2"


def test_parse_diagram():
    assert parse_diagram("A(3)").label == affine_diagram("A", 3).label
    assert parse_diagram("E6").rank == 6
    assert parse_diagram("C", 2, "sc").isogeny == "sc"
    for bad in ["", "A", "Ax"]:
        with pytest.raises(DescriptorError):
            parse_diagram(bad)


def test_subgroups_of_cyclic_group():
    d = affine_diagram("A", 5)
    # Z/6 has one subgroup per divisor
    assert sorted(len(s) for s in subgroups(d.omega)) == [1, 2, 3, 6]
