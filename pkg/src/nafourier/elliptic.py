"""Elliptic pairings, elliptic classes and elliptic pairs of commuting semisimple elements."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Sequence

import numpy as np

from .affine import AffineDiagramData
from .chars import ClassFunction, MackeyData, char_table, mackey_data
from .errors import DescriptorError, InvalidParameters, SizeLimitExceeded, UnsupportedConstruction
from .exactnum import ONE, ZERO, CycNum, as_cyc, cyc_matmul, cyc_sum, determinant, euler_phi, rank
from .fourier import canonical_pair, commuting_pair_reps
from .groups import (
    Element,
    FiniteGroup,
    SemidirectCyclic,
    SignedPermutationGroup,
    SymmetricGroup,
    WreathCyclic,
    automorphism_action,
    cyclic,
    partitions,
    symmetric,
)
from .report import Check, make_check

Matrix = list[list[CycNum]]

# ---- representations delta ------------------------------------------------------------


@dataclass(eq=False)
class DeltaRep:
    """A finite-dimensional representation of ``group`` given by an element -> matrix rule."""

    group: FiniteGroup
    dim: int
    action: Callable[[Element], Sequence[Sequence]]
    name: str = "delta"
    _matrices: dict = field(default_factory=dict, init=False, repr=False)
    _dets: dict = field(default_factory=dict, init=False, repr=False)

    def matrix(self, x: Element) -> Matrix:
        m = self._matrices.get(x)
        if m is None:
            m = [[as_cyc(v) for v in row] for row in self.action(x)]
            if len(m) != self.dim or any(len(row) != self.dim for row in m):
                raise InvalidParameters(f"{self.name}: matrix of wrong size for {self.group.format_element(x)}")
            self._matrices[x] = m
        return m

    @property
    def matrices(self) -> dict[Element, Matrix]:
        return {x: self.matrix(x) for x in self.group.elements}

    def det_one_minus(self, x: Element) -> CycNum:
        """det(1 - delta(x)); the empty determinant is 1."""
        d = self._dets.get(x)
        if d is None:
            if self.dim == 0:
                d = ONE
            else:
                m = self.matrix(x)
                d = determinant([[(1 if i == j else 0) - m[i][j] for j in range(self.dim)] for i in range(self.dim)])
            self._dets[x] = d
        return d

    def class_dets(self) -> list[CycNum]:
        return [self.det_one_minus(r) for r in self.group.class_reps]

    def is_elliptic(self, x: Element) -> bool:
        return bool(self.det_one_minus(x))

    def validate(self) -> None:
        """Check delta(1) = 1 and delta(a s) = delta(a) delta(s) for every element a and generator s."""
        g = self.group
        ident = [[ONE if i == j else ZERO for j in range(self.dim)] for i in range(self.dim)]
        if self.matrix(g.identity) != ident:
            raise InvalidParameters(f"{self.name}: identity does not act trivially")
        if self.dim == 0:
            return
        for a in g.elements:
            for s in g.generators:
                if self.matrix(g.mul(a, s)) != cyc_matmul(self.matrix(a), self.matrix(s)):
                    raise InvalidParameters(
                        f"{self.name} is not multiplicative at ({g.format_element(a)}, {g.format_element(s)})"
                    )


def trivial_delta(group: FiniteGroup) -> DeltaRep:
    return DeltaRep(group, 0, lambda x: [], "zero")


def linear_delta(chi: ClassFunction | Callable[[Element], CycNum], group: FiniteGroup | None = None) -> DeltaRep:
    """One-dimensional delta from a linear character."""
    if isinstance(chi, ClassFunction):
        group = chi.group
    if group is None:
        raise InvalidParameters("a group is needed for a plain callable")
    return DeltaRep(group, 1, lambda x: [[chi(x)]], "linear")


def sum_zero_matrix(perm: Sequence[int]) -> list[list[int]]:
    """Matrix of a permutation on the sum-zero subspace, basis e_k - e_{k+1}."""
    n = len(perm)
    return [[int(perm[k] <= j) - int(perm[k + 1] <= j) for k in range(n - 1)] for j in range(n - 1)]


def permutation_delta(group: FiniteGroup, action: Callable[[Element], Sequence[int]], name: str = "sum-zero") -> DeltaRep:
    npoints = len(action(group.identity))
    return DeltaRep(group, max(npoints - 1, 0), lambda x: sum_zero_matrix(action(x)), name)


def reflection_delta(group: SymmetricGroup) -> DeltaRep:
    return permutation_delta(group, lambda x: x, f"reflection(S{group.n})")


def signed_permutation_delta(group: SignedPermutationGroup) -> DeltaRep:
    return DeltaRep(group, group.n, group.matrix, f"reflection(B{group.n})")


def wreath_sum_zero_delta(group: WreathCyclic) -> DeltaRep:
    """S_m^d x| Z/d acting on the sum-zero part of its md points."""
    return permutation_delta(group, group.as_permutation, f"sum-zero({group.descriptor})")


def monomial_delta(group: WreathCyclic, chi: Callable[[Element], CycNum]) -> DeltaRep:
    """(h; a) -> D(h) P^a with P e_t = e_{t+a} and D(h) = diag(chi(h_t))."""
    d = group.d

    def action(x: tuple) -> list[list[CycNum]]:
        h, a = x
        m = [[ZERO] * d for _ in range(d)]
        for col in range(d):
            row = (col + a) % d
            m[row][col] = as_cyc(chi(h[row]))
        return m

    return DeltaRep(group, d, action, f"monomial({group.descriptor})")


def restrict_delta(delta: DeltaRep, sub: FiniteGroup, embed: Callable[[Element], Element] | None = None) -> DeltaRep:
    f = embed or (lambda x: x)
    return DeltaRep(sub, delta.dim, lambda x: delta.matrix(f(x)), f"{delta.name}|{sub.descriptor}")


# ---- pairings -------------------------------------------------------------------------


def elliptic_pairing(f: ClassFunction, f2: ClassFunction, delta: DeltaRep) -> CycNum:
    """(1/|H|) sum_h det(1 - delta(h)) conj(f(h)) f2(h)."""
    if f.group is not f2.group or delta.group is not f.group:
        raise InvalidParameters("class functions and delta must live on the same group")
    g = f.group
    terms = [
        size * det * a.conjugate() * b
        for size, det, a, b in zip(g.class_sizes, delta.class_dets(), f.values, f2.values)
        if det and a and b
    ]
    return cyc_sum(terms) / g.order


def twisted_elliptic_pairing(
    f: Callable[[Element], CycNum],
    f2: Callable[[Element], CycNum],
    delta: DeltaRep,
    theta: Element,
    normal: FiniteGroup,
) -> CycNum:
    """(1/|H|) sum over y in theta*H of det(1 - delta(y)) conj(f(y)) f2(y); delta lives on the bigger group."""
    big = delta.group
    terms = []
    for h in normal.elements:
        y = big.mul(theta, h)
        det = delta.det_one_minus(y)
        if det:
            a, b = as_cyc(f(y)), as_cyc(f2(y))
            if a and b:
                terms.append(det * a.conjugate() * b)
    return cyc_sum(terms) / normal.order


def elliptic_classes(group: FiniteGroup, delta: DeltaRep) -> list[Element]:
    if delta.group is not group:
        raise InvalidParameters("delta lives on a different group")
    return [r for r, d in zip(group.class_reps, delta.class_dets()) if d]


def elliptic_gram(delta: DeltaRep) -> Matrix:
    table = char_table(delta.group)
    return [[elliptic_pairing(a, b, delta) for b in table.rows] for a in table.rows]


def elliptic_quotient_dimension(delta: DeltaRep) -> int:
    """Rank of the elliptic Gram matrix on irreducible characters."""
    return rank(elliptic_gram(delta))


def indicator(group: FiniteGroup, x: Element) -> ClassFunction:
    idx = group.class_index(x)
    return ClassFunction(group, tuple(ONE if i == idx else ZERO for i in range(group.num_classes)))


@dataclass(frozen=True)
class EllBasisVector:
    h: Element
    pi: ClassFunction = field(compare=False)
    centralizer_order: int


def ell_basis(component: FiniteGroup, delta: DeltaRep) -> list[EllBasisVector]:
    """Pi(s, h) = sum_phi phi(h) phi for each delta-elliptic class h of the component group."""
    table = char_table(component)
    out = []
    for h in elliptic_classes(component, delta):
        values = [cyc_sum(row(h) * row.values[c] for row in table.rows) for c in range(component.num_classes)]
        out.append(EllBasisVector(h, ClassFunction(component, tuple(values)), component.centralizer_order(component.class_index(h))))
    return out


def ell_basis_checks(component: FiniteGroup, delta: DeltaRep, prefix: str = "ell-basis") -> list[Check]:
    """Pi(s,h) = |Z(h)| 1_{h^-1}, the stable norm and orthogonality of the 1_h basis."""
    checks = []
    basis = ell_basis(component, delta)
    topic = "elliptic basis"
    for v in basis:
        tag = f"{prefix}.{component.format_element(v.h)}"
        hinv = component.inv(v.h)
        expected = indicator(component, hinv) * v.centralizer_order
        checks.append(make_check(f"{tag}.indicator", "Pi(s,h) equals |Z(h)| times the indicator of h^-1", topic, v.pi == expected))
        norm = elliptic_pairing(v.pi, v.pi, delta)
        target = delta.det_one_minus(hinv) * v.centralizer_order
        checks.append(make_check(f"{tag}.norm", "stable norm |Z(h)| det(1 - delta(h^-1))", topic, norm == target, norm, target))
    for a, b in itertools.combinations(elliptic_classes(component, delta), 2):
        val = elliptic_pairing(indicator(component, a), indicator(component, b), delta)
        checks.append(
            make_check(
                f"{prefix}.orth.{component.format_element(a)}.{component.format_element(b)}",
                "indicators of distinct elliptic classes are orthogonal",
                topic,
                val == 0,
                val,
                0,
            )
        )
    dim = elliptic_quotient_dimension(delta)
    count = len(elliptic_classes(component, delta))
    checks.append(
        make_check(f"{prefix}.rank", "Gram rank equals the number of elliptic classes", "elliptic quotient", dim == count, dim, count)
    )
    return checks


def gram_rank_check(delta: DeltaRep, check_id: str) -> Check:
    dim = elliptic_quotient_dimension(delta)
    count = len(elliptic_classes(delta.group, delta))
    return make_check(
        check_id, f"Gram rank equals elliptic class count for {delta.name}", "elliptic quotient", dim == count, dim, count
    )


# ---- the Mackey comparison ------------------------------------------------------------


def mackey_elliptic_checks(group: FiniteGroup, normal: FiniteGroup, delta: DeltaRep, prefix: str = "mackey") -> list[Check]:
    """Compare the elliptic pairing of sigma x| tau_gamma rows with the sum of twisted pairings over H.

    Each sigma x| tau_{sigma,gamma} is the delta function of gamma on the
    stabilizer, combined from the Mackey rows; the right side sums the twisted
    pairings of all conjugates of the twisted traces over the coset of gamma.
    """
    md: MackeyData = mackey_data(group, normal)
    c = md.c
    checks = []
    topic = "Mackey comparison"

    def conj_fn(label: Hashable, t: int) -> Callable[[Element], CycNum]:
        g_t = group.power(md.generator, t)
        return lambda y: md.extension(label, group.conj(g_t, y))

    def delta_row(label: Hashable, e: int) -> ClassFunction:
        r = md.orbit_length[label]
        m = c // r
        j0 = e // r
        total = None
        for u in range(m):
            vals = tuple(md.row_value(label, u, x) for x in group.class_reps)
            weight = CycNum.rational(1, m) * _root(m, -u * j0)
            term = ClassFunction(group, vals) * weight
            total = term if total is None else total + term
        return total

    for s1, s2 in itertools.product(md.orbit_reps, repeat=2):
        r1, r2 = md.orbit_length[s1], md.orbit_length[s2]
        for e1 in range(0, c, r1):
            for e2 in range(0, c, r2):
                lhs = elliptic_pairing(delta_row(s1, e1), delta_row(s2, e2), delta)
                if e1 != e2:
                    rhs = ZERO
                else:
                    theta = group.power(md.generator, e1)
                    rhs = cyc_sum(
                        twisted_elliptic_pairing(conj_fn(s1, t1), conj_fn(s2, t2), delta, theta, normal)
                        for t1 in range(r1)
                        for t2 in range(r2)
                    ) / c
                checks.append(
                    make_check(
                        f"{prefix}.{_tag(s1)}.{_tag(s2)}.g{e1}.g{e2}",
                        "elliptic pairing of Mackey rows equals the coset sum of twisted pairings",
                        topic,
                        lhs == rhs,
                        lhs,
                        rhs,
                    )
                )
    return checks


def _tag(label: Hashable) -> str:
    return re.sub(r"[^0-9A-Za-z]+", "", str(label)) or "0"


def _root(n: int, k: int) -> CycNum:
    from .exactnum import root_of_unity

    return root_of_unity(n, k % n)


def mackey_comparison_cases() -> list[tuple[str, FiniteGroup, FiniteGroup, DeltaRep]]:
    """Z/3 in S_3 with the reflection representation, and Gamma^2 in flip(Gamma) for Gamma = Z/2, Z/4."""
    from .groups import flip, subgroup

    s3 = symmetric(3)
    cases = [("Z3<S3", s3, subgroup(s3, [(1, 2, 0)]), reflection_delta(s3))]
    for n in (2, 4):
        gam = cyclic(n)
        big = flip(gam)
        ident = gam.identity
        normal = subgroup(big, [((g, ident), 0) for g in gam.generators] + [((ident, g), 0) for g in gam.generators])
        delta = monomial_delta(big, lambda h, n=n: _root(n, h[0]))
        cases.append((f"Z{n}^2<flip(Z{n})", big, normal, delta))
    return cases


# ---- wreath products S_m^d x| Z/d -------------------------------------------------------


def _sum_zero_dets(perms: np.ndarray) -> np.ndarray:
    """det(1 - P) on the sum-zero subspace for a batch of permutations, as exact integers."""
    batch, n = perms.shape
    if n == 1:
        return np.ones(batch, dtype=np.int64)
    j = np.arange(n - 1)
    left = (perms[:, None, :-1] <= j[None, :, None]).astype(np.int64)
    right = (perms[:, None, 1:] <= j[None, :, None]).astype(np.int64)
    mats = np.eye(n - 1, dtype=np.int64)[None] - (left - right)
    dets = np.linalg.det(mats.astype(float))
    rounded = np.rint(dets)
    if np.max(np.abs(dets - rounded), initial=0.0) > 1e-6:
        raise ArithmeticError("determinant scan lost integrality")
    return rounded.astype(np.int64)


def wreath_group(m: int, d: int) -> WreathCyclic:
    if m < 1 or d < 1:
        raise InvalidParameters("m and d must be positive")
    return WreathCyclic(symmetric(m), d, descriptor=f"wreath(S{m},{d})")


def elliptic_classes_wreath(m: int, d: int) -> list[tuple]:
    """Representatives (w_m, 1, ..., 1; a) with a a unit mod d, w_m the standard m-cycle."""
    group = wreath_group(m, d)
    ident = group.base.identity
    w_m = tuple((i + 1) % m for i in range(m))
    reps = [((w_m,) + (ident,) * (d - 1), a % d) for a in range(d) if math.gcd(a, d) == 1]
    return reps


def wreath_elliptic_structural(m: int, d: int) -> list[tuple]:
    """Elliptic class representatives found by scanning the structural class list."""
    group = wreath_group(m, d)
    reps = group.class_reps
    perms = np.array([group.as_permutation(x) for x in reps], dtype=np.int64)
    dets = _sum_zero_dets(perms)
    return [x for x, v in zip(reps, dets) if v != 0]


def wreath_elliptic_bruteforce(m: int, d: int, limit: int = 10**5) -> int:
    """Count elliptic classes by a determinant scan over all elements and union-find conjugacy."""
    group = wreath_group(m, d)
    if group.order > limit:
        raise SizeLimitExceeded(f"wreath(S{m},{d}) has {group.order} elements")
    elems = list(group.elements)
    perms = np.array([group.as_permutation(x) for x in elems], dtype=np.int64)
    dets = _sum_zero_dets(perms)
    ell = [x for x, v in zip(elems, dets) if v != 0]
    parent = {x: x for x in ell}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in ell:
        for s in group.generators:
            y = group.conj(s, x)
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    return len({find(x) for x in ell})


def wreath_checks(m: int, d: int, limit: int = 10**5) -> list[Check]:
    group = wreath_group(m, d)
    reps = elliptic_classes_wreath(m, d)
    structural = wreath_elliptic_structural(m, d)
    topic = "wreath elliptic classes"
    tag = f"wreath.m{m}.d{d}"
    rep_classes = sorted(group.class_index(x) for x in reps)
    struct_classes = sorted(group.class_index(x) for x in structural)
    checks = [
        make_check(f"{tag}.count", "number of representatives is phi(d)", topic, len(reps) == euler_phi(d), len(reps), euler_phi(d)),
        make_check(
            f"{tag}.structural", "representatives hit exactly the elliptic structural classes", topic, rep_classes == struct_classes,
            len(struct_classes), len(set(rep_classes)),
        ),
    ]
    size = math.factorial(m) ** d * d
    if size <= limit:
        brute = wreath_elliptic_bruteforce(m, d, limit)
        checks.append(make_check(f"{tag}.bruteforce", "element-level determinant scan agrees", topic, brute == euler_phi(d), brute, euler_phi(d)))
    return checks


# ---- elliptic pairs in reductive groups -----------------------------------------------


@dataclass(frozen=True, order=True)
class ReductiveDescriptor:
    kind: str
    n: int = 0
    partition: tuple[int, ...] = ()
    group: FiniteGroup | None = field(default=None, compare=False, hash=False)

    def __str__(self) -> str:
        if self.kind in ("PGL", "CENTER"):
            return f"{self.kind}({self.n})"
        if self.kind in ("SL_dual", "PGL_centralizer"):
            return f"{self.kind}({','.join(map(str, self.partition))})"
        if self.kind == "custom" and self.group is not None:
            return f"custom({self.group.descriptor})"
        return self.kind


@dataclass(frozen=True, order=True)
class EllipticPairClass:
    ambient: str
    s_label: str
    h_label: str
    data: tuple = ()

    def __str__(self) -> str:
        return f"{self.ambient}:[({self.s_label},{self.h_label})]"


@dataclass
class EllipticPairs:
    descriptor: ReductiveDescriptor
    classes: list[EllipticPairClass]
    flip: dict[EllipticPairClass, EllipticPairClass]

    def flip_is_involution(self) -> bool:
        return all(self.flip[self.flip[c]] == c for c in self.classes) and set(self.flip) == set(self.classes)

    def to_dict(self) -> dict:
        return {
            "descriptor": str(self.descriptor),
            "classes": [[c.s_label, c.h_label] for c in self.classes],
            "flip": {f"({c.s_label},{c.h_label})": f"({v.s_label},{v.h_label})" for c, v in self.flip.items()},
        }


def parse_descriptor(text: str) -> ReductiveDescriptor:
    """``PGL(6)``, ``PGL6``, ``SL_dual(4)``, ``PGL_centralizer(2,2)``, ``CENTER(3)`` or ``O2``."""
    t = text.strip().replace(" ", "")
    if t.upper() == "O2":
        return ReductiveDescriptor("O2")
    m = re.fullmatch(r"(PGL|CENTER|SL_dual|PGL_centralizer)\(?([0-9,]+)\)?", t)
    if not m:
        raise DescriptorError(f"unsupported reductive descriptor {text!r}")
    kind, args = m.group(1), [int(v) for v in m.group(2).split(",") if v]
    if not args or any(v < 1 for v in args):
        raise DescriptorError(f"bad parameters in {text!r}")
    if kind in ("PGL", "CENTER"):
        if len(args) != 1:
            raise DescriptorError(f"{kind} takes one integer")
        return ReductiveDescriptor(kind, args[0])
    part = tuple(sorted(args, reverse=True))
    return ReductiveDescriptor(kind, sum(part), part)


def rectangular_shape(partition: Sequence[int]) -> tuple[int, int] | None:
    """(d, m) if the partition is m repeated d times."""
    if not partition or len(set(partition)) != 1:
        return None
    return len(partition), partition[0]


def _pgl_pairs(n: int, ambient: str) -> EllipticPairs:
    desc = ReductiveDescriptor("PGL", n)
    if n == 1:
        c = EllipticPairClass(ambient, "1", "1", (1, 0))
        return EllipticPairs(desc, [c], {c: c})
    units = [k for k in range(1, n) if math.gcd(k, n) == 1]
    by_k = {k: EllipticPairClass(ambient, f"s_{n}", f"w_{n}^{k}", (n, k)) for k in units}
    flip = {by_k[k]: by_k[(-k) % n] for k in units}
    return EllipticPairs(desc, list(by_k.values()), flip)


def _center_pairs(n: int, ambient: str, desc: ReductiveDescriptor) -> EllipticPairs:
    pairs = {(a, b): EllipticPairClass(ambient, f"z^{a}", f"z^{b}", (a, b)) for a in range(n) for b in range(n)}
    return EllipticPairs(desc, list(pairs.values()), {c: pairs[(b, a)] for (a, b), c in pairs.items()})


O2_CLASSES = (("1", "delta"), ("-1", "delta"), ("delta", "1"), ("delta", "-1"), ("delta", "delta"), ("delta", "-delta"))
O2_FLIP = {
    ("1", "delta"): ("delta", "1"),
    ("delta", "1"): ("1", "delta"),
    ("-1", "delta"): ("delta", "-1"),
    ("delta", "-1"): ("-1", "delta"),
    ("delta", "delta"): ("delta", "delta"),
    ("delta", "-delta"): ("delta", "-delta"),
}


def y_ell(desc: ReductiveDescriptor | str) -> EllipticPairs:
    """Conjugacy classes of elliptic pairs and the flip (s, h) -> (h, s) on them."""
    if isinstance(desc, str):
        desc = parse_descriptor(desc)
    amb = str(desc)
    if desc.kind == "PGL":
        out = _pgl_pairs(desc.n, amb)
        return EllipticPairs(desc, out.classes, out.flip)
    if desc.kind == "PGL_centralizer":
        shape = rectangular_shape(desc.partition)
        if shape is None:
            return EllipticPairs(desc, [], {})
        d, _ = shape
        out = _pgl_pairs(d, amb)
        return EllipticPairs(desc, out.classes, out.flip)
    if desc.kind == "SL_dual":
        if len(desc.partition) != 1:
            return EllipticPairs(desc, [], {})
        return _center_pairs(desc.n, amb, desc)
    if desc.kind == "CENTER":
        return _center_pairs(desc.n, amb, desc)
    if desc.kind == "O2":
        classes = {p: EllipticPairClass(amb, *p) for p in O2_CLASSES}
        return EllipticPairs(desc, list(classes.values()), {classes[p]: classes[q] for p, q in O2_FLIP.items()})
    if desc.kind == "custom":
        group = desc.group
        if group is None:
            raise DescriptorError("custom descriptor needs a finite group")
        fmt = group.format_element
        labelled = {}
        for s, h in commuting_pair_reps(group):
            labelled[(s, h)] = EllipticPairClass(amb, fmt(s), fmt(h), (s, h))
        flip = {c: labelled[canonical_pair(group, h, s)] for (s, h), c in labelled.items()}
        return EllipticPairs(desc, list(labelled.values()), flip)
    raise DescriptorError(f"unsupported descriptor kind {desc.kind!r}")


def pgl_unipotent_strata(n: int) -> dict[tuple[int, ...], EllipticPairs]:
    """Elliptic pairs of the reductive centralizer for every unipotent class (partition) of PGL_n."""
    return {lam: y_ell(ReductiveDescriptor("PGL_centralizer", n, lam)) for lam in partitions(n)}


def pgl_rotation_oracle(n: int) -> int:
    """Rotations of Z/n that are elliptic on the sum-zero space, counted by determinants."""
    group = cyclic(n)
    delta = permutation_delta(group, lambda x: tuple((i + x[0]) % n for i in range(n)))
    return len(elliptic_classes(group, delta))


def o2_oracle(m: int = 4) -> list[Check]:
    """Classify commuting pairs in a dihedral group D_m embedded in D_2m.

    The six elliptic classes of O_2 must appear as six conjugation orbits with
    distinct labels, and swapping a pair must move its label by the flip.
    """
    if m % 2:
        raise InvalidParameters("the dihedral model needs an even rotation order")
    small = SemidirectCyclic(cyclic(m), automorphism_action(cyclic(m), lambda x: cyclic(m).inv(x), "inv"), 2)
    big_base = cyclic(2 * m)
    big = SemidirectCyclic(big_base, automorphism_action(big_base, lambda x: big_base.inv(x), "inv"), 2)

    def embed(x: tuple) -> tuple:
        return ((2 * x[0][0] % (2 * m),), x[1])

    def kind(x: tuple) -> str | None:
        (k,), a = x
        if a == 1:
            return "delta"
        if k == 0:
            return "1"
        if 2 * k == 2 * m:
            return "-1"
        return None

    minus = ((m,), 0)

    def label(s: tuple, h: tuple) -> tuple[str, str] | None:
        ks, kh = kind(s), kind(h)
        if ks is None or kh is None or (ks != "delta" and kh != "delta"):
            return None
        if ks == "delta" and kh == "delta":
            if h == s:
                return ("delta", "delta")
            if h == big.mul(s, minus):
                return ("delta", "-delta")
            return None
        return (ks, kh)

    pairs = [(embed(s), embed(h)) for s in small.elements for h in small.elements if small.commutes(s, h)]
    labelled = {p: label(*p) for p in pairs}
    labelled = {p: v for p, v in labelled.items() if v is not None}
    orbit_of: dict = {}
    orbits = []
    for p in labelled:
        if p in orbit_of:
            continue
        orb = {(big.conj(g, p[0]), big.conj(g, p[1])) for g in big.elements}
        orb &= set(labelled)
        idx = len(orbits)
        orbits.append(orb)
        for q in orb:
            orbit_of[q] = idx
    orbit_labels = [{labelled[q] for q in orb} for orb in orbits]
    well_defined = all(len(v) == 1 for v in orbit_labels)
    names = sorted(next(iter(v)) for v in orbit_labels) if well_defined else []
    flip_ok = all(labelled[(h, s)] == O2_FLIP[v] for (s, h), v in labelled.items() if (h, s) in labelled)
    topic = "O2 elliptic pairs"
    return [
        make_check("o2.orbits", "six conjugation orbits of elliptic pairs", topic, len(orbits) == 6, len(orbits), 6),
        make_check(
            "o2.labels", "orbits carry the six listed labels", topic, well_defined and names == sorted(O2_CLASSES), names, sorted(O2_CLASSES)
        ),
        make_check("o2.flip", "swapping the pair realises the listed flip", topic, flip_ok),
    ]


# ---- compact pairs for PGL_n -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class CompactPairClass:
    """Unipotent type, common block size d of the Levi and commutator exponent k mod d."""

    partition: tuple[int, ...]
    d: int
    k: int

    def __str__(self) -> str:
        return f"({''.join(map(str, self.partition)) if max(self.partition) < 10 else ','.join(map(str, self.partition))};d={self.d};k={self.k})"


def multiplicity_gcd(partition: Sequence[int]) -> int:
    counts = {}
    for p in partition:
        counts[p] = counts.get(p, 0) + 1
    return math.gcd(*counts.values())


def compact_pair_classes_typeA(n: int) -> list[CompactPairClass]:
    """Classes of compact pairs across unipotent classes of PGL_n.

    For unipotent type lambda with multiplicities r_i, the reductive centralizer
    is (prod GL_{r_i}) / C^x.  A Levi carries elliptic data only when all its
    blocks have one size d and the block commutators share one primitive d-th
    root of unity, so d divides gcd(r_i) and the commutator exponent k runs
    over (Z/d)^x; permuting equal blocks does not change the class.
    """
    if n < 1:
        raise InvalidParameters("n must be positive")
    if n > 12:
        raise SizeLimitExceeded("compact pairs are enumerated for n <= 12")
    out = []
    for lam in partitions(n):
        g = multiplicity_gcd(lam)
        for d in range(1, g + 1):
            if g % d:
                continue
            for k in range(d):
                if math.gcd(k, d) == 1:
                    out.append(CompactPairClass(tuple(lam), d, k % d if d > 1 else 0))
    return out


def compact_flip(c: CompactPairClass) -> CompactPairClass:
    return CompactPairClass(c.partition, c.d, (-c.k) % c.d if c.d > 1 else 0)


def affine_finite_order_classes(n: int, box: int) -> int:
    """Finite-order conjugacy classes of S_n x| Q (Q the sum-zero lattice), found inside a box.

    Elements (w, mu) act by x -> w x + mu.  Finite-order elements with
    |mu_i| <= box are joined under conjugation by simple reflections and by
    translations e_i - e_{i+1}; classes meeting |mu_i| <= 1 are counted.
    """
    if n < 1:
        raise InvalidParameters("n must be positive")
    if n > 5:
        raise SizeLimitExceeded("the box oracle is limited to n <= 5")
    perms = list(itertools.permutations(range(n)))
    lattice = [mu for mu in itertools.product(range(-box, box + 1), repeat=n) if sum(mu) == 0]

    def act(w: tuple, mu: tuple) -> tuple:
        out = [0] * n
        for j in range(n):
            out[w[j]] = mu[j]
        return tuple(out)

    def finite(w: tuple, mu: tuple) -> bool:
        total = [0] * n
        cur = mu
        order = 1
        p = w
        while p != tuple(range(n)):
            p = tuple(w[i] for i in p)
            order += 1
        for _ in range(order):
            total = [a + b for a, b in zip(total, cur)]
            cur = act(w, cur)
        return not any(total)

    elems = {(w, mu) for w in perms for mu in lattice if finite(w, mu)}
    parent = {x: x for x in elems}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    swaps = []
    for i in range(n - 1):
        s = list(range(n))
        s[i], s[i + 1] = s[i + 1], s[i]
        swaps.append(tuple(s))
    shifts = []
    for i in range(n - 1):
        lam = [0] * n
        lam[i], lam[i + 1] = 1, -1
        shifts.append(tuple(lam))
    for w, mu in elems:
        for s in swaps:
            y = (tuple(s[w[s[i]]] for i in range(n)), act(s, mu))
            if y in parent:
                union((w, mu), y)
        for lam in shifts:
            wl = act(w, lam)
            y = (w, tuple(m + a - b for m, a, b in zip(mu, lam, wl)))
            if y in parent:
                union((w, mu), y)
    return len({find(x) for x in elems if max(map(abs, x[1]), default=0) <= 1})


# ---- affine Weyl groups ---------------------------------------------------------------


def _weyl_matrices(cartan: list[list[int]]) -> tuple[list[tuple], list[tuple]]:
    """Elements of the Weyl group of a finite Cartan matrix acting on the root basis."""
    r = len(cartan)
    gens = []
    for i in range(r):
        # s_i(alpha_j) = alpha_j - A_ij alpha_i; columns are images of basis vectors
        m = [[int(a == b) for b in range(r)] for a in range(r)]
        for j in range(r):
            m[i][j] -= cartan[i][j]
        gens.append(tuple(tuple(row) for row in m))
    ident = tuple(tuple(int(a == b) for b in range(r)) for a in range(r))

    def mul(a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(r)) for j in range(r)) for i in range(r))

    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        if len(seen) > 200000:
            raise SizeLimitExceeded("Weyl group too large")
    return sorted(seen), gens


def weyl_elliptic_class_count(cartan: list[list[int]]) -> int:
    """Elliptic conjugacy classes of a finite Weyl group, by brute force."""
    r = len(cartan)
    if r == 0:
        return 1
    elems, gens = _weyl_matrices(cartan)

    def mul(a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(r)) for j in range(r)) for i in range(r))

    ell = [x for x in elems if determinant([[int(i == j) - x[i][j] for j in range(r)] for i in range(r)])]
    parent = {x: x for x in ell}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in ell:
        for g in gens:
            y = mul(mul(g, x), g)  # simple reflections are involutions
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry
    return len({find(x) for x in ell})


def affine_elliptic_count(diagram: AffineDiagramData, brute_force: bool | None = None) -> tuple[int, dict[int, int]]:
    """Sum over maximal proper node subsets J of the elliptic classes of W_J.

    Type A uses the single n-cycle class of each S_n parahoric; other types
    enumerate W_J as integer matrices (rank at most 4).
    """
    if brute_force is None:
        brute_force = diagram.type != "A"
    if brute_force and diagram.rank > 4:
        raise SizeLimitExceeded("brute-force Weyl enumeration is limited to rank 4")
    breakdown = {}
    for removed in diagram.nodes:
        keep = tuple(i for i in diagram.nodes if i != removed)
        if brute_force:
            breakdown[removed] = weyl_elliptic_class_count(diagram.cartan_matrix(keep))
        else:
            # every maximal parahoric of type A_{n-1} has W_J = S_n with one elliptic class
            breakdown[removed] = 1
    return sum(breakdown.values()), breakdown
