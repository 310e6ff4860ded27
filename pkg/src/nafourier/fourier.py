"""Nonabelian Fourier matrices on pairs (x, sigma) and the family combinations built from them."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

from .chars import CharTable, ClassFunction, _find_quotient_generator, char_table, inner_product
from .errors import InvalidParameters, UnsupportedConstruction
from .exactnum import ONE, ZERO, CycNum, conjugate_transpose, cyc_matmul, cyc_sum, is_identity, root_of_unity
from .groups import (
    AbelianGroup,
    Element,
    FiniteGroup,
    SemidirectCyclic,
    Subgroup,
    WreathCyclic,
    coset_map,
    cyclic,
    flip,
    is_normal,
    partitions,
)
from .report import Check, make_check

Matrix = list[list[CycNum]]


@dataclass(frozen=True, order=True)
class MParam:
    """A pair (class representative x, row index of the character table of its centralizer)."""

    x: Element
    sigma: int


def centralizer_table(group: FiniteGroup, x: Element) -> tuple[FiniteGroup, CharTable]:
    cache = group.__dict__.setdefault("_centralizer_tables", {})
    if x not in cache:
        z = group.centralizer(x)
        cache[x] = (z, char_table(z))
    return cache[x]


@dataclass(eq=False)
class MSet:
    group: FiniteGroup
    params: list[MParam]
    mode: str = "connected"
    c: int = 1
    index: dict = field(init=False)

    def __post_init__(self) -> None:
        self.index = {p: i for i, p in enumerate(self.params)}

    def __len__(self) -> int:
        return len(self.params)

    def label(self, p: MParam) -> str:
        _, table = centralizer_table(self.group, p.x)
        return f"({self.group.format_element(p.x)},{_label_str(table.labels[p.sigma])})"


def _label_str(label: Hashable) -> str:
    if isinstance(label, tuple):
        return "[" + ",".join(_label_str(v) for v in label) + "]"
    return str(label)


def build_m_set(group: FiniteGroup) -> MSet:
    params = []
    for x in group.class_reps:
        _, table = centralizer_table(group, x)
        params.extend(MParam(x, i) for i in range(len(table)))
    return MSet(group, params)


def commuting_pair_orbit_count(group: FiniteGroup) -> int:
    """Orbits of simultaneous conjugation on commuting pairs, by direct union-find over generators."""
    pairs = [(a, b) for a in group.elements for b in group.elements if group.commutes(a, b)]
    parent = {p: p for p in pairs}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for a, b in pairs:
        for s in group.generators:
            q = (group.conj(s, a), group.conj(s, b))
            ra, rb = find((a, b)), find(q)
            if ra != rb:
                parent[ra] = rb
    return len({find(p) for p in pairs})


# ---- the pairing ---------------------------------------------------------------


def _pair_counts(group: FiniteGroup, x: Element, y: Element) -> Counter:
    """Counts of (Z(x)-class of g y g^-1, Z(y)-class of g^-1 x^-1 g) over g with x, g y g^-1 commuting."""
    cache = group.__dict__.setdefault("_pair_counts", {})
    key = (x, y)
    if key in cache:
        return cache[key]
    zx, _ = centralizer_table(group, x)
    zy, _ = centralizer_table(group, y)
    x_inv = group.inv(x)
    counts: Counter = Counter()
    for g in group.elements:
        y_conj = group.conj(g, y)
        if not group.commutes(x, y_conj):
            continue
        g_inv = group.inv(g)
        counts[(zx.class_index(y_conj), zy.class_index(group.conj(g_inv, x_inv)))] += 1
    cache[key] = counts
    return counts


def pairing_values(group: FiniteGroup, x: Element, sigma: ClassFunction, y: Element, tau: ClassFunction) -> CycNum:
    """{(x, sigma), (y, tau)} for explicit class functions on the centralizers of x and y."""
    counts = _pair_counts(group, x, y)
    total = cyc_sum(n * sigma.values[a] * tau.values[b] for (a, b), n in counts.items())
    zx, _ = centralizer_table(group, x)
    zy, _ = centralizer_table(group, y)
    return total / (zx.order * zy.order)


def lusztig_pairing(a: MParam, b: MParam, group: FiniteGroup) -> CycNum:
    _, ta = centralizer_table(group, a.x)
    _, tb = centralizer_table(group, b.x)
    return pairing_values(group, a.x, ta.rows[a.sigma], b.x, tb.rows[b.sigma])


def brute_force_pairing(a: MParam, b: MParam, group: FiniteGroup) -> CycNum:
    """The pairing summed element by element, without class aggregation; used as an oracle."""
    zx, tx = centralizer_table(group, a.x)
    zy, ty = centralizer_table(group, b.x)
    sigma, tau = tx.rows[a.sigma], ty.rows[b.sigma]
    x_inv = group.inv(a.x)
    terms = []
    for g in group.elements:
        y_conj = group.conj(g, b.x)
        if group.commutes(a.x, y_conj):
            terms.append(sigma(y_conj) * tau(group.conj(group.inv(g), x_inv)))
    return cyc_sum(terms) / (zx.order * zy.order)


@dataclass(eq=False)
class FTMatrix:
    domain: MSet
    codomain: MSet
    entries: Matrix

    def apply(self, vector: Sequence[CycNum]) -> list[CycNum]:
        """Coefficients of FT(sum_a v_a rho_a) with FT(rho_a) = sum_b {a, b} rho_b."""
        n = len(self.entries[0]) if self.entries else 0
        return [cyc_sum(self.entries[a][b] * v for a, v in enumerate(vector) if v) for b in range(n)]

    def apply_many(self, columns: Matrix) -> Matrix:
        return cyc_matmul(self.transposed(), columns)

    def transposed(self) -> Matrix:
        return [list(col) for col in zip(*self.entries)]

    def squared_is_identity(self) -> bool:
        return is_identity(cyc_matmul(self.entries, self.entries))

    def is_unitary(self) -> bool:
        return is_identity(cyc_matmul(self.entries, conjugate_transpose(self.entries)))

    def to_rows(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.entries]


def ft_matrix(group: FiniteGroup) -> FTMatrix:
    mset = build_m_set(group)
    reps = group.class_reps
    tables = {x: centralizer_table(group, x)[1] for x in reps}
    zorders = {x: centralizer_table(group, x)[0].order for x in reps}
    offsets, pos = {}, 0
    for x in reps:
        offsets[x] = pos
        pos += len(tables[x])
    n = len(mset)
    entries: Matrix = [[ZERO] * n for _ in range(n)]
    for x in reps:
        tx = tables[x]
        for y in reps:
            ty = tables[y]
            counts = _pair_counts(group, x, y)
            scale = Fraction(1, zorders[x] * zorders[y])
            for i, sigma in enumerate(tx.rows):
                # fold sigma in first, then pair with every tau
                weights: dict[int, list[CycNum]] = {}
                for (a, b), cnt in counts.items():
                    weights.setdefault(b, []).append(cnt * sigma.values[a])
                folded = {b: cyc_sum(v) for b, v in weights.items()}
                row = entries[offsets[x] + i]
                for j, tau in enumerate(ty.rows):
                    row[offsets[y] + j] = cyc_sum(w * tau.values[b] for b, w in folded.items() if w) * scale
    return FTMatrix(mset, mset, entries)


# ---- the virtual combinations Pi(x, y) and Pi(sigma, tau) -----------------------------


def canonical_pair(group: FiniteGroup, x: Element, y: Element) -> tuple[Element, Element]:
    """Conjugate (x, y) so x is its class representative and y the representative of its Z(x)-class."""
    if not group.commutes(x, y):
        raise InvalidParameters("the two elements do not commute")
    g = group.conjugator_to_rep(x)
    x0 = group.conj(g, x)
    y1 = group.conj(g, y)
    zx, _ = centralizer_table(group, x0)
    h = zx.conjugator_to_rep(y1)
    return x0, zx.conj(h, y1)


def pi_element(mset: MSet, x: Element, y: Element) -> list[CycNum]:
    """Coefficients of Pi(x, y) = sum_sigma sigma(y^-1) rho_(x, sigma) over the parameters."""
    group = mset.group
    x0, y0 = canonical_pair(group, x, y)
    _, table = centralizer_table(group, x0)
    y_inv = group.inv(y0)
    vec = [ZERO] * len(mset)
    for i, row in enumerate(table.rows):
        vec[mset.index[MParam(x0, i)]] = row(y_inv)
    return vec


def pi_character(mset: MSet, sigma: int, tau: int) -> list[CycNum]:
    """Pi(sigma, tau) = sum_y tau(y) rho_(y, sigma); requires every centralizer to be the whole group."""
    group = mset.group
    if not group.is_abelian:
        raise UnsupportedConstruction("character pairs need an abelian group")
    table = char_table(group)
    vec = [ZERO] * len(mset)
    for y in group.elements:
        vec[mset.index[MParam(y, sigma)]] = table.rows[tau](y)
    return vec


def commuting_pair_reps(group: FiniteGroup) -> list[tuple[Element, Element]]:
    out = []
    for x in group.class_reps:
        zx, _ = centralizer_table(group, x)
        out.extend((x, y) for y in zx.class_reps)
    return out


def _columns(vectors: list[list[CycNum]]) -> Matrix:
    return [list(col) for col in zip(*vectors)] if vectors else []


def verify_flip_group(group: FiniteGroup, prefix: str = "flip") -> list[Check]:
    """FT(Pi(x, y)) = Pi(y, x) on pair-orbit representatives, and FT(Pi(s, t)) = Pi(t, s) for abelian groups."""
    ft = ft_matrix(group)
    mset = ft.domain
    checks = []
    pairs = commuting_pair_reps(group)
    if pairs:
        lhs_cols = ft.apply_many(_columns([pi_element(mset, x, y) for x, y in pairs]))
        for k, (x, y) in enumerate(pairs):
            lhs = [row[k] for row in lhs_cols]
            rhs = pi_element(mset, y, x)
            checks.append(
                make_check(
                    f"{prefix}.{group.descriptor}.pair.{k:04d}",
                    f"FT(Pi({group.format_element(x)},{group.format_element(y)})) = Pi(y,x)",
                    "flip lemma (element pairs)",
                    lhs == rhs,
                    lhs if lhs != rhs else None,
                    rhs if lhs != rhs else None,
                )
            )
    if group.is_abelian:
        k_rows = len(char_table(group))
        combos = list(itertools.product(range(k_rows), repeat=2))
        lhs_cols = ft.apply_many(_columns([pi_character(mset, s, t) for s, t in combos]))
        for k, (s, t) in enumerate(combos):
            lhs = [row[k] for row in lhs_cols]
            rhs = pi_character(mset, t, s)
            checks.append(
                make_check(
                    f"{prefix}.{group.descriptor}.char.{k:04d}",
                    f"FT(Pi(sigma{s},tau{t})) = Pi(tau,sigma)",
                    "flip lemma (character pairs)",
                    lhs == rhs,
                    lhs if lhs != rhs else None,
                    rhs if lhs != rhs else None,
                )
            )
    return checks


# ---- coset variant -------------------------------------------------------------------


@dataclass(eq=False)
class CosetFT:
    tilde: FiniteGroup
    normal: FiniteGroup
    c: int
    alpha: Element
    bar_params: list[MParam]  # x in the alpha coset, sigma-bar row of Z_normal(x)
    params: list[MParam]  # x in normal, sigma row of Z_tilde(x), one per twist orbit
    entries: Matrix
    bar_labels: list[str] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)

    def stated_inverse(self) -> Matrix:
        """The map f(y, tau) = sum over (x, sigma-bar) of {(x, sigma-bar), (y, tau)} f(x, sigma-bar)."""
        return [list(col) for col in zip(*self.entries)]

    def adjoint_inverse(self) -> Matrix:
        return conjugate_transpose(self.entries)

    def inverse_holds(self, inverse: Matrix) -> bool:
        if len(self.entries) != len(self.entries[0] if self.entries else []):
            return False
        return is_identity(cyc_matmul(self.entries, inverse)) and is_identity(cyc_matmul(inverse, self.entries))


def _centralizer_in(group: FiniteGroup, sub: FiniteGroup, x: Element) -> FiniteGroup:
    members = [g for g in sub.elements if group.commutes(g, x)]
    if len(members) == group.order:
        return group
    return Subgroup(group, members, descriptor=f"Z({group.format_element(x)})")


def extension_root(value: CycNum, order: int, c: int) -> CycNum:
    """For value = zeta_k^j with k = order, return zeta_(c k)^j."""
    info = value.as_root_of_unity()
    if info is None:
        raise ValueError("value is not a root of unity")
    n, e = info
    if order % n:
        raise ValueError("root order does not divide the element order")
    j = e * (order // n)
    return root_of_unity(c * order, j)


def ft_coset(tilde: FiniteGroup, normal: FiniteGroup, alpha: Element | None = None) -> CosetFT:
    if not normal.is_subgroup_of(tilde) or not is_normal(tilde, normal):
        raise UnsupportedConstruction(f"{normal.descriptor} is not normal in {tilde.descriptor}")
    if alpha is None:
        alpha, c, cmap = _find_quotient_generator(tilde, normal)
    else:
        c = tilde.order // normal.order
        cmap = coset_map(tilde, normal, alpha)
    bar_params, bar_chars, bar_labels = [], [], []
    for x in tilde.class_reps:
        if cmap[x] != 1 % c:
            continue
        z_tilde, _ = centralizer_table(tilde, x)
        z_normal = _centralizer_in(tilde, normal, x)
        t_normal = char_table(z_normal)
        x_c = tilde.power(x, c)
        k = tilde.element_order(x_c)
        for i, sbar in enumerate(t_normal.rows):
            deg = sbar.degree
            lam = extension_root(sbar(x_c) / deg, k, c)
            vals = []
            for z in z_tilde.class_reps:
                e = cmap[z] % c
                h = tilde.mul(z, tilde.power(x, -e))
                vals.append(sbar(h) * lam**e)
            bar_params.append(MParam(x, i))
            bar_chars.append(ClassFunction(z_tilde, tuple(vals)))
            bar_labels.append(f"({tilde.format_element(x)},{_label_str(t_normal.labels[i])})")
    params, labels = [], []
    for y in tilde.class_reps:
        if cmap[y] != 0:
            continue
        z_tilde, table = centralizer_table(tilde, y)
        if not any(cmap[z] == 1 % c for z in z_tilde.elements):
            continue
        in_normal = [i for i, r in enumerate(z_tilde.class_reps) if cmap[r] == 0]
        normal_order = sum(z_tilde.class_sizes[i] for i in in_normal)
        seen: set[int] = set()
        for j, tau in enumerate(table.rows):
            norm = cyc_sum(z_tilde.class_sizes[i] * tau.values[i] * tau.values[i].conjugate() for i in in_normal)
            if norm != normal_order or j in seen:
                continue
            orbit = {j}
            for t in range(1, c):
                twisted = tuple(
                    v * root_of_unity(c, t * cmap[r]) for v, r in zip(tau.values, z_tilde.class_reps)
                )
                orbit.add(next(idx for idx, row in enumerate(table.rows) if row.values == twisted))
            seen |= orbit
            params.append(MParam(y, min(orbit)))
            labels.append(f"({tilde.format_element(y)},{_label_str(table.labels[min(orbit)])})")
    entries = []
    for (x, _), sigma in zip(((p.x, p.sigma) for p in bar_params), bar_chars):
        row = []
        for p in params:
            _, ty = centralizer_table(tilde, p.x)
            row.append(c * pairing_values(tilde, x, sigma, p.x, ty.rows[p.sigma]))
        entries.append(row)
    return CosetFT(tilde, normal, c, alpha, bar_params, params, entries, bar_labels, labels)


def coset_setup(group: FiniteGroup, c: int | None = None) -> tuple[FiniteGroup, FiniteGroup]:
    """Pick the normal subgroup for a coset transform: the base of a cyclic extension, or an index-c subgroup of a cyclic group."""
    if isinstance(group, (SemidirectCyclic, WreathCyclic)):
        if isinstance(group, SemidirectCyclic):
            members = [(h, 0) for h in group.base.elements]
        else:
            members = [x for x in group.elements if x[1] == 0]
        return group, Subgroup(group, members, descriptor=f"base({group.descriptor})")
    if isinstance(group, AbelianGroup) and len(group.orders) == 1 and c:
        n = group.orders[0]
        if n % c:
            raise InvalidParameters(f"{c} does not divide {n}")
        members = [(v,) for v in range(0, n, c)]
        return group, Subgroup(group, members, descriptor=f"Z{n // c}")
    raise UnsupportedConstruction(f"no coset setup for {group.descriptor}")


# ---- families --------------------------------------------------------------------------


@dataclass(eq=False)
class FamilyData:
    name: str
    gamma: FiniteGroup
    members: dict[str, MParam]
    inner_form: dict[str, int] = field(default_factory=dict)
    delta: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.m_set = build_m_set(self.gamma)
        if sorted(self.members.values()) != sorted(self.m_set.params):
            raise ValueError(f"member table of {self.name} is not a bijection onto the parameter set")
        self.by_param = {p: label for label, p in self.members.items()}
        for label in self.members:
            self.delta.setdefault(label, 1)

    def vector_to_members(self, vec: Sequence[CycNum]) -> dict[str, CycNum]:
        return {self.by_param[p]: v for p, v in zip(self.m_set.params, vec) if v}

    def members_to_vector(self, combo: dict[str, CycNum]) -> list[CycNum]:
        vec = [ZERO] * len(self.m_set)
        for label, v in combo.items():
            vec[self.m_set.index[self.members[label]]] = vec[self.m_set.index[self.members[label]]] + v
        return vec

    def ft(self, combo: dict[str, CycNum]) -> dict[str, CycNum]:
        return self.vector_to_members(ft_matrix(self.gamma).apply(self.members_to_vector(combo)))


def pi_family(
    family: FamilyData,
    x: Element | None = None,
    y: Element | None = None,
    sigma: int | None = None,
    tau: int | None = None,
) -> dict[str, CycNum]:
    """Pi_U(x, y) or Pi_U(sigma, tau) expressed on member labels."""
    if x is not None and y is not None:
        return family.vector_to_members(pi_element(family.m_set, x, y))
    if sigma is not None and tau is not None:
        return family.vector_to_members(pi_character(family.m_set, sigma, tau))
    raise InvalidParameters("give either an element pair or a character pair")


def verify_flip(family: FamilyData) -> list[Check]:
    return verify_flip_group(family.gamma, prefix=f"flip.{family.name}")


def family_from_group(name: str, group: FiniteGroup) -> FamilyData:
    mset = build_m_set(group)
    return FamilyData(name, group, {mset.label(p): p for p in mset.params})


def gl_cyclic_families(k: int, m: int) -> list[FamilyData]:
    """Families for GL_k^m with Z/m rotating the factors.

    Each rotation orbit of m-tuples of partitions of k has stabilizer Z/c and
    gives a family over cyclic(c); inner form r (with m/c dividing r)
    contributes the members (r c / m, sigma).
    """
    if k < 1 or m < 1:
        raise InvalidParameters("k and m must be positive")
    shapes = list(partitions(k))
    seen = set()
    out = []
    for tup in itertools.product(range(len(shapes)), repeat=m):
        rep = min(tup[i:] + tup[:i] for i in range(m))
        if rep in seen:
            continue
        seen.add(rep)
        period = next(p for p in range(1, m + 1) if m % p == 0 and rep[p:] + rep[:p] == rep)
        c = m // period
        gamma = cyclic(c)
        table = char_table(gamma)
        name = "(" + ";".join("".join(map(str, shapes[i])) for i in rep) + ")"
        members, forms = {}, {}
        for r in range(0, m, period):
            y = (r * c // m,)
            for i, lab in enumerate(table.labels):
                label = f"{name}@r{r}|chi{lab[0]}"
                members[label] = MParam(y, i)
                forms[label] = r
        out.append(FamilyData(name, gamma, members, forms))
    return out


def inner_form_unipotent_count(k: int, m: int, r: int) -> int:
    """Members attached to inner form r, counted from rotation-fixed tuples rather than from orbits."""
    g = __import__("math").gcd(r, m)
    shapes = list(partitions(k))
    total = Fraction(0)
    for tup in itertools.product(range(len(shapes)), repeat=m):
        if tup[g:] + tup[:g] != tup:
            continue
        period = next(p for p in range(1, m + 1) if m % p == 0 and tup[p:] + tup[:p] == tup)
        c = m // period
        # each orbit of size m/c contributes c members to this form
        total += Fraction(c * c, m)
    return int(total)


def flip_pattern_families(gamma_u: FiniteGroup) -> FamilyData:
    """The family for U x U with the two factors swapped, parametrized over flip(gamma_u)."""
    if not gamma_u.is_abelian:
        raise UnsupportedConstruction("the flip pattern needs an abelian group")
    big = flip(gamma_u)
    mset = build_m_set(big)
    base_table = char_table(gamma_u)
    fmt = gamma_u.format_element

    def chi(i: int) -> str:
        return _label_str(base_table.labels[i])

    members: dict[str, MParam] = {}
    forms: dict[str, int] = {}
    ident = gamma_u.identity

    def which(values: list[CycNum]) -> int:
        return next(i for i, r in enumerate(base_table.rows) if [r(g) for g in gamma_u.elements] == values)

    for p in mset.params:
        (h0, h1), a = p.x
        z, table = centralizer_table(big, p.x)
        row = table.rows[p.sigma]
        if a == 0 and row.degree == 2:
            # induced from sigma x sigma' with sigma != sigma'
            s0, s1 = next(
                (i, j)
                for i, j in itertools.combinations(range(len(base_table)), 2)
                if all(
                    row(((g, g2), 0)) == base_table.rows[i](g) * base_table.rows[j](g2)
                    + base_table.rows[j](g) * base_table.rows[i](g2)
                    for g in gamma_u.elements
                    for g2 in gamma_u.elements
                )
            )
        elif a == 0:
            # read sigma and sigma' off the two coordinate copies
            s0 = which([row(((g, ident), 0)) for g in gamma_u.elements])
            s1 = which([row(((ident, g), 0)) for g in gamma_u.elements])
        if a == 0 and h0 != h1:
            label = f"({fmt(h0)},{fmt(h1)})|{chi(s0)}x{chi(s1)}"
        elif a == 0 and row.degree == 2:
            label = f"({fmt(h0)},{fmt(h0)})|{chi(s0)}*{chi(s1)}"
        elif a == 0:
            sign = "+" if row(((ident, ident), 1)) == 1 else "-"
            label = f"({fmt(h0)},{fmt(h0)})|({chi(s0)}*{chi(s0)}){sign}"
        else:
            label = _flip_twisted_label(gamma_u, big, p, z, table)
        members[label] = p
        forms[label] = a
    return FamilyData(f"flip({gamma_u.descriptor})", big, members, forms)


def _flip_twisted_label(gamma_u: FiniteGroup, big: WreathCyclic, p: MParam, z: FiniteGroup, table: CharTable) -> str:
    """Name the row as sigma^+ or sigma^- for the element (x,1)delta."""
    (h0, h1), _ = p.x
    base_table = char_table(gamma_u)
    row = table.rows[p.sigma]
    ident = gamma_u.identity
    # restriction to the diagonal identifies sigma
    diag = [row(((g, g), 0)) for g in gamma_u.elements]
    s = next(i for i, r in enumerate(base_table.rows) if [r(g) for g in gamma_u.elements] == diag)
    # the class of (x,1)delta is fixed by the cycle product x = h0 h1
    x = gamma_u.mul(h0, h1)
    plus = extension_root(base_table.rows[s](x), gamma_u.element_order(x), 2)
    value = row(((x, ident), 1))
    sign = "+" if value == plus else "-"
    return f"({gamma_u.format_element(x)},{gamma_u.format_element(ident)})d|{_label_str(base_table.labels[s])}{sign}"
