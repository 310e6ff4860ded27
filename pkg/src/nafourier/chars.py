"""Character tables, induction and restriction, and Clifford-Mackey rows.

Tables come from construction-specific methods: duality for abelian groups,
the Murnaghan-Nakayama rule for symmetric groups, tensor products for direct
products, and Mackey induction for extensions with cyclic quotient (tensor
induction for cyclic wreath products, explicit extensions over an abelian
normal subgroup otherwise).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Iterator, Sequence

from .errors import NotASubgroup, UnsupportedConstruction
from .exactnum import ONE, ZERO, CycNum, as_cyc, cyc_sum, root_of_unity
from .groups import (
    AbelianGroup,
    DirectProduct,
    Element,
    FiniteGroup,
    SemidirectCyclic,
    SignedPermutationGroup,
    Subgroup,
    SymmetricGroup,
    WreathCyclic,
    _closure,
    coset_map,
    derived_subgroup,
    is_normal,
    partitions,
)

Embedding = Callable[[Element], Element]


@dataclass(eq=False)
class ClassFunction:
    """Values of a class function, indexed like ``group.conjugacy_classes()``."""

    group: FiniteGroup
    values: tuple[CycNum, ...]

    def __post_init__(self) -> None:
        self.values = tuple(as_cyc(v) for v in self.values)
        if len(self.values) != self.group.num_classes:
            raise ValueError("one value per conjugacy class is required")

    def __call__(self, x: Element) -> CycNum:
        return self.values[self.group.class_index(x)]

    def _check(self, other: ClassFunction) -> None:
        if other.group is not self.group:
            raise ValueError("class functions live on different groups")

    def __add__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.group, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: ClassFunction) -> ClassFunction:
        self._check(other)
        return ClassFunction(self.group, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> ClassFunction:
        return ClassFunction(self.group, tuple(-a for a in self.values))

    def __mul__(self, other: ClassFunction | CycNum | int | Fraction) -> ClassFunction:
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, tuple(a * b for a, b in zip(self.values, other.values)))
        return ClassFunction(self.group, tuple(a * other for a in self.values))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return other.group is self.group and self.values == other.values

    def conjugate(self) -> ClassFunction:
        return ClassFunction(self.group, tuple(v.conjugate() for v in self.values))

    @property
    def degree(self) -> CycNum:
        return self(self.group.identity)

    def to_json(self) -> list:
        return [v.to_json() for v in self.values]


def zero_function(group: FiniteGroup) -> ClassFunction:
    return ClassFunction(group, (ZERO,) * group.num_classes)


def inner_product(a: ClassFunction, b: ClassFunction) -> CycNum:
    """(a, b) = 1/|G| sum_g a(g) conj(b(g))."""
    a._check(b)
    g = a.group
    total = cyc_sum(size * x * y.conjugate() for size, x, y in zip(g.class_sizes, a.values, b.values))
    return total / g.order


@dataclass(eq=False)
class CharTable:
    group: FiniteGroup
    rows: list[ClassFunction]
    labels: list[Hashable]
    extras: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def index(self, label: Hashable) -> int:
        return self.labels.index(label)

    def row(self, label: Hashable) -> ClassFunction:
        return self.rows[self.index(label)]

    def degrees(self) -> list[CycNum]:
        return [r.degree for r in self.rows]

    def row_orthonormal(self) -> bool:
        n = len(self.rows)
        return all(inner_product(self.rows[i], self.rows[j]) == int(i == j) for i in range(n) for j in range(n))

    def column_orthogonal(self) -> bool:
        g = self.group
        k = g.num_classes
        for a in range(k):
            for b in range(k):
                s = cyc_sum(r.values[a] * r.values[b].conjugate() for r in self.rows)
                expected = g.centralizer_order(a) if a == b else 0
                if s != expected:
                    return False
        return True

    def decompose(self, chi: ClassFunction) -> list[CycNum]:
        return [inner_product(chi, r) for r in self.rows]


# ---- abelian groups ---------------------------------------------------------


def _abelian_exponent_maps(group: FiniteGroup) -> tuple[int, list[tuple[tuple[int, ...], dict]]]:
    """All homomorphisms to Z/e (e = exponent) as element -> exponent maps, keyed by generator data."""
    elems = group.elements
    gens: list[Element] = []
    span = {group.identity}
    for x in sorted(elems, key=lambda y: (-group.element_order(y), y)):
        if x not in span:
            gens.append(x)
            span = _closure(group, gens)
            if len(span) == group.order:
                break
    orders = [group.element_order(s) for s in gens]
    exponent = math.lcm(*orders) if orders else 1
    results = []
    for assignment in itertools.product(*(range(o) for o in orders)):
        values = {s: t * (exponent // o) for s, t, o in zip(gens, assignment, orders)}
        emap = {group.identity: 0}
        queue = [group.identity]
        ok = True
        for y in queue:
            for s in gens:
                z = group.mul(y, s)
                v = (emap[y] + values[s]) % exponent
                if z in emap:
                    if emap[z] != v:
                        ok = False
                        break
                else:
                    emap[z] = v
                    queue.append(z)
            if not ok:
                break
        if ok:
            results.append((tuple(assignment), emap))
    if len(results) != group.order:
        raise UnsupportedConstruction(f"{group.descriptor} is not abelian")
    return exponent, results


def _abelian_table(group: FiniteGroup) -> CharTable:
    if isinstance(group, AbelianGroup):
        orders = group.orders
        rows, labels = [], []
        for label in group.elements:
            vals = []
            for x in group.elements:
                v = ONE
                for t, xi, n in zip(label, x, orders):
                    if t * xi % n:
                        v = v * root_of_unity(n, t * xi)
                vals.append(v)
            rows.append(ClassFunction(group, tuple(vals)))
            labels.append(label)
        return CharTable(group, rows, labels)
    exponent, maps = _abelian_exponent_maps(group)
    rows, labels = [], []
    for label, emap in maps:
        vals = tuple(root_of_unity(exponent, emap[rep]) for rep in group.class_reps)
        rows.append(ClassFunction(group, vals))
        labels.append(label)
    return CharTable(group, rows, labels)


# ---- symmetric groups ------------------------------------------------------------


@lru_cache(maxsize=None)
def mn_character(shape: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    """chi^shape at a permutation of cycle type ``cycles`` via rim-hook removal on beta-sets."""
    if not cycles:
        return 1 if sum(shape) == 0 else 0
    r, rest = cycles[0], cycles[1:]
    return sum(eps * mn_character(new_shape, rest) for new_shape, eps in _remove_rim_hooks(shape, r))


def _symmetric_table(group: SymmetricGroup) -> CharTable:
    shapes = list(partitions(group.n))
    rows = []
    for shape in shapes:
        vals = tuple(CycNum(mn_character(shape, ct)) for ct in group.class_shapes)
        rows.append(ClassFunction(group, vals))
    return CharTable(group, rows, shapes)


def _remove_rim_hooks(shape: tuple[int, ...], r: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (shape minus an r-rim-hook, sign (-1)^height) over all removable r-rim-hooks."""
    k = len(shape)
    beta = [shape[i] + (k - 1 - i) for i in range(k)]
    beta_set = set(beta)
    for b in beta:
        target = b - r
        if target < 0 or target in beta_set:
            continue
        between = sum(1 for x in beta if target < x < b)
        new_beta = sorted((target if x == b else x for x in beta), reverse=True)
        new_shape = tuple(v - (k - 1 - i) for i, v in enumerate(new_beta))
        yield tuple(v for v in new_shape if v > 0), -1 if between % 2 else 1


@lru_cache(maxsize=None)
def bipartition_character(
    pair: tuple[tuple[int, ...], tuple[int, ...]], cycles: tuple[tuple[int, int], ...]
) -> int:
    """Hyperoctahedral character chi^(alpha, beta) at signed cycles ((length, sign), ...).

    Rim hooks come off either component; a hook removed from beta picks up the
    sign of the cycle.  (n, ()) is trivial and ((), 1^n) is the sign character.
    """
    if not cycles:
        return 1 if not pair[0] and not pair[1] else 0
    (r, sign), rest = cycles[0], cycles[1:]
    alpha, beta = pair
    total = 0
    for new_alpha, eps in _remove_rim_hooks(alpha, r):
        total += eps * bipartition_character((new_alpha, beta), rest)
    for new_beta, eps in _remove_rim_hooks(beta, r):
        total += sign * eps * bipartition_character((alpha, new_beta), rest)
    return total


def _signed_permutation_table(group: SignedPermutationGroup) -> CharTable:
    n = group.n
    pairs = [(a, b) for k in range(n, -1, -1) for a in partitions(k) for b in partitions(n - k)]
    cycle_data = []
    for rep in group.class_reps:
        pos, neg = group.signed_cycle_type(rep)
        cycle_data.append(tuple(sorted([(r, 1) for r in pos] + [(r, -1) for r in neg], reverse=True)))
    rows = [
        ClassFunction(group, tuple(CycNum(bipartition_character(pair, cyc)) for cyc in cycle_data))
        for pair in pairs
    ]
    return CharTable(group, rows, pairs)


# ---- direct products -------------------------------------------------------------


def _product_table(group: DirectProduct) -> CharTable:
    tables = [char_table(f) for f in group.factors]
    rows, labels = [], []
    for combo in itertools.product(*(range(len(t)) for t in tables)):
        vals = []
        for cls in itertools.product(*(range(f.num_classes) for f in group.factors)):
            v = ONE
            for t, ri, ci in zip(tables, combo, cls):
                v = v * t.rows[ri].values[ci]
            vals.append(v)
        rows.append(ClassFunction(group, tuple(vals)))
        labels.append(tuple(t.labels[i] for t, i in zip(tables, combo)))
    return CharTable(group, rows, labels)


# ---- cyclic wreath products via tensor induction ---------------------------------


def _rotation_period(seq: tuple) -> int:
    d = len(seq)
    for p in range(1, d + 1):
        if d % p == 0 and seq[p:] + seq[:p] == seq:
            return p
    return d


def wreath_extension_value(group: WreathCyclic, base_rows: Sequence[int], x: tuple) -> CycNum:
    """Tensor-induced extension of the base irreducible (tau_0 x ... x tau_{d-1}) at x = (h; a).

    Requires tau to be constant along the cycles of j -> j - a.
    """
    table = char_table(group.base)
    a = x[1]
    products = group.cycle_products(x)
    v = ONE
    for c, p in enumerate(products):
        v = v * table.rows[base_rows[c]](p)
    return v


def _wreath_value(group: WreathCyclic, tau: tuple[int, ...], period: int, u: int, x: tuple) -> CycNum:
    h, a = x
    d = group.d
    if a % period:
        return ZERO
    twist = root_of_unity(d // period, u * (a // period))
    terms = []
    for t in range(period):
        shifted = (tuple(h[(i - t) % d] for i in range(d)), a)
        terms.append(wreath_extension_value(group, tau, shifted))
    return cyc_sum(terms) * twist


def _wreath_table(group: WreathCyclic) -> CharTable:
    base_table = char_table(group.base)
    k, d = len(base_table), group.d
    seen = set()
    rows, labels = [], []
    for tau in itertools.product(range(k), repeat=d):
        rep = min(tau[i:] + tau[:i] for i in range(d))
        if rep in seen:
            continue
        seen.add(rep)
        p = _rotation_period(rep)
        for u in range(d // p):
            vals = tuple(_wreath_value(group, rep, p, u, x) for x in group.class_reps)
            rows.append(ClassFunction(group, vals))
            labels.append((tuple(base_table.labels[i] for i in rep), u))
    return CharTable(group, rows, labels)


# ---- Mackey rows over an abelian normal subgroup with cyclic quotient ------------------


@dataclass(eq=False)
class MackeyData:
    """Clifford-Mackey data for an abelian normal subgroup with cyclic quotient.

    ``generator`` is the chosen element whose coset generates the quotient of
    order ``c``; each orbit representative sigma carries its orbit length r and
    the extension to N<generator^r> fixed by the primitive-root rule.
    """

    group: FiniteGroup
    normal: FiniteGroup
    generator: Element
    c: int
    coset: dict
    exponent: int
    sigma_maps: dict  # label -> element -> exponent mod self.exponent
    orbit_reps: list
    orbit_length: dict
    extension_root: dict  # label -> CycNum a with a^(c/r) = sigma(generator^c)

    def sigma(self, label: Hashable, h: Element) -> CycNum:
        return root_of_unity(self.exponent, self.sigma_maps[label][h])

    def twist(self, label: Hashable, t: int) -> Hashable:
        """Label of the character h -> sigma(g^-t h g^t)."""
        g_t = self.group.power(self.generator, t)
        g_t_inv = self.group.inv(g_t)
        smap = self.sigma_maps[label]
        target = {h: smap[self.group.mul(self.group.mul(g_t_inv, h), g_t)] for h in self.normal.elements}
        for lab, m in self.sigma_maps.items():
            if m == target:
                return lab
        raise RuntimeError("twisted character not found")

    def extension(self, label: Hashable, y: Element) -> CycNum:
        """sigma~(h g^(r j)) = sigma(h) a^j on the stabilizer N<g^r>; zero off it."""
        e = self.coset[y]
        r = self.orbit_length[label]
        if e % r:
            raise ValueError("element outside the stabilizer")
        h = self.group.mul(y, self.group.power(self.generator, -e))
        return self.sigma(label, h) * self.extension_root[label] ** (e // r)

    def row_value(self, label: Hashable, u: int, x: Element) -> CycNum:
        e = self.coset[x]
        r = self.orbit_length[label]
        if e % r:
            return ZERO
        m = self.c // r
        twist = root_of_unity(m, u * (e // r))
        terms = []
        for t in range(r):
            g_t = self.group.power(self.generator, t)
            y = self.group.conj(g_t, x)
            terms.append(self.extension(label, y))
        return cyc_sum(terms) * twist

    def table(self) -> CharTable:
        rows, labels = [], []
        for label in self.orbit_reps:
            r = self.orbit_length[label]
            for u in range(self.c // r):
                vals = tuple(self.row_value(label, u, x) for x in self.group.class_reps)
                rows.append(ClassFunction(self.group, vals))
                labels.append((label, u))
        return CharTable(self.group, rows, labels, extras={"mackey": self})


def _find_quotient_generator(group: FiniteGroup, normal: FiniteGroup) -> tuple[Element, int, dict]:
    index = group.order // normal.order
    for g in group.elements:
        if index == 1:
            return group.identity, 1, {x: 0 for x in group.elements}
        try:
            cmap = coset_map(group, normal, g)
        except ValueError:
            continue
        return g, index, cmap
    raise UnsupportedConstruction("quotient is not cyclic")


def mackey_data(group: FiniteGroup, normal: FiniteGroup, generator: Element | None = None) -> MackeyData:
    if not normal.is_abelian:
        raise UnsupportedConstruction("Mackey rows are implemented for abelian normal subgroups")
    if not is_normal(group, normal):
        raise UnsupportedConstruction(f"{normal.descriptor} is not normal in {group.descriptor}")
    if generator is None:
        generator, c, cmap = _find_quotient_generator(group, normal)
    else:
        c = group.order // normal.order
        cmap = coset_map(group, normal, generator)
    exponent, maps = _abelian_exponent_maps(normal)
    sigma_maps = {label: emap for label, emap in maps}
    labels = [label for label, _ in maps]
    g_inv = group.inv(generator)
    # action of the generator on characters
    act = {}
    for label in labels:
        smap = sigma_maps[label]
        target = {h: smap[group.mul(group.mul(g_inv, h), generator)] for h in normal.elements}
        act[label] = next(l2 for l2 in labels if sigma_maps[l2] == target)
    orbit_reps, orbit_length, ext_root = [], {}, {}
    seen = set()
    g_c = group.power(generator, c)
    k = normal.element_order(g_c)
    for label in labels:
        if label in seen:
            continue
        orbit = [label]
        while act[orbit[-1]] != label:
            orbit.append(act[orbit[-1]])
        seen.update(orbit)
        rep = min(orbit)
        r = len(orbit)
        orbit_reps.append(rep)
        orbit_length[rep] = r
        # sigma(g^c) = zeta_k^j  ->  extension root zeta_{(c/r) k}^j
        val = sigma_maps[rep][g_c]
        j = val * k // exponent
        ext_root[rep] = root_of_unity((c // r) * k, j)
    orbit_reps.sort()
    return MackeyData(group, normal, generator, c, cmap, exponent, sigma_maps, orbit_reps, orbit_length, ext_root)


def mackey_irreducibles(normal: FiniteGroup, group: FiniteGroup) -> CharTable:
    """Irreducible characters of ``group`` as Mackey-induced rows sigma x| tau over ``normal``."""
    if not normal.is_subgroup_of(group):
        raise NotASubgroup(f"{normal.descriptor} is not contained in {group.descriptor}")
    if isinstance(group, WreathCyclic) and normal.order == group.base.order**group.d and not normal.is_abelian:
        return _wreath_table(group)
    return mackey_data(group, normal).table()


def _abelian_normal_with_cyclic_quotient(group: FiniteGroup) -> FiniteGroup | None:
    """Largest abelian normal subgroup N with G/N cyclic, searched above the derived subgroup."""
    derived = derived_subgroup(group)
    base = sorted(derived)
    coset_rep: dict = {}
    for x in group.elements:
        if x in coset_rep:
            continue
        for h in base:
            coset_rep[group.mul(x, h)] = x
    quotient_elems = sorted(set(coset_rep.values()))

    def qmul(a: Element, b: Element) -> Element:
        return coset_rep[group.mul(a, b)]

    ident = coset_rep[group.identity]

    def qclosure(gens: Iterable[Element]) -> frozenset:
        seen = {ident}
        frontier = [ident]
        gens = list(gens)
        while frontier:
            nxt = []
            for y in frontier:
                for s in gens:
                    z = qmul(y, s)
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            frontier = nxt
        return frozenset(seen)

    subgroups = {frozenset([ident])}
    frontier = list(subgroups)
    while frontier:
        nxt = []
        for s in frontier:
            for a in quotient_elems:
                if a not in s:
                    t = qclosure(set(s) | {a})
                    if t not in subgroups:
                        subgroups.add(t)
                        nxt.append(t)
        frontier = nxt
    best = None
    for s in sorted(subgroups, key=lambda s: (-len(s), sorted(s))):
        if not any(qclosure(set(s) | {a}) == frozenset(quotient_elems) for a in quotient_elems):
            continue
        members = [x for x in group.elements if coset_rep[x] in s]
        candidate = Subgroup(group, members, descriptor=f"N({group.descriptor})")
        if candidate.is_abelian:
            best = candidate
            break
    return best


def char_table(group: FiniteGroup) -> CharTable:
    cached = group.__dict__.get("_char_table")
    if cached is not None:
        return cached
    if isinstance(group, SymmetricGroup):
        table = _symmetric_table(group)
    elif isinstance(group, SignedPermutationGroup):
        table = _signed_permutation_table(group)
    elif isinstance(group, WreathCyclic):
        table = _wreath_table(group)
    elif isinstance(group, AbelianGroup) or group.is_abelian:
        table = _abelian_table(group)
    elif isinstance(group, DirectProduct):
        table = _product_table(group)
    elif isinstance(group, SemidirectCyclic) and group.base.is_abelian:
        normal = Subgroup(group, [(h, 0) for h in group.base.elements], descriptor=group.base.descriptor)
        table = mackey_data(group, normal, (group.base.identity, 1)).table()
    else:
        normal = _abelian_normal_with_cyclic_quotient(group)
        if normal is None:
            raise UnsupportedConstruction(f"no character table method for {group.descriptor}")
        table = mackey_data(group, normal).table()
    if len(table.rows) != group.num_classes:
        raise RuntimeError(f"character table of {group.descriptor} is incomplete")
    group.__dict__["_char_table"] = table
    return table


# ---- induction and restriction ------------------------------------------------------


def _check_embedding(sub: FiniteGroup, group: FiniteGroup, embed: Embedding) -> None:
    for s in sub.generators:
        if not group.contains(embed(s)):
            raise NotASubgroup(f"{sub.descriptor} does not embed in {group.descriptor}")
    if sub.order > group.order or group.order % sub.order:
        raise NotASubgroup(f"order of {sub.descriptor} does not divide that of {group.descriptor}")


def _identity(x: Element) -> Element:
    return x


def class_fusion(sub: FiniteGroup, group: FiniteGroup, embed: Embedding | None = None) -> list[int]:
    embed = embed or _identity
    return [group.class_index(embed(r)) for r in sub.class_reps]


def induce(chi: ClassFunction, group: FiniteGroup, embed: Embedding | None = None) -> ClassFunction:
    """Ind chi(C) = |Z_G(g_C)| sum over K-classes D fusing into C of chi(D) / |Z_K(d_D)|."""
    sub = chi.group
    embed = embed or _identity
    _check_embedding(sub, group, embed)
    fusion = class_fusion(sub, group, embed)
    buckets: list[list[CycNum]] = [[] for _ in range(group.num_classes)]
    for d_idx, c_idx in enumerate(fusion):
        v = chi.values[d_idx]
        if v:
            buckets[c_idx].append(v * Fraction(group.centralizer_order(c_idx), sub.centralizer_order(d_idx)))
    return ClassFunction(group, tuple(cyc_sum(b) for b in buckets))


def restrict(chi: ClassFunction, sub: FiniteGroup, embed: Embedding | None = None) -> ClassFunction:
    embed = embed or _identity
    _check_embedding(sub, chi.group, embed)
    return ClassFunction(sub, tuple(chi(embed(r)) for r in sub.class_reps))


def regular_character(group: FiniteGroup) -> ClassFunction:
    ident = group.class_index(group.identity)
    return ClassFunction(group, tuple(CycNum(group.order if i == ident else 0) for i in range(group.num_classes)))


def trivial_character(group: FiniteGroup) -> ClassFunction:
    return ClassFunction(group, (ONE,) * group.num_classes)


def permutation_character(group: FiniteGroup, action: Callable[[Element], Sequence[int]]) -> ClassFunction:
    """Number of fixed points of each class representative under a permutation action."""
    vals = []
    for r in group.class_reps:
        img = action(r)
        vals.append(CycNum(sum(1 for i, v in enumerate(img) if i == v)))
    return ClassFunction(group, tuple(vals))
