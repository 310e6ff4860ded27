"""Finite groups with canonical element encodings and conjugacy-class data.

Every group exposes the same small interface: ``mul``, ``inv``, ``identity``,
``generators``, sorted ``elements``, ``conjugacy_classes`` (ordered by their
minimal representative) and ``class_index``.  Symmetric groups, abelian groups,
direct products and cyclic wreath products compute their classes
structurally; everything else falls back to orbit enumeration under
conjugation by generators.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Callable, Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import DescriptorError, InvalidAutomorphism, NotASubgroup, SizeLimitExceeded

Element = Hashable
ELEMENT_LIMIT = 100_000


@dataclass(frozen=True)
class ConjugacyClass:
    rep: Element
    size: int


class FiniteGroup:
    """Common machinery; subclasses supply multiplication and enumeration."""

    identity: Element
    descriptor: str = "G"

    # ---- to be provided by subclasses --------------------------------

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generators(self) -> tuple[Element, ...]:
        raise NotImplementedError

    def _enumerate(self) -> Iterable[Element]:
        raise NotImplementedError

    # ---- generic helpers ---------------------------------------------

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.descriptor}>"

    def __str__(self) -> str:
        return self.descriptor

    def format_element(self, x: Element) -> str:
        return str(x)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        if self.order > ELEMENT_LIMIT:
            raise SizeLimitExceeded(f"{self.descriptor} has {self.order} elements; limit is {ELEMENT_LIMIT}")
        return tuple(sorted(self._enumerate()))

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    def contains(self, x: Element) -> bool:
        return x in self.element_set

    def conj(self, g: Element, x: Element) -> Element:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def commutes(self, a: Element, b: Element) -> bool:
        return self.mul(a, b) == self.mul(b, a)

    def power(self, x: Element, k: int) -> Element:
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity
        base = x
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, x: Element) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.commutes(a, b) for a, b in itertools.combinations(gens, 2))

    # ---- conjugacy ----------------------------------------------------

    @cached_property
    def _element_data(self) -> tuple[list[ConjugacyClass], dict, dict]:
        """Classes by orbit enumeration plus, for every element, a conjugator onto its representative."""
        elems = self.elements
        gens = self.generators
        gen_inv = [self.inv(s) for s in gens]
        class_of: dict = {}
        to_rep: dict = {}
        classes: list[ConjugacyClass] = []
        for x in elems:
            if x in class_of:
                continue
            idx = len(classes)
            class_of[x] = idx
            to_rep[x] = self.identity
            queue = [x]
            for y in queue:
                for s, s_inv in zip(gens, gen_inv):
                    z = self.mul(self.mul(s, y), s_inv)
                    if z not in class_of:
                        class_of[z] = idx
                        to_rep[z] = self.mul(to_rep[y], s_inv)
                        queue.append(z)
            classes.append(ConjugacyClass(x, len(queue)))
        return classes, class_of, to_rep

    def conjugacy_classes(self) -> list[ConjugacyClass]:
        return self._element_data[0]

    @cached_property
    def class_reps(self) -> tuple[Element, ...]:
        return tuple(c.rep for c in self.conjugacy_classes())

    @cached_property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.conjugacy_classes())

    @property
    def num_classes(self) -> int:
        return len(self.conjugacy_classes())

    def class_index(self, x: Element) -> int:
        return self._element_data[1][x]

    def conjugator_to_rep(self, x: Element) -> Element:
        """An element g with g x g^-1 equal to the class representative of x."""
        return self._element_data[2][x]

    def centralizer_order(self, class_idx: int) -> int:
        return self.order // self.class_sizes[class_idx]

    @cached_property
    def inverse_class(self) -> tuple[int, ...]:
        return tuple(self.class_index(self.inv(r)) for r in self.class_reps)

    def power_class(self, class_idx: int, k: int) -> int:
        return self.class_index(self.power(self.class_reps[class_idx], k))

    def centralizer(self, x: Element) -> FiniteGroup:
        if self.is_abelian:
            return self
        members = [g for g in self.elements if self.commutes(g, x)]
        if len(members) == self.order:
            return self
        return Subgroup(self, members, descriptor=f"Z_{self.descriptor}({self.format_element(x)})")

    def class_members(self, class_idx: int) -> list[Element]:
        data = self._element_data[1]
        return [x for x in self.elements if data[x] == class_idx]

    def is_subgroup_of(self, other: FiniteGroup) -> bool:
        if other is self:
            return True
        return all(other.contains(x) for x in self.elements)


def brute_force_classes(group: FiniteGroup) -> list[ConjugacyClass]:
    """Orbit enumeration regardless of any structural shortcut; used as an oracle."""
    return FiniteGroup._element_data.func(group)[0]


# ---- subgroups -------------------------------------------------------------


def _closure(group: FiniteGroup, gens: Sequence[Element]) -> set:
    seen = {group.identity}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = group.mul(x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


class Subgroup(FiniteGroup):
    """A subgroup stored as its full element set."""

    def __init__(
        self,
        parent: FiniteGroup,
        elements: Iterable[Element] | None = None,
        *,
        generators: Sequence[Element] | None = None,
        descriptor: str | None = None,
    ) -> None:
        self.parent = parent
        self.identity = parent.identity
        if elements is None:
            if generators is None:
                raise ValueError("need elements or generators")
            elements = _closure(parent, generators)
        self._members = tuple(sorted(set(elements)))
        if len(self._members) > ELEMENT_LIMIT:
            raise SizeLimitExceeded(f"subgroup of order {len(self._members)}")
        self._gens = tuple(generators) if generators is not None else None
        self.descriptor = descriptor or f"subgroup({parent.descriptor})"

    def mul(self, a: Element, b: Element) -> Element:
        return self.parent.mul(a, b)

    def inv(self, a: Element) -> Element:
        return self.parent.inv(a)

    def format_element(self, x: Element) -> str:
        return self.parent.format_element(x)

    @property
    def order(self) -> int:
        return len(self._members)

    def _enumerate(self) -> Iterable[Element]:
        return self._members

    @cached_property
    def generators(self) -> tuple[Element, ...]:
        if self._gens is not None:
            return self._gens
        gens: list[Element] = []
        span = {self.identity}
        for x in self._members:
            if x not in span:
                gens.append(x)
                span = _closure(self, gens)
                if len(span) == len(self._members):
                    break
        return tuple(gens)

    @cached_property
    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.commutes(a, b) for a, b in itertools.combinations(gens, 2))


def subgroup(group: FiniteGroup, generators: Sequence[Element], descriptor: str | None = None) -> Subgroup:
    for g in generators:
        if not group.contains(g):
            raise NotASubgroup(f"{g!r} is not an element of {group.descriptor}")
    return Subgroup(group, generators=generators, descriptor=descriptor)


# ---- abelian groups ---------------------------------------------------------


class AbelianGroup(FiniteGroup):
    """Z/n_1 x ... x Z/n_r with exponent-tuple encoding."""

    def __init__(self, orders: Sequence[int], descriptor: str | None = None) -> None:
        if any(n < 1 for n in orders):
            raise ValueError("cyclic factor orders must be positive")
        self.orders = tuple(orders)
        self.identity = tuple(0 for _ in orders)
        if descriptor is None:
            descriptor = "x".join(f"Z{n}" for n in orders) if orders else "trivial"
        self.descriptor = descriptor

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def inv(self, a: tuple) -> tuple:
        return tuple((-x) % n for x, n in zip(a, self.orders))

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def generators(self) -> tuple[tuple, ...]:
        gens = []
        for i, n in enumerate(self.orders):
            if n > 1:
                gens.append(tuple(int(i == j) for j in range(len(self.orders))))
        return tuple(gens)

    def _enumerate(self) -> Iterable[tuple]:
        return itertools.product(*(range(n) for n in self.orders))

    def contains(self, x: Element) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == len(self.orders)
            and all(isinstance(v, int) and 0 <= v < n for v, n in zip(x, self.orders))
        )

    @property
    def is_abelian(self) -> bool:
        return True

    def conjugacy_classes(self) -> list[ConjugacyClass]:
        return [ConjugacyClass(x, 1) for x in self.elements]

    def class_index(self, x: tuple) -> int:
        idx = 0
        for v, n in zip(x, self.orders):
            idx = idx * n + v
        return idx

    def conjugator_to_rep(self, x: Element) -> Element:
        return self.identity

    def format_element(self, x: tuple) -> str:
        return str(x[0]) if len(x) == 1 else "(" + ",".join(map(str, x)) + ")"


def cyclic(n: int) -> AbelianGroup:
    return AbelianGroup((n,), descriptor=f"Z{n}")


def elementary_abelian_2(k: int) -> AbelianGroup:
    return AbelianGroup((2,) * k, descriptor=f"Z2^{k}")


def trivial_group() -> AbelianGroup:
    return AbelianGroup((), descriptor="trivial")


# ---- direct products ----------------------------------------------------------


class DirectProduct(FiniteGroup):
    def __init__(self, factors: Sequence[FiniteGroup], descriptor: str | None = None) -> None:
        self.factors = tuple(factors)
        self.identity = tuple(f.identity for f in self.factors)
        self.descriptor = descriptor or "product(" + ",".join(f.descriptor for f in self.factors) + ")"

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a: tuple) -> tuple:
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    @property
    def order(self) -> int:
        return math.prod(f.order for f in self.factors)

    @cached_property
    def generators(self) -> tuple[tuple, ...]:
        gens = []
        for i, f in enumerate(self.factors):
            for s in f.generators:
                g = list(self.identity)
                g[i] = s
                gens.append(tuple(g))
        return tuple(gens)

    def _enumerate(self) -> Iterable[tuple]:
        return itertools.product(*(f.elements for f in self.factors))

    def contains(self, x: Element) -> bool:
        return isinstance(x, tuple) and len(x) == len(self.factors) and all(
            f.contains(v) for f, v in zip(self.factors, x)
        )

    @cached_property
    def is_abelian(self) -> bool:
        return all(f.is_abelian for f in self.factors)

    def conjugacy_classes(self) -> list[ConjugacyClass]:
        out = []
        for combo in itertools.product(*(f.conjugacy_classes() for f in self.factors)):
            out.append(ConjugacyClass(tuple(c.rep for c in combo), math.prod(c.size for c in combo)))
        return out

    def class_index(self, x: tuple) -> int:
        idx = 0
        for f, v in zip(self.factors, x):
            idx = idx * f.num_classes + f.class_index(v)
        return idx

    def conjugator_to_rep(self, x: tuple) -> tuple:
        return tuple(f.conjugator_to_rep(v) for f, v in zip(self.factors, x))

    def centralizer(self, x: tuple) -> FiniteGroup:
        parts = [f.centralizer(v) for f, v in zip(self.factors, x)]
        if all(p is f for p, f in zip(parts, self.factors)):
            return self
        return DirectProduct(parts)

    def format_element(self, x: tuple) -> str:
        return "(" + ",".join(f.format_element(v) for f, v in zip(self.factors, x)) + ")"


# ---- permutations -------------------------------------------------------------


def partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as weakly decreasing tuples, in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def cycle_decomposition(perm: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(perm)
    cycles = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i)
            i = perm[i]
        cycles.append(cyc)
    return cycles


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycle_decomposition(perm)), reverse=True))


def z_lambda(shape: Sequence[int]) -> int:
    """Centralizer order in S_n of a permutation with the given cycle type."""
    counts = Counter(shape)
    return math.prod(i**m * math.factorial(m) for i, m in counts.items())


def minimal_permutation(shape: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least permutation with the given cycle type."""
    img: list[int] = []
    pos = 0
    for length in sorted(shape):
        if length == 1:
            img.append(pos)
        else:
            img.extend(range(pos + 1, pos + length))
            img.append(pos)
        pos += length
    return tuple(img)


def permutation_sign(perm: Sequence[int]) -> int:
    return -1 if sum(len(c) - 1 for c in cycle_decomposition(perm)) % 2 else 1


def format_cycles(perm: Sequence[int]) -> str:
    cycles = [c for c in cycle_decomposition(perm) if len(c) > 1]
    if not cycles:
        return "()"
    return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cycles)


class SymmetricGroup(FiniteGroup):
    """S_n on {0..n-1}; elements are image tuples and p*q applies q first."""

    def __init__(self, n: int) -> None:
        if n < 0:
            raise ValueError("degree must be nonnegative")
        self.n = n
        self.identity = tuple(range(n))
        self.descriptor = f"S{n}"

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple(a[i] for i in b)

    def inv(self, a: tuple) -> tuple:
        out = [0] * len(a)
        for i, v in enumerate(a):
            out[v] = i
        return tuple(out)

    @property
    def order(self) -> int:
        return math.factorial(self.n)

    @cached_property
    def generators(self) -> tuple[tuple, ...]:
        n = self.n
        if n < 2:
            return ()
        swap = (1, 0) + tuple(range(2, n))
        if n == 2:
            return (swap,)
        return (swap, tuple(range(1, n)) + (0,))

    def _enumerate(self) -> Iterable[tuple]:
        return itertools.permutations(range(self.n))

    def contains(self, x: Element) -> bool:
        return isinstance(x, tuple) and sorted(x) == list(range(self.n))

    @cached_property
    def _structural(self) -> tuple[list[ConjugacyClass], dict]:
        entries = sorted(
            (minimal_permutation(shape), shape) for shape in partitions(self.n)
        )
        classes = [ConjugacyClass(rep, self.order // z_lambda(shape)) for rep, shape in entries]
        index = {shape: i for i, (_, shape) in enumerate(entries)}
        return classes, index

    def conjugacy_classes(self) -> list[ConjugacyClass]:
        return self._structural[0]

    @cached_property
    def class_shapes(self) -> tuple[tuple[int, ...], ...]:
        return tuple(cycle_type(c.rep) for c in self.conjugacy_classes())

    def class_index(self, x: Sequence[int]) -> int:
        return self._structural[1][cycle_type(x)]

    def conjugator_to_rep(self, x: Sequence[int]) -> tuple:
        rep = self.class_reps[self.class_index(x)]
        src = sorted(cycle_decomposition(x), key=len)
        dst = sorted(cycle_decomposition(rep), key=len)
        g = [0] * self.n
        for a, b in zip(src, dst):
            for i, j in zip(a, b):
                g[i] = j
        return tuple(g)

    def format_element(self, x: Sequence[int]) -> str:
        return format_cycles(x)


def symmetric(n: int) -> SymmetricGroup:
    return SymmetricGroup(n)


class SignedPermutationGroup(FiniteGroup):
    """Weyl group of type B_n acting on Z^n.

    An element w is the tuple (s_0, ..., s_{n-1}) with w(e_i) = sign(s_i) e_{|s_i|-1}.
    """

    def __init__(self, n: int) -> None:
        self.n = n
        self.identity = tuple(range(1, n + 1))
        self.descriptor = f"B{n}"

    def mul(self, a: tuple, b: tuple) -> tuple:
        out = []
        for v in b:
            w = a[abs(v) - 1]
            out.append(w if v > 0 else -w)
        return tuple(out)

    def inv(self, a: tuple) -> tuple:
        out = [0] * self.n
        for i, v in enumerate(a):
            out[abs(v) - 1] = (i + 1) if v > 0 else -(i + 1)
        return tuple(out)

    @property
    def order(self) -> int:
        return 2**self.n * math.factorial(self.n)

    @cached_property
    def generators(self) -> tuple[tuple, ...]:
        n = self.n
        if n == 0:
            return ()
        gens = [(-1,) + tuple(range(2, n + 1))]
        for i in range(n - 1):
            img = list(range(1, n + 1))
            img[i], img[i + 1] = img[i + 1], img[i]
            gens.append(tuple(img))
        return tuple(gens)

    def _enumerate(self) -> Iterable[tuple]:
        for perm in itertools.permutations(range(1, self.n + 1)):
            for signs in itertools.product((1, -1), repeat=self.n):
                yield tuple(s * p for s, p in zip(signs, perm))

    def signed_cycle_type(self, x: tuple) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Lengths of positive and of negative cycles, each sorted decreasingly."""
        seen = [False] * self.n
        positive, negative = [], []
        for start in range(self.n):
            if seen[start]:
                continue
            length, sign, i = 0, 1, start
            while not seen[i]:
                seen[i] = True
                length += 1
                sign *= 1 if x[i] > 0 else -1
                i = abs(x[i]) - 1
            (positive if sign > 0 else negative).append(length)
        return tuple(sorted(positive, reverse=True)), tuple(sorted(negative, reverse=True))

    def matrix(self, x: tuple) -> list[list[int]]:
        m = [[0] * self.n for _ in range(self.n)]
        for i, v in enumerate(x):
            m[abs(v) - 1][i] = 1 if v > 0 else -1
        return m


def signed_permutation(n: int) -> SignedPermutationGroup:
    return SignedPermutationGroup(n)


# ---- automorphisms and cyclic extensions --------------------------------------------


@dataclass(frozen=True, eq=False)
class Automorphism:
    """A validated automorphism of a finite group, stored as an image table."""

    group: FiniteGroup
    images: Mapping[Element, Element]
    order: int
    name: str = "theta"

    def __call__(self, x: Element) -> Element:
        return self.images[x]

    def power_table(self, k: int) -> dict[Element, Element]:
        k %= self.order
        table = {x: x for x in self.images}
        for _ in range(k):
            table = {x: self.images[v] for x, v in table.items()}
        return table


def automorphism_action(
    group: FiniteGroup, theta: Callable[[Element], Element] | Mapping[Element, Element], name: str = "theta"
) -> Automorphism:
    """Validate that theta is a bijective homomorphism of group and compute its order."""
    fn = theta.__getitem__ if isinstance(theta, Mapping) else theta
    images = {x: fn(x) for x in group.elements}
    if set(images.values()) != group.element_set:
        raise InvalidAutomorphism("map is not a bijection of the group")
    # multiplicativity against generators propagates to all products
    for a in group.elements:
        for s in group.generators:
            if images[group.mul(a, s)] != group.mul(images[a], images[s]):
                raise InvalidAutomorphism(
                    f"theta({group.format_element(a)}*{group.format_element(s)}) differs from the product of images"
                )
    order = 1
    current = dict(images)
    while any(current[x] != x for x in group.elements):
        current = {x: images[v] for x, v in current.items()}
        order += 1
    return Automorphism(group, images, order, name)


class SemidirectCyclic(FiniteGroup):
    """H x| Z/c with the generator acting by a supplied automorphism; elements are (h, a)."""

    def __init__(self, base: FiniteGroup, theta: Automorphism, c: int, descriptor: str | None = None) -> None:
        if c % theta.order:
            raise InvalidAutomorphism(f"automorphism order {theta.order} does not divide {c}")
        self.base = base
        self.theta = theta
        self.c = c
        self.identity = (base.identity, 0)
        self._powers = [theta.power_table(k) for k in range(theta.order)]
        self.descriptor = descriptor or f"semidirect({base.descriptor},{theta.name},{c})"

    def mul(self, a: tuple, b: tuple) -> tuple:
        h, i = a
        k, j = b
        return (self.base.mul(h, self._powers[i % self.theta.order][k]), (i + j) % self.c)

    def inv(self, a: tuple) -> tuple:
        h, i = a
        back = (-i) % self.c
        return (self._powers[back % self.theta.order][self.base.inv(h)], back)

    @property
    def order(self) -> int:
        return self.base.order * self.c

    @cached_property
    def generators(self) -> tuple[tuple, ...]:
        gens = [(s, 0) for s in self.base.generators]
        if self.c > 1:
            gens.append((self.base.identity, 1))
        return tuple(gens)

    def _enumerate(self) -> Iterable[tuple]:
        return ((h, a) for h in self.base.elements for a in range(self.c))

    def contains(self, x: Element) -> bool:
        return isinstance(x, tuple) and len(x) == 2 and x[1] in range(self.c) and self.base.contains(x[0])

    def coset(self, x: tuple) -> int:
        return x[1]

    def format_element(self, x: tuple) -> str:
        h, a = x
        return f"({self.base.format_element(h)};{a})"


def semidirect_cyclic(base: FiniteGroup, theta: Automorphism, c: int) -> SemidirectCyclic:
    return SemidirectCyclic(base, theta, c)


def _min_rotation(seq: tuple) -> tuple[tuple, int]:
    """Least rotation of seq and the number of distinct rotations."""
    rots = {seq[i:] + seq[:i] for i in range(len(seq))} if seq else {seq}
    return min(rots), len(rots)


class WreathCyclic(FiniteGroup):
    """H^d x| Z/d with Z/d shifting coordinates: (h; a)(k; b) = (h * shift^a(k); a + b).

    shift^a(k)_i = k_{i-a}.  Classes come from the per-coset reduction: in the
    coset of a, with g = gcd(a, d), an element is determined up to conjugacy by
    the necklace of H-classes of its cycle products.
    """

    def __init__(self, base: FiniteGroup, d: int, descriptor: str | None = None) -> None:
        if d < 1:
            raise ValueError("number of copies must be positive")
        self.base = base
        self.d = d
        self.identity = (tuple(base.identity for _ in range(d)), 0)
        self.descriptor = descriptor or f"wreath({base.descriptor},{d})"

    def mul(self, a: tuple, b: tuple) -> tuple:
        h, i = a
        k, j = b
        d, base = self.d, self.base
        return (tuple(base.mul(h[t], k[(t - i) % d]) for t in range(d)), (i + j) % d)

    def inv(self, a: tuple) -> tuple:
        h, i = a
        d, base = self.d, self.base
        return (tuple(base.inv(h[(t + i) % d]) for t in range(d)), (-i) % d)

    @property
    def order(self) -> int:
        return self.base.order**self.d * self.d

    @cached_property
    def generators(self) -> tuple[tuple, ...]:
        ident = self.base.identity
        gens = []
        for s in self.base.generators:
            gens.append(((s,) + tuple(ident for _ in range(self.d - 1)), 0))
        if self.d > 1:
            gens.append((tuple(ident for _ in range(self.d)), 1))
        return tuple(gens)

    def _enumerate(self) -> Iterable[tuple]:
        for base in itertools.product(self.base.elements, repeat=self.d):
            for a in range(self.d):
                yield (base, a)

    def contains(self, x: Element) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and x[1] in range(self.d)
            and len(x[0]) == self.d
            and all(self.base.contains(h) for h in x[0])
        )

    def coset(self, x: tuple) -> int:
        return x[1]

    def cycle_products(self, x: tuple) -> list[Element]:
        """P_c = h_c h_{c-a} ... h_{c-(r-1)a} for c < gcd(a, d)."""
        h, a = x
        d = self.d
        g = math.gcd(a, d)
        r = d // g
        out = []
        for c in range(g):
            p = self.base.identity
            for t in range(r):
                p = self.base.mul(p, h[(c - t * a) % d])
            out.append(p)
        return out

    @cached_property
    def _structural(self) -> tuple[list[ConjugacyClass], dict]:
        base, d = self.base, self.d
        base_reps = base.class_reps
        base_sizes = base.class_sizes
        k = len(base_reps)
        entries = []
        for a in range(d):
            g = math.gcd(a, d)
            r = d // g
            seen = set()
            for seq in itertools.product(range(k), repeat=g):
                neck, period = _min_rotation(seq)
                if neck in seen:
                    continue
                seen.add(neck)
                h = [base.identity] * (d - g) + [base_reps[i] for i in neck]
                size = period * base.order ** ((r - 1) * g) * math.prod(base_sizes[i] for i in neck)
                entries.append(((tuple(h), a), size, (a, neck)))
        entries.sort(key=lambda e: e[0])
        classes = [ConjugacyClass(rep, size) for rep, size, _ in entries]
        index = {key: i for i, (_, _, key) in enumerate(entries)}
        return classes, index

    def conjugacy_classes(self) -> list[ConjugacyClass]:
        return self._structural[0]

    def class_key(self, x: tuple) -> tuple[int, tuple[int, ...]]:
        seq = tuple(self.base.class_index(p) for p in self.cycle_products(x))
        return x[1], _min_rotation(seq)[0]

    def class_index(self, x: tuple) -> int:
        return self._structural[1][self.class_key(x)]

    def as_permutation(self, x: tuple) -> tuple[int, ...]:
        """Action on d blocks of m points: (i, l) -> (i + a, h_{i+a}(l)), point index i*m + l."""
        if not isinstance(self.base, SymmetricGroup):
            raise TypeError("permutation realization needs a symmetric base group")
        h, a = x
        m, d = self.base.n, self.d
        img = [0] * (m * d)
        for i in range(d):
            j = (i + a) % d
            for l in range(m):
                img[i * m + l] = j * m + h[j][l]
        return tuple(img)

    def format_element(self, x: tuple) -> str:
        h, a = x
        return "(" + ",".join(self.base.format_element(v) for v in h) + f";{a})"


def wreath_cyclic(base: FiniteGroup, d: int) -> WreathCyclic:
    return WreathCyclic(base, d)


def flip(base: FiniteGroup) -> WreathCyclic:
    """base^2 x| Z/2 with the generator swapping the two copies."""
    return WreathCyclic(base, 2, descriptor=f"flip({base.descriptor})")


def product(*factors: FiniteGroup) -> DirectProduct:
    return DirectProduct(factors)


# ---- structural helpers ------------------------------------------------------------


def coset_map(group: FiniteGroup, normal: FiniteGroup, generator: Element) -> dict[Element, int]:
    """Map each element x to e with x in normal * generator^e, for a cyclic quotient."""
    out: dict[Element, int] = {}
    e = 0
    g_pow = group.identity
    while True:
        if normal.contains(g_pow) and e > 0:
            break
        for h in normal.elements:
            x = group.mul(h, g_pow)
            if x in out:
                raise ValueError("quotient is not generated by the given element")
            out[x] = e
        e += 1
        g_pow = group.mul(g_pow, generator)
    if len(out) != group.order:
        raise ValueError("quotient is not cyclic on the given generator")
    return out


def is_normal(group: FiniteGroup, sub: FiniteGroup) -> bool:
    return all(sub.contains(group.conj(s, h)) for s in group.generators for h in sub.generators)


def normal_closure(group: FiniteGroup, elements: Iterable[Element]) -> frozenset:
    current = set(_closure(group, list(elements)))
    while True:
        extra = {group.conj(s, x) for s in group.generators for x in current} - current
        if not extra:
            return frozenset(current)
        current = _closure(group, list(current | extra))


def derived_subgroup(group: FiniteGroup) -> frozenset:
    comms = {
        group.mul(group.mul(a, b), group.mul(group.inv(a), group.inv(b)))
        for a in group.elements
        for b in group.generators
    }
    return normal_closure(group, comms)


# ---- descriptors -------------------------------------------------------------------


_TOKEN = re.compile(r"\s*([A-Za-z_]+\d*(?:\^\d+)?|\d+|[(),])")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DescriptorError(f"cannot parse group descriptor near {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def _automorphism_by_name(group: FiniteGroup, name: str) -> Automorphism:
    if name == "inv":
        if not group.is_abelian:
            raise DescriptorError("inversion is only an automorphism of abelian groups")
        return automorphism_action(group, group.inv, name)
    m = re.fullmatch(r"pow(\d+)", name)
    if m:
        k = int(m.group(1))
        if not group.is_abelian:
            raise DescriptorError("power maps are only used for abelian groups")
        return automorphism_action(group, lambda x: group.power(x, k), name)
    if name in ("swap", "shift"):
        if not isinstance(group, DirectProduct):
            raise DescriptorError(f"{name} needs a direct product")
        return automorphism_action(group, lambda x: x[-1:] + x[:-1], name)
    raise DescriptorError(f"unknown automorphism {name!r}")


def parse_group(text: str) -> FiniteGroup:
    """Build a group from descriptors such as Z6, Z2^3, S4, B2, wreath(S3,2), flip(Z2), semidirect(Z5,inv,2)."""
    tokens = _tokenize(text)
    pos = 0

    def expect(tok: str) -> None:
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            raise DescriptorError(f"expected {tok!r} in {text!r}")
        pos += 1

    def number() -> int:
        nonlocal pos
        if pos >= len(tokens) or not tokens[pos].isdigit():
            raise DescriptorError(f"expected a number in {text!r}")
        pos += 1
        return int(tokens[pos - 1])

    def group() -> FiniteGroup:
        nonlocal pos
        if pos >= len(tokens):
            raise DescriptorError(f"unexpected end of {text!r}")
        tok = tokens[pos]
        pos += 1
        m = re.fullmatch(r"Z(\d+)(?:\^(\d+))?", tok)
        if m:
            n, k = int(m.group(1)), int(m.group(2) or 1)
            if n < 1:
                raise DescriptorError("cyclic order must be positive")
            if m.group(2):
                return AbelianGroup((n,) * k, descriptor=tok)
            return cyclic(n)
        m = re.fullmatch(r"S(\d+)", tok)
        if m:
            return symmetric(int(m.group(1)))
        m = re.fullmatch(r"B(\d+)", tok)
        if m:
            return signed_permutation(int(m.group(1)))
        if tok == "trivial":
            return trivial_group()
        if tok == "wreath":
            expect("(")
            base = group()
            expect(",")
            d = number()
            expect(")")
            return wreath_cyclic(base, d)
        if tok == "flip":
            expect("(")
            base = group()
            expect(")")
            return flip(base)
        if tok == "product":
            expect("(")
            factors = [group()]
            while pos < len(tokens) and tokens[pos] == ",":
                pos += 1
                factors.append(group())
            expect(")")
            return DirectProduct(factors)
        if tok == "semidirect":
            expect("(")
            base = group()
            expect(",")
            if pos >= len(tokens):
                raise DescriptorError("missing automorphism name")
            aut_name = tokens[pos]
            pos += 1
            expect(",")
            c = number()
            expect(")")
            try:
                theta = _automorphism_by_name(base, aut_name)
                return SemidirectCyclic(base, theta, c)
            except InvalidAutomorphism as exc:
                raise DescriptorError(str(exc)) from exc
        raise DescriptorError(f"unknown group constructor {tok!r}")

    result = group()
    if pos != len(tokens):
        raise DescriptorError(f"trailing input in {text!r}")
    return result


def class_equation_holds(group: FiniteGroup) -> bool:
    sizes = group.class_sizes
    return sum(sizes) == group.order and all(group.order % s == 0 for s in sizes)


def lcm_of_orders(group: FiniteGroup) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), (group.element_order(r) for r in group.class_reps), 1)
