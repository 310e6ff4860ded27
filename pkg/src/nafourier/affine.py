"""Affine Dynkin diagrams, their Cartan data and the action of the length-zero group Omega."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import DescriptorError, InvalidParameters

Perm = tuple[int, ...]

# default isogeny per type: the group whose maximal compacts are classified
DEFAULT_ISOGENY = {"A": "adjoint", "B": "adjoint", "C": "adjoint", "D": "adjoint", "E": "adjoint", "F": "adjoint", "G": "adjoint"}


@dataclass(eq=False)
class AffineDiagramData:
    """Nodes 0..r of an affine diagram with bond multiplicities, root lengths and marks.

    ``bonds`` maps a sorted node pair to its multiplicity (0 encodes the doubly
    infinite bond of the rank-one affine diagram).  ``omega_generators`` are
    node permutations generating Omega for the chosen isogeny.
    """

    type: str
    rank: int
    bonds: dict[tuple[int, int], int]
    long: frozenset[int]
    marks: tuple[int, ...]
    omega_generators: tuple[Perm, ...]
    isogeny: str
    group_name: str = ""
    _adj: dict[int, set[int]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._adj = {i: set() for i in self.nodes}
        for i, j in self.bonds:
            self._adj[i].add(j)
            self._adj[j].add(i)

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(range(self.rank + 1))

    @property
    def label(self) -> str:
        return f"{self.type}({self.rank})" if self.type in "ABCD" else f"{self.type}{self.rank}"

    def neighbors(self, i: int) -> set[int]:
        return self._adj[i]

    def bond(self, i: int, j: int) -> int | None:
        return self.bonds.get((min(i, j), max(i, j)))

    def cartan(self, i: int, j: int) -> int:
        """<alpha_j, alpha_i^vee>."""
        if i == j:
            return 2
        k = self.bond(i, j)
        if k is None:
            return 0
        if k == 0:
            return -2
        if k == 1:
            return -1
        # a multiple bond: the long root sees -1, the short one sees -k
        return -1 if i in self.long else -k

    def cartan_matrix(self, subset: tuple[int, ...] | None = None) -> list[list[int]]:
        sub = self.nodes if subset is None else subset
        return [[self.cartan(i, j) for j in sub] for i in sub]

    @cached_property
    def omega(self) -> tuple[Perm, ...]:
        ident = tuple(self.nodes)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.omega_generators:
                    q = tuple(g[p[i]] for i in self.nodes)
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        return tuple(sorted(seen))

    def preserves_structure(self, perm: Perm) -> bool:
        for (i, j), k in self.bonds.items():
            if self.bond(perm[i], perm[j]) != k:
                return False
        if len(self.bonds) != len({(min(perm[i], perm[j]), max(perm[i], perm[j])) for i, j in self.bonds}):
            return False
        return all((perm[i] in self.long) == (i in self.long) for i in self.nodes) and all(
            self.marks[perm[i]] == self.marks[i] for i in self.nodes
        )

    def components(self, subset: set[int] | frozenset[int]) -> list[tuple[int, ...]]:
        left = set(subset)
        out = []
        while left:
            start = min(left)
            comp, stack = {start}, [start]
            while stack:
                v = stack.pop()
                for w in self._adj[v]:
                    if w in left and w not in comp:
                        comp.add(w)
                        stack.append(w)
            left -= comp
            out.append(tuple(sorted(comp)))
        return sorted(out)

    def component_type(self, comp: tuple[int, ...]) -> str:
        """Lie type of a connected proper subdiagram."""
        k = len(comp)
        members = set(comp)
        inner = {(i, j): m for (i, j), m in self.bonds.items() if i in members and j in members}
        mults = sorted(inner.values())
        if k == 1:
            return "C1" if self.type == "C" and comp[0] in self.long else "A1"
        degree = {v: sum(1 for w in self._adj[v] if w in members) for v in comp}
        if 3 in mults:
            return "G2"
        if 2 in mults:
            if k == 2:
                return "C2" if self.type == "C" else "B2"
            (i, j) = next(e for e, m in inner.items() if m == 2)
            if degree[i] == 2 and degree[j] == 2:
                return "F4"
            end = i if degree[i] == 1 else j
            return f"C{k}" if end in self.long else f"B{k}"
        if max(degree.values()) <= 2:
            return f"A{k}"
        centre = next(v for v in comp if degree[v] == 3)
        arms = []
        for w in self._adj[centre]:
            if w not in members:
                continue
            length, prev, cur = 1, centre, w
            while True:
                nxt = [x for x in self._adj[cur] if x in members and x != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                length += 1
            arms.append(length)
        arms.sort()
        if arms[0] == 1 and arms[1] == 1:
            return f"D{k}"
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return f"E{k}"
        raise DescriptorError(f"unrecognised subdiagram on nodes {comp}")


def _chain_bonds(nodes: list[int]) -> dict[tuple[int, int], int]:
    return {(min(a, b), max(a, b)): 1 for a, b in zip(nodes, nodes[1:])}


def _bond(bonds: dict, a: int, b: int, mult: int) -> None:
    bonds[(min(a, b), max(a, b))] = mult


def affine_diagram(kind: str, rank: int, isogeny: str | None = None) -> AffineDiagramData:
    """Build the affine diagram of the given type and rank.

    ``isogeny`` is ``"adjoint"`` (Omega the full diagram symmetry group coming
    from the centre) or ``"sc"`` (Omega trivial).  ``kind`` is one of
    A, B, C, D, E, F, G; for type A the rank is n - 1.
    """
    kind = kind.upper()
    if kind not in DEFAULT_ISOGENY:
        raise DescriptorError(f"unknown affine type {kind!r}")
    isogeny = isogeny or DEFAULT_ISOGENY[kind]
    if isogeny not in ("adjoint", "sc"):
        raise DescriptorError(f"unknown isogeny {isogeny!r}")
    r = rank
    nodes = list(range(r + 1))
    bonds: dict[tuple[int, int], int] = {}
    long: set[int] = set(nodes)
    gens: list[Perm] = []
    if kind == "A":
        if r < 1:
            raise InvalidParameters("type A needs rank at least 1")
        n = r + 1
        if n == 2:
            bonds[(0, 1)] = 0
        else:
            bonds.update(_chain_bonds(nodes + [0]))
        marks = (1,) * n
        gens.append(tuple((i + 1) % n for i in nodes))
        name = f"PGL{n}" if isogeny == "adjoint" else f"SL{n}"
    elif kind == "B":
        if r < 2:
            raise InvalidParameters("type B needs rank at least 2")
        bonds.update(_chain_bonds(list(range(1, r))))
        if r == 2:
            _bond(bonds, 0, 2, 2)
            _bond(bonds, 1, 2, 2)
        else:
            _bond(bonds, 0, 2, 1)
            _bond(bonds, r - 1, r, 2)
        long.discard(r)
        marks = (1, 1) + (2,) * (r - 1)
        gens.append(tuple([1, 0] + nodes[2:]))
        name = f"SO{2 * r + 1}" if isogeny == "adjoint" else f"Spin{2 * r + 1}"
    elif kind == "C":
        if r < 2:
            raise InvalidParameters("type C needs rank at least 2")
        bonds.update(_chain_bonds(list(range(1, r))))
        _bond(bonds, 0, 1, 2)
        _bond(bonds, r - 1, r, 2)
        long = {0, r}
        marks = (1,) + (2,) * (r - 1) + (1,)
        gens.append(tuple(r - i for i in nodes))
        name = f"PSp{2 * r}" if isogeny == "adjoint" else f"Sp{2 * r}"
    elif kind == "D":
        if r < 4:
            raise InvalidParameters("type D needs rank at least 4")
        bonds.update(_chain_bonds(list(range(1, r - 1))))
        _bond(bonds, 0, 2, 1)
        _bond(bonds, r - 2, r - 1, 1)
        _bond(bonds, r - 2, r, 1)
        marks = (1, 1) + (2,) * (r - 3) + (1, 1)
        middle = {i: r - i for i in range(2, r - 1)}
        if r % 2 == 0:
            swap = {0: 1, 1: 0, r - 1: r, r: r - 1}
            rev = {0: r, r: 0, 1: r - 1, r - 1: 1, **middle}
            gens.append(tuple(swap.get(i, i) for i in nodes))
            gens.append(tuple(rev[i] for i in nodes))
        else:
            rot = {0: r - 1, r - 1: 1, 1: r, r: 0, **middle}
            gens.append(tuple(rot[i] for i in nodes))
        name = f"PSO{2 * r}" if isogeny == "adjoint" else f"Spin{2 * r}"
    elif kind == "E":
        if r not in (6, 7, 8):
            raise InvalidParameters("type E needs rank 6, 7 or 8")
        bonds.update(_chain_bonds([1] + list(range(3, r + 1))))
        _bond(bonds, 2, 4, 1)
        if r == 6:
            _bond(bonds, 0, 2, 1)
            marks = (1, 1, 2, 2, 3, 2, 1)
            rot = {1: 6, 6: 0, 0: 1, 3: 5, 5: 2, 2: 3, 4: 4}
            gens.append(tuple(rot[i] for i in nodes))
        elif r == 7:
            _bond(bonds, 0, 1, 1)
            marks = (1, 2, 2, 3, 4, 3, 2, 1)
            flipmap = {0: 7, 7: 0, 1: 6, 6: 1, 3: 5, 5: 3, 2: 2, 4: 4}
            gens.append(tuple(flipmap[i] for i in nodes))
        else:
            _bond(bonds, 0, 8, 1)
            marks = (1, 2, 3, 4, 6, 5, 4, 3, 2)
        name = f"E{r}"
    elif kind == "F":
        if r != 4:
            raise InvalidParameters("type F needs rank 4")
        bonds.update(_chain_bonds([0, 1, 2]))
        _bond(bonds, 2, 3, 2)
        _bond(bonds, 3, 4, 1)
        long = {0, 1, 2}
        marks = (1, 2, 3, 4, 2)
        name = "F4"
    else:
        if r != 2:
            raise InvalidParameters("type G needs rank 2")
        _bond(bonds, 0, 2, 1)
        _bond(bonds, 1, 2, 3)
        long = {0, 2}
        marks = (1, 3, 2)
        name = "G2"
    if isogeny == "sc":
        gens = []
    diagram = AffineDiagramData(kind, r, bonds, frozenset(long), tuple(marks), tuple(gens), isogeny, name)
    for g in diagram.omega_generators:
        if not diagram.preserves_structure(g):
            raise DescriptorError(f"Omega generator {g} does not preserve the {diagram.label} diagram")
    return diagram


def parse_diagram(text: str, rank: int | None = None, isogeny: str | None = None) -> AffineDiagramData:
    """Accept ``A3``, ``C(2)``, ``E6`` or a bare letter with a separate rank."""
    t = text.strip().replace("(", "").replace(")", "").replace(" ", "")
    if not t:
        raise DescriptorError("empty diagram type")
    letter, digits = t[0].upper(), t[1:]
    if digits:
        if not digits.isdigit():
            raise DescriptorError(f"cannot parse diagram {text!r}")
        r = int(digits)
    elif rank is not None:
        r = rank
    else:
        raise DescriptorError(f"diagram {text!r} needs a rank")
    return affine_diagram(letter, r, isogeny)


def subgroups(elements: tuple[Perm, ...]) -> list[frozenset[Perm]]:
    """All subgroups of a small permutation group, each generated by at most two elements."""
    n = len(elements[0])
    ident = tuple(range(n))

    def closure(gens: tuple[Perm, ...]) -> frozenset[Perm]:
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for p in frontier:
                for g in gens:
                    q = tuple(g[p[i]] for i in range(n))
                    if q not in seen:
                        seen.add(q)
                        nxt.append(q)
            frontier = nxt
        return frozenset(seen)

    found = {closure(pair) for pair in itertools.combinations_with_replacement(elements, 2)}
    found.add(frozenset({ident}))
    return sorted(found, key=lambda s: (len(s), sorted(s)))
