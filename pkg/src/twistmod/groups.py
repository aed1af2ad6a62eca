"""Finite groups as explicit multiplication tables.

Elements are the integers ``0..order-1``; ``table[a, b]`` is the index of
the product ``a*b``.  Every constructor here places the identity at index 0.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_ORDER = 64


class GroupError(ValueError):
    pass


def max_group_order() -> int:
    """Subgroup-enumeration bound, overridable by TWISTMOD_MAX_GROUP_ORDER."""
    raw = os.environ.get("TWISTMOD_MAX_GROUP_ORDER")
    return int(raw) if raw else DEFAULT_MAX_ORDER


@dataclass(frozen=True, eq=False)
class Group:
    table: np.ndarray
    generators: tuple[int, ...]
    name: str = "G"
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.intp)
        n = table.shape[0]
        if table.shape != (n, n) or n == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        if table.min() < 0 or table.max() >= n:
            raise GroupError("table entries out of range")
        want = np.arange(n)
        for i in range(n):
            if not (np.array_equal(np.sort(table[i]), want) and np.array_equal(np.sort(table[:, i]), want)):
                raise GroupError("table is not a Latin square")
        ids = [e for e in range(n) if np.array_equal(table[e], want)]
        if len(ids) != 1 or not np.array_equal(table[:, ids[0]], want):
            raise GroupError("no two-sided identity")
        e = ids[0]
        if n <= DEFAULT_MAX_ORDER and not np.array_equal(table[table, :], table[:, table]):
            raise GroupError("multiplication is not associative")
        inv = np.argmax(table == e, axis=1)
        if not np.array_equal(table[inv, np.arange(n)], np.full(n, e)):
            raise GroupError("inverse rows inconsistent")
        table.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))
        object.__setattr__(self, "identity", int(e))
        object.__setattr__(self, "inverse", inv)
        if len(self.closure(self.generators)) != n:
            raise GroupError("generators do not generate the group")

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"Group({self.name!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    def closure(self, elements: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``elements``."""
        found = {self.identity}
        frontier = [self.identity]
        gens = [int(g) for g in elements]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in found:
                        found.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(found)

    def words(self) -> list[tuple[int, int]]:
        """BFS spanning tree of the Cayley graph as ``(element, parent, gen)``.

        element == gen * parent; the identity comes first with parent -1.
        """
        order = [self.identity]
        info = {self.identity: (-1, -1)}
        i = 0
        while i < len(order):
            x = order[i]
            for g in self.generators:
                y = int(self.table[g, x])
                if y not in info:
                    info[y] = (x, g)
                    order.append(y)
            i += 1
        return [(x, *info[x]) for x in order]

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "table": self.table.tolist(),
            "generators": list(self.generators),
            "name": self.name,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Group":
        table = np.array(data["table"], dtype=np.intp)
        if table.shape[0] != data["order"]:
            raise GroupError("order does not match table size")
        return cls(table, tuple(data["generators"]), data.get("name", "G"))

    def same_as(self, other: "Group") -> bool:
        return self is other or (
            self.order == other.order and np.array_equal(self.table, other.table)
        )


@dataclass(frozen=True, eq=False)
class SubgroupEmbedding:
    """An injective homomorphism ``sub -> big``, given on element indices."""

    sub: Group
    big: Group
    map: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.intp)
        if m.shape != (self.sub.order,):
            raise GroupError("embedding map has the wrong length")
        if len(set(m.tolist())) != len(m):
            raise GroupError("embedding is not injective")
        if m[self.sub.identity] != self.big.identity:
            raise GroupError("embedding does not preserve the identity")
        if not np.array_equal(m[self.sub.table], self.big.table[np.ix_(m, m)]):
            raise GroupError("embedding is not multiplicative")
        m.setflags(write=False)
        object.__setattr__(self, "map", m)

    @property
    def index(self) -> int:
        return self.big.order // self.sub.order

    @property
    def image(self) -> frozenset[int]:
        return frozenset(int(x) for x in self.map)

    def __repr__(self) -> str:
        return f"SubgroupEmbedding({self.sub.name} -> {self.big.name}, order {self.sub.order})"


@dataclass(frozen=True, eq=False)
class CosetData:
    reps: tuple[int, ...]
    rep_of: np.ndarray  # element -> position of its coset rep
    h_of: np.ndarray  # element -> sub index h with g = reps[i] * map(h)

    def decompose(self, g: int) -> tuple[int, int]:
        return int(self.rep_of[g]), int(self.h_of[g])


def cyclic(q: int, name: str | None = None) -> Group:
    """Cyclic group Z/q with generator u = 1; element i is u**i."""
    if q < 1:
        raise GroupError("cyclic group order must be positive")
    idx = np.arange(q)
    table = (idx[:, None] + idx[None, :]) % q
    return Group(table, (1,) if q > 1 else (), name or f"C{q}")


def direct_product(g1: Group, g2: Group, name: str | None = None):
    """G1 x G2 with element (a, b) at index a*|G2| + b, plus both factor embeddings."""
    n1, n2 = g1.order, g2.order
    a = np.arange(n1 * n2) // n2
    b = np.arange(n1 * n2) % n2
    table = g1.table[np.ix_(a, a)] * n2 + g2.table[np.ix_(b, b)]
    gens = [g * n2 + g2.identity for g in g1.generators] + [g1.identity * n2 + h for h in g2.generators]
    prod = Group(table, tuple(gens), name or f"{g1.name}x{g2.name}")
    emb1 = SubgroupEmbedding(g1, prod, np.arange(n1) * n2 + g2.identity)
    emb2 = SubgroupEmbedding(g2, prod, g1.identity * n2 + np.arange(n2))
    return prod, emb1, emb2


def klein_four() -> Group:
    return direct_product(cyclic(2), cyclic(2), "V4")[0]


def permutation_group(generators: Sequence[Sequence[int]], name: str = "G") -> Group:
    """Group generated by permutations (images of 0..n-1), identity first."""
    gens = [tuple(int(x) for x in g) for g in generators]
    n = len(gens[0])
    ident = tuple(range(n))
    elements = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elements):
        x = elements[i]
        for g in gens:
            y = tuple(g[x[k]] for k in range(n))  # g after x
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
        i += 1
    order = len(elements)
    table = np.empty((order, order), dtype=np.intp)
    for a, pa in enumerate(elements):
        for b, pb in enumerate(elements):
            table[a, b] = index[tuple(pa[pb[k]] for k in range(n))]
    return Group(table, tuple(index[g] for g in gens), name)


def symmetric3() -> Group:
    return permutation_group([(1, 0, 2), (1, 2, 0)], "S3")


def dihedral8() -> Group:
    return permutation_group([(1, 2, 3, 0), (3, 2, 1, 0)], "D8")


def quaternion8() -> Group:
    # left regular representation of Q8 on {1,i,j,k,-1,-i,-j,-k}
    i_perm = (1, 4, 3, 6, 5, 0, 7, 2)
    j_perm = (2, 7, 4, 1, 6, 3, 0, 5)
    return permutation_group([i_perm, j_perm], "Q8")


def identity_embedding(g: Group) -> SubgroupEmbedding:
    return SubgroupEmbedding(g, g, np.arange(g.order))


def subgroup_from_elements(big: Group, elements: Iterable[int], name: str | None = None) -> SubgroupEmbedding:
    """Embedding of the subgroup generated by ``elements``; sub elements sorted, identity first."""
    elems = big.closure(elements)
    ordered = [big.identity] + sorted(e for e in elems if e != big.identity)
    pos = {e: i for i, e in enumerate(ordered)}
    n = len(ordered)
    table = np.empty((n, n), dtype=np.intp)
    for i, a in enumerate(ordered):
        for j, b in enumerate(ordered):
            table[i, j] = pos[big.mul(a, b)]
    gens: list[int] = []
    span = frozenset([big.identity])
    for e in ordered:
        if e not in span:
            gens.append(e)
            span = big.closure(gens)
    sub = Group(table, tuple(pos[g] for g in gens), name or f"<{','.join(map(str, gens))}>")
    return SubgroupEmbedding(sub, big, np.array(ordered))


def trivial_subgroup(big: Group) -> SubgroupEmbedding:
    return subgroup_from_elements(big, [], "1")


def left_cosets(emb: SubgroupEmbedding) -> CosetData:
    """Transversal of G/H (first element of each coset in index order)."""
    big = emb.big
    image = emb.map
    pos_in_sub = np.full(big.order, -1, dtype=np.intp)
    pos_in_sub[image] = np.arange(emb.sub.order)
    rep_of = np.full(big.order, -1, dtype=np.intp)
    h_of = np.full(big.order, -1, dtype=np.intp)
    reps: list[int] = []
    for g in range(big.order):
        if rep_of[g] >= 0:
            continue
        i = len(reps)
        reps.append(g)
        for h in range(emb.sub.order):
            x = big.table[g, image[h]]
            rep_of[x] = i
            h_of[x] = h
    return CosetData(tuple(reps), rep_of, h_of)


def subgroups(g: Group, max_order: int | None = None) -> list[SubgroupEmbedding]:
    """All subgroups, by closure of cyclic extensions, sorted by (order, elements)."""
    bound = max_group_order() if max_order is None else max_order
    if g.order > bound:
        raise GroupError(f"group order {g.order} exceeds subgroup enumeration bound {bound}")
    trivial = frozenset([g.identity])
    seen = {trivial}
    frontier = [trivial]
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(g.order):
                if x in s:
                    continue
                t = g.closure(set(s) | {x})
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    ordered = sorted(seen, key=lambda s: (len(s), sorted(s)))
    return [subgroup_from_elements(g, s) for s in ordered]


def conjugate_set(g: Group, elements: Iterable[int], x: int) -> frozenset[int]:
    xi = g.inv(x)
    return frozenset(g.mul(g.mul(x, e), xi) for e in elements)


def are_conjugate(a: SubgroupEmbedding, b: SubgroupEmbedding) -> bool:
    if a.sub.order != b.sub.order:
        return False
    target = b.image
    return any(conjugate_set(a.big, a.image, x) == target for x in range(a.big.order))


def is_subconjugate(a: SubgroupEmbedding, b: SubgroupEmbedding) -> bool:
    """Whether a is contained in some conjugate of b."""
    if b.sub.order % a.sub.order:
        return False
    return any(conjugate_set(a.big, a.image, x) <= b.image for x in range(a.big.order))


def is_latin(g: Group) -> bool:
    n = g.order
    want = np.arange(n)
    return all(
        np.array_equal(np.sort(g.table[i]), want) and np.array_equal(np.sort(g.table[:, i]), want)
        for i in range(n)
    )


def compose_embeddings(inner: SubgroupEmbedding, outer: SubgroupEmbedding) -> SubgroupEmbedding:
    """K -> H -> G from K -> H and H -> G."""
    if not inner.big.same_as(outer.sub):
        raise GroupError("embeddings do not compose")
    return SubgroupEmbedding(inner.sub, outer.big, outer.map[inner.map])


__all__ = [
    "Group",
    "GroupError",
    "SubgroupEmbedding",
    "CosetData",
    "cyclic",
    "direct_product",
    "klein_four",
    "permutation_group",
    "symmetric3",
    "dihedral8",
    "quaternion8",
    "identity_embedding",
    "subgroup_from_elements",
    "trivial_subgroup",
    "left_cosets",
    "subgroups",
    "are_conjugate",
    "compose_embeddings",
    "is_subconjugate",
    "max_group_order",
]

