"""Seeded random modules for cross-checking the projectivity oracles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .groups import (
    Group,
    SubgroupEmbedding,
    cyclic,
    dihedral8,
    direct_product,
    klein_four,
    quaternion8,
    subgroups,
    symmetric3,
)
from .reps import (
    Module,
    change_basis,
    direct_sum,
    generated_submodule,
    induce,
    quotient,
    regular_module,
    submodule,
    tensor,
    trivial_module,
)


def group_pool() -> list[tuple[Group, int]]:
    """Small groups of order at most 16, each with a prime dividing its order."""
    c2, c4, v4 = cyclic(2), cyclic(4), klein_four()
    return [
        (c2, 2),
        (c4, 2),
        (v4, 2),
        (symmetric3(), 2),
        (symmetric3(), 3),
        (dihedral8(), 2),
        (quaternion8(), 2),
        (direct_product(c2, c4, "C2xC4")[0], 2),
        (direct_product(v4, c2, "V4xC2")[0], 2),
        (direct_product(v4, c4, "V4xC4")[0], 2),
        (cyclic(3), 3),
        (direct_product(cyclic(3), cyclic(3), "C3xC3")[0], 3),
        (cyclic(9), 3),
        (cyclic(6), 3),
    ]


@dataclass(frozen=True)
class Instance:
    module: Module
    subgroup: SubgroupEmbedding
    recipe: str


def random_invertible(n: int, p: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        b = rng.integers(0, p, size=(n, n))
        if linalg.rank(b, p) == n:
            return linalg.as_matrix(b, p)


class ModuleSampler:
    """Random modules over one group, built from a few recipes and kept under ``max_dim``."""

    def __init__(self, group: Group, p: int, rng: np.random.Generator, max_dim: int):
        self.group = group
        self.p = p
        self.rng = rng
        self.max_dim = max_dim
        self.subs = subgroups(group)

    def _pick(self, seq):
        return seq[int(self.rng.integers(len(seq)))]

    def base(self, budget: int) -> tuple[Module, str]:
        g, p = self.group, self.p
        options = ["trivial"]
        if g.order <= budget:
            options.append("regular")
        small = [s for s in self.subs if s.index <= budget]
        if small:
            options += ["permutation", "induced"]
        kind = self._pick(options)
        if kind == "regular":
            return regular_module(g, p), "kG"
        if kind == "permutation":
            s = self._pick(small)
            return induce(s, trivial_module(s.sub, p)), f"k[G/H{s.sub.order}]"
        if kind == "induced":
            s = self._pick(small)
            inner_budget = budget // s.index
            inner = ModuleSampler(s.sub, p, self.rng, inner_budget)
            m, r = inner.base(inner_budget) if inner_budget >= 1 else (trivial_module(s.sub, p), "k")
            m, r2 = inner.maybe_cut(m, r)
            return induce(s, m), f"Ind_{s.sub.order}({r2})"
        d = int(self.rng.integers(1, min(3, budget) + 1))
        return trivial_module(g, p, d), f"k^{d}"

    def maybe_cut(self, m: Module, recipe: str) -> tuple[Module, str]:
        """Replace m by a random cyclic submodule or quotient (or leave it)."""
        if m.dim < 2:
            return m, recipe
        choice = int(self.rng.integers(3))
        if choice == 0:
            return m, recipe
        v = self.rng.integers(0, self.p, size=(m.dim, 1))
        if not v.any():
            return m, recipe
        basis = generated_submodule(m, v)
        if basis.shape[1] in (0, m.dim):
            return m, recipe
        if choice == 1:
            return submodule(m, basis), f"sub({recipe})"
        return quotient(m, basis)[0], f"quot({recipe})"

    def sample(self) -> tuple[Module, str]:
        m, r = self.base(self.max_dim)
        m, r = self.maybe_cut(m, r)
        room = self.max_dim - m.dim
        roll = int(self.rng.integers(3))
        if roll == 1 and room >= 1:
            n, r2 = self.base(room)
            if n.dim <= room:
                m, r = direct_sum(m, n), f"{r}+{r2}"
        elif roll == 2 and m.dim <= self.max_dim // 2:
            n, r2 = self.base(self.max_dim // m.dim)
            if m.dim * n.dim <= self.max_dim:
                m, r = tensor(m, n), f"{r}x{r2}"
        m = change_basis(m, random_invertible(m.dim, self.p, self.rng))
        return m.named(r), r


def random_instances(count: int, seed: int, max_dim: int = 24, budget: int = 128) -> list[Instance]:
    """``count`` random (module, subgroup) pairs with |G| * dim M <= budget and dim M <= max_dim.

    The product bound keeps the P(kG) test (which works inside kG (x) M)
    at desk scale.
    """
    rng = np.random.default_rng(seed)
    pool = group_pool()
    out: list[Instance] = []
    while len(out) < count:
        g, p = pool[int(rng.integers(len(pool)))]
        cap = min(max_dim, budget // g.order)
        if cap < 1:
            continue
        sampler = ModuleSampler(g, p, rng, cap)
        m, recipe = sampler.sample()
        if m.dim == 0 or m.dim > cap:
            continue
        h = sampler._pick(sampler.subs)
        out.append(Instance(m, h, f"{g.name}/p{p}/{recipe}/H{h.sub.order}"))
    return out
