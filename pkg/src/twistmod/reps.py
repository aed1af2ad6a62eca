"""kG-modules as explicit matrix representations and the functors between them.

Basis conventions (fixed, relied on by fixtures):

* direct sum: basis of the left summand, then the right one;
* tensor: row-major pairs, index ``i*dim(N) + j`` for ``e_i (x) f_j``;
* induction: coset-major, index ``r*dim(M) + j`` for ``reps[r] (x) e_j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import linalg
from .groups import Group, SubgroupEmbedding, left_cosets
from .linalg import DTYPE


class ModuleError(ValueError):
    pass


@dataclass(frozen=True)
class CheckReport:
    """Outcome of an exhaustive invariant check; ``failures`` lists violations."""

    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class Module:
    """A finite-dimensional kG-module: one action matrix per group element."""

    group: Group
    p: int
    action: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        linalg.check_prime(self.p)
        act = np.mod(np.asarray(self.action, dtype=DTYPE), self.p)
        if act.ndim != 3 or act.shape[0] != self.group.order or act.shape[1] != act.shape[2]:
            raise ModuleError(f"action must have shape (|G|, d, d); got {act.shape}")
        act.setflags(write=False)
        object.__setattr__(self, "action", act)

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return f"Module({label}{self.group.name}, p={self.p}, dim={self.dim})"

    def rho(self, g: int) -> np.ndarray:
        return self.action[g]

    def generator_matrices(self) -> list[np.ndarray]:
        return [self.action[g] for g in self.group.generators]

    def named(self, name: str) -> "Module":
        return Module(self.group, self.p, self.action, name)

    @classmethod
    def from_generators(cls, group: Group, p: int, images: Sequence[np.ndarray], name: str = "") -> "Module":
        """Extend generator images to all elements along a Cayley-graph spanning tree.

        The result is only a module if the images satisfy the group's
        relations; run :func:`check_module` when that is not known.
        """
        if len(images) != len(group.generators):
            raise ModuleError("need one image per generator")
        mats = [linalg.as_matrix(m, p) for m in images]
        d = mats[0].shape[0] if mats else 0
        if not mats:
            raise ModuleError("trivial group needs an explicit dimension; use Module(...) directly")
        by_gen = dict(zip(group.generators, mats))
        act = np.zeros((group.order, d, d), dtype=DTYPE)
        for x, parent, g in group.words():
            act[x] = linalg.identity(d) if parent < 0 else linalg.matmul(by_gen[g], act[parent], p)
        return cls(group, p, act, name)


def _same_context(m: Module, n: Module) -> None:
    if m.p != n.p:
        raise ModuleError(f"prime mismatch: {m.p} vs {n.p}")
    if not m.group.same_as(n.group):
        raise ModuleError(f"group mismatch: {m.group.name} vs {n.group.name}")


def trivial_module(group: Group, p: int, dim: int = 1) -> Module:
    act = np.broadcast_to(linalg.identity(dim), (group.order, dim, dim))
    return Module(group, p, act, "k" if dim == 1 else f"k^{dim}")


def regular_module(group: Group, p: int) -> Module:
    """Left regular module kG; g sends basis vector e_h to e_{gh}."""
    n = group.order
    act = np.zeros((n, n, n), dtype=DTYPE)
    cols = np.arange(n)
    for g in range(n):
        act[g, group.table[g], cols] = 1
    return Module(group, p, act, f"k{group.name}")


def permutation_module(emb: SubgroupEmbedding, p: int) -> Module:
    """k[G/H] = Ind_H^G(k)."""
    return induce(emb, trivial_module(emb.sub, p)).named(f"k[{emb.big.name}/{emb.sub.name}]")


def direct_sum(*mods: Module) -> Module:
    first = mods[0]
    for m in mods[1:]:
        _same_context(first, m)
    d = sum(m.dim for m in mods)
    act = np.zeros((first.group.order, d, d), dtype=DTYPE)
    off = 0
    for m in mods:
        act[:, off : off + m.dim, off : off + m.dim] = m.action
        off += m.dim
    return Module(first.group, first.p, act, "+".join(m.name or "?" for m in mods))


def tensor(m: Module, n: Module) -> Module:
    """Diagonal action g(x (x) y) = gx (x) gy."""
    _same_context(m, n)
    act = np.einsum("gik,gjl->gijkl", m.action, n.action).reshape(m.group.order, m.dim * n.dim, m.dim * n.dim)
    return Module(m.group, m.p, act % m.p, f"({m.name or '?'})x({n.name or '?'})")


def dual(m: Module) -> Module:
    """Contragredient module: g acts by rho(g^-1) transposed."""
    act = np.transpose(m.action[m.group.inverse], (0, 2, 1))
    return Module(m.group, m.p, act, f"({m.name or '?'})*")


def restrict(emb: SubgroupEmbedding, m: Module) -> Module:
    if not emb.big.same_as(m.group):
        raise ModuleError("module is not over the embedding's big group")
    return Module(emb.sub, m.p, m.action[emb.map], f"Res({m.name or '?'})")


def inflate(m: Module, big: Group, quotient_map: Sequence[int]) -> Module:
    """Pull ``m`` back along a surjection ``big -> m.group`` given on element indices."""
    qm = np.asarray(quotient_map, dtype=np.intp)
    if qm.shape != (big.order,):
        raise ModuleError("quotient map must be given for every element")
    out = Module(big, m.p, m.action[qm], f"Inf({m.name or '?'})")
    return out


def induce(emb: SubgroupEmbedding, m: Module) -> Module:
    """Ind_H^G(m), basis coset-major: index r*dim(m) + j for reps[r] (x) e_j."""
    if not emb.sub.same_as(m.group):
        raise ModuleError("module is not over the embedding's subgroup")
    cos = left_cosets(emb)
    big = emb.big
    k = len(cos.reps)
    d = m.dim
    act = np.zeros((big.order, k * d, k * d), dtype=DTYPE)
    for g in range(big.order):
        for i, rep in enumerate(cos.reps):
            j, h = cos.decompose(big.mul(g, rep))
            act[g, j * d : (j + 1) * d, i * d : (i + 1) * d] = m.action[h]
    return Module(big, m.p, act, f"Ind({m.name or '?'})")


def submodule_basis_is_invariant(m: Module, basis: np.ndarray) -> bool:
    """Whether the column span of ``basis`` is stable under every generator."""
    for a in m.generator_matrices():
        img = linalg.matmul(a, basis, m.p)
        if linalg.rank(np.hstack([basis, img]), m.p) != linalg.rank(basis, m.p):
            return False
    return True


def submodule(m: Module, basis: np.ndarray) -> Module:
    """The action on an invariant subspace, in the coordinates of the ``basis`` columns."""
    p = m.p
    basis = linalg.as_matrix(basis, p).reshape(m.dim, -1)
    if linalg.rank(basis, p) != basis.shape[1]:
        raise ModuleError("submodule basis is not linearly independent")
    full = np.hstack([basis, linalg.identity(m.dim)[:, linalg.complement_columns(basis, m.dim, p)]])
    left = linalg.inverse(full, p)[: basis.shape[1]]
    act = linalg.matmul(linalg.matmul(left[None], m.action, p), basis[None], p)
    if not np.array_equal(linalg.matmul(basis[None], act, p), linalg.matmul(m.action, basis[None], p)):
        raise ModuleError("subspace is not a submodule")
    return Module(m.group, p, act, f"sub({m.name or '?'})")


def generated_submodule(m: Module, vectors: np.ndarray) -> np.ndarray:
    """Basis (columns, echelon form) of the submodule generated by the given columns."""
    p = m.p
    space = linalg.EchelonSpace(m.dim, p)
    todo = [np.asarray(v) for v in np.asarray(vectors).reshape(m.dim, -1).T]
    gens = m.generator_matrices()
    while todo:
        v = todo.pop()
        if space.add(v):
            todo.extend(linalg.matmul(a, v[:, None], p)[:, 0] for a in gens)
    return space.rows.T.copy()


def change_basis(m: Module, b: np.ndarray) -> Module:
    """The isomorphic module with action b^-1 rho(g) b."""
    p = m.p
    binv = linalg.inverse(b, p)
    act = linalg.matmul(linalg.matmul(binv[None], m.action, p), b[None], p)
    return Module(m.group, p, act, m.name)


def quotient(m: Module, sub_basis: np.ndarray) -> tuple[Module, np.ndarray]:
    """Quotient by the invariant subspace spanned by the columns of ``sub_basis``.

    Returns the quotient module and the projection matrix (dim Q x dim M).
    The quotient basis is the images of the unit vectors complementing the
    subspace, in index order.
    """
    p = m.p
    sub = linalg.as_matrix(sub_basis, p).reshape(m.dim, -1)
    if not submodule_basis_is_invariant(m, sub):
        raise ModuleError("subspace is not a submodule")
    if sub.shape[1]:
        _, piv = linalg.rref(sub, p)
        sub = sub[:, piv]
    unit = linalg.identity(m.dim)[:, linalg.complement_columns(sub, m.dim, p)]
    binv = linalg.inverse(np.hstack([sub, unit]), p)
    proj = binv[sub.shape[1] :, :]
    act = linalg.matmul(linalg.matmul(proj, m.action, p), unit, p)
    return Module(m.group, p, act, f"{m.name or '?'}/sub"), proj


def check_module(m: Module) -> CheckReport:
    """Exhaustive check of the module axioms; failures name the offending elements."""
    failures: list[str] = []
    g = m.group
    p = m.p
    if not np.array_equal(m.action[g.identity], linalg.identity(m.dim)):
        failures.append("identity element does not act as the identity matrix")
    for x in range(g.order):
        if linalg.rank(m.action[x], p) != m.dim:
            failures.append(f"action of element {x} is singular")
    if m.dim:
        # rho(a) rho(b) for all pairs at once
        prods = linalg.matmul(m.action[:, None], m.action[None, :], p)
        want = m.action[g.table]
        bad = np.argwhere(np.any(prods != want, axis=(2, 3)))
        for a, b in bad[:10]:
            failures.append(f"rho({a})rho({b}) != rho({g.mul(int(a), int(b))})")
        if len(bad) > 10:
            failures.append(f"... {len(bad) - 10} more failing pairs")
    return CheckReport(tuple(failures))


def actions_equal(m: Module, n: Module) -> bool:
    return m.p == n.p and m.group.same_as(n.group) and np.array_equal(m.action, n.action)


# -- serialization -----------------------------------------------------------


def module_to_json(m: Module) -> dict:
    return {
        "p": m.p,
        "group": m.group.to_json(),
        "dim": m.dim,
        "action": [a.reshape(-1).tolist() for a in m.action],
        "name": m.name,
    }


def module_from_json(data: dict, group: Group | None = None) -> Module:
    g = group if group is not None else Group.from_json(data["group"])
    d = int(data["dim"])
    act = np.array(data["action"], dtype=DTYPE).reshape(g.order, d, d)
    return Module(g, int(data["p"]), act, data.get("name", ""))


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def save_module(m: Module, path: str | Path) -> None:
    Path(path).write_text(dumps(module_to_json(m)))


def load_module(path: str | Path) -> Module:
    return module_from_json(json.loads(Path(path).read_text()))
