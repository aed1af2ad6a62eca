"""Brute-force reference computations used to pin down expected values."""

import itertools

import numpy as np


def all_matrices(rows, cols, p):
    """Every rows x cols matrix over GF(p) as one stacked array."""
    n = rows * cols
    grid = np.array(list(itertools.product(range(p), repeat=n)), dtype=np.int64)
    return grid.reshape(-1, rows, cols)


def equivariant_count(src, dst):
    """Number of kG-maps src -> dst by enumeration (tiny modules only)."""
    p = src.p
    mats = all_matrices(dst.dim, src.dim, p)
    ok = np.ones(len(mats), dtype=bool)
    for g in src.group.generators:
        lhs = np.einsum("nij,jk->nik", mats, src.action[g]) % p
        rhs = np.einsum("ij,njk->nik", dst.action[g], mats) % p
        ok &= np.all(lhs == rhs, axis=(1, 2))
    return int(ok.sum()), mats[ok]


def has_retraction(f):
    """Search all kG-maps s: Y -> X for s f = 1."""
    _, maps = equivariant_count(f.dst, f.src)
    want = np.eye(f.src.dim, dtype=np.int64)
    return any(np.array_equal((s @ f.matrix) % f.p, want) for s in maps)


def has_section(f):
    _, maps = equivariant_count(f.dst, f.src)
    want = np.eye(f.dst.dim, dtype=np.int64)
    return any(np.array_equal((f.matrix @ s) % f.p, want) for s in maps)


def subgroup_sets(group):
    """All subsets closed under multiplication that contain the identity (order <= 8)."""
    n = group.order
    found = []
    others = [x for x in range(n) if x != group.identity]
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            s = {group.identity, *combo}
            if all(group.mul(a, b) in s for a in s for b in s):
                found.append(frozenset(s))
    return found


def binomial_residues(q, p):
    """(-1)^i C(q-1, i) mod p via Pascal's triangle, no library binomials."""
    row = [1]
    for _ in range(q - 1):
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    return [((-1) ** i * c) % p for i, c in enumerate(row)]
