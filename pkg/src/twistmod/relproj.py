"""Relative projectivity: Higman's trace criterion, a lifting oracle, P(w) and vertices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .groups import SubgroupEmbedding, are_conjugate, left_cosets, subgroups
from .morph import EquivariantMap, HomSpace, Spin, checksum, equivariance_failures, is_split_epi
from .reps import Module, ModuleError, dual, induce, permutation_module, restrict, tensor


@dataclass(frozen=True)
class ProjectivityVerdict:
    projective: bool
    method: str  # "trace", "graded-trace", "lifting-oracle" or "eval-split"
    witness: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.projective

    @property
    def witness_checksum(self) -> str | None:
        return None if self.witness is None else checksum(self.witness)

    def to_json(self) -> dict:
        return {
            "projective": self.projective,
            "method": self.method,
            "witness_checksum": self.witness_checksum,
        }


def _coset_matrices(emb: SubgroupEmbedding, m: Module) -> tuple[np.ndarray, np.ndarray]:
    reps = list(left_cosets(emb).reps)
    inv = m.group.inverse[reps]
    return m.action[reps], m.action[inv]


def relative_trace(theta: np.ndarray, emb: SubgroupEmbedding, m: Module) -> np.ndarray:
    """Tr_H^G(theta) = sum over coset reps g of g theta g^-1."""
    theta = linalg.as_matrix(theta, m.p)
    res = restrict(emb, m)
    if equivariance_failures(res, res, theta):
        raise ModuleError("theta is not an endomorphism of the restricted module")
    fwd, back = _coset_matrices(emb, m)
    terms = linalg.matmul(linalg.matmul(fwd, theta[None], m.p), back, m.p)
    return np.mod(terms.sum(axis=0), m.p)


def is_rel_projective(m: Module, emb: SubgroupEmbedding) -> ProjectivityVerdict:
    """Decide H-projectivity by asking whether id_M is a relative trace."""
    p = m.p
    if m.dim == 0:
        return ProjectivityVerdict(True, "trace", linalg.zeros(0, 0))
    res = restrict(emb, m)
    hs = HomSpace(res, res)
    basis = hs.basis_array()
    fwd, back = _coset_matrices(emb, m)
    # traces of every basis endomorphism at once: (basis, dim, dim)
    traces = np.zeros_like(basis)
    for a, b in zip(fwd, back):
        traces = np.mod(traces + linalg.matmul(linalg.matmul(a[None], basis, p), b[None], p), p)
    # traces are G-maps, so comparing them on G-generators of M suffices
    seeds = Spin(m).seed_vectors
    cols = linalg.matmul(traces, seeds[None], p).reshape(hs.dim, -1).T
    sol = linalg.solve_linear(cols, seeds.reshape(-1, 1), p)
    if sol is None:
        return ProjectivityVerdict(False, "trace")
    theta = np.mod(np.tensordot(sol.particular[:, 0], basis, axes=1), p).astype(linalg.DTYPE)
    if not np.array_equal(relative_trace(theta, emb, m), linalg.identity(m.dim)):
        raise AssertionError("trace witness failed exact re-verification")
    return ProjectivityVerdict(True, "trace", theta)


def canonical_surjection(m: Module, emb: SubgroupEmbedding) -> EquivariantMap:
    """Ind_H^G Res_H M -> M, rep_r (x) v |-> rep_r v."""
    ind = induce(emb, restrict(emb, m))
    fwd, _ = _coset_matrices(emb, m)
    return EquivariantMap(ind, m, np.hstack(list(fwd)))


def lifting_oracle(m: Module, emb: SubgroupEmbedding) -> bool:
    """Independent H-projectivity test: does Ind Res M -> M split?"""
    if m.dim == 0:
        return True
    return is_split_epi(canonical_surjection(m, emb)) is not None


def evaluation_map(m: Module, w: Module) -> EquivariantMap:
    """W (x) W* (x) M -> M, (e_i (x) e_j* (x) v) |-> delta_ij v."""
    if w.p != m.p or not w.group.same_as(m.group):
        raise ModuleError("w and M must live over the same group and prime")
    src = tensor(tensor(w, dual(w)), m)
    d, n = w.dim, m.dim
    ev = np.zeros((n, d * d * n), dtype=linalg.DTYPE)
    for i in range(d):
        ev[:, (i * d + i) * n : (i * d + i + 1) * n] = linalg.identity(n)
    return EquivariantMap(src, m, ev)


def is_w_projective(m: Module, w: Module) -> ProjectivityVerdict:
    """Membership of M in P(w): does the evaluation map W (x) W* (x) M -> M split?

    A section s corresponds, under tensor-hom adjunction, to an endomorphism
    phi of W (x) M with s(v) = sum_ij e_i (x) e_j* (x) phi_ij(v), where phi_ij
    is the (i, j) block of phi; ev o s is then the partial trace
    sum_i phi_ii.  So M is w-projective iff id_M is a partial trace of some
    phi in End_G(W (x) M), a problem on W (x) M instead of W (x) W* (x) M.
    The section is rebuilt from phi and verified before it is returned.
    """
    if w.p != m.p or not w.group.same_as(m.group):
        raise ModuleError("w and M must live over the same group and prime")
    p = m.p
    d, n = w.dim, m.dim
    if n == 0:
        return ProjectivityVerdict(True, "eval-split", linalg.zeros(0, 0))
    if d == 0:
        return ProjectivityVerdict(False, "eval-split")
    wm = tensor(w, m)
    hs = HomSpace(wm, wm)
    seeds = Spin(m).seed_vectors
    # partial trace applied to the seeds, as a linear function of phi
    rows = []
    for c in range(seeds.shape[1]):
        acc = np.zeros((n, hs.dim), dtype=linalg.DTYPE)
        for i in range(d):
            v = np.zeros(d * n, dtype=linalg.DTYPE)
            v[i * n : (i + 1) * n] = seeds[:, c]
            acc = (acc + hs.image_of(v)[i * n : (i + 1) * n]) % p
        rows.append(acc)
    sol = linalg.solve_linear(np.vstack(rows), seeds.T.reshape(-1, 1), p)
    if sol is None:
        return ProjectivityVerdict(False, "eval-split")
    phi = hs.map_matrix(sol.particular[:, 0])
    section = phi.reshape(d, n, d, n).transpose(0, 2, 1, 3).reshape(d * d * n, n)
    if section_failures(m, w, section):
        raise AssertionError("evaluation section failed exact re-verification")
    return ProjectivityVerdict(True, "eval-split", section)


def section_failures(m: Module, w: Module, section: np.ndarray) -> list[str]:
    """Check ev o s = id and G-linearity of s: M -> W (x) W* (x) M without building the big module."""
    p = m.p
    d, n = w.dim, m.dim
    out = []
    s = np.asarray(section).reshape(d, d, n, n)
    if not np.array_equal(np.mod(np.einsum("iiab->ab", s), p), linalg.identity(n)):
        out.append("ev o s != id")
    wdual = dual(w).action
    flat = s.reshape(d * d, n, n)
    for g in m.group.generators:
        # (rho_W (x) rho_W* (x) rho_M)(g) s  versus  s rho_M(g)
        inner = linalg.matmul(m.action[g][None], flat, p)
        coeff = linalg.kron(w.action[g], wdual[g], p)
        lhs = linalg.matmul(coeff, inner.reshape(d * d, n * n), p)
        rhs = linalg.matmul(flat, m.action[g][None], p).reshape(d * d, n * n)
        if not np.array_equal(lhs, rhs):
            out.append(f"section does not commute with generator {g}")
            break
    return out


def section_from_trace(m: Module, emb: SubgroupEmbedding, theta: np.ndarray) -> np.ndarray:
    """Evaluation section for w = k[G/H] built from theta with Tr_H^G(theta) = id.

    phi(e_r (x) v) = e_r (x) g_r theta g_r^-1 v is a G-endomorphism of
    k[G/H] (x) M whose partial trace is the relative trace of theta.
    """
    fwd, back = _coset_matrices(emb, m)
    d, n = len(fwd), m.dim
    blocks = linalg.matmul(linalg.matmul(fwd, linalg.as_matrix(theta, m.p)[None], m.p), back, m.p)
    section = np.zeros((d, d, n, n), dtype=linalg.DTYPE)
    section[np.arange(d), np.arange(d)] = blocks
    return section.reshape(d * d * n, n)


def is_w_projective_via_trace(m: Module, emb: SubgroupEmbedding, theta: np.ndarray) -> ProjectivityVerdict:
    """P(k[G/H]) membership from a relative-trace witness, checked as an evaluation section."""
    if not np.array_equal(relative_trace(theta, emb, m), linalg.identity(m.dim)):
        raise ValueError("theta does not have relative trace equal to the identity")
    section = section_from_trace(m, emb, theta)
    bad = section_failures(m, permutation_module(emb, m.p), section)
    if bad:
        raise AssertionError("section from trace witness failed verification: " + "; ".join(bad))
    return ProjectivityVerdict(True, "eval-split", section)


def is_projective(m: Module) -> ProjectivityVerdict:
    from .groups import trivial_subgroup

    return is_rel_projective(m, trivial_subgroup(m.group))


def vertex(m: Module, candidates: list[SubgroupEmbedding] | None = None) -> list[SubgroupEmbedding]:
    """Minimal subgroups H (up to conjugacy) with M relatively H-projective."""
    subs = subgroups(m.group) if candidates is None else candidates
    verdict: dict[frozenset, bool] = {}
    for h in subs:
        img = h.image
        if any(v and k <= img for k, v in verdict.items()):
            verdict[img] = True  # H-projective and H <= K  =>  K-projective
            continue
        verdict[img] = is_rel_projective(m, h).projective
    proj = [h for h in subs if verdict[h.image]]
    minimal = [h for h in proj if not any(k.image < h.image for k in proj)]
    out: list[SubgroupEmbedding] = []
    for h in minimal:
        if not any(are_conjugate(h, k) for k in out):
            out.append(h)
    return out
