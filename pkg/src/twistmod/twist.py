"""Twisted induction of a short exact sequence of kH-modules to k[H x C_q].

Summands are numbered 1..2q-1 along the chain

    X -1-> X -1-> ... -1-> X -d1-> Y -d2-> Z -1-> ... -1-> Z -> 0

(positions 1..q-1 are copies of X, position q is Y, the rest copies of Z).
H acts block-diagonally, and the cyclic generator u acts as I + N where N
moves each summand one step to the right along the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import linalg
from .groups import SubgroupEmbedding, cyclic, direct_product
from .linalg import DTYPE
from .morph import EquivariantMap, HomSpace, ShortExactSeq, check_ses, equivariance_failures
from .relproj import ProjectivityVerdict, is_rel_projective, relative_trace
from .reps import Module, check_module, induce, inflate, module_to_json, restrict


class TwistError(ValueError):
    pass


@dataclass(frozen=True)
class Summand:
    position: int  # 1-based, along the chain
    kind: str  # "X", "Y" or "Z"
    offset: int
    dim: int

    @property
    def slice(self) -> slice:
        return slice(self.offset, self.offset + self.dim)


@dataclass(frozen=True, eq=False)
class TwistModule:
    module: Module
    layout: tuple[Summand, ...]
    q: int
    source: ShortExactSeq
    h_embedding: SubgroupEmbedding
    c_embedding: SubgroupEmbedding
    shift: np.ndarray  # N = u - 1

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def p(self) -> int:
        return self.module.p

    def summand(self, s: int) -> Summand:
        return self.layout[s - 1]

    def summand_module(self, s: int) -> Module:
        kind = self.layout[s - 1].kind
        return {"X": self.source.X, "Y": self.source.Y, "Z": self.source.Z}[kind]

    def to_json(self) -> dict:
        data = module_to_json(self.module)
        data["twist"] = {
            "q": self.q,
            "layout": [[s.position, s.kind, s.offset, s.dim] for s in self.layout],
        }
        return data


def _layout(q: int, dx: int, dy: int, dz: int) -> tuple[Summand, ...]:
    out = []
    off = 0
    kinds = ["X"] * (q - 1) + ["Y"] + ["Z"] * (q - 1)
    for pos, kind in enumerate(kinds, start=1):
        d = {"X": dx, "Y": dy, "Z": dz}[kind]
        out.append(Summand(pos, kind, off, d))
        off += d
    return tuple(out)


def _step_map(S: ShortExactSeq, q: int, s: int) -> np.ndarray:
    """The arrow from summand s to summand s+1 (s <= 2q-2)."""
    if s == q - 1:
        return S.d1.matrix
    if s == q:
        return S.d2.matrix
    d = S.X.dim if s < q else S.Z.dim
    return linalg.identity(d)


def twisted_induction(S: ShortExactSeq, q: int, p: int | None = None) -> TwistModule:
    if p is not None and p != S.p:
        raise TwistError(f"prime {p} does not match the sequence's prime {S.p}")
    p = S.p
    if q < 2 or not linalg.is_power_of(q, p):
        raise TwistError(f"q = {q} must be a power of p = {p} with q >= 2")
    report = check_ses(S)
    if not report.ok:
        raise TwistError("source sequence is not exact: " + "; ".join(report.failures))

    H = S.group
    G, emb_h, emb_c = direct_product(H, cyclic(q), name=f"{H.name}xC{q}")
    lay = _layout(q, *S.dims)
    dim = sum(s.dim for s in lay)

    shift = np.zeros((dim, dim), dtype=DTYPE)
    for s in range(1, 2 * q - 1):
        src, dst = lay[s - 1], lay[s]
        shift[dst.slice, src.slice] = _step_map(S, q, s)
    if linalg.matpow(shift, q, p).any():
        raise AssertionError("shift is not nilpotent of order q")
    u = np.mod(linalg.identity(dim) + shift, p)
    if not np.array_equal(linalg.matpow(u, q, p), linalg.identity(dim)):
        raise AssertionError("(I+N)^q != I")

    images = []
    for h in H.generators:
        blk = np.zeros((dim, dim), dtype=DTYPE)
        for s in lay:
            src_mod = {"X": S.X, "Y": S.Y, "Z": S.Z}[s.kind]
            blk[s.slice, s.slice] = src_mod.action[h]
        if linalg.matmul(blk, shift, p).tolist() != linalg.matmul(shift, blk, p).tolist():
            raise AssertionError("shift does not commute with the H action")
        images.append(blk)
    gens = list(G.generators)
    u_index = emb_c.map[1]
    by_elem = dict(zip([emb_h.map[h] for h in H.generators], images))
    by_elem[u_index] = u
    mod = Module.from_generators(G, p, [by_elem[g] for g in gens], f"twist({S.name or 'S'},q={q})")
    return TwistModule(mod, lay, q, S, emb_h, emb_c, shift)


def validate_twist(T: TwistModule) -> list[str]:
    """Full invariant check of a twisted module (slow: all pairs of elements)."""
    failures = list(check_module(T.module).failures)
    p = T.p
    if linalg.matpow(T.shift, T.q, p).any():
        failures.append("N^q != 0")
    for i in range(1, T.q):
        if comb(T.q, i) % p:
            failures.append(f"C({T.q},{i}) is not divisible by {p}")
    H = T.source.group
    for h in range(H.order):
        act = T.module.action[T.h_embedding.map[h]]
        for s in T.layout:
            want = T.summand_module(s.position).action[h]
            if not np.array_equal(act[s.slice, s.slice], want):
                failures.append(f"H element {h} is not block-diagonal on summand {s.position}")
    return failures


# -- projectivity ------------------------------------------------------------


def _chain(T: TwistModule) -> dict[tuple[int, int], np.ndarray]:
    """P[a, b]: the composite of arrows from summand b to summand a (b <= a)."""
    p = T.p
    S, q = T.source, T.q
    P: dict[tuple[int, int], np.ndarray] = {}
    n = 2 * q - 1
    for b in range(1, n + 1):
        P[b, b] = linalg.identity(T.summand(b).dim)
        for a in range(b + 1, n + 1):
            P[a, b] = linalg.matmul(_step_map(S, q, a - 1), P[a - 1, b], p)
    return P


def _graded_trace(T: TwistModule) -> ProjectivityVerdict:
    """H-projectivity through a graded Frobenius trace.

    With x = u - 1, kC_q has the dual bases x^i and x^(q-1-i), so M is
    H-projective iff id_M = sum_i x^i theta x^(q-1-i) for some kH-map theta.
    The module is graded by summand position (x raises degree by one), so
    theta can be taken homogeneous of degree -(q-1): blocks from summand
    t+q-1 to summand t.  The trace commutes with x, so it is equal to the
    identity as soon as it is on the diagonal blocks of X_1, Y and Z_1.
    """
    p, q = T.p, T.q
    P = _chain(T)
    pairs = [(t, t + q - 1) for t in range(1, q + 1)]
    cache: dict[tuple[str, str], list[np.ndarray]] = {}
    unknowns: list[tuple[int, int, np.ndarray]] = []
    for t, s in pairs:
        key = (T.summand(s).kind, T.summand(t).kind)
        if key not in cache:
            cache[key] = HomSpace(T.summand_module(s), T.summand_module(t)).basis_matrices()
        unknowns.extend((t, s, b) for b in cache[key])

    checked = [1, q, q + 1]
    cols = []
    for t, s, b in unknowns:
        col = []
        for r in checked:
            i = r - t
            blk = np.zeros((T.summand(r).dim, T.summand(r).dim), dtype=DTYPE)
            if 0 <= i <= q - 1:
                blk = linalg.matmul(linalg.matmul(P[r, t], b, p), P[s, r], p)
            col.append(blk.reshape(-1))
        cols.append(np.concatenate(col))
    rhs = np.concatenate([linalg.identity(T.summand(r).dim).reshape(-1) for r in checked])
    if not cols:
        ok = not rhs.any()
        return ProjectivityVerdict(ok, "graded-trace", linalg.zeros(T.dim, T.dim) if ok else None)
    sol = linalg.solve_linear(np.array(cols, dtype=DTYPE).T, rhs, p)
    if sol is None:
        return ProjectivityVerdict(False, "graded-trace")
    theta = linalg.zeros(T.dim, T.dim)
    coeff = sol.particular[:, 0]
    for c, (t, s, b) in zip(coeff, unknowns):
        if c:
            ts, ss = T.summand(t).slice, T.summand(s).slice
            theta[ts, ss] = (theta[ts, ss] + int(c) * b) % p
    _verify_frobenius_witness(T, theta)
    return ProjectivityVerdict(True, "graded-trace", theta)


def frobenius_trace(T: TwistModule, theta: np.ndarray) -> np.ndarray:
    """sum_{i<q} x^i theta x^(q-1-i) with x = u - 1."""
    p, q = T.p, T.q
    powers = [linalg.identity(T.dim)]
    for _ in range(q - 1):
        powers.append(linalg.matmul(T.shift, powers[-1], p))
    out = linalg.zeros(T.dim, T.dim)
    for i in range(q):
        out = (out + linalg.matmul(linalg.matmul(powers[i], theta, p), powers[q - 1 - i], p)) % p
    return out


def coset_trace_witness(T: TwistModule, theta: np.ndarray) -> np.ndarray:
    """Turn a graded witness into theta' with Tr_H^G(theta') = sum_i u^i theta' u^-i = id.

    Both traces come from dual bases of the symmetric algebra kC_q for two
    symmetrizing forms, so theta' = theta z for a unit z of kC_q; z is found
    by a q-variable linear solve and the result is verified exactly.
    """
    p, q = T.p, T.q
    u = T.module.action[T.c_embedding.map[1]]
    powers = [linalg.identity(T.dim)]
    for _ in range(q - 1):
        powers.append(linalg.matmul(u, powers[-1], p))
    cand = [linalg.matmul(theta, pw, p) for pw in powers]
    traces = [relative_trace(c, T.h_embedding, T.module).reshape(-1) for c in cand]
    sol = linalg.solve_linear(np.array(traces).T, linalg.identity(T.dim).reshape(-1, 1), p)
    if sol is None:
        raise AssertionError("no unit of kC_q converts the graded witness")
    out = linalg.zeros(T.dim, T.dim)
    for z, c in zip(sol.particular[:, 0], cand):
        out = (out + int(z) * c) % p
    if not np.array_equal(relative_trace(out, T.h_embedding, T.module), linalg.identity(T.dim)):
        raise AssertionError("converted witness failed exact re-verification")
    return out


def _verify_frobenius_witness(T: TwistModule, theta: np.ndarray) -> None:
    res = restrict(T.h_embedding, T.module)
    if equivariance_failures(res, res, theta):
        raise AssertionError("graded witness is not kH-linear")
    if not np.array_equal(frobenius_trace(T, theta), linalg.identity(T.dim)):
        raise AssertionError("graded witness failed exact re-verification")


def twist_projectivity(T: TwistModule, method: str = "graded-trace") -> ProjectivityVerdict:
    """Is the twisted module relatively H-projective?

    ``method="trace"`` runs the generic Higman test over End_H(Res T),
    which is only practical for small modules; the default exploits the
    grading of the twisted module and scales to the telescope stages.
    """
    if method == "trace":
        return is_rel_projective(T.module, T.h_embedding)
    if method == "graded-trace":
        return _graded_trace(T)
    raise ValueError(f"unknown method {method!r}")


# -- factorization through the induced module --------------------------------


@dataclass(frozen=True, eq=False)
class ThetaBlocks:
    """theta: T -> Ind_H^G Res_H (X (x) k) with pi o theta = projection onto X_1."""

    twist: TwistModule
    matrix: np.ndarray
    kernel: tuple[np.ndarray, ...] = ()

    def block(self, r: int, s: int, matrix: np.ndarray | None = None) -> np.ndarray:
        """theta_{r,s}: summand s -> coset u^(r-1); r is read mod q."""
        mat = self.matrix if matrix is None else matrix
        dx = self.twist.source.X.dim
        r0 = (r - 1) % self.twist.q
        return mat[r0 * dx : (r0 + 1) * dx, self.twist.summand(s).slice]

    def perturbed(self, coeffs) -> "ThetaBlocks":
        p = self.twist.p
        mat = self.matrix.copy()
        for c, k in zip(coeffs, self.kernel):
            mat = (mat + int(c) * k) % p
        return ThetaBlocks(self.twist, mat, self.kernel)


def induced_target(T: TwistModule) -> tuple[Module, EquivariantMap]:
    """Ind_H^G Res_H (X (x) k) and the surjection pi onto X (x) k."""
    X = T.source.X
    G = T.module.group
    xk = inflate(X, G, np.arange(G.order) // T.q).named("X(x)k")
    ind = induce(T.h_embedding, restrict(T.h_embedding, xk))
    pi = np.hstack([linalg.identity(X.dim)] * T.q)
    return ind, EquivariantMap(ind, xk, pi)


def solve_factorization(T: TwistModule) -> ThetaBlocks | None:
    """Solve for a G-map theta with pi o theta = (1, 0, ..., 0); None if infeasible."""
    p = T.p
    ind, pi = induced_target(T)
    proj = linalg.zeros(T.source.X.dim, T.dim)
    proj[:, T.summand(1).slice] = linalg.identity(T.source.X.dim)
    if T.source.X.dim == 0:
        return ThetaBlocks(T, linalg.zeros(0, T.dim))
    hs = HomSpace(T.module, ind)
    seeds = hs.spin.seed_vectors
    a = np.vstack([linalg.matmul(pi.matrix, hs.seed_image(s), p) for s in range(hs.nseeds)])
    b = np.concatenate([linalg.matmul(proj, seeds[:, [s]], p)[:, 0] for s in range(hs.nseeds)])
    sol = linalg.solve_linear(a, b, p)
    if sol is None:
        return None
    theta = hs.map_matrix(sol.particular[:, 0])
    kernel = tuple(hs.map_matrix(v[:, 0]) for v in sol.nullspace_basis)
    out = ThetaBlocks(T, theta, kernel)
    problems = factorization_failures(out)
    if problems:
        raise AssertionError("factorization failed exact re-verification: " + "; ".join(problems))
    return out


def factorization_failures(blocks: ThetaBlocks) -> list[str]:
    T = blocks.twist
    p = T.p
    ind, pi = induced_target(T)
    failures = []
    if equivariance_failures(T.module, ind, blocks.matrix):
        failures.append("theta is not G-equivariant")
    want = linalg.zeros(T.source.X.dim, T.dim)
    want[:, T.summand(1).slice] = linalg.identity(T.source.X.dim)
    if not np.array_equal(linalg.matmul(pi.matrix, blocks.matrix, p), want):
        failures.append("pi o theta is not the projection onto X_1")
    for r in range(1, T.q + 1):
        for s in range(1, 2 * T.q):
            b = blocks.block(r, s)
            src = T.summand_module(s)
            if equivariance_failures(src, T.source.X, b):
                failures.append(f"theta_{r},{s} is not kH-linear")
    return failures


def extract_splitting(blocks: ThetaBlocks) -> EquivariantMap:
    """s = theta_{1,q}: Y -> X, a retraction of d1."""
    T = blocks.twist
    if factorization_failures(blocks):
        raise TwistError("blocks are not a factorization for this twisted module")
    s = EquivariantMap(T.source.Y, T.source.X, blocks.block(1, T.q))
    if not np.array_equal(linalg.matmul(s.matrix, T.source.d1.matrix, T.p), linalg.identity(T.source.X.dim)):
        raise AssertionError("theta_{1,q} d1 != 1")
    return s


# -- relations among the blocks ----------------------------------------------


def relation_failures(blocks: ThetaBlocks) -> list[str]:
    """Check the block identities forced by equivariance and pi o theta = proj.

    * column sums: sum_r theta_{r,1} = 1, sum_r theta_{r,s} = 0 for s > 1;
    * shift rule: theta_{r,s} = theta_{r+1,s} + theta_{r+1,s+1} for s <= q-2;
    * boundary rule: theta_{q,q-1} = theta_{1,q-1} + theta_{1,q} d1;
    * iterated rule: theta_{r,s} = sum_i (-1)^i C(k,i) theta_{r-k+i,s-k}
      for 1 <= s <= q-1 and 0 <= k <= s-1.
    """
    T = blocks.twist
    p, q = T.p, T.q
    d1 = T.source.d1.matrix
    th = blocks.block
    out = []
    dx = T.source.X.dim
    for s in range(1, 2 * q):
        total = sum(th(r, s) for r in range(1, q + 1)) % p
        want = linalg.identity(dx) if s == 1 else np.zeros_like(total)
        if not np.array_equal(total, want):
            out.append(f"column sum {s}")
    for r in range(1, q + 1):
        for s in range(1, q - 1):
            if not np.array_equal(th(r, s), (th(r + 1, s) + th(r + 1, s + 1)) % p):
                out.append(f"shift rule r={r} s={s}")
    if q >= 2:
        rhs = (th(1, q - 1) + linalg.matmul(th(1, q), d1, p)) % p
        if not np.array_equal(th(q, q - 1), rhs):
            out.append("boundary rule")
    for r in range(1, q + 1):
        for s in range(1, q):
            for k in range(s):
                acc = sum((-1) ** i * comb(k, i) * th(r - k + i, s - k) for i in range(k + 1))
                if not np.array_equal(th(r, s), np.mod(acc, p)):
                    out.append(f"iterated rule r={r} s={s} k={k}")
    return out


def unsigned_iterated_rule_holds(blocks: ThetaBlocks) -> bool:
    """The same iterated rule without the signs (-1)^i; only valid when p = 2."""
    T = blocks.twist
    p, q = T.p, T.q
    th = blocks.block
    for r in range(1, q + 1):
        for s in range(1, q):
            for k in range(s):
                acc = sum(comb(k, i) * th(r - k + i, s - k) for i in range(k + 1))
                if not np.array_equal(th(r, s), np.mod(acc, p)):
                    return False
    return True


@dataclass(frozen=True)
class BinomialReport:
    q: int
    p: int
    residues: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return all(r == 1 for r in self.residues)

    def __bool__(self) -> bool:
        return self.passed


def binomial_identity_check(q: int, p: int) -> BinomialReport:
    """Residues of (-1)^i C(q-1, i) mod p for 0 <= i <= q-1."""
    linalg.check_prime(p)
    if q < 1:
        raise ValueError("q must be positive")
    return BinomialReport(q, p, tuple(((-1) ** i * comb(q - 1, i)) % p for i in range(q)))


def freshman_check(q: int, p: int) -> bool:
    """C(q, i) = 0 mod p for 0 < i < q, so (u-1)^q = u^q - 1."""
    return all(comb(q, i) % p == 0 for i in range(1, q))


__all__ = [
    "BinomialReport",
    "Summand",
    "ThetaBlocks",
    "TwistError",
    "TwistModule",
    "binomial_identity_check",
    "coset_trace_witness",
    "extract_splitting",
    "factorization_failures",
    "freshman_check",
    "frobenius_trace",
    "induced_target",
    "relation_failures",
    "solve_factorization",
    "twist_projectivity",
    "twisted_induction",
    "unsigned_iterated_rule_holds",
    "validate_twist",
]
