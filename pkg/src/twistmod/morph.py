"""Equivariant maps, Hom spaces, split tests, short exact sequences.

Hom spaces are computed by spinning: the source module is rebuilt from a
few generating vectors (seeds) under the group generators, so a kG-map is
pinned down by the images of the seeds.  Every dependency met while
spinning is a linear condition on those images.  Conditions are applied
one at a time to a shrinking parameter space, which keeps the systems at
``dim(target)`` rows instead of ``dim(source) * dim(target)`` unknowns.
"""

from __future__ import annotations

import hashlib
from dataclasses import InitVar, dataclass

import numpy as np

from . import linalg
from .linalg import DTYPE
from .reps import CheckReport, Module, ModuleError, tensor


class NotEquivariantError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class EquivariantMap:
    """A kG-linear map; ``matrix`` has shape (dim dst, dim src)."""

    src: Module
    dst: Module
    matrix: np.ndarray
    verify: InitVar[bool] = True

    def __post_init__(self, verify: bool):
        mat = linalg.as_matrix(self.matrix, self.src.p).reshape(self.dst.dim, self.src.dim)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        if self.src.p != self.dst.p or not self.src.group.same_as(self.dst.group):
            raise ModuleError("source and target live over different groups or primes")
        if verify:
            bad = equivariance_failures(self.src, self.dst, mat)
            if bad:
                raise NotEquivariantError(f"map does not commute with group elements {bad[:5]}")

    @property
    def p(self) -> int:
        return self.src.p

    def is_equivariant(self) -> bool:
        return not equivariance_failures(self.src, self.dst, self.matrix)

    def compose(self, other: "EquivariantMap") -> "EquivariantMap":
        """self o other."""
        return EquivariantMap(other.src, self.dst, linalg.matmul(self.matrix, other.matrix, self.p), verify=False)

    @property
    def rank(self) -> int:
        return linalg.rank(self.matrix, self.p)


def equivariance_failures(src: Module, dst: Module, matrix: np.ndarray) -> list[int]:
    p = src.p
    lhs = linalg.matmul(matrix[None], src.action, p)
    rhs = linalg.matmul(dst.action, matrix[None], p)
    return [int(g) for g in np.flatnonzero(np.any(lhs != rhs, axis=(1, 2)))]


def identity_map(m: Module) -> EquivariantMap:
    return EquivariantMap(m, m, linalg.identity(m.dim), verify=False)


def checksum(matrix: np.ndarray) -> str:
    """Stable short digest of an exact matrix (shape + entries)."""
    arr = np.ascontiguousarray(np.asarray(matrix, dtype="<i8"))
    h = hashlib.sha256(repr(arr.shape).encode())
    h.update(arr.tobytes())
    return h.hexdigest()[:16]


# -- spinning ----------------------------------------------------------------


class Spin:
    """Standard basis of a module obtained by spinning seed vectors.

    ``basis[j]`` is either a seed or ``gen * basis[parent]``, so it equals
    ``elem[j]`` applied to its seed.  ``events`` records, in discovery
    order, new seeds and the relations ``gen * basis[j] = sum_i coeff[i] basis[i]``.
    """

    def __init__(self, m: Module):
        self.module = m
        p = m.p
        d = m.dim
        group = m.group
        gen_elems = list(group.generators)
        gens = m.generator_matrices()
        space = linalg.EchelonSpace(d, p)
        vectors: list[np.ndarray] = []
        self.parent: list[int] = []
        self.gen: list[int] = []
        self.elem: list[int] = []
        self.seed_of: list[int] = []
        self.seeds: list[int] = []
        raw_events: list[tuple] = []

        if gens and d:
            rad = np.hstack([np.mod(a - linalg.identity(d), p) for a in gens])
            candidates = linalg.complement_columns(_column_basis(rad, p), d, p)
        else:
            candidates = list(range(d))
        candidates = candidates + [i for i in range(d) if i not in set(candidates)]

        ptr = 0

        def drain():
            nonlocal ptr
            while ptr < len(vectors):
                v = vectors[ptr]
                for li, a in enumerate(gens):
                    w = linalg.matmul(a, v[:, None], p)[:, 0]
                    if space.add(w):
                        vectors.append(w)
                        self.parent.append(ptr)
                        self.gen.append(li)
                        self.elem.append(group.mul(gen_elems[li], self.elem[ptr]))
                        self.seed_of.append(self.seed_of[ptr])
                    else:
                        raw_events.append(("rel", ptr, li, w))
                ptr += 1

        unit = linalg.identity(d)
        for c in candidates:
            if len(vectors) == d:
                break
            if space.add(unit[:, c]):
                self.seed_of.append(len(self.seeds))
                self.seeds.append(len(vectors))
                raw_events.append(("seed", len(vectors)))
                vectors.append(unit[:, c].copy())
                self.parent.append(-1)
                self.gen.append(-1)
                self.elem.append(group.identity)
                drain()

        self.basis = np.array(vectors, dtype=DTYPE).T.reshape(d, len(vectors))
        self.basis_inv = linalg.inverse(self.basis, p) if d else self.basis
        self.events: list[tuple] = []
        for ev in raw_events:
            if ev[0] == "seed":
                self.events.append(ev)
            else:
                _, j, li, w = ev
                coeff = linalg.matmul(self.basis_inv, w[:, None], p)[:, 0]
                self.events.append(("rel", j, li, coeff))

    @property
    def seed_vectors(self) -> np.ndarray:
        return self.basis[:, self.seeds]

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        return linalg.matmul(self.basis_inv, v, self.module.p)


def _column_basis(a: np.ndarray, p: int) -> np.ndarray:
    r, piv = linalg.rref(a.T, p)
    return r[: len(piv)].T


def _combine(action: np.ndarray, coeff: np.ndarray, p: int) -> np.ndarray:
    """sum_g coeff[g] * action[g], reduced mod p."""
    nz = np.flatnonzero(coeff)
    if nz.size == 0:
        return np.zeros(action.shape[1:], dtype=DTYPE)
    if nz.size == 1:
        return np.mod(int(coeff[nz[0]]) * action[nz[0]], p)
    acc = np.tensordot(coeff[nz].astype(np.float64), action[nz].astype(np.float64), axes=1)
    return np.mod(acc, p).astype(DTYPE)


class HomSpace:
    """Hom_kG(src, dst) as a parameter space.

    A homomorphism is encoded by the images of the source seeds; ``K`` holds
    a basis (columns) of the admissible seed-image vectors.  Column ``c`` of
    ``K`` gives the ``c``-th basis map.  Spin basis vector ``j`` is the
    group element ``spin.elem[j]`` applied to a seed, so its image is
    ``dst.action[elem[j]]`` applied to that seed's image.
    """

    def __init__(self, src: Module, dst: Module):
        if src.p != dst.p or not src.group.same_as(dst.group):
            raise ModuleError("Hom between modules over different groups or primes")
        self.src = src
        self.dst = dst
        p = src.p
        n = dst.dim
        order = src.group.order
        spin = Spin(src)
        self.spin = spin
        elem = np.array(spin.elem, dtype=np.intp)
        seed_of = np.array(spin.seed_of, dtype=np.intp)
        gen_elems = list(src.group.generators)

        K = np.zeros((0, 0), dtype=DTYPE)
        nseeds = 0
        for ev in spin.events:
            if ev[0] == "seed":
                k0 = K.shape[1]
                grown = np.zeros((K.shape[0] + n, k0 + n), dtype=DTYPE)
                grown[: K.shape[0], :k0] = K
                grown[K.shape[0] :, k0:] = linalg.identity(n)
                K = grown
                nseeds += 1
                continue
            if K.shape[1] == 0:
                continue
            _, j, li, coeff = ev
            # gen * b_j - sum_i coeff_i b_i = 0, grouped by seed and group element
            alpha = np.zeros((nseeds, order), dtype=DTYPE)
            nz = np.flatnonzero(coeff)
            np.add.at(alpha, (seed_of[nz], elem[nz]), -coeff[nz])
            alpha[seed_of[j], src.group.mul(gen_elems[li], int(elem[j]))] += 1
            alpha %= p
            cond = np.zeros((n, K.shape[1]), dtype=DTYPE)
            for s in np.flatnonzero(alpha.any(axis=1)):
                block = _combine(dst.action, alpha[s], p)
                cond = (cond + linalg.matmul(block, K[s * n : (s + 1) * n], p)) % p
            if not cond.any():
                continue
            K = linalg.matmul(K, linalg.nullspace(cond, p), p)
        self.K = K
        self.nseeds = nseeds

    @property
    def dim(self) -> int:
        return self.K.shape[1]

    def _seed_rows(self, s: int) -> slice:
        n = self.dst.dim
        return slice(s * n, (s + 1) * n)

    def seed_image(self, s: int) -> np.ndarray:
        """Image of seed ``s`` as a (dim dst x dim Hom) matrix over the parameters."""
        return self.K[self._seed_rows(s)]

    def image_of(self, v: np.ndarray) -> np.ndarray:
        """phi(v) as a (dim dst x dim Hom) matrix, linear in the parameters."""
        p = self.src.p
        a = self.spin.coordinates(np.asarray(v).reshape(-1, 1))[:, 0]
        out = np.zeros((self.dst.dim, self.dim), dtype=DTYPE)
        order = self.src.group.order
        seed_of = np.array(self.spin.seed_of, dtype=np.intp)
        elem = np.array(self.spin.elem, dtype=np.intp)
        for s in range(self.nseeds):
            idx = np.flatnonzero((seed_of == s) & (a != 0))
            if idx.size == 0:
                continue
            alpha = np.zeros(order, dtype=DTYPE)
            np.add.at(alpha, elem[idx], a[idx])
            word = _combine(self.dst.action, alpha % p, p)
            out = np.mod(out + linalg.matmul(word, self.seed_image(s), p), p)
        return out

    def map_matrix(self, params: np.ndarray) -> np.ndarray:
        """The homomorphism with parameter vector ``params`` as a (dim dst x dim src) matrix."""
        p = self.src.p
        z = linalg.matmul(self.K, np.asarray(params, dtype=DTYPE).reshape(-1, 1), p)[:, 0]
        n = self.dst.dim
        cols = np.zeros((n, len(self.spin.parent)), dtype=DTYPE)
        elem = np.array(self.spin.elem, dtype=np.intp)
        seed_of = np.array(self.spin.seed_of, dtype=np.intp)
        for s in range(self.nseeds):
            idx = np.flatnonzero(seed_of == s)
            imgs = linalg.matmul(self.dst.action[elem[idx]], z[s * n : (s + 1) * n, None][None], p)
            cols[:, idx] = imgs[:, :, 0].T
        return linalg.matmul(cols, self.spin.basis_inv, p)

    def basis_array(self) -> np.ndarray:
        """All basis maps stacked: shape (dim Hom, dim dst, dim src)."""
        p = self.src.p
        n, k = self.dst.dim, self.dim
        cols = np.zeros((len(self.spin.parent), n, k), dtype=DTYPE)
        elem = np.array(self.spin.elem, dtype=np.intp)
        seed_of = np.array(self.spin.seed_of, dtype=np.intp)
        for s in range(self.nseeds):
            idx = np.flatnonzero(seed_of == s)
            cols[idx] = linalg.matmul(self.dst.action[elem[idx]], self.seed_image(s)[None], p)
        # cols[j] holds the image of spin vector j; undo the change of basis
        out = np.tensordot(self.spin.basis_inv.astype(np.float64), cols.astype(np.float64), axes=(0, 0))
        return np.mod(np.transpose(out, (2, 1, 0)), p).astype(DTYPE)

    def basis_matrices(self) -> list[np.ndarray]:
        return list(self.basis_array())

    def basis(self) -> list[EquivariantMap]:
        return [EquivariantMap(self.src, self.dst, m, verify=False) for m in self.basis_matrices()]


def hom_basis(m: Module, n: Module) -> list[EquivariantMap]:
    """Basis of Hom_kG(m, n)."""
    return HomSpace(m, n).basis()


def hom_dim(m: Module, n: Module) -> int:
    return HomSpace(m, n).dim


# -- splitting ---------------------------------------------------------------


def _solve_params(blocks: list[np.ndarray], rhs: list[np.ndarray], p: int) -> np.ndarray | None:
    a = np.vstack(blocks)
    b = np.concatenate([np.asarray(r).reshape(-1) for r in rhs])
    sol = linalg.solve_linear(a, b.reshape(-1, 1), p)
    return None if sol is None else sol.particular[:, 0]


def is_split_mono(f: EquivariantMap) -> EquivariantMap | None:
    """A retraction ``s`` with ``s o f = id`` or ``None`` when f does not split.

    ``None`` is certified: the linear system for an equivariant ``s`` with
    ``s f = 1`` has no solution.
    """
    p = f.p
    if f.rank != f.src.dim:
        raise ValueError("is_split_mono needs an injective map")
    hs = HomSpace(f.dst, f.src)
    if f.src.dim == 0:
        return EquivariantMap(f.dst, f.src, linalg.zeros(0, f.dst.dim))
    # s o f and id agree iff they agree on generators of f.src
    seeds = Spin(f.src).seed_vectors
    blocks = [hs.image_of(linalg.matmul(f.matrix, seeds[:, [i]], p)) for i in range(seeds.shape[1])]
    params = _solve_params(blocks, [seeds[:, i] for i in range(seeds.shape[1])], p)
    if params is None:
        return None
    s = EquivariantMap(f.dst, f.src, hs.map_matrix(params))
    if not np.array_equal(linalg.matmul(s.matrix, f.matrix, p), linalg.identity(f.src.dim)):
        raise AssertionError("retraction failed exact re-verification")
    return s


def is_split_epi(f: EquivariantMap) -> EquivariantMap | None:
    """A section ``s`` with ``f o s = id`` or ``None`` (certified) when f does not split."""
    p = f.p
    if f.rank != f.dst.dim:
        raise ValueError("is_split_epi needs a surjective map")
    if f.dst.dim == 0:
        return EquivariantMap(f.dst, f.src, linalg.zeros(f.src.dim, 0))
    hs = HomSpace(f.dst, f.src)
    seeds = hs.spin.seed_vectors
    blocks = [linalg.matmul(f.matrix, hs.seed_image(s), p) for s in range(hs.nseeds)]
    params = _solve_params(blocks, [seeds[:, i] for i in range(seeds.shape[1])], p)
    if params is None:
        return None
    s = EquivariantMap(f.dst, f.src, hs.map_matrix(params))
    if not np.array_equal(linalg.matmul(f.matrix, s.matrix, p), linalg.identity(f.dst.dim)):
        raise AssertionError("section failed exact re-verification")
    return s


# -- short exact sequences ---------------------------------------------------


@dataclass(frozen=True, eq=False)
class ShortExactSeq:
    """0 -> X -d1-> Y -d2-> Z -> 0; validity is checked by :func:`check_ses`."""

    d1: EquivariantMap
    d2: EquivariantMap
    name: str = ""

    @property
    def X(self) -> Module:
        return self.d1.src

    @property
    def Y(self) -> Module:
        return self.d1.dst

    @property
    def Z(self) -> Module:
        return self.d2.dst

    @property
    def p(self) -> int:
        return self.d1.p

    @property
    def group(self):
        return self.d1.src.group

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.X.dim, self.Y.dim, self.Z.dim


def check_ses(S: ShortExactSeq) -> CheckReport:
    failures: list[str] = []
    p = S.p
    if S.d1.dst is not S.d2.src and not (
        S.d1.dst.dim == S.d2.src.dim and np.array_equal(S.d1.dst.action, S.d2.src.action)
    ):
        failures.append("d1 target and d2 source differ")
        return CheckReport(tuple(failures))
    for name, f in (("d1", S.d1), ("d2", S.d2)):
        bad = equivariance_failures(f.src, f.dst, f.matrix)
        if bad:
            failures.append(f"{name} is not equivariant (elements {bad[:5]})")
    r1 = linalg.rank(S.d1.matrix, p)
    r2 = linalg.rank(S.d2.matrix, p)
    if r1 != S.X.dim:
        failures.append(f"d1 not injective: rank {r1} < dim X = {S.X.dim}")
    if r2 != S.Z.dim:
        failures.append(f"d2 not surjective: rank {r2} < dim Z = {S.Z.dim}")
    if linalg.matmul(S.d2.matrix, S.d1.matrix, p).any():
        failures.append("d2 o d1 != 0")
    elif r1 != S.Y.dim - r2:
        failures.append(f"image(d1) has dim {r1} but kernel(d2) has dim {S.Y.dim - r2}")
    return CheckReport(tuple(failures))


def ses_from_mono(f: EquivariantMap, name: str = "") -> ShortExactSeq:
    """0 -> src -> dst -> coker -> 0 with the canonical quotient."""
    from .reps import quotient

    q, proj = quotient(f.dst, f.matrix)
    return ShortExactSeq(f, EquivariantMap(f.dst, q, proj), name)


def split_ses(x: Module, z: Module, name: str = "") -> ShortExactSeq:
    """The canonical split sequence 0 -> X -> X+Z -> Z -> 0."""
    from .reps import direct_sum

    y = direct_sum(x, z)
    d1 = np.vstack([linalg.identity(x.dim), linalg.zeros(z.dim, x.dim)])
    d2 = np.hstack([linalg.zeros(z.dim, x.dim), linalg.identity(z.dim)])
    return ShortExactSeq(EquivariantMap(x, y, d1), EquivariantMap(y, z, d2), name)


def tensor_map(w: Module, f: EquivariantMap) -> EquivariantMap:
    """id_W (x) f."""
    return EquivariantMap(
        tensor(w, f.src), tensor(w, f.dst), linalg.kron(linalg.identity(w.dim), f.matrix, f.p), verify=False
    )


def tensor_ses(S: ShortExactSeq, w: Module) -> ShortExactSeq:
    """W (x) S with the diagonal action; exactness is re-checked."""
    T = ShortExactSeq(tensor_map(w, S.d1), tensor_map(w, S.d2), f"{w.name or 'W'}x{S.name}")
    report = check_ses(T)
    if not report.ok:
        raise AssertionError(f"tensoring lost exactness: {report.failures}")
    return T


def is_w_split(S: ShortExactSeq, w: Module) -> tuple[bool, EquivariantMap | None]:
    """Whether W (x) S splits, with the retraction of W (x) d1 as witness."""
    r = is_split_mono(tensor_ses(S, w).d1)
    return r is not None, r


# -- isomorphism -------------------------------------------------------------


@dataclass(frozen=True)
class IsoResult:
    status: str  # "yes", "no", "probably-no"
    witness: EquivariantMap | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status == "yes"


def is_isomorphic(m: Module, n: Module, trials: int = 64, seed: int = 0) -> IsoResult:
    """Randomized isomorphism test; a "yes" carries an exactly verified witness."""
    if m.dim != n.dim:
        return IsoResult("no", reason="dimensions differ")
    if m.dim == 0:
        return IsoResult("yes", EquivariantMap(m, n, linalg.zeros(0, 0)))
    hs = HomSpace(m, n)
    back = hom_dim(n, m)
    end = hom_dim(m, m)
    if hs.dim != back or hs.dim != end:
        return IsoResult("no", reason=f"Hom dimensions differ ({hs.dim}, {back}, {end})")
    p = m.p
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        c = rng.integers(0, p, size=hs.dim)
        mat = hs.map_matrix(c)
        if linalg.rank(mat, p) == m.dim:
            return IsoResult("yes", EquivariantMap(m, n, mat))
    return IsoResult("probably-no", reason=f"no invertible map in {trials} random samples")


def random_endomorphism(hs: HomSpace, rng: np.random.Generator) -> np.ndarray:
    return hs.map_matrix(rng.integers(0, hs.src.p, size=hs.dim))


def fitting_split(m: Module, trials: int = 200, seed: int = 0) -> np.ndarray | None:
    """Search for a random endomorphism that is neither nilpotent nor invertible.

    Such a map splits ``m`` (Fitting's lemma); the returned matrix is its
    power phi**dim, whose image is a proper nonzero summand.  ``None`` means
    every sample was nilpotent or invertible (probable indecomposability).
    """
    p = m.p
    hs = HomSpace(m, m)
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        phi = random_endomorphism(hs, rng)
        power = linalg.matpow(phi, m.dim, p)
        r = linalg.rank(power, p)
        if 0 < r < m.dim:
            return power
    return None
