"""Inclusion families m_1 -> m_2 -> ... and the split telescope sequences they give."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .groups import Group, cyclic, klein_four
from .linalg import DTYPE
from .morph import (
    EquivariantMap,
    ShortExactSeq,
    check_ses,
    checksum,
    fitting_split,
    is_split_mono,
    ses_from_mono,
    tensor_map,
)
from .reps import Module, ModuleError, direct_sum, tensor
from .twist import twist_projectivity, twisted_induction


@dataclass(frozen=True, eq=False)
class InclusionFamily:
    """m_1 -> m_2 -> ... -> m_K; ``inclusion(n)`` is iota_n: m_n -> m_{n+1}."""

    modules: tuple[Module, ...]
    inclusions: tuple[EquivariantMap, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.inclusions) != len(self.modules) - 1:
            raise ModuleError("need exactly one inclusion between consecutive modules")
        for n, f in enumerate(self.inclusions, start=1):
            if f.src is not self.modules[n - 1] or f.dst is not self.modules[n]:
                raise ModuleError(f"iota_{n} does not connect m_{n} and m_{n + 1}")
            if not f.is_equivariant():
                raise ModuleError(f"iota_{n} is not equivariant")
            if f.rank != f.src.dim:
                raise ModuleError(f"iota_{n} is not injective")

    @property
    def length(self) -> int:
        return len(self.modules)

    def module(self, n: int) -> Module:
        return self.modules[n - 1]

    def inclusion(self, n: int) -> EquivariantMap:
        return self.inclusions[n - 1]

    def composite(self, n: int, m: int) -> np.ndarray:
        """iota_{m-1} ... iota_n: m_n -> m_m as a matrix (n <= m)."""
        p = self.modules[0].p
        out = linalg.identity(self.module(n).dim)
        for j in range(n, m):
            out = linalg.matmul(self.inclusion(j).matrix, out, p)
        return out


def string_module_v4(n: int, group: Group | None = None) -> Module:
    """String module of dim 2n+1 over kV4, p=2, basis b_0, a_1, b_1, ..., a_n, b_n.

    (g1 - 1) a_i = b_{i-1}, (g2 - 1) a_i = b_i and both kill every b_i.
    """
    if n < 0:
        raise ModuleError("string length must be non-negative")
    g = group or klein_four()
    d = 2 * n + 1
    x1 = np.zeros((d, d), dtype=DTYPE)
    x2 = np.zeros((d, d), dtype=DTYPE)
    for i in range(1, n + 1):
        a = 2 * i - 1
        x1[2 * (i - 1), a] = 1
        x2[2 * i, a] = 1
    eye = linalg.identity(d)
    return Module.from_generators(g, 2, [eye + x1, eye + x2], f"m{n}")


def string_family_v4(K: int) -> InclusionFamily:
    if K < 1:
        raise ValueError("K must be at least 1")
    g = klein_four()
    mods = tuple(string_module_v4(n, g) for n in range(1, K + 1))
    incs = tuple(
        EquivariantMap(mods[n - 1], mods[n], linalg.identity(2 * n + 3)[:, : 2 * n + 1]) for n in range(1, K)
    )
    return InclusionFamily(mods, incs, "v4-string")


def jordan_module(p: int, n: int, group: Group | None = None) -> Module:
    """k[x]/(x^n) over kC_p with u = 1 + x, basis 1, x, ..., x^(n-1)."""
    linalg.check_prime(p)
    if not 1 <= n <= p:
        raise ModuleError(f"no Jordan block of size {n} over kC_{p}")
    g = group or cyclic(p)
    u = linalg.identity(n) + np.eye(n, k=-1, dtype=DTYPE)
    return Module.from_generators(g, p, [u], f"J{n}")


def jordan_family_cp(p: int, K: int) -> InclusionFamily:
    linalg.check_prime(p)
    if K < 1 or K > p:
        raise ValueError(f"need 1 <= K <= p, got K = {K}, p = {p}")
    g = cyclic(p)
    mods = tuple(jordan_module(p, n, g) for n in range(1, K + 1))
    # multiplication by x sends x^i to x^(i+1)
    incs = tuple(EquivariantMap(mods[n - 1], mods[n], np.eye(n + 1, n, k=-1, dtype=DTYPE)) for n in range(1, K))
    return InclusionFamily(mods, incs, f"jordan-c{p}")


def tensor_family(v: Module, fam: InclusionFamily) -> InclusionFamily:
    """v (x) m_n with maps id_v (x) iota_n."""
    mods = tuple(tensor(v, m) for m in fam.modules)
    incs = []
    for n, f in enumerate(fam.inclusions):
        t = tensor_map(v, f)
        incs.append(EquivariantMap(mods[n], mods[n + 1], t.matrix, verify=False))
    return InclusionFamily(mods, tuple(incs), f"{v.name or 'v'}x{fam.label}")


def telescope_stage(fam: InclusionFamily, N: int) -> ShortExactSeq:
    """0 -> (+)_{n<=N} m_n -> (+)_{n<=N+1} m_n -> m_{N+1} -> 0.

    d1 sends x in m_n to (x, -iota_n x) in slots n, n+1; d2 sends x_n to
    its image in m_{N+1} under the composite inclusion.
    """
    if not 1 <= N < fam.length:
        raise ValueError(f"stage N = {N} needs 1 <= N <= {fam.length - 1}")
    p = fam.modules[0].p
    left = direct_sum(*fam.modules[:N])
    mid = direct_sum(*fam.modules[: N + 1])
    right = fam.module(N + 1)
    dims = [m.dim for m in fam.modules[: N + 1]]
    offs = np.concatenate([[0], np.cumsum(dims)])
    d1 = linalg.zeros(mid.dim, left.dim)
    for n in range(1, N + 1):
        cols = slice(offs[n - 1], offs[n])
        d1[offs[n - 1] : offs[n], cols] = linalg.identity(dims[n - 1])
        d1[offs[n] : offs[n + 1], cols] = np.mod(-fam.inclusion(n).matrix, p)
    d2 = np.hstack([fam.composite(n, N + 1) for n in range(1, N + 2)])
    S = ShortExactSeq(
        EquivariantMap(left, mid, d1), EquivariantMap(mid, right, d2), f"{fam.label}-stage{N}"
    )
    report = check_ses(S)
    if not report.ok:
        raise AssertionError(f"telescope stage {N} is not exact: {report.failures}")
    return S


def inclusion_contrast(fam: InclusionFamily, n: int) -> ShortExactSeq:
    """0 -> m_n -> m_{n+1} -> coker -> 0, the non-split control sequence."""
    return ses_from_mono(fam.inclusion(n), f"{fam.label}-iota{n}")


def probably_indecomposable(m: Module, trials: int = 200, seed: int = 0) -> bool:
    return fitting_split(m, trials=trials, seed=seed) is None


@dataclass
class StageReport:
    label: str
    N: int
    q: int
    p: int
    dims: tuple[int, int, int]
    twist_dim: int
    stage_split: bool
    split_checksum: str | None
    projective: bool
    method: str
    witness_checksum: str | None
    timings: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.stage_split and self.projective

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "N": self.N,
            "q": self.q,
            "p": self.p,
            "dims": list(self.dims),
            "twist_dim": self.twist_dim,
            "stage_split": self.stage_split,
            "split_checksum": self.split_checksum,
            "projective": self.projective,
            "method": self.method,
            "witness_checksum": self.witness_checksum,
        }


def stage_twist_projective(fam: InclusionFamily, N: int, q: int, p: int | None = None) -> StageReport:
    """Build stage N, confirm it splits, twist it and test H-projectivity."""
    if p is not None and p != fam.modules[0].p:
        raise ValueError(f"family lives in characteristic {fam.modules[0].p}, not {p}")
    p = fam.modules[0].p
    if q < 2 or not linalg.is_power_of(q, p):
        raise ValueError(f"q = {q} must be a power of p = {p} with q >= 2")
    timings = {}
    t0 = time.perf_counter()
    S = telescope_stage(fam, N)
    r = is_split_mono(S.d1)
    timings["split"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    T = twisted_induction(S, q)
    timings["twist"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    v = twist_projectivity(T)
    timings["projectivity"] = time.perf_counter() - t0
    return StageReport(
        fam.label,
        N,
        q,
        p,
        S.dims,
        T.dim,
        r is not None,
        None if r is None else checksum(r.matrix),
        v.projective,
        v.method,
        v.witness_checksum,
        timings,
    )
