"""Scenario runner behind ``twistmod verify-paper`` and its JSON report.

Each check becomes a :class:`Record` holding the expected and observed
verdicts; a run passes when every record matches.  Records are emitted in
a fixed order and carry no timing data, so two runs with the same flags
produce the same report apart from the ``timing`` key.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from . import __version__, linalg
from .fixtures import SesFixture, c2_fixtures, jordan_fixtures, load_ses, ses_fixtures
from .groups import (
    compose_embeddings,
    cyclic,
    direct_product,
    klein_four,
    subgroup_from_elements,
    subgroups,
)
from .morph import ShortExactSeq, check_ses, checksum, is_isomorphic, is_split_mono
from .relproj import is_rel_projective, is_w_projective, vertex
from .reps import induce, permutation_module, regular_module, restrict, tensor, trivial_module
from .telescope import (
    InclusionFamily,
    inclusion_contrast,
    jordan_family_cp,
    probably_indecomposable,
    stage_twist_projective,
    string_family_v4,
    string_module_v4,
    telescope_stage,
    tensor_family,
)
from .twist import (
    binomial_identity_check,
    extract_splitting,
    freshman_check,
    relation_failures,
    solve_factorization,
    twist_projectivity,
    twisted_induction,
)

SCHEMA = 1
FAMILIES = ("v4-string", "jordan")


class ConfigError(ValueError):
    """Invalid scenario parameters (exit code 2)."""


@dataclass(frozen=True)
class Record:
    check: str
    anchor: str
    expected: Any
    verdict: Any
    checksum: str | None = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.expected == self.verdict

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "anchor": self.anchor,
            "expected": self.expected,
            "verdict": self.verdict,
            "ok": self.ok,
            "checksum": self.checksum,
        }
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class RunReport:
    scenario: str
    params: dict
    seed: int
    records: list[Record] = field(default_factory=list)
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.records)

    def add(self, check: str, anchor: str, expected, verdict, checksum: str | None = None, detail: str = ""):
        self.records.append(Record(check, anchor, expected, verdict, checksum, detail))

    @contextmanager
    def timed(self, section: str):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timing[section] = round(self.timing.get(section, 0.0) + time.perf_counter() - t0, 6)

    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.ok]

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "tool": "twistmod",
            "tool_version": __version__,
            "scenario": self.scenario,
            "params": self.params,
            "seed": self.seed,
            "records": [r.to_json() for r in self.records],
            "summary": {"checks": len(self.records), "failed": len(self.failures())},
            "passed": self.passed,
            "timing": self.timing,
        }

    def to_text(self) -> str:
        lines = [f"{self.scenario}: {self.params}"]
        for r in self.records:
            mark = "ok  " if r.ok else "FAIL"
            extra = f"  [{r.detail}]" if r.detail else ""
            lines.append(f"{mark} {r.check}  verdict={r.verdict} expected={r.expected}{extra}")
        n_bad = len(self.failures())
        lines.append(f"{len(self.records) - n_bad}/{len(self.records)} checks passed")
        return "\n".join(lines)


# -- parameter validation -------------------------------------------------------


def validate_params(p: int, qs: list[int], family: str, stages: int | None) -> int:
    """Validate and return the effective stage count."""
    try:
        linalg.check_prime(p)
    except linalg.PrimeError as exc:
        raise ConfigError(str(exc)) from None
    if not qs:
        raise ConfigError("at least one q is required")
    for q in qs:
        if q < 2 or not linalg.is_power_of(q, p):
            raise ConfigError(f"q = {q} is not a power of p = {p} (q must be p^k with k >= 1)")
    if family not in FAMILIES:
        raise ConfigError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if family == "v4-string":
        if p != 2:
            raise ConfigError("the v4-string family lives in characteristic 2")
        default, top = 3, 8
    else:
        default = top = p - 1
        if top < 1:
            raise ConfigError("the jordan family needs at least two blocks")
    n = default if stages is None else stages
    if not 1 <= n <= top:
        raise ConfigError(f"--stages must be between 1 and {top} for the {family} family")
    return n


def build_family(family: str, p: int, length: int) -> InclusionFamily:
    if family == "v4-string":
        return string_family_v4(length)
    return jordan_family_cp(p, length)


# -- sections ---------------------------------------------------------------------


def binomial_checks(rep: RunReport, p: int, qs: list[int]) -> None:
    for q in qs:
        b = binomial_identity_check(q, p)
        rep.add(f"binomial/q{q}", "binomial-chain", True, b.passed, detail=f"residues {list(b.residues)}")
        rep.add(f"freshman/q{q}", "nilpotent-shift", True, freshman_check(q, p))
    bad = p * (p + 1)  # never a power of p; 6 when p = 2
    b = binomial_identity_check(bad, p)
    rep.add(f"binomial/q{bad}-control", "binomial-chain", False, b.passed, detail=f"residues {list(b.residues)}")


def proposition_checks(rep: RunReport, fixtures: list[SesFixture], qs: list[int], prefix: str = "prop") -> None:
    for fx in fixtures:
        S = fx.ses
        r = is_split_mono(S.d1)
        split = r is not None
        rep.add(f"{prefix}/{fx.name}/d1-split", "split-iff-projective", fx.split, split,
                None if r is None else checksum(r.matrix))
        for q in qs:
            _twist_checks(rep, S, q, split, f"{prefix}/{fx.name}/q{q}")


def _twist_checks(rep: RunReport, S: ShortExactSeq, q: int, split: bool, tag: str) -> None:
    T = twisted_induction(S, q)
    v = twist_projectivity(T)
    rep.add(f"{tag}/twist-projective", "split-iff-projective", split, v.projective, v.witness_checksum)
    f = solve_factorization(T)
    rep.add(f"{tag}/factorization", "theta-factorization", split, f is not None,
            None if f is None else checksum(f.matrix))
    if f is not None:
        s = extract_splitting(f)
        rep.add(f"{tag}/splitting", "theta-splitting", True, True, checksum(s.matrix))
        bad = relation_failures(f)
        rep.add(f"{tag}/block-relations", "theta-relations", [], bad[:5])


def telescope_checks(rep: RunReport, fam: InclusionFamily, stages: int, qs: list[int], seed: int) -> None:
    for n in range(1, stages + 1):
        r = is_split_mono(fam.inclusion(n))
        rep.add(f"telescope/{fam.label}/iota{n}/split", "colimit-shadow", False, r is not None)
    for n in range(1, stages + 2):
        rep.add(f"telescope/{fam.label}/m{n}/indecomposable", "indecomposable-family", True,
                probably_indecomposable(fam.module(n), seed=seed))
    for N in range(1, stages + 1):
        for q in qs:
            sr = stage_twist_projective(fam, N, q)
            tag = f"telescope/{fam.label}/N{N}/q{q}"
            rep.add(f"{tag}/stage-split", "telescope-stage-split", True, sr.stage_split, sr.split_checksum,
                    detail=f"dims {list(sr.dims)}, twisted dim {sr.twist_dim}")
            rep.add(f"{tag}/twist-projective", "telescope-stage-projective", True, sr.projective,
                    sr.witness_checksum)
            ctrl = twisted_induction(inclusion_contrast(fam, N), q)
            rep.add(f"{tag}/contrast-projective", "telescope-contrast", False, twist_projectivity(ctrl).projective)


def tensor_variant_checks(rep: RunReport, fam: InclusionFamily, stages: int, q: int, seed: int) -> None:
    """Projection formula and W-projectivity of the w-tensored telescope."""
    H = fam.modules[0].group
    p = fam.modules[0].p
    G, emb_h, _ = direct_product(H, cyclic(q), name=f"{H.name}xC{q}")
    w = permutation_module(emb_h, p)
    v = restrict(emb_h, w)
    for n in range(1, min(3, fam.length) + 1):
        m = fam.module(n)
        lhs = induce(emb_h, tensor(v, m))
        rhs = tensor(w, induce(emb_h, m))
        iso = is_isomorphic(lhs, rhs, seed=seed)
        rep.add(f"tensor/{fam.label}/q{q}/projection-formula-m{n}", "projection-formula", "yes", iso.status,
                None if iso.witness is None else checksum(iso.witness.matrix))
    tf = tensor_family(v, fam)
    for N in range(1, min(stages, 2) + 1):
        T = twisted_induction(telescope_stage(tf, N), q)
        verdict = is_w_projective(T.module, w)
        rep.add(f"tensor/{fam.label}/q{q}/N{N}/w-projective", "tensored-stage-w-projective", True,
                verdict.projective, verdict.witness_checksum, detail=f"twisted dim {T.dim}")


def sylow_checks(rep: RunReport, p: int, q: int) -> None:
    """Induce twisted modules from P = H x C_q to P x C_r with r prime to p."""
    H = cyclic(p)
    P, emb_hp, _ = direct_product(H, cyclic(q), name=f"C{p}xC{q}")
    r = 3 if p == 2 else 2
    G, emb_pg, _ = direct_product(P, cyclic(r), name=f"{P.name}xC{r}")
    emb_hg = compose_embeddings(emb_hp, emb_pg)
    w = permutation_module(emb_hg, p)
    fixtures = c2_fixtures() if p == 2 else jordan_fixtures(p)
    for fx in fixtures:
        T = twisted_induction(fx.ses, q)
        ind = induce(emb_pg, T.module)
        verdict = is_w_projective(ind, w)
        rep.add(f"sylow/{fx.name}/q{q}/w-projective", "sylow-reduction", fx.split, verdict.projective,
                verdict.witness_checksum)
    fam = jordan_family_cp(p, 2)
    T = twisted_induction(telescope_stage(fam, 1), q)
    verdict = is_w_projective(induce(emb_pg, T.module), w)
    rep.add(f"sylow/{fam.label}/N1/q{q}/w-projective", "sylow-reduction", True, verdict.projective,
            verdict.witness_checksum)


def vertex_fixture(p: int):
    """(w modules, test modules) over a small p-group, for the vertex lemma."""
    if p == 2:
        g = klein_four()
        subs = [subgroup_from_elements(g, [e]) for e in (1, 2, 3)]
        ws = [trivial_module(g, 2), regular_module(g, 2)] + [permutation_module(s, 2) for s in subs]
        ws.append(string_module_v4(1, g))
        ms = [trivial_module(g, 2), regular_module(g, 2), permutation_module(subs[0], 2), string_module_v4(2, g)]
        return ws, ms
    g, e1, e2 = direct_product(cyclic(p), cyclic(p))
    j2 = jordan_family_cp(p, 2).module(2)
    ws = [trivial_module(g, p), permutation_module(e1, p), permutation_module(e2, p), induce(e1, j2)]
    ms = [trivial_module(g, p), permutation_module(e1, p), induce(e2, j2)]
    return ws, ms


def vertex_checks(rep: RunReport, p: int) -> None:
    ws, ms = vertex_fixture(p)
    for i, w in enumerate(ws):
        vs = vertex(w)
        for j, m in enumerate(ms):
            wp = is_w_projective(m, w).projective
            holds = (not wp) or all(is_rel_projective(m, Q).projective for Q in vs)
            label = ",".join(str(sorted(Q.image)) for Q in vs)
            rep.add(f"vertex/w{i}/m{j}", "vertex-lemma", True, holds, detail=f"w-projective={wp}; vertex {label}")


def input_ses_checks(rep: RunReport, path: str | Path, qs: list[int]) -> None:
    S = load_ses(path)
    name = S.name or Path(path).stem
    report = check_ses(S)
    rep.add(f"input/{name}/exact", "input-sequence", True, report.ok, detail="; ".join(report.failures))
    if not report.ok:
        return
    r = is_split_mono(S.d1)
    for q in qs:
        if linalg.is_power_of(q, S.p):
            _twist_checks(rep, S, q, r is not None, f"input/{name}/q{q}")


# -- entry point ------------------------------------------------------------------


def verify_paper(
    p: int = 2,
    qs: list[int] | None = None,
    family: str = "v4-string",
    stages: int | None = None,
    seed: int = 0,
    ses_path: str | Path | None = None,
) -> RunReport:
    qs = list(qs) if qs else [p]
    n = validate_params(p, qs, family, stages)
    params = {
        "p": p,
        "q": qs,
        "family": family,
        "stages": n,
        "ses": None if ses_path is None else Path(ses_path).name,
    }
    rep = RunReport("verify-paper", params, seed)
    with rep.timed("binomial"):
        binomial_checks(rep, p, qs)
    with rep.timed("proposition"):
        proposition_checks(rep, ses_fixtures(p), qs)
    fam = build_family(family, p, n + 1)
    with rep.timed("telescope"):
        telescope_checks(rep, fam, n, qs, seed)
    with rep.timed("tensor"):
        tensor_variant_checks(rep, fam, n, qs[0], seed)
    with rep.timed("sylow"):
        sylow_checks(rep, p, qs[0])
    with rep.timed("vertex"):
        vertex_checks(rep, p)
    if ses_path is not None:
        with rep.timed("input"):
            input_ses_checks(rep, ses_path, qs)
    return rep


def subgroup_by_elements(group, elements: list[int]):
    if any(not 0 <= e < group.order for e in elements):
        raise ConfigError(f"subgroup elements must be indices below {group.order}")
    return subgroup_from_elements(group, elements)


def all_subgroups(group):
    return subgroups(group)
