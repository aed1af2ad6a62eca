"""Acceptance criteria 1-8.  Each test records one PASS/FAIL line with its timing budget.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are repeated
in the terminal summary) or as a script.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from acceptance_log import record
from twistmod import linalg
from twistmod.fixtures import ses_fixtures, valid_qs
from twistmod.groups import cyclic, direct_product
from twistmod.harness import vertex_fixture
from twistmod.morph import is_isomorphic, is_split_mono
from twistmod.relproj import (
    is_projective,
    is_rel_projective,
    is_w_projective,
    is_w_projective_via_trace,
    lifting_oracle,
    vertex,
)
from twistmod.reps import induce, permutation_module, regular_module, restrict, tensor
from twistmod.samples import random_instances
from twistmod.telescope import (
    inclusion_contrast,
    stage_twist_projective,
    string_family_v4,
    telescope_stage,
    tensor_family,
)
from twistmod.twist import (
    binomial_identity_check,
    coset_trace_witness,
    extract_splitting,
    relation_failures,
    solve_factorization,
    twist_projectivity,
    twisted_induction,
    unsigned_iterated_rule_holds,
)

CASES = [(fx, q) for fx in ses_fixtures() for q in valid_qs(fx.p)]


def _factorizations():
    out = []
    for fx, q in CASES:
        f = solve_factorization(twisted_induction(fx.ses, q))
        if f is not None:
            out.append((fx, q, f))
    return out


def test_criterion_1_split_iff_projective():
    t0 = time.perf_counter()
    mismatches = []
    split_count = 0
    for fx, q in CASES:
        split = is_split_mono(fx.ses.d1) is not None
        split_count += split
        T = twisted_induction(fx.ses, q)
        proj = twist_projectivity(T).projective
        feasible = solve_factorization(T) is not None
        if not (split == proj == feasible):
            mismatches.append(f"{fx.name}/q{q}")
    elapsed = time.perf_counter() - t0
    groups = sorted({fx.ses.group.name for fx, _ in CASES})
    ok = not mismatches and elapsed < 30 and split_count >= 4 and len(CASES) - split_count >= 4
    record(1, ok, elapsed, 30,
           f"{len(CASES)} (sequence, q) cases over {','.join(groups)}: {split_count} split, "
           f"{len(CASES) - split_count} non-split, mismatches {mismatches or 'none'}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the quoted induction formula omits the signs (-1)^i; it fails for p = 3")
def test_criterion_2_splitting_extraction():
    t0 = time.perf_counter()
    facts = _factorizations()
    retraction_bad, rel_bad, unsigned_bad, signed_bad = [], [], [], []
    for fx, q, f in facts:
        tag = f"{fx.name}/q{q}"
        s = extract_splitting(f)
        if not np.array_equal(linalg.matmul(s.matrix, fx.ses.d1.matrix, fx.p), np.eye(fx.ses.X.dim)):
            retraction_bad.append(tag)
        fails = relation_failures(f)
        if any(x.startswith(("shift rule", "boundary rule", "column sum")) for x in fails):
            rel_bad.append(tag)
        if any(x.startswith("iterated rule") for x in fails):
            signed_bad.append(tag)
        if not unsigned_iterated_rule_holds(f):
            unsigned_bad.append(tag)
    elapsed = time.perf_counter() - t0
    ok = not (retraction_bad or rel_bad or unsigned_bad) and elapsed < 10
    record(2, ok, elapsed, 10,
           f"{len(facts)} factorizations: s d1 = I fails on {len(retraction_bad)}, relations (1),(2) fail on "
           f"{len(rel_bad)}, quoted (unsigned) induction formula fails on {len(unsigned_bad)} "
           f"{unsigned_bad}, signed form fails on {len(signed_bad)}")
    assert not retraction_bad and not rel_bad and not signed_bad
    assert ok


def test_criterion_3_binomial_identity():
    t0 = time.perf_counter()
    good = [(2, 2), (4, 2), (8, 2), (3, 3), (9, 3), (5, 5)]
    passes = [binomial_identity_check(q, p).passed for q, p in good]
    control = binomial_identity_check(6, 2)
    elapsed = time.perf_counter() - t0
    ok = all(passes) and not control.passed and elapsed < 1
    record(3, ok, elapsed, 1, f"{sum(passes)}/{len(good)} powers pass; (6,2) residues {list(control.residues)} fail")
    assert ok


def test_criterion_4_telescope_stages():
    t0 = time.perf_counter()
    fam = string_family_v4(6)
    reports = [stage_twist_projective(fam, N, q) for N in range(1, 6) for q in (2, 4)]
    inclusions_split = [is_split_mono(fam.inclusion(n)) is not None for n in range(1, 6)]
    contrast = [twist_projectivity(twisted_induction(inclusion_contrast(fam, n), 2)).projective for n in (1, 2)]
    elapsed = time.perf_counter() - t0
    ok = all(r.ok for r in reports) and not any(inclusions_split) and not any(contrast) and elapsed < 60
    dims = {r.q: [] for r in reports}
    for r in reports:
        dims[r.q].append(r.twist_dim)
    record(4, ok, elapsed, 60,
           f"{sum(r.ok for r in reports)}/{len(reports)} stages split and twist H-projective "
           f"(twisted dims {dims}); iota_1..5 split: {sum(inclusions_split)}")
    assert ok


# tensored stages checked per q; q = 4, N = 4 (dim 560) exceeds desk memory in the graded solve
TENSOR_STAGES = {2: range(1, 6), 4: range(1, 4)}


def test_criterion_5_projection_formula_and_tensor_stages():
    t0 = time.perf_counter()
    fam = string_family_v4(6)
    H = fam.modules[0].group
    iso_ok, stage_ok, total = [], [], 0
    for q, stages in TENSOR_STAGES.items():
        G, emb, _ = direct_product(H, cyclic(q), name=f"{H.name}xC{q}")
        w = permutation_module(emb, 2)
        v = restrict(emb, w)
        assert vertex(w)[0].image <= emb.image
        for n in (1, 2, 3):
            m = fam.module(n)
            res = is_isomorphic(induce(emb, tensor(v, m)), tensor(w, induce(emb, m)))
            iso_ok.append(res.status == "yes" and res.witness.is_equivariant())
        tf = tensor_family(v, fam)
        for N in stages:
            T = twisted_induction(telescope_stage(tf, N), q)
            graded = twist_projectivity(T)
            total += 1
            if graded.projective:
                theta = coset_trace_witness(T, graded.witness)
                stage_ok.append(is_w_projective_via_trace(T.module, T.h_embedding, theta).projective)
            else:
                stage_ok.append(False)
        # the small stage also through the generic evaluation-split solver
        T = twisted_induction(telescope_stage(tf, 1), q)
        if q == 2:
            stage_ok.append(is_w_projective(T.module, permutation_module(T.h_embedding, 2)).projective)
            total += 1
    elapsed = time.perf_counter() - t0
    ok = all(iso_ok) and all(stage_ok) and elapsed < 60
    record(5, ok, elapsed, 60,
           f"projection formula witnessed {sum(iso_ok)}/{len(iso_ok)}; tensored stages W-projective "
           f"{sum(stage_ok)}/{total} (N<=5 at q=2, N<=3 at q=4)")
    assert ok


def test_criterion_6_oracle_cross_validation():
    t0 = time.perf_counter()
    instances = random_instances(60, seed=0)
    bad = []
    for inst in instances:
        m, h = inst.module, inst.subgroup
        rel = is_rel_projective(m, h).projective
        if rel != lifting_oracle(m, h):
            bad.append(f"lifting:{inst.recipe}")
        if is_w_projective(m, permutation_module(h, m.p)).projective != rel:
            bad.append(f"w=k[G/H]:{inst.recipe}")
        if is_w_projective(m, regular_module(m.group, m.p)).projective != is_projective(m).projective:
            bad.append(f"w=kG:{inst.recipe}")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 120 and len(instances) >= 50
    assert all(i.module.group.order <= 16 and i.module.dim <= 24 for i in instances)
    n_proj = sum(is_rel_projective(i.module, i.subgroup).projective for i in instances)
    record(6, ok, elapsed, 120,
           f"{len(instances)} instances ({n_proj} relatively projective), 3 oracle pairs, disagreements {bad or 'none'}")
    assert ok


def test_criterion_7_vertex_lemma():
    t0 = time.perf_counter()
    checked = nontrivial = 0
    bad = []
    n_w = 0
    for p in (2, 3):
        ws, ms = vertex_fixture(p)
        n_w += len(ws)
        for i, w in enumerate(ws):
            assert w.group.order <= 16
            vs = vertex(w)
            for j, m in enumerate(ms):
                if not is_w_projective(m, w).projective:
                    continue
                checked += 1
                nontrivial += w.dim > 1
                if not all(is_rel_projective(m, Q).projective for Q in vs):
                    bad.append(f"p{p}/w{i}/m{j}")
    elapsed = time.perf_counter() - t0
    ok = n_w >= 6 and not bad and nontrivial > 0 and elapsed < 60
    record(7, ok, elapsed, 60,
           f"{n_w} w modules; {checked} w-projective pairs checked against vertex(w), violations {bad or 'none'}")
    assert ok


def test_criterion_8_determinism(tmp_path):
    t0 = time.perf_counter()
    args = ["verify-paper", "--p", "2", "--q", "2,4", "--family", "v4-string", "--stages", "3", "--seed", "7"]
    texts, reports = [], []
    for run in ("a", "b"):
        path = tmp_path / f"{run}.json"
        res = subprocess.run([sys.executable, "-m", "twistmod", *args, "--json", str(path)],
                             capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
        data = json.loads(path.read_text())
        data.pop("timing")
        reports.append(json.dumps(data, sort_keys=True))
        texts.append(res.stdout)
    elapsed = time.perf_counter() - t0
    ok = reports[0] == reports[1] and texts[0] == texts[1]
    record(8, ok, elapsed, None, f"two verify-paper runs (seed 7): reports identical outside timing: {ok}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
