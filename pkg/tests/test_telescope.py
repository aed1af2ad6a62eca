import numpy as np
import pytest

from twistmod.groups import klein_four
from twistmod.morph import is_split_mono
from twistmod.relproj import is_projective
from twistmod.reps import ModuleError, check_module, regular_module, restrict, trivial_module
from twistmod.groups import direct_product, cyclic
from twistmod.telescope import (
    inclusion_contrast,
    jordan_family_cp,
    probably_indecomposable,
    stage_twist_projective,
    string_family_v4,
    string_module_v4,
    telescope_stage,
    tensor_family,
)
from twistmod.twist import twist_projectivity, twisted_induction


def test_string_modules():
    fam = string_family_v4(4)
    assert [m.dim for m in fam.modules] == [3, 5, 7, 9]
    for m in fam.modules:
        assert check_module(m).ok
    for n in range(1, 4):
        assert is_split_mono(fam.inclusion(n)) is None
    with pytest.raises(ValueError):
        string_family_v4(0)


def test_string_modules_are_probably_indecomposable():
    for n in (1, 2, 3):
        assert probably_indecomposable(string_module_v4(n), trials=200, seed=0)


def test_jordan_family():
    fam = jordan_family_cp(3, 3)
    assert [m.dim for m in fam.modules] == [1, 2, 3]
    assert is_split_mono(fam.inclusion(1)) is None
    assert is_projective(fam.module(3))
    with pytest.raises(ValueError):
        jordan_family_cp(3, 4)


def test_tensor_family():
    fam = string_family_v4(3)
    g = fam.modules[0].group
    same = tensor_family(trivial_module(g, 2), fam)
    for a, b in zip(same.modules, fam.modules):
        assert np.array_equal(a.action, b.action)
    for a, b in zip(same.inclusions, fam.inclusions):
        assert np.array_equal(a.matrix, b.matrix)
    big, emb, _ = direct_product(g, cyclic(2))
    v = restrict(emb, regular_module(big, 2))
    tf = tensor_family(v, fam)
    assert [m.dim for m in tf.modules] == [24, 40, 56]
    # a free tensor factor kills the non-splitness of each inclusion
    assert all(is_split_mono(f) is not None for f in tf.inclusions)
    with pytest.raises(ModuleError):
        tensor_family(trivial_module(cyclic(2), 2), fam)


def test_stage_examples():
    S = telescope_stage(string_family_v4(2), 1)
    assert S.dims == (3, 8, 5)
    assert is_split_mono(S.d1) is not None
    S = telescope_stage(jordan_family_cp(3, 2), 1)
    assert S.dims == (1, 3, 2)
    assert is_split_mono(S.d1) is not None
    fam = string_family_v4(4)
    for N in (1, 2, 3):
        S = telescope_stage(fam, N)
        assert S.dims[1] == S.dims[0] + S.dims[2]
    with pytest.raises(ValueError):
        telescope_stage(fam, 4)


def test_stage_twists_are_projective():
    fam = string_family_v4(4)
    dims = []
    for N in (1, 2, 3):
        rep = stage_twist_projective(fam, N, 2)
        assert rep.ok
        dims.append(rep.twist_dim)
    assert dims == [16, 30, 48]
    assert stage_twist_projective(jordan_family_cp(3, 2), 1, 3).ok


def test_contrast_twists_are_not_projective():
    fam = string_family_v4(3)
    for n in (1, 2):
        S = inclusion_contrast(fam, n)
        assert is_split_mono(S.d1) is None
        assert not twist_projectivity(twisted_induction(S, 2)).projective


def test_stage_report_json():
    rep = stage_twist_projective(jordan_family_cp(2, 2), 1, 2)
    data = rep.to_json()
    assert data["projective"] and data["dims"] == [1, 3, 2]
    assert "timings" not in data


def test_bad_q():
    with pytest.raises(ValueError):
        stage_twist_projective(string_family_v4(2), 1, 3)
