import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistmod import linalg
from twistmod.groups import (
    cyclic,
    direct_product,
    identity_embedding,
    klein_four,
    subgroup_from_elements,
    symmetric3,
)
from twistmod.reps import (
    Module,
    ModuleError,
    change_basis,
    check_module,
    direct_sum,
    dual,
    generated_submodule,
    induce,
    module_from_json,
    module_to_json,
    permutation_module,
    quotient,
    regular_module,
    restrict,
    submodule,
    tensor,
    trivial_module,
)
from twistmod.samples import group_pool, ModuleSampler
from twistmod.telescope import jordan_module, string_module_v4


def test_trivial_and_regular():
    g = symmetric3()
    assert trivial_module(g, 3).dim == 1
    reg = regular_module(cyclic(2), 2)
    assert reg.dim == 2
    assert reg.action[1].tolist() == [[0, 1], [1, 0]]
    full = regular_module(g, 2)
    # every action matrix is a permutation matrix
    assert np.all(full.action.sum(axis=1) == 1) and np.all(full.action.sum(axis=2) == 1)


def test_basic_functor_dims():
    g = klein_four()
    m, n = string_module_v4(1, g), regular_module(g, 2)
    assert direct_sum(m, n).dim == 7
    assert tensor(m, n).dim == 12
    assert np.array_equal(tensor(trivial_module(g, 2), m).action, m.action)
    assert np.array_equal(dual(dual(m)).action, m.action)


def test_context_mismatch():
    with pytest.raises(ModuleError):
        direct_sum(trivial_module(cyclic(2), 2), trivial_module(cyclic(2), 3))
    with pytest.raises(ModuleError):
        tensor(trivial_module(cyclic(2), 2), trivial_module(cyclic(4), 2))


def test_restrict_and_induce_trivial_embedding():
    m = string_module_v4(2)
    emb = identity_embedding(m.group)
    assert np.array_equal(restrict(emb, m).action, m.action)
    assert np.array_equal(induce(emb, m).action, m.action)


def test_induce_trivial_from_c2_in_v4():
    v, e1, _ = direct_product(cyclic(2), cyclic(2))
    ind = induce(e1, trivial_module(cyclic(2), 2))
    assert ind.dim == 2
    assert check_module(ind).ok
    # elements of the image of C2 fix both cosets; the other factor swaps them
    for h in e1.image:
        assert np.array_equal(ind.action[h], np.eye(2))
    assert sum(np.array_equal(a, [[0, 1], [1, 0]]) for a in ind.action) == 2


def test_check_module_names_failures():
    g = cyclic(2)
    bad = np.stack([np.eye(2, dtype=np.int64), np.zeros((2, 2), dtype=np.int64)])
    rep = check_module(Module(g, 2, bad))
    assert any("element 1 is singular" in f for f in rep.failures)
    g4 = cyclic(4)
    act = np.stack([np.eye(1, dtype=np.int64)] + [np.array([[2]])] * 3)
    rep = check_module(Module(g4, 5, act))
    assert any(f.startswith("rho(") for f in rep.failures)
    assert check_module(regular_module(symmetric3(), 3)).ok


def test_from_generators_matches_direct_construction():
    j = jordan_module(3, 3)
    m = Module.from_generators(j.group, 3, j.generator_matrices())
    assert np.array_equal(m.action, j.action)


def test_json_roundtrip(tmp_path):
    g = symmetric3()
    m = permutation_module(subgroup_from_elements(g, [g.generators[0]]), 3)
    data = json.loads(json.dumps(module_to_json(m)))
    back = module_from_json(data)
    assert np.array_equal(back.action, m.action) and back.group.same_as(g)


def test_submodule_and_quotient():
    reg = regular_module(cyclic(2), 2)
    soc = submodule(reg, np.array([[1], [1]]))
    assert soc.dim == 1 and check_module(soc).ok
    quo, proj = quotient(reg, np.array([[1], [1]]))
    assert quo.dim == 1
    assert not linalg.matmul(proj, np.array([[1], [1]]), 2).any()
    with pytest.raises(ModuleError):
        submodule(reg, np.array([[1], [0]]))


def test_generated_submodule_of_regular_is_everything():
    reg = regular_module(klein_four(), 2)
    v = np.zeros((4, 1), dtype=np.int64)
    v[0] = 1
    assert generated_submodule(reg, v).shape[1] == 4


@given(st.integers(0, 10_000), st.integers(0, len(group_pool()) - 1))
def test_random_modules_satisfy_axioms(seed, gi):
    g, p = group_pool()[gi]
    rng = np.random.default_rng(seed)
    m, _ = ModuleSampler(g, p, rng, 12).sample()
    assert check_module(m).ok
    assert np.array_equal(dual(dual(m)).action, m.action)
    n = change_basis(m, np.eye(m.dim, dtype=np.int64))
    assert np.array_equal(n.action, m.action)


@given(st.integers(0, 10_000))
def test_projection_formula_dimensions(seed):
    rng = np.random.default_rng(seed)
    g, p = group_pool()[int(rng.integers(len(group_pool())))]
    emb = subgroup_from_elements(g, [int(rng.integers(g.order))])
    m, _ = ModuleSampler(emb.sub, p, rng, 4).sample()
    w, _ = ModuleSampler(g, p, rng, 4).sample()
    lhs = induce(emb, tensor(restrict(emb, w), m))
    rhs = tensor(w, induce(emb, m))
    assert lhs.dim == rhs.dim == emb.index * w.dim * m.dim
    assert check_module(lhs).ok and check_module(rhs).ok
