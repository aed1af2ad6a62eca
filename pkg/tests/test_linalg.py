import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistmod import linalg
from oracles import all_matrices

PRIMES = [2, 3, 5, 7]


@st.composite
def matrices(draw, p=None, max_side=6):
    p = draw(st.sampled_from(PRIMES)) if p is None else p
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(1, max_side))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(entries, dtype=np.int64).reshape(r, c), p


def test_check_prime():
    assert linalg.check_prime(13) == 13
    for bad in (0, 1, 4, 9, 91):
        with pytest.raises(linalg.PrimeError):
            linalg.check_prime(bad)


def test_solve_upper_triangular_gf2():
    a = np.array([[1, 1], [0, 1]])
    sol = linalg.solve_linear(a, np.eye(2, dtype=np.int64), 2)
    assert sol.particular.tolist() == [[1, 1], [0, 1]]
    assert sol.nullspace_basis == []
    assert np.array_equal(linalg.matmul(a, sol.particular, 2), np.eye(2))


def test_solve_zero_system():
    sol = linalg.solve_linear(np.zeros((2, 2), dtype=np.int64), np.zeros((2, 2), dtype=np.int64), 5)
    assert not sol.particular.any()
    assert len(sol.nullspace_basis) == 2


def test_solve_infeasible_matches_enumeration():
    a = np.array([[1], [1]])
    b = np.array([[1], [2]])
    assert linalg.solve_linear(a, b, 3) is None
    # no scalar x in GF(3) gives (x, x) = (1, 2)
    assert not any(np.array_equal((a * x) % 3, b) for x in range(3))


def test_solve_shape_error():
    with pytest.raises(linalg.ShapeError):
        linalg.solve_linear(np.zeros((2, 2)), np.zeros((3, 1)), 2)


def test_rank_examples():
    assert linalg.rank(np.eye(4, dtype=np.int64), 7) == 4
    assert linalg.rank(np.zeros((3, 5), dtype=np.int64), 2) == 0
    assert linalg.rank(np.array([[1, 2], [2, 4]]), 5) == 1


def test_kron_examples():
    m = np.array([[1, 2], [3, 4]])
    k = linalg.kron(np.eye(2, dtype=np.int64), m, 5)
    assert np.array_equal(k[:2, :2], m) and np.array_equal(k[2:, 2:], m) and not k[:2, 2:].any()
    assert linalg.kron(np.array([[3]]), np.array([[4]]), 5).tolist() == [[2]]
    j = np.array([[1, 1], [0, 1]])
    assert linalg.kron(j, j, 2).tolist() == [[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]


def test_rank_against_enumeration():
    # rank = log_p of the size of the row space, counted by brute force
    for mat in all_matrices(2, 3, 2)[::5]:
        span = {tuple((c @ mat) % 2) for c in all_matrices(1, 2, 2).reshape(-1, 2)}
        assert 2 ** linalg.rank(mat, 2) == len(span)


@given(matrices())
def test_rank_nullity(ap):
    a, p = ap
    ns = linalg.nullspace(a, p)
    assert linalg.rank(a, p) + ns.shape[1] == a.shape[1]
    if a.shape[0]:
        assert not linalg.matmul(a, ns, p).any()


@given(matrices(), st.data())
def test_solve_particular_plus_kernel(ap, data):
    a, p = ap
    x = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=a.shape[1], max_size=a.shape[1])))
    b = linalg.matmul(a, x.reshape(-1, 1), p) if a.shape[0] else np.zeros((0, 1), dtype=np.int64)
    sol = linalg.solve_linear(a, b, p)
    assert sol is not None
    combo = sol.particular.copy()
    for v in sol.nullspace_basis:
        combo = (combo + data.draw(st.integers(0, p - 1)) * v) % p
    assert np.array_equal(linalg.matmul(a, combo, p), b % p)


@given(st.sampled_from(PRIMES), st.data())
def test_kron_mixed_product(p, data):
    def mat(r, c):
        return np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))).reshape(r, c)

    n, m, k, l, s, t = (data.draw(st.integers(1, 3)) for _ in range(6))
    a, c = mat(n, m), mat(m, k)
    b, d = mat(l, s), mat(s, t)
    lhs = linalg.matmul(linalg.kron(a, b, p), linalg.kron(c, d, p), p)
    rhs = linalg.kron(linalg.matmul(a, c, p), linalg.matmul(b, d, p), p)
    assert np.array_equal(lhs, rhs)


@given(matrices(max_side=5))
def test_inverse_roundtrip(ap):
    a, p = ap
    if a.shape[0] != a.shape[1]:
        return
    if linalg.rank(a, p) < a.shape[0]:
        with pytest.raises(ZeroDivisionError):
            linalg.inverse(a, p)
        return
    inv = linalg.inverse(a, p)
    assert np.array_equal(linalg.matmul(a, inv, p), np.eye(a.shape[0]))


def test_large_prime_matmul_is_exact():
    p = 1_000_003
    rng = np.random.default_rng(0)
    a = rng.integers(0, p, size=(40, 40))
    b = rng.integers(0, p, size=(40, 40))
    want = np.mod(a.astype(object) @ b.astype(object), p).astype(np.int64)
    assert np.array_equal(linalg.matmul(a, b, p), want)


def test_echelon_space():
    sp = linalg.EchelonSpace(3, 3)
    assert sp.add(np.array([1, 2, 0]))
    assert not sp.add(np.array([2, 1, 0]))
    assert sp.add(np.array([0, 0, 1]))
    assert sp.contains(np.array([1, 2, 2]))
    assert not sp.contains(np.array([0, 1, 0]))
    assert sp.dim == 2
