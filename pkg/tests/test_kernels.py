"""Backend equivalence: the numba kernels and the numpy fallback must agree
exactly, and both must agree with an independent schoolbook oracle."""

import numpy as np
import pytest

from rankloc import _kernels
from rankloc.gf import base_tables, gfq_matmul, gfq_rank, gfq_rank_batch, gfq_row_reduce
from rankloc.rng import SplitMix64

from helpers import naive_rank, rand_matrix

BACKENDS = ["numpy"] + (["numba"] if _kernels.HAS_NUMBA else [])


def test_numba_available():
    # the packaged configuration ships both backends
    assert _kernels.HAS_NUMBA


@pytest.mark.parametrize("q", [2, 3, 5])
def test_rank_matches_oracle(q):
    rng = SplitMix64(100 + q)
    t = base_tables(q)
    backends = [_kernels.get_backend(name) for name in BACKENDS]
    for _ in range(300):
        m = 1 + rng.randbelow(7)
        n = 1 + rng.randbelow(7)
        mat = rand_matrix(rng, m, n, q)
        expected = naive_rank(mat, q)
        for backend in backends:
            got = backend.rank(mat.copy(), t.add, t.sub, t.mul, t.inv)
            assert got == expected


@pytest.mark.parametrize("q", [2, 3, 4])
def test_backends_agree_on_row_reduce(q):
    rng = SplitMix64(55 + q)
    t = base_tables(q)
    if len(BACKENDS) < 2:
        pytest.skip("single backend build")
    b1, b2 = (_kernels.get_backend(name) for name in BACKENDS)
    for _ in range(200):
        m = 1 + rng.randbelow(6)
        n = 1 + rng.randbelow(6)
        pivot_cols = 1 + rng.randbelow(n)
        mat = rand_matrix(rng, m, n, q)
        r1, p1 = b1.row_reduce(mat.copy(), t.add, t.sub, t.mul, t.inv, pivot_cols)
        r2, p2 = b2.row_reduce(mat.copy(), t.add, t.sub, t.mul, t.inv, pivot_cols)
        assert (np.asarray(r1) == np.asarray(r2)).all()
        assert list(p1) == list(p2)


def test_row_reduce_properties():
    # pivots identify an identity submatrix; augmented columns are solved
    rng = SplitMix64(9)
    for q in (2, 3):
        for _ in range(100):
            m = 2 + rng.randbelow(5)
            n = 2 + rng.randbelow(5)
            mat = rand_matrix(rng, m, n, q)
            reduced, pivots = gfq_row_reduce(mat.copy(), q, n)
            assert len(pivots) == naive_rank(mat, q)
            for i, c in enumerate(pivots):
                col = reduced[:, c]
                assert col[i] == 1 and (np.delete(col, i) == 0).all()


@pytest.mark.parametrize("q", [2, 3, 4])
def test_backends_agree_on_matmul(q):
    rng = SplitMix64(77 + q)
    if len(BACKENDS) < 2:
        pytest.skip("single backend build")
    for _ in range(200):
        a = rand_matrix(rng, 1 + rng.randbelow(5), 1 + rng.randbelow(5), q)
        b = rand_matrix(rng, a.shape[1], 1 + rng.randbelow(5), q)
        got = gfq_matmul(a, b, q)
        if q in (2, 3, 5):
            ref = np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64) % q
            assert (got == ref).all()


def test_matmul_prime_modular_oracle():
    rng = SplitMix64(4242)
    for q in (2, 3, 5):
        for _ in range(150):
            a = rand_matrix(rng, 1 + rng.randbelow(6), 1 + rng.randbelow(6), q)
            b = rand_matrix(rng, a.shape[1], 1 + rng.randbelow(6), q)
            ref = a.astype(np.int64) @ b.astype(np.int64) % q
            assert (gfq_matmul(a, b, q) == ref).all()


def test_rank_batch_matches_scalar():
    rng = SplitMix64(31)
    mats = np.stack([rand_matrix(rng, 5, 6, 2) for _ in range(64)])
    batch = gfq_rank_batch(mats, 2)
    for i in range(64):
        assert batch[i] == gfq_rank(mats[i].copy(), 2)


def test_get_backend_explicit_names():
    numpy_backend = _kernels.get_backend("numpy")
    assert numpy_backend.name == "numpy"
    with pytest.raises(ValueError):
        _kernels.get_backend("gpu")
    if _kernels.HAS_NUMBA:
        assert _kernels.get_backend("numba").name == "numba"
