from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdgcat import pcomplex as pc
from pdgcat.toymatrix import (
    SmashElem,
    ad,
    ad_power_check,
    column_module,
    commutator_identity,
    contraction_witness_matrix,
    corner_ring_check,
    jordan_block,
)


def mats(p, n):
    return st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n).map(
        lambda v: np.array(v, dtype=np.int64).reshape(n, n)
    )


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7]).flatmap(lambda p: st.tuples(st.just(p), mats(p, p))))
def test_ad_power_of_jordan_block(pm):
    p, M = pm
    J = jordan_block(p, p)
    out = M
    for _ in range(p):
        out = ad(J, out, p)
    assert not out.any()
    assert ad_power_check(J, M, p)


def test_zero_derivation():
    assert ad_power_check(np.zeros((3, 3), dtype=np.int64), np.eye(3, dtype=np.int64), 3)


@settings(max_examples=40, deadline=None)
@given(mats(3, 4), mats(3, 4))
def test_ad_power_random(J, M):
    assert ad_power_check(J, M, 3)


def test_ad_power_shape_mismatch():
    with pytest.raises(ValueError):
        ad_power_check(np.zeros((2, 2)), np.zeros((3, 3)), 3)


def test_witness_p3():
    W = contraction_witness_matrix(3)
    assert W.tolist() == [[0, 0, 0], [1, 0, 0], [0, 2, 0]]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_witness_contracts(p):
    W = contraction_witness_matrix(p)
    assert np.array_equal(ad(jordan_block(p, p), W, p), np.eye(p, dtype=np.int64))


@pytest.mark.parametrize("p", [3, 5])
def test_commutator_identity(p):
    # D = ad_J and L = left multiplication by the witness, on M(p) flattened
    n = p
    J, W = jordan_block(n, p), contraction_witness_matrix(p)
    I = np.eye(n, dtype=np.int64)
    D = (np.kron(J, I) - np.kron(I, J.T)) % p
    L = np.kron(W, I) % p
    comm = (D @ L - L @ D) % p
    assert np.array_equal(comm, np.eye(n * n, dtype=np.int64))
    assert commutator_identity(D, L, p)


@pytest.mark.parametrize("p", [3, 5])
def test_corner_ring(p):
    assert all(corner_ring_check(n, p) for n in range(1, p + 1))


def test_corner_ring_idempotent_and_truncation():
    p, n = 3, 2
    E = SmashElem.basic(p, n, n, n)
    assert E * E == E
    c1 = E * SmashElem.d_power(p, n, 1) * E
    c2 = E * SmashElem.d_power(p, n, 2) * E
    assert c1 * c2 == SmashElem(p, n)


def test_corner_ring_range():
    with pytest.raises(ValueError):
        corner_ring_check(4, 3)


@pytest.mark.parametrize("p", [3, 5])
def test_column_module_below_p(p):
    for n in range(1, p):
        dec = pc.decompose(column_module(n, p))
        assert [b.length for b in dec.blocks] == [n]


@pytest.mark.parametrize("p", [3, 5])
def test_column_module_at_p(p):
    U = column_module(p, p)
    assert all(b.length == p for b in pc.decompose(U).blocks)
    assert pc.is_contractible(U)
