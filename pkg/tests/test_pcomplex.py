from __future__ import annotations

import json
import random

import numpy as np
import pytest

from conftest import seed
from oracles import balanced_product_rule as expected_tensor
from oracles import jordan_blocks, slash_by_definition
from pdgcat.oring import OElem, quantum_int
from pdgcat.pcomplex import (
    PComplex,
    backslash_cohomology,
    balanced_block,
    block,
    decompose,
    direct_sum,
    dual,
    exactness_defects,
    is_contractible,
    mayer_cohomology,
    quasi_isomorphic,
    random_complex,
    shift,
    slash_cohomology,
    symbol,
    tensor,
)


def pol1(p: int, hi: int) -> PComplex:
    """k[x] with dx = x^2, cut at degree hi."""
    dims = {2 * m: 1 for m in range(hi // 2 + 1)}
    d = {2 * m: np.array([[m % p]]) for m in range(hi // 2)}
    return PComplex(p, dims, d, open_high=True, window=(0, hi))


def test_single_vector():
    U = PComplex(5, {5: 1})
    assert decompose(U).as_dict() == {(1, 5): 1}


def test_v1_tensor_v1_at_5():
    T = tensor(balanced_block(5, 1), balanced_block(5, 1))
    assert decompose(T).as_dict() == {(1, 0): 1, (3, -2): 1}


@pytest.mark.parametrize("p", [3, 5])
def test_balanced_product_rule(p):
    for i in range(p):
        for j in range(p):
            T = tensor(balanced_block(p, i), balanced_block(p, j))
            assert decompose(T).as_dict() == expected_tensor(p, i, j), (i, j)


@pytest.mark.parametrize("p", [3, 5])
def test_free_tensor_rule(p):
    for i in range(p):
        T = tensor(block(p, i), block(p, p - 1))
        assert decompose(T).as_dict() == {(p, 2 * s): 1 for s in range(i + 1)}


@pytest.mark.parametrize("p", [3, 5])
def test_decompose_matches_jordan_oracle(p):
    rng = random.Random(seed() + p)
    for _ in range(200):
        U, planted = random_complex(p, rng)
        got = decompose(U).as_dict()
        assert got == jordan_blocks(U)
        want = {}
        for k, s in planted:
            want[(k, s)] = want.get((k, s), 0) + 1
        assert got == want


def test_rejects_non_nilpotent():
    with pytest.raises(ValueError):
        PComplex(3, {0: 1, 2: 1, 4: 1, 6: 1}, {0: [[1]], 2: [[1]], 4: [[1]]})


@pytest.mark.parametrize("p", [3, 5, 7])
def test_slash_of_blocks(p):
    U = block(p, p - 1)
    for k in range(p - 1):
        assert slash_cohomology(U, k) == {}
        assert backslash_cohomology(U, k) == {}
    for i in range(p - 1):
        V = block(p, i)
        for k in range(p - 1):
            h = slash_cohomology(V, k)
            assert sum(h.values()) == (1 if k <= i else 0)
            assert h == slash_by_definition(V, k)
    assert slash_cohomology(block(p, 0), 0) == {0: 1}
    assert backslash_cohomology(block(p, 0), 0) == {0: 1}


@pytest.mark.parametrize("p", [3, 5])
def test_cohomology_identities_random(p):
    rng = random.Random(seed() + 10 * p)
    for _ in range(60):
        U, _ = random_complex(p, rng)
        D = dual(U)
        for k in range(p - 1):
            assert slash_cohomology(U, k) == slash_by_definition(U, k)
            back = backslash_cohomology(U, k)
            sl_dual = slash_cohomology(D, k)
            assert back == {-j: v for j, v in sl_dual.items()}
        assert mayer_cohomology(U, 1) == slash_cohomology(U, 0)
        assert exactness_defects(U) == {}


@pytest.mark.parametrize("p", [3, 5])
def test_dimension_splits_into_cohomology_and_free(p):
    rng = random.Random(seed() + 20 * p)
    for _ in range(60):
        U, _ = random_complex(p, rng)
        dec = decompose(U)
        for j in U.degrees():
            coh = sum(slash_cohomology(U, k).get(j, 0) for k in range(p - 1))
            free = sum(
                b.mult for b in dec.blocks if b.length == p and b.start <= j <= b.start + 2 * (p - 1)
                and (j - b.start) % 2 == 0
            )
            assert U.dim(j) == coh + free


@pytest.mark.parametrize("p", [3, 5])
def test_duality_mirrors_blocks(p):
    rng = random.Random(seed() + 30 * p)
    for _ in range(40):
        U, _ = random_complex(p, rng)
        mirrored = {(k, -j - 2 * (k - 1)): m for (k, j), m in decompose(U).as_dict().items()}
        assert decompose(dual(U)).as_dict() == mirrored


@pytest.mark.parametrize("p", [3, 5])
def test_symbol_multiplicative(p):
    rng = random.Random(seed() + 40 * p)
    for _ in range(25):
        U, _ = random_complex(p, rng, max_blocks=3)
        W, _ = random_complex(p, rng, max_blocks=2)
        assert symbol(tensor(U, W)).value == symbol(U).value * symbol(W).value


@pytest.mark.parametrize("p", [3, 5, 7])
def test_symbol_examples(p):
    for i in range(p):
        assert symbol(balanced_block(p, i)).value == quantum_int(p, i + 1)
    assert symbol(block(p, p - 1)).value.is_zero()
    assert symbol(PComplex(p, {})).value.is_zero()


def test_tensor_unit():
    rng = random.Random(seed())
    U, _ = random_complex(5, rng)
    assert decompose(tensor(U, block(5, 0))).as_dict() == decompose(U).as_dict()


def test_contractible():
    p = 5
    assert is_contractible(direct_sum(block(p, p - 1), block(p, p - 1, 2)))
    assert not is_contractible(block(p, 0))
    rng = random.Random(seed() + 1)
    for _ in range(40):
        U, _ = random_complex(3, rng)
        no_coh = all(not slash_cohomology(U, k) for k in range(2))
        assert no_coh == is_contractible(U)


def test_quasi_isomorphism():
    p = 5
    rng = random.Random(seed() + 2)
    U, _ = random_complex(p, rng)
    assert quasi_isomorphic(U, direct_sum(U, block(p, p - 1, 4)))
    assert not quasi_isomorphic(block(p, 0), block(p, 1))
    assert quasi_isomorphic(pol1(p, 4 * p), block(p, 0))


def test_windowed_pol1_symbol():
    p = 5
    res = symbol(pol1(p, 8 * p))
    assert res.verified and res.value == OElem.one(p)
    # a window that is too small cannot be certified
    assert not symbol(pol1(p, 2 * p)).verified


def test_shift_and_json():
    rng = random.Random(seed() + 3)
    U, _ = random_complex(3, rng)
    V = PComplex.from_json(json.loads(json.dumps(U.to_json())))
    assert decompose(V).as_dict() == decompose(U).as_dict()
    S = shift(U, 4)
    assert {(k, j - 4): m for (k, j), m in decompose(S).as_dict().items()} == decompose(U).as_dict()
