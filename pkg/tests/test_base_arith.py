from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdgcat.base_arith import (
    Poly,
    _synthetic_quotient,
    apply_word,
    check_prime,
    derive,
    derive_twisted,
    divided_difference,
    elementary_symmetric,
    iterate,
    longest_divided_difference,
    longest_word,
)


def polys(p: int, n: int, max_terms: int = 5, max_exp: int = 4):
    mono = st.tuples(*[st.integers(0, max_exp)] * n)
    return st.dictionaries(mono, st.integers(1, p - 1), max_size=max_terms).map(
        lambda d: Poly(p, n, d)
    )


def x(p, n, t):
    return Poly.var(p, n, t)


def test_prime_check():
    assert check_prime(5) == 5
    with pytest.raises(ValueError):
        check_prime(9)


def test_derive_power_rule():
    p = 7
    assert derive(x(p, 1, 1) ** 3) == Poly.monomial(p, 1, [4], 3)
    assert derive(Poly.const(p, 2, 1)).is_zero()


def test_derive_e2_in_three_variables():
    p = 5
    e1, e2, e3 = (elementary_symmetric(m, 3, p) for m in (1, 2, 3))
    assert derive(e2) == e1 * e2 - e3 * 3


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_derive_on_elementary_symmetric(p, n):
    e = [elementary_symmetric(m, n, p) for m in range(n + 1)]
    for m in range(1, n):
        assert derive(e[m]) == e[1] * e[m] - e[m + 1] * (m + 1)
    assert derive(e[n]) == e[1] * e[n]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_leibniz_random_pairs(p):
    @settings(max_examples=100, deadline=None)
    @given(polys(p, 3), polys(p, 3))
    def check(f, g):
        assert derive(f * g) == derive(f) * g + f * derive(g)

    check()


@pytest.mark.parametrize("p", [3, 5, 7])
def test_derive_p_times_vanishes(p):
    @settings(max_examples=50, deadline=None)
    @given(polys(p, 3))
    def check(f):
        assert iterate(derive, f, p).is_zero()

    check()


def test_twisted_generator():
    assert derive_twisted(Poly.const(5, 2, 1), (2, 0)) == Poly.monomial(5, 2, [1, 0], 2)
    assert derive_twisted(Poly.const(5, 3, 1), (0, 0, 0)).is_zero()


def test_twisted_iterate_vanishes_oracle():
    # the p-th iterate expands to a multiple of prod (alpha_t + k) which vanishes mod p
    one = Poly.const(3, 2, 1)
    assert iterate(lambda f: derive_twisted(f, (1, 3)), one, 3).is_zero()


@pytest.mark.parametrize("p", [3, 5])
def test_twisted_nilpotent_any_alpha(p):
    @settings(max_examples=40, deadline=None)
    @given(polys(p, 2), st.tuples(st.integers(0, p - 1), st.integers(0, p - 1)))
    def check(f, alpha):
        assert iterate(lambda g: derive_twisted(g, alpha), f, p).is_zero()

    check()


def test_divided_difference_examples():
    p = 5
    assert divided_difference(1, x(p, 2, 1)) == Poly.const(p, 2, 1)
    assert divided_difference(1, x(p, 2, 1) * x(p, 2, 2)).is_zero()
    assert divided_difference(1, x(p, 2, 1) ** 2) == x(p, 2, 1) + x(p, 2, 2)


def test_divided_difference_matches_long_division():
    p = 7

    @settings(max_examples=100, deadline=None)
    @given(polys(p, 3, max_exp=6), st.integers(1, 2))
    def check(f, t):
        assert divided_difference(t, f) == _synthetic_quotient(t, f)

    check()


def test_divided_difference_times_difference_recovers():
    p = 5

    @settings(max_examples=60, deadline=None)
    @given(polys(p, 3))
    def check(f):
        lhs = divided_difference(1, f) * (x(p, 3, 1) - x(p, 3, 2))
        assert lhs == f - f.swap(1)

    check()


def test_nilcoxeter_relations_as_operators():
    p = 5

    @settings(max_examples=60, deadline=None)
    @given(polys(p, 4, max_exp=5))
    def check(f):
        for t in (1, 2, 3):
            assert divided_difference(t, divided_difference(t, f)).is_zero()
        for t in (1, 2):
            assert apply_word((t, t + 1, t), f) == apply_word((t + 1, t, t + 1), f)
        assert apply_word((1, 3), f) == apply_word((3, 1), f)

    check()


def reduced_words_of_longest(n):
    """All reduced words of w_0 by closing the fixed word under braid moves."""
    start = longest_word(n)
    seen = {start}
    todo = [start]
    while todo:
        w = todo.pop()
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if abs(a - b) > 1:
                nw = w[:i] + (b, a) + w[i + 2 :]
                if nw not in seen:
                    seen.add(nw)
                    todo.append(nw)
            if i + 2 < len(w) and w[i] == w[i + 2] and abs(a - b) == 1:
                nw = w[:i] + (b, a, b) + w[i + 3 :]
                if nw not in seen:
                    seen.add(nw)
                    todo.append(nw)
    return seen


def test_longest_word_shape():
    assert longest_word(4) == (1, 2, 1, 3, 2, 1)
    assert len(reduced_words_of_longest(4)) == 16


def test_longest_divided_difference_examples():
    p = 5
    f = x(p, 3, 2) * x(p, 3, 3) ** 2
    assert longest_divided_difference(3, f) == Poly.const(p, 3, -1)
    assert longest_divided_difference(2, x(p, 2, 1)) == Poly.const(p, 2, 1)
    assert longest_divided_difference(3, Poly.const(p, 3, 1)).is_zero()


@pytest.mark.parametrize("n", [2, 3, 4])
def test_longest_word_independence(n):
    p = 5
    words = reduced_words_of_longest(n)
    for exps in itertools.product(range(n), repeat=n):
        f = Poly.monomial(p, n, exps)
        vals = {repr(longest_divided_difference(n, f, w)) for w in words}
        assert len(vals) == 1
        g = longest_divided_difference(n, f)
        for t in range(1, n):
            assert g.swap(t) == g


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_longest_on_staircase(n):
    p = 7
    stair = Poly.monomial(p, n, list(range(n)))
    sign = (-1) ** (n * (n - 1) // 2)
    assert longest_divided_difference(n, stair) == Poly.const(p, n, sign)


def test_elementary_symmetric():
    p = 5
    assert elementary_symmetric(1, 2, p) == x(p, 2, 1) + x(p, 2, 2)
    e2 = elementary_symmetric(2, 3, p)
    assert e2 == x(p, 3, 1) * x(p, 3, 2) + x(p, 3, 1) * x(p, 3, 3) + x(p, 3, 2) * x(p, 3, 3)
    with pytest.raises(ValueError):
        elementary_symmetric(3, 2, p)


def test_json_round_trip():
    f = Poly(5, 3, {(1, 0, 2): 3, (0, 0, 0): 1})
    assert Poly.from_json(f.to_json()) == f
    with pytest.raises(ValueError):
        Poly.from_json({"p": 5, "nvars": 2, "terms": [[[1], 1]]})
