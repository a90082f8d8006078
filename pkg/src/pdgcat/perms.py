"""Permutations in one-line notation (1-based tuples) and their reduced words."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterable, List, Sequence, Tuple

Perm = Tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def length(w: Perm) -> int:
    n = len(w)
    return sum(1 for i in range(n) for j in range(i + 1, n) if w[i] > w[j])


def compose(u: Perm, v: Perm) -> Perm:
    """(u o v)(k) = u(v(k))."""
    return tuple(u[v[k] - 1] for k in range(len(v)))


def inverse(w: Perm) -> Perm:
    out = [0] * len(w)
    for k, v in enumerate(w):
        out[v - 1] = k + 1
    return tuple(out)


def left_mul(t: int, w: Perm) -> Perm:
    """s_t o w: swap the values t and t+1."""
    return tuple(t + 1 if v == t else t if v == t + 1 else v for v in w)


def right_mul(w: Perm, t: int) -> Perm:
    """w o s_t: swap positions t and t+1."""
    l = list(w)
    l[t - 1], l[t] = l[t], l[t - 1]
    return tuple(l)


def lengthens_left(t: int, w: Perm) -> bool:
    """l(s_t w) > l(w), i.e. t occurs before t+1 in w."""
    return w.index(t) < w.index(t + 1)


def from_word(word: Iterable[int], n: int) -> Perm:
    """s_{i_1} o ... o s_{i_r}."""
    w = identity(n)
    for t in reversed(tuple(word)):
        w = left_mul(t, w)
    return w


@lru_cache(maxsize=None)
def reduced_word(w: Perm) -> Tuple[int, ...]:
    """Lexicographically smallest reduced word (greedy smallest left descent)."""
    word: List[int] = []
    while True:
        for t in range(1, len(w)):
            if not lengthens_left(t, w):
                word.append(t)
                w = left_mul(t, w)
                break
        else:
            return tuple(word)


@lru_cache(maxsize=None)
def all_perms(n: int) -> Tuple[Perm, ...]:
    return tuple(sorted(permutations(range(1, n + 1)), key=lambda w: (length(w), w)))


def longest(n: int) -> Perm:
    return tuple(range(n, 0, -1))


def act_on_sequence(w: Perm, seq: Sequence) -> tuple:
    """Strand at bottom position k ends at top position w(k)."""
    out = [None] * len(seq)
    for k, c in enumerate(seq):
        out[w[k] - 1] = c
    return tuple(out)


def is_reduced(word: Sequence[int], n: int) -> bool:
    return length(from_word(word, n)) == len(word)
