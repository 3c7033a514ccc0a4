"""Regular two-level fractional factorial designs.

A ``2^(d-p)`` design with ``n = 2^k`` runs is described by ``d`` column masks
over the ``k`` basic factors: bit ``j`` of a mask says the column multiplies
basic factor ``j``. Words of the defining relation are subsets of columns
whose masks XOR to zero, so word-length counts reduce to counting subsets by
XOR value.

Generator columns are chosen to keep short words rare: the counts of words of
length 3 to 6 are compared lexicographically (a truncated aberration
criterion). A greedy pass that prefers odd-weight masks (no words of length
3 while ``d <= n/2``) is polished by swap-based local search from a few
deterministic restarts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

_MAX_TRACKED = 6


@dataclass(frozen=True)
class FactorialInfo:
    runs: int
    factors: int
    masks: tuple[int, ...]
    word_counts: tuple[int, int, int, int]  # A3, A4, A5, A6
    resolution: int
    label: str


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _subset_xor_counts(masks, k: int) -> np.ndarray:
    """``counts[j, v]`` = number of ``j``-subsets of ``masks`` with XOR ``v`` (``j <= 6``)."""
    size = 1 << k
    counts = np.zeros((_MAX_TRACKED + 1, size), dtype=np.int64)
    counts[0, 0] = 1
    idx = np.arange(size)
    for c in masks:
        shifted = counts[:-1, idx ^ c]
        counts[1:] += shifted
    return counts


def _resolution(word_counts, p: int) -> int:
    for length, count in zip((3, 4, 5, 6), word_counts):
        if count:
            return length
    return 7 if p else 0  # 0 marks a full factorial (no defining words)


def _remove(counts: np.ndarray, c: int, idx: np.ndarray) -> np.ndarray:
    """Subset-XOR counts after dropping column ``c`` (inverse of adding it)."""
    out = counts.copy()
    for j in range(1, _MAX_TRACKED + 1):
        out[j] = counts[j] - out[j - 1][idx ^ c]
    return out


def _pattern(counts: np.ndarray) -> tuple[int, ...]:
    return tuple(int(counts[j, 0]) for j in range(3, _MAX_TRACKED + 1))


def _greedy_masks(d: int, k: int, order=None) -> list[int]:
    size = 1 << k
    chosen = [1 << j for j in range(k)]
    counts = _subset_xor_counts(chosen, k)
    remaining = [m for m in range(1, size) if _popcount(m) >= 2]
    rank = {m: (_popcount(m), m) for m in remaining} if order is None else order
    idx = np.arange(size)
    while len(chosen) < d:
        # odd-weight columns first; even ones only once those are used up
        pool = [m for m in remaining if _popcount(m) % 2 == 1] or remaining
        best = min(pool, key=lambda m: (counts[2, m], counts[3, m], counts[4, m], counts[5, m], rank[m]))
        counts[1:] += counts[:-1, idx ^ best]
        chosen.append(best)
        remaining.remove(best)
    return chosen


def _local_search(chosen: list[int], k: int) -> list[int]:
    """Swap added columns for unused masks while the word-length pattern improves."""
    size = 1 << k
    idx = np.arange(size)
    counts = _subset_xor_counts(chosen, k)
    current = _pattern(counts)
    improved = True
    while improved:
        improved = False
        for pos in range(k, len(chosen)):
            c = chosen[pos]
            without = _remove(counts, c, idx)
            used = np.zeros(size, dtype=bool)
            used[chosen] = True
            used[0] = True
            # word counts after inserting each candidate m: A_j = W_j[0] + W_{j-1}[m]
            cand = np.flatnonzero(~used)
            if cand.size == 0:  # saturated design: nothing to swap in
                break
            scores = np.stack([without[j, 0] + without[j - 1, cand]
                               for j in range(3, _MAX_TRACKED + 1)], axis=1)
            order = np.lexsort(scores.T[::-1])
            best = cand[order[0]]
            if tuple(int(v) for v in scores[order[0]]) < current:
                chosen[pos] = int(best)
                counts = without
                counts[1:] += counts[:-1, idx ^ int(best)]
                current = _pattern(counts)
                improved = True
    return chosen


def _search_masks(d: int, k: int, restarts: int = 6) -> tuple[int, ...]:
    best = _local_search(_greedy_masks(d, k), k)
    best_pattern = _pattern(_subset_xor_counts(best, k))
    rng = np.random.default_rng([d, k])
    masks = [m for m in range(1, 1 << k) if _popcount(m) >= 2]
    for _ in range(restarts):
        keys = rng.permutation(len(masks))
        order = {m: int(r) for m, r in zip(masks, keys)}
        trial = _local_search(_greedy_masks(d, k, order), k)
        pattern = _pattern(_subset_xor_counts(trial, k))
        if pattern < best_pattern:
            best, best_pattern = trial, pattern
    return tuple(best)


@lru_cache(maxsize=None)
def factorial_plan(d: int, n: int) -> FactorialInfo:
    """Column masks and word-length summary for a ``d``-factor design in ``n`` runs."""
    if n < 2 or n & (n - 1):
        raise ValueError(f"run count must be a power of two >= 2, got {n}")
    k = n.bit_length() - 1
    if k > d:
        raise ValueError(f"{n} runs exceed the 2^{d} vertices of a {d}-cube")
    if d > n - 1:
        raise ValueError(f"a regular design in {n} runs has at most {n - 1} factors, got {d}")
    masks = _search_masks(d, k) if d > k else tuple(1 << j for j in range(k))
    words = _pattern(_subset_xor_counts(masks, k))
    res = _resolution(words, d - k)
    label = "full factorial" if d == k else f"resolution {_roman(res)} searched generators"
    return FactorialInfo(n, d, masks, words, res, label)


def _roman(r: int) -> str:
    return {3: "III", 4: "IV", 5: "V", 6: "VI", 7: "VII+"}.get(r, str(r))


def two_level_design(d: int, n: int) -> tuple[np.ndarray, FactorialInfo]:
    """``n x d`` matrix of +-1 levels in standard run order (first run all -1)."""
    info = factorial_plan(d, n)
    runs = np.arange(n)
    cols = []
    for m in info.masks:
        parity = np.zeros(n, dtype=np.int64)
        bits = runs & m
        while np.any(bits):
            parity ^= bits & 1
            bits >>= 1
        cols.append(2 * parity - 1)
    return np.stack(cols, axis=1).astype(float), info


def brute_word_counts(levels: np.ndarray, max_len: int = 5) -> dict[int, int]:
    """Count defining words directly from a +-1 design matrix (small designs only).

    A set of columns is a word when their elementwise product is constant.
    """
    d = levels.shape[1]
    out = {}
    for length in range(3, max_len + 1):
        count = 0
        for combo in itertools.combinations(range(d), length):
            prod = np.prod(levels[:, combo], axis=1)
            if np.all(prod == prod[0]):
                count += 1
        out[length] = count
    return out
