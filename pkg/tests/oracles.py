"""Slow, independent reference implementations used by the tests.

Nothing here imports the package: field elements are plain coefficient
lists, subspaces are sets of integer vector codes, and exact covers are
counted by naive recursion.
"""

from __future__ import annotations

import itertools

import numpy as np


# --- polynomial arithmetic over GF(q)


def power_table(q: int, coeffs: list[int]) -> list[tuple[int, ...]]:
    """Coefficient vectors of x^0, x^1, ... x^(q^n - 2) modulo a monic
    polynomial given constant term first."""
    n = len(coeffs) - 1
    cur = [1] + [0] * (n - 1)
    out = []
    for _ in range(q**n - 1):
        out.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        # x^n = -(c_0 + c_1 x + ... + c_{n-1} x^{n-1})
        cur = [(cur[i] - top * coeffs[i]) % q for i in range(n)]
    return out


def codes(q: int, vecs) -> np.ndarray:
    arr = np.asarray(vecs, dtype=np.int64)
    return arr @ (q ** np.arange(arr.shape[1], dtype=np.int64))


def add_table_oracle(q: int, coeffs: list[int]) -> np.ndarray:
    """Full addition table on exponents 0..M-1 plus -1 for zero: entry
    ``[a+1, b+1]`` is log(alpha^a + alpha^b), computed digit by digit."""
    vecs = np.asarray(power_table(q, coeffs), dtype=np.int64)
    M, n = vecs.shape
    if len({tuple(v) for v in vecs.tolist()}) != M:
        raise ValueError("polynomial is not primitive")
    zero = np.zeros((1, n), dtype=np.int64)
    allv = np.vstack([zero, vecs])  # index e+1 holds alpha^e, index 0 holds 0
    powers = q ** np.arange(n, dtype=np.int64)
    log = np.full(q**n, -2, dtype=np.int64)
    log[allv @ powers] = np.arange(-1, M)
    sums = (allv[:, None, :] + allv[None, :, :]) % q
    return log[sums @ powers]


# --- subspaces as sets of codes


def vector_tables(q: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Addition and scalar tables on codes 0..q^n-1."""
    size = q**n
    digits = (np.arange(size)[:, None] // q ** np.arange(n)) % q
    powers = q ** np.arange(n)
    add = ((digits[:, None, :] + digits[None, :, :]) % q) @ powers
    scal = ((np.arange(q)[:, None, None] * digits[None, :, :]) % q) @ powers
    return add.astype(np.int32), scal.astype(np.int32)


def count_subspaces_closure(q: int, n: int, kmax: int) -> list[int]:
    """Number of k-subspaces for k = 0..kmax by repeatedly adjoining a vector
    to every known subspace and deduplicating the resulting sets."""
    add, scal = vector_tables(q, n)
    size = q**n
    level = np.zeros((1, 1), dtype=np.int32)  # {0}
    counts = [1]
    v = np.arange(size, dtype=np.int32)
    for _ in range(kmax):
        found = []
        chunk = max(1, 2_000_000 // (size * level.shape[1]))
        for s in range(0, len(level), chunk):
            S = level[s : s + chunk]  # (B, |S|)
            # adjoin only coset leaders: v minimal in v + S, and v outside S
            coset = add[S[:, :, None], v[None, None, :]]
            lead = (coset.min(axis=1) == v[None, :]) & (v[None, :] != 0)
            b, w = np.nonzero(lead)
            W = np.concatenate([add[S[b], scal[c][w][:, None]] for c in range(q)], axis=1)
            W.sort(axis=1)
            found.append(np.unique(W, axis=0))
        level = np.unique(np.concatenate(found), axis=0)
        counts.append(len(level))
    return counts


def gauss_formula(n: int, k: int, q: int) -> int:
    """Textbook product formula, kept here so tests need not trust the package."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def span_codes(q: int, n: int, gens) -> frozenset[int]:
    """All F_q-combinations of the generator codes, zero excluded."""
    powers = q ** np.arange(n)
    g = (np.asarray(list(gens))[:, None] // powers) % q
    coeffs = np.array(list(itertools.product(range(q), repeat=len(g))), dtype=np.int64)
    vecs = (coeffs @ g) % q
    return frozenset(set((vecs @ powers).tolist()) - {0})


# --- exact cover


def count_exact_covers(n_items: int, options: dict[int, tuple[int, ...]]) -> int:
    """Naive backtracking: branch on the lowest uncovered item."""
    opts = [frozenset(rows) for rows in options.values()]
    by_item = [[o for o in opts if i in o] for i in range(n_items)]

    def rec(covered: frozenset) -> int:
        if len(covered) == n_items:
            return 1
        item = next(i for i in range(n_items) if i not in covered)
        return sum(rec(covered | o) for o in by_item[item] if not (o & covered))

    return rec(frozenset())


def is_difference_family(v: int, blocks, lam: int = 1) -> bool:
    counts = [0] * v
    for b in blocks:
        for x in b:
            for y in b:
                if x != y:
                    counts[(x - y) % v] += 1
    return counts[0] == 0 and all(c == lam for c in counts[1:])
