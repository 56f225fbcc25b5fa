"""Subspaces of GF(q)^n stored as sorted exponent sets.

A k-subspace X is identified with the sorted tuple of exponents of its
q^k - 1 nonzero vectors; the zero vector is implicit. Bulk routines work
on ``(N, q^k - 1)`` integer arrays holding one sorted exponent set per row.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .ffield import ZERO, FieldTable


def gauss_binom(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def dim_from_size(size: int, q: int) -> int:
    k, total = 0, 1
    while total < size + 1:
        total *= q
        k += 1
    if total != size + 1:
        raise ValueError(f"{size} nonzero vectors is not q^k - 1 for q={q}")
    return k


@dataclass(frozen=True, order=True, init=False)
class Subspace:
    """Immutable k-subspace; equality and hashing use the exponent set."""

    exps: tuple[int, ...]
    k: int

    def __init__(self, exps: Iterable[int], k: int):
        object.__setattr__(self, "exps", tuple(sorted(int(e) for e in exps)))
        object.__setattr__(self, "k", k)

    def __len__(self) -> int:
        return len(self.exps)

    def __iter__(self):
        return iter(self.exps)

    def __contains__(self, e) -> bool:
        return e in set(self.exps)

    def __str__(self) -> str:
        return format_exps(self.exps)

    @classmethod
    def parse(cls, text: str, q: int) -> "Subspace":
        exps = parse_exps(text)
        return cls(exps, dim_from_size(len(exps), q))

    def array(self) -> np.ndarray:
        return np.asarray(self.exps, dtype=np.int64)


def format_exps(exps) -> str:
    return "{" + ",".join(str(int(e)) for e in exps) + "}"


def parse_exps(text: str) -> list[int]:
    body = text.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"expected a braced exponent set, got {text!r}")
    return [int(v) for v in re.split(r"[,\s]+", body[1:-1].strip()) if v]


def as_array(subspaces) -> np.ndarray:
    """Stack Subspace values (or exponent sequences) into an ``(N, m)`` array."""
    return np.array([tuple(s) for s in subspaces], dtype=np.int64).reshape(len(subspaces), -1)


# --- linear algebra on codes


def nonzero_combos(q: int, r: int) -> np.ndarray:
    """All q^r - 1 nonzero coefficient vectors of length r, shape (q^r-1, r)."""
    if r == 0:
        return np.zeros((0, 0), dtype=np.int64)
    grid = np.array(list(itertools.product(range(q), repeat=r)), dtype=np.int64)
    return grid[1:, ::-1]


def lincomb(field: FieldTable, basis, coeffs) -> np.ndarray:
    """Codes of ``coeffs @ basis`` for every row of ``basis``.

    basis: (..., r) codes; coeffs: (C, r) scalars. Returns (..., C) codes.
    """
    basis = np.asarray(basis, dtype=np.int64)
    coeffs = np.asarray(coeffs, dtype=np.int64) % field.q
    if field.q == 2:
        out = np.zeros(basis.shape[:-1] + (len(coeffs),), dtype=np.int64)
        for l in range(coeffs.shape[1]):
            out ^= np.where(coeffs[:, l].astype(bool), basis[..., l, None], 0)
        return out
    digits = field.digits(basis)  # (..., r, n)
    combo = np.einsum("cr,...rd->...cd", coeffs, digits)
    return field.from_digits(combo)


def scale_code(field: FieldTable, code, c: int):
    if field.q == 2:
        return np.asarray(code, dtype=np.int64) * (c % 2)
    return field.from_digits(field.digits(code) * c)


def rref_codes(d: int, r: int, q: int, chunk: int = 1 << 20) -> Iterator[np.ndarray]:
    """Yield row-code arrays ``(N, r)`` of every r x d reduced row echelon
    matrix of rank r over GF(q); each r-subspace of GF(q)^d appears once.

    Row i has its pivot at the lowest coordinate it touches; the entries at
    other rows' pivot columns are zero.
    """
    if r == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    for pivots in itertools.combinations(range(d), r):
        pivset = set(pivots)
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, d) if j not in pivset]
        base = np.array([q**p for p in pivots], dtype=np.int64)
        total = q ** len(free)
        rows = np.array([i for i, _ in free], dtype=np.int64)
        weights = np.array([q**j for _, j in free], dtype=np.int64)
        place = q ** np.arange(len(free), dtype=np.int64)
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            vals = (idx[:, None] // place) % q  # (N, f)
            codes = np.tile(base, (len(idx), 1))
            for f in range(len(free)):
                codes[:, rows[f]] += vals[:, f] * weights[f]
            yield codes


def span_exps(field: FieldTable, basis_codes) -> np.ndarray:
    """Sorted exponent sets of the spans of independent bases ``(N, r)``."""
    basis_codes = np.asarray(basis_codes, dtype=np.int64)
    codes = lincomb(field, basis_codes, nonzero_combos(field.q, basis_codes.shape[-1]))
    exps = field.to_exps(codes)
    exps.sort(axis=-1)
    return exps


def span(field: FieldTable, generators: Iterable[int]) -> Subspace:
    """Subspace spanned by nonzero field elements given as exponents."""
    codes = {0}
    for g in generators:
        if g == ZERO:
            continue
        v = int(field.antilog[g % field.M])
        if v in codes:
            continue
        multiples = [int(scale_code(field, v, c)) for c in range(field.q)]
        pool = np.array(sorted(codes), dtype=np.int64)
        new = field.add_codes(pool[:, None], np.array(multiples)[None, :])
        codes = set(int(c) for c in new.ravel())
    codes.discard(0)
    exps = field.to_exps(np.array(sorted(codes), dtype=np.int64))
    return Subspace(exps.tolist(), dim_from_size(len(codes), field.q))


def basis(field: FieldTable, X: Subspace) -> list[int]:
    """A basis of X as exponents, greedily chosen in exponent order."""
    out: list[int] = []
    cur = span(field, [])
    for e in X.exps:
        if e not in cur:
            out.append(e)
            cur = span(field, out)
            if cur.k == X.k:
                break
    return out


def block_bases(field: FieldTable, exps, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized greedy basis extraction for rows of an ``(N, m)`` array.

    Returns ``(bases, valid)``: bases are codes ``(N, k)``; ``valid[i]`` is
    False when row i is not the nonzero part of a k-subspace.
    """
    exps = np.asarray(exps, dtype=np.int64)
    N, m = exps.shape
    codes = field.to_codes(exps)
    valid = (m == field.q**k - 1) & np.all(exps >= 0, axis=1)
    if m > 1:
        valid &= np.all(np.diff(np.sort(exps, axis=1), axis=1) > 0, axis=1)
    spans = np.zeros((N, 1), dtype=np.int64)
    bases = np.zeros((N, k), dtype=np.int64)
    rows = np.arange(N)
    for step in range(k):
        inside = (codes[:, :, None] == spans[:, None, :]).any(axis=2)
        outside = ~inside
        valid &= outside.any(axis=1)
        v = codes[rows, outside.argmax(axis=1)]
        bases[:, step] = v
        multiples = np.stack([scale_code(field, v, c) for c in range(field.q)], axis=1)
        spans = field.add_codes(spans[:, :, None], multiples[:, None, :]).reshape(N, -1)
    inside = (codes[:, :, None] == spans[:, None, :]).any(axis=2)
    valid &= inside.all(axis=1)
    return bases, valid


def subspace_coefficients(k: int, t: int, q: int) -> np.ndarray:
    """Coefficient vectors of every t-subspace of GF(q)^k: ``(T, q^t-1, k)``."""
    mats = np.concatenate(list(rref_codes(k, t, q)))  # (T, t) codes over GF(q)^k
    digits = (mats[..., None] // q ** np.arange(k)) % q  # (T, t, k)
    combos = nonzero_combos(q, t)  # (m_t, t)
    return np.einsum("ct,Ttk->Tck", combos, digits) % q


def t_subspace_exps(field: FieldTable, bases, t: int) -> np.ndarray:
    """All t-subspaces of each spanned subspace: ``(N, [k,t]_q, q^t-1)`` sorted."""
    bases = np.asarray(bases, dtype=np.int64)
    N, k = bases.shape
    coeffs = subspace_coefficients(k, t, field.q)  # (T, m_t, k)
    T, mt, _ = coeffs.shape
    codes = lincomb(field, bases, coeffs.reshape(T * mt, k))
    exps = field.to_exps(codes).reshape(N, T, mt)
    exps.sort(axis=-1)
    return exps


def t_subspaces(field: FieldTable, X: Subspace, t: int) -> list[Subspace]:
    """Every t-dimensional subspace of X."""
    if not 1 <= t <= X.k:
        raise ValueError(f"need 1 <= t <= {X.k}, got {t}")
    b = np.array([field.antilog[basis(field, X)]], dtype=np.int64)
    return [Subspace(row, t) for row in t_subspace_exps(field, b, t)[0].tolist()]


def through_arrays(field: FieldTable, k: int, v: int = 0,
                   chunk: int = 1 << 19) -> Iterator[np.ndarray]:
    """Yield ``(N, q^k-1)`` chunks listing every k-subspace through alpha^v once.

    Subspaces through 1 = alpha^0 are <1> + W with W a (k-1)-subspace
    of the coordinates 1..n-1; multiplying by alpha^v moves them to alpha^v.
    """
    if v == ZERO:
        raise ValueError("v must be nonzero")
    q = field.q
    for rows in rref_codes(field.n - 1, k - 1, q, chunk=chunk):
        bases = np.concatenate([np.ones((len(rows), 1), dtype=np.int64), rows * q], axis=1)
        exps = span_exps(field, bases)
        if v % field.M:
            exps = (exps + v) % field.M
            exps.sort(axis=1)
        yield exps


def enumerate_through(field: FieldTable, v: int, k: int) -> Iterator[Subspace]:
    """Stream every k-subspace containing alpha^v exactly once."""
    for arr in through_arrays(field, k, v):
        for row in arr.tolist():
            yield Subspace(row, k)


def all_arrays(field: FieldTable, k: int, chunk: int = 1 << 19) -> Iterator[np.ndarray]:
    """Yield chunks listing every k-subspace of GF(q)^n once."""
    for rows in rref_codes(field.n, k, field.q, chunk=chunk):
        yield span_exps(field, rows)


def all_subspaces(field: FieldTable, k: int) -> Iterator[Subspace]:
    for arr in all_arrays(field, k):
        for row in arr.tolist():
            yield Subspace(row, k)
