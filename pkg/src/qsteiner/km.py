"""Kramer-Mesner matrices between t-subspace orbits and k-subspace orbits."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .orbits import OrbitMismatch, OrbitTable
from .subspace import block_bases, gauss_binom, t_subspace_exps


@dataclass(eq=False)
class KMMatrix:
    """Sparse orbit incidence matrix.

    ``entries(i, j)`` counts the t-subspaces of the representative of k-orbit
    j lying in t-orbit i. Triplets are sorted by ``(col, row)``.
    """

    t: int
    k: int
    shape: tuple[int, int]
    row: np.ndarray
    col: np.ndarray
    val: np.ndarray
    row_lengths: np.ndarray | None = None
    col_lengths: np.ndarray | None = None

    def dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        out[self.row, self.col] = self.val
        return out

    def column_sums(self) -> np.ndarray:
        return np.bincount(self.col, weights=self.val, minlength=self.shape[1]).astype(np.int64)

    def column(self, j: int) -> dict[int, int]:
        lo, hi = np.searchsorted(self.col, [j, j + 1])
        return dict(zip(self.row[lo:hi].tolist(), self.val[lo:hi].tolist()))

    def incidence(self) -> np.ndarray:
        """Classical Kramer-Mesner counts: k-subspaces of orbit j through a
        fixed t-subspace of orbit i, i.e. ``entries * len_j / len_i``.

        This is what a design equation needs; it equals ``val`` whenever all
        orbits have the same length.
        """
        if self.row_lengths is None or self.col_lengths is None:
            return self.val.copy()
        num = self.val * self.col_lengths[self.col]
        den = self.row_lengths[self.row]
        if np.any(num % den):
            raise ArithmeticError("orbit lengths are inconsistent with the matrix entries")
        return num // den

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.t} {self.k} {self.shape[0]} {self.shape[1]}\n")
            for r, c, v in zip(self.row.tolist(), self.col.tolist(), self.val.tolist()):
                fh.write(f"{r} {c} {v}\n")

    @classmethod
    def read(cls, path) -> "KMMatrix":
        lines = Path(path).read_text().split("\n", 1)
        t, k, rows, cols = map(int, lines[0].split())
        body = np.array(lines[1].split(), dtype=np.int64).reshape(-1, 3) if len(lines) > 1 else np.zeros((0, 3), np.int64)
        order = np.lexsort((body[:, 0], body[:, 1]))
        body = body[order]
        return cls(t, k, (rows, cols), body[:, 0], body[:, 1], body[:, 2])


def build_km(t_orbits: OrbitTable, k_orbits: OrbitTable) -> KMMatrix:
    """Count, for every k-orbit representative, its t-subspaces per t-orbit."""
    if t_orbits.group != k_orbits.group:
        raise OrbitMismatch("orbit tables were built for different groups or fields")
    t, k = t_orbits.k, k_orbits.k
    if t > k:
        raise ValueError(f"t={t} exceeds k={k}")
    field = k_orbits.field
    R, C = len(t_orbits), len(k_orbits)
    bases, valid = block_bases(field, k_orbits.reps, k)
    if not valid.all():
        raise ValueError("k-orbit table contains a non-subspace representative")
    subs = t_subspace_exps(field, bases, t)  # (C, [k,t], m_t)
    per = subs.shape[1]
    rows = t_orbits.find_many(subs.reshape(C * per, -1))
    cols = np.repeat(np.arange(C, dtype=np.int64), per)
    keys, counts = np.unique(cols * R + rows, return_counts=True)  # sorted by (col, row)
    km = KMMatrix(t, k, (R, C), keys % R, keys // R, counts.astype(np.int64),
                  t_orbits.lengths, k_orbits.lengths)
    assert np.all(km.column_sums() == gauss_binom(k, t, field.q))
    return km
