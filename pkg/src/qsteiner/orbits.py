"""Orbits of subspaces under the Singer subgroup, Galois group and normalizer.

Every group here acts on exponents by an affine map ``x -> q^j * x + c
(mod M)``: the Singer subgroup uses ``j = 0``, the Galois group ``c = 0``
and the normalizer both, giving order ``n * M``. An ``identity`` group is
also available for degenerate tests.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .ffield import FieldTable
from .subspace import Subspace, all_arrays, format_exps, gauss_binom, parse_exps, through_arrays

log = logging.getLogger(__name__)

KINDS = ("identity", "singer", "galois", "normalizer")
INVARIANT_OF = {"galois": "F", "singer": "S", "normalizer": "N", "identity": "F"}

# bytes of candidate images materialized per canonicalization chunk
CHUNK_BYTES = 1 << 26


class BudgetExceeded(RuntimeError):
    pass


class OrbitMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GroupSpec:
    kind: str
    field: FieldTable

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}; expected one of {KINDS}")

    def __eq__(self, other):
        return (
            isinstance(other, GroupSpec)
            and self.kind == other.kind
            and self.field.poly == other.field.poly
        )

    def __hash__(self):
        return hash((self.kind, self.field.poly))

    @property
    def order(self) -> int:
        n, M = self.field.n, self.field.M
        return {"identity": 1, "singer": M, "galois": n, "normalizer": n * M}[self.kind]

    @property
    def transitive(self) -> bool:
        """Transitive on nonzero vectors."""
        return self.kind in ("singer", "normalizer")

    def elements(self):
        """Iterate group elements as ``(j, c)`` pairs."""
        n, M = self.field.n, self.field.M
        js = range(n) if self.kind in ("galois", "normalizer") else [0]
        cs = range(M) if self.kind in ("singer", "normalizer") else [0]
        for j in js:
            for c in cs:
                yield j, c

    def check(self, g: tuple[int, int]) -> None:
        j, c = g
        if not (0 <= j < self.field.n and 0 <= c < self.field.M):
            raise ValueError(f"group element {g} out of range")
        if (self.kind in ("singer", "identity") and j) or (self.kind in ("galois", "identity") and c):
            raise ValueError(f"{g} is not an element of the {self.kind} group")


def act_array(field: FieldTable, exps, g: tuple[int, int]) -> np.ndarray:
    """Apply ``x -> q^j x + c`` to every row and re-sort."""
    j, c = g
    out = (np.asarray(exps, dtype=np.int64) * pow(field.q, j, field.M) + c) % field.M
    out.sort(axis=-1)
    return out


def act(field: FieldTable, X: Subspace, g: tuple[int, int]) -> Subspace:
    return Subspace(act_array(field, X.exps, g).tolist(), X.k)


def _candidates(field: FieldTable, kind: str, exps: np.ndarray) -> np.ndarray:
    """Candidate images ``(N, C, m)`` whose lex-min is the orbit minimum.

    Groups containing the Singer shifts only need the images that move some
    element to 0, since the lex-min sorted set always starts with 0.
    """
    M, q, n = field.M, field.q, field.n
    N, m = exps.shape
    if kind == "identity":
        return exps[:, None, :].copy()
    if kind == "galois":
        mults = np.array([pow(q, j, M) for j in range(n)], dtype=np.int64)
        return (exps[:, None, :] * mults[None, :, None]) % M
    diffs = (exps[:, None, :] - exps[:, :, None]) % M  # (N, i, l): x_l - x_i
    if kind == "singer":
        return diffs
    mults = np.array([pow(q, j, M) for j in range(n)], dtype=np.int64)
    return ((diffs[:, None, :, :] * mults[None, :, None, None]) % M).reshape(N, n * m, m)


def _lexmin(cand: np.ndarray, sentinel: int) -> tuple[np.ndarray, np.ndarray]:
    N, C, m = cand.shape
    cand.sort(axis=-1)
    alive = np.ones((N, C), dtype=bool)
    for col in range(m):
        vals = np.where(alive, cand[:, :, col], sentinel)
        alive &= vals == vals.min(axis=1)[:, None]
    best = cand[np.arange(N), alive.argmax(axis=1)]
    return best, alive.sum(axis=1)


def canonical_forms(field: FieldTable, kind: str, exps) -> tuple[np.ndarray, np.ndarray]:
    """Lex-min image of each row over its orbit, plus its stabilizer order.

    Each candidate image corresponds to exactly one group element, and the
    elements hitting the minimum form a coset of the stabilizer, so the
    number of tied candidates is the stabilizer order.
    """
    exps = np.asarray(exps, dtype=np.int64)
    if exps.ndim == 1:
        exps = exps[None, :]
    N, m = exps.shape
    per_row = {"identity": 1, "singer": m, "galois": field.n, "normalizer": field.n * m}[kind] * m * 8
    step = max(1, CHUNK_BYTES // max(per_row, 1))
    canon = np.empty((N, m), dtype=np.int64)
    stab = np.empty(N, dtype=np.int64)
    for s in range(0, N, step):
        cand = _candidates(field, kind, exps[s : s + step])
        canon[s : s + step], stab[s : s + step] = _lexmin(cand, field.M)
    return canon, stab


def canonical_form(X: Subspace, group: GroupSpec) -> Subspace:
    canon, _ = canonical_forms(group.field, group.kind, [X.exps])
    return Subspace(canon[0].tolist(), X.k)


def stabilizer_order(X: Subspace, group: GroupSpec) -> int:
    return int(canonical_forms(group.field, group.kind, [X.exps])[1][0])


def stabilizer_scan(X: Subspace, group: GroupSpec) -> int:
    """Stabilizer order by applying every group element; slow reference."""
    field = group.field
    x = np.asarray(X.exps, dtype=np.int64)
    count = 0
    js = range(field.n) if group.kind in ("galois", "normalizer") else [0]
    for j in js:
        base = x * pow(field.q, j, field.M) % field.M
        if group.kind in ("singer", "normalizer"):
            imgs = (base[None, :] + np.arange(field.M)[:, None]) % field.M
        else:
            imgs = base[None, :]
        imgs.sort(axis=1)
        count += int(np.all(imgs == x[None, :], axis=1).sum())
    return count


# --- invariants


@lru_cache(maxsize=16)
def _rho_table(field: FieldTable) -> np.ndarray:
    x = np.arange(field.M, dtype=np.int64)
    out = x.copy()
    for j in range(1, field.n):
        out = np.minimum(out, x * pow(field.q, j, field.M) % field.M)
    out.setflags(write=False)
    return out


def rho(field: FieldTable, x) -> np.ndarray:
    """Minimal cyclotomic representative min_i(x q^i mod M)."""
    return _rho_table(field)[np.asarray(x, dtype=np.int64) % field.M]


def _differences(field: FieldTable, exps: np.ndarray) -> np.ndarray:
    m = exps.shape[-1]
    d = (exps[..., :, None] - exps[..., None, :]) % field.M
    off = ~np.eye(m, dtype=bool)
    return d[..., off]


def invariant_values(field: FieldTable, which: str, exps) -> np.ndarray:
    """Raw invariant multiset(s) as sorted arrays; ``which`` is F, S or N."""
    exps = np.asarray(exps, dtype=np.int64)
    if which == "F":
        vals = rho(field, exps)
    elif which == "S":
        vals = _differences(field, exps)
    elif which == "N":
        vals = rho(field, _differences(field, exps))
    else:
        raise ValueError(which)
    return np.sort(vals, axis=-1)


def inv_F(field: FieldTable, X: Subspace, multiset: bool = False):
    return _as_key(invariant_values(field, "F", X.exps), multiset)


def inv_S(field: FieldTable, X: Subspace, multiset: bool = False):
    return _as_key(invariant_values(field, "S", X.exps), multiset)


def inv_N(field: FieldTable, X: Subspace, multiset: bool = False):
    return _as_key(invariant_values(field, "N", X.exps), multiset)


def _as_key(vals: np.ndarray, multiset: bool):
    if multiset:
        return tuple(sorted(Counter(vals.tolist()).items()))
    return frozenset(vals.tolist())


# --- orbit tables


@dataclass(eq=False)
class OrbitTable:
    """Canonical representatives and lengths of all k-subspace orbits."""

    k: int
    group: GroupSpec
    reps: np.ndarray  # (R, m), lex-sorted canonical forms
    lengths: np.ndarray  # (R,)
    index: dict = dc_field(default_factory=dict)  # invariant multiset -> rep ids
    _pos: dict = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.reps = np.asarray(self.reps, dtype=np.int64).reshape(len(self.lengths), -1)
        self.lengths = np.asarray(self.lengths, dtype=np.int64)
        if not self._pos:
            self._pos = {tuple(r): i for i, r in enumerate(self.reps.tolist())}
        if not self.index:
            which = INVARIANT_OF[self.group.kind]
            vals = invariant_values(self.field, which, self.reps) if len(self.reps) else []
            for i, row in enumerate(vals):
                self.index.setdefault(row.tobytes(), []).append(i)

    @property
    def field(self) -> FieldTable:
        return self.group.field

    def __len__(self) -> int:
        return len(self.reps)

    def rep(self, i: int) -> Subspace:
        return Subspace(self.reps[i].tolist(), self.k)

    def find(self, X: Subspace) -> int:
        canon, _ = canonical_forms(self.field, self.group.kind, [X.exps])
        return self._pos[tuple(canon[0].tolist())]

    def find_many(self, exps) -> np.ndarray:
        """Orbit ids of the rows of an ``(N, m)`` exponent array."""
        canon, _ = canonical_forms(self.field, self.group.kind, exps)
        pos = self._pos
        return np.fromiter((pos[tuple(r)] for r in canon.tolist()), dtype=np.int64, count=len(canon))

    def candidates(self, X: Subspace) -> list[int]:
        """Rep ids sharing X's invariant key (a superset of X's orbit id)."""
        which = INVARIANT_OF[self.group.kind]
        return list(self.index.get(invariant_values(self.field, which, X.exps).tobytes(), []))

    def collisions(self) -> int:
        """Number of reps whose invariant key is shared with another rep."""
        return sum(len(v) for v in self.index.values() if len(v) > 1)

    def total(self) -> int:
        return int(self.lengths.sum())

    def full_length(self) -> bool:
        return bool(np.all(self.lengths == self.group.order))

    def write(self, path) -> None:
        f = self.field
        with open(path, "w") as fh:
            fh.write(f"{f.q} {f.n} {self.k} {self.group.kind} {self.group.order} {len(self)}\n")
            for length, row in zip(self.lengths.tolist(), self.reps.tolist()):
                fh.write(f"{length}\t{format_exps(row)}\n")

    @classmethod
    def read(cls, path, field: FieldTable) -> "OrbitTable":
        lines = Path(path).read_text().splitlines()
        q, n, k, kind, order, count = lines[0].split()
        if (int(q), int(n)) != (field.q, field.n):
            raise OrbitMismatch(f"table is for GF({q}^{n}), field is GF({field.q}^{field.n})")
        group = GroupSpec(kind, field)
        if int(order) != group.order:
            raise OrbitMismatch("group order in header does not match")
        lengths, reps = [], []
        for line in lines[1 : 1 + int(count)]:
            length, body = line.split("\t")
            lengths.append(int(length))
            reps.append(parse_exps(body))
        return cls(int(k), group, np.array(reps, dtype=np.int64).reshape(len(reps), -1), np.array(lengths))


def build_orbit_table(k: int, group: GroupSpec, budget: int = 50_000_000) -> OrbitTable:
    """Enumerate, canonicalize and deduplicate all k-subspaces.

    Groups transitive on nonzero vectors only need the subspaces through
    alpha^0, since every orbit meets them. Others fall back to a full scan.
    """
    field = group.field
    q, n = field.q, field.n
    if group.transitive:
        count = gauss_binom(n - 1, k - 1, q)
        source = through_arrays(field, k)
    else:
        count = gauss_binom(n, k, q)
        source = all_arrays(field, k)
    if count > budget:
        raise BudgetExceeded(f"{count} subspaces to enumerate exceeds budget {budget}")
    log.info("orbit table: k=%d %s over GF(%d^%d), %d subspaces", k, group.kind, q, n, count)

    canon_parts, stab_parts = [], []
    for arr in source:
        canon, stab = canonical_forms(field, group.kind, arr)
        canon, first = np.unique(canon, axis=0, return_index=True)
        canon_parts.append(canon)
        stab_parts.append(stab[first])
    canon = np.concatenate(canon_parts)
    stab = np.concatenate(stab_parts)
    canon, first = np.unique(canon, axis=0, return_index=True)
    stab = stab[first]
    order = np.lexsort(canon.T[::-1])
    canon, stab = canon[order], stab[order]
    lengths = group.order // stab
    table = OrbitTable(k, group, canon, lengths)
    expected = gauss_binom(n, k, q)
    if table.total() != expected:
        raise AssertionError(f"orbit lengths sum to {table.total()}, expected {expected}")
    return table


def parse_group(kind: str, field: FieldTable) -> GroupSpec:
    aliases = {"norm": "normalizer", "n": "normalizer", "s": "singer", "g": "galois"}
    return GroupSpec(aliases.get(kind.lower(), kind.lower()), field)
