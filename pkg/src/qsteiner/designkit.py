"""Designs from orbit solutions: expansion, Steiner verification and
difference families."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from pathlib import Path

import numpy as np

from .ffield import FieldTable
from .orbits import GroupSpec, act_array, canonical_forms
from .subspace import block_bases, format_exps, gauss_binom, parse_exps, t_subspace_exps


class NotCoprime(ValueError):
    pass


class WrongCharacteristic(ValueError):
    pass


class DesignRejected(ValueError):
    pass


@dataclass(eq=False)
class Design:
    """A set of k-subspaces (rows of sorted exponents) of GF(q)^n."""

    q: int
    t: int
    k: int
    n: int
    blocks: np.ndarray
    reps: np.ndarray | None = None  # orbit representatives it was expanded from
    group: GroupSpec | None = None

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def expected_size(self) -> int:
        return gauss_binom(self.n, self.t, self.q) // gauss_binom(self.k, self.t, self.q)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.q} {self.t} {self.k} {self.n} {len(self)}\n")
            chunk = 1 << 16
            for s in range(0, len(self), chunk):
                fh.write("".join(format_exps(row) + "\n" for row in self.blocks[s : s + chunk].tolist()))

    @classmethod
    def read(cls, path) -> "Design":
        head, _, body = Path(path).read_text().partition("\n")
        q, t, k, n, count = map(int, head.split())
        m = q**k - 1
        flat = np.array(body.replace("{", " ").replace("}", " ").replace(",", " ").split(), dtype=np.int64)
        if len(flat) != count * m:
            raise ValueError(f"{path}: expected {count} blocks of {m} exponents")
        return cls(q, t, k, n, flat.reshape(count, m))


@dataclass
class RepsFile:
    """Orbit representatives of a design together with its parameters."""

    q: int
    t: int
    k: int
    n: int
    group: str
    reps: np.ndarray

    def write(self, path, comments=()) -> None:
        with open(path, "w") as fh:
            for c in comments:
                fh.write(f"# {c}\n")
            fh.write("# q t k n group\n")
            fh.write(f"{self.q} {self.t} {self.k} {self.n} {self.group}\n")
            for row in np.asarray(self.reps).tolist():
                fh.write(format_exps(row) + "\n")

    @classmethod
    def read(cls, path) -> "RepsFile":
        lines = [l.strip() for l in Path(path).read_text().splitlines()]
        lines = [l for l in lines if l and not l.startswith("#")]
        if not lines:
            raise ValueError(f"{path}: empty representatives file")
        q, t, k, n, group = lines[0].split()
        reps = [parse_exps(l) for l in lines[1:]]
        width = int(q) ** int(k) - 1
        if any(len(r) != width for r in reps):
            raise ValueError(f"{path}: every representative needs {width} exponents")
        arr = np.array(reps, dtype=np.int64).reshape(len(reps), width)
        return cls(int(q), int(t), int(k), int(n), group, arr)


def expand(reps, group: GroupSpec, t: int, k: int | None = None) -> Design:
    """Union of the full orbits of the given representatives."""
    field = group.field
    reps = np.asarray([tuple(r) for r in reps], dtype=np.int64).reshape(len(reps), -1)
    if k is None:
        k = round(np.log(reps.shape[1] + 1) / np.log(field.q))
    js = range(field.n) if group.kind in ("galois", "normalizer") else [0]
    shifts = np.arange(field.M, dtype=np.int64) if group.kind in ("singer", "normalizer") else np.zeros(1, np.int64)
    parts = []
    for rep in reps:
        for j in js:
            base = act_array(field, rep, (j, 0))
            imgs = (base[None, :] + shifts[:, None]) % field.M
            imgs.sort(axis=1)
            parts.append(imgs)
    blocks = np.concatenate(parts) if parts else np.zeros((0, reps.shape[1]), np.int64)
    if group.kind != "identity":
        blocks = np.unique(blocks, axis=0)
    return Design(field.q, t, k, field.n, blocks, reps, group)


def _pack(rows: np.ndarray, M: int) -> np.ndarray | None:
    """Injective int64 key per row when the row fits in 63 bits."""
    bits = max(1, int(M).bit_length())
    if rows.shape[1] * bits > 63:
        return None
    key = np.zeros(len(rows), dtype=np.int64)
    for col in range(rows.shape[1]):
        key = (key << bits) | rows[:, col]
    return key


@dataclass
class SteinerReport:
    accepted: bool
    histogram: dict  # {0: uncovered, 1: covered once, ">=2": covered more}
    t_subspaces: int
    blocks: int
    invalid_blocks: int = 0


def verify_steiner(design: Design, field: FieldTable, chunk: int = 1 << 18) -> SteinerReport:
    """Count how often each t-subspace lies in a block.

    Works from the raw block list with field arithmetic only; nothing is
    canonicalized, so it checks the orbit pipeline end to end.
    """
    if (field.q, field.n) != (design.q, design.n):
        raise ValueError("design and field parameters differ")
    t, k = design.t, design.k
    total = gauss_binom(design.n, t, design.q)
    invalid = 0
    keys = []
    for s in range(0, len(design), chunk):
        blocks = np.asarray(design.blocks[s : s + chunk], dtype=np.int64)
        bases, valid = block_bases(field, blocks, k)
        invalid += int((~valid).sum())
        subs = t_subspace_exps(field, bases[valid], t)
        keys.append(subs.reshape(-1, subs.shape[-1]))
    rows = np.concatenate(keys) if keys else np.zeros((0, design.q**t - 1), np.int64)
    packed = _pack(rows, field.M)
    if packed is not None:
        _, counts = np.unique(packed, return_counts=True)
    else:
        _, counts = np.unique(rows, axis=0, return_counts=True)
    once = int((counts == 1).sum())
    many = int((counts >= 2).sum())
    hist = {0: total - len(counts), 1: once, ">=2": many}
    accepted = invalid == 0 and hist[0] == 0 and many == 0
    return SteinerReport(accepted, hist, total, len(design), invalid)


def verify_orbit_union(reps, group: GroupSpec, t: int, k: int) -> SteinerReport:
    """Steiner check for t = k done on orbits rather than blocks.

    A union of orbits covers every k-subspace exactly once iff the reps are
    pairwise inequivalent and their orbit lengths add up to the number of
    k-subspaces. Useful when the expanded design would not fit in memory.
    """
    if t != k:
        raise ValueError("orbit-level verification needs t = k")
    field = group.field
    reps = np.asarray(reps, dtype=np.int64).reshape(len(reps), -1)
    total = gauss_binom(field.n, k, field.q)
    _, valid = block_bases(field, reps, k)
    canon, stab = canonical_forms(field, group.kind, reps[valid])
    _, first, counts = np.unique(canon, axis=0, return_index=True, return_counts=True)
    lengths = group.order // stab[first].astype(np.int64)
    covered = int(lengths.sum())
    many = int(lengths[counts > 1].sum())
    hist = {0: total - covered, 1: covered - many, ">=2": many}
    accepted = bool(valid.all()) and hist[0] == 0 and many == 0
    return SteinerReport(accepted, hist, total, int((group.order // stab).sum()), int((~valid).sum()))


@dataclass
class DifferenceFamily:
    v: int
    blocks: list[tuple[int, ...]]
    lam: int = 1

    @property
    def k(self) -> int:
        return len(self.blocks[0]) if self.blocks else 0

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.v} {self.k} {self.lam}\n")
            for b in self.blocks:
                fh.write(",".join(map(str, b)) + "\n")

    @classmethod
    def read(cls, path) -> "DifferenceFamily":
        lines = [l for l in Path(path).read_text().splitlines() if l.strip()]
        v, _, lam = map(int, lines[0].split())
        return cls(v, [tuple(int(x) for x in l.split(",")) for l in lines[1:]], lam)


@dataclass
class DFReport:
    accepted: bool
    differences: int
    uncovered: int  # nonzero residues hit fewer than lam times
    overcovered: int  # nonzero residues hit more than lam times


def verify_df(df: DifferenceFamily) -> DFReport:
    """Check that within-block differences hit each nonzero residue lam times."""
    sizes = [len(b) for b in df.blocks]
    ndiff = sum(m * (m - 1) for m in sizes)
    counts = np.zeros(max(df.v, 1), dtype=np.int64)
    for b in df.blocks:
        a = np.asarray(b, dtype=np.int64)
        d = (a[:, None] - a[None, :]) % df.v
        d = d[~np.eye(len(a), dtype=bool)]
        np.add.at(counts, d, 1)
    nonzero = counts[1:]
    under = int((nonzero < df.lam).sum())
    over = int((nonzero > df.lam).sum()) + int(counts[0] > 0)
    consistent = ndiff == df.lam * (df.v - 1)
    return DFReport(consistent and under == 0 and over == 0, ndiff, under, over)


def extract_df(design: Design, field: FieldTable, group: GroupSpec | None = None,
               experimental: bool = False) -> DifferenceFamily:
    """One block per Singer orbit of the design, read as a subset of Z_v.

    For a design built from normalizer representatives the Galois images
    ``q^i * X`` of each representative are adjoined (skipping any that are
    Singer-equivalent to an earlier block). Other designs are reduced to
    Singer orbit representatives directly from the blocks.

    For q = 2 the family lives in Z_(2^n - 1). For odd q the blocks are
    reduced modulo (q^n - 1)/(q - 1); pass ``experimental=True`` for that.
    """
    q, k, n = design.q, design.k, design.n
    if gcd(k, n) != 1:
        raise NotCoprime(f"k={k} and n={n} are not coprime")
    if q != 2 and not experimental:
        raise WrongCharacteristic("difference families are only supported for q = 2")
    group = group or design.group
    M = field.M
    if design.reps is not None and group is not None and group.kind in ("normalizer", "singer"):
        js = range(n) if group.kind == "normalizer" else [0]
        cands = np.array([act_array(field, rep, (j, 0)) for rep in design.reps for j in js], dtype=np.int64)
    else:
        cands = np.asarray(design.blocks, dtype=np.int64)
    canon, _ = canonical_forms(field, "singer", cands)
    _, first = np.unique(canon, axis=0, return_index=True)
    chosen = cands[np.sort(first)]
    if q == 2:
        blocks = [tuple(row) for row in chosen.tolist()]
        return DifferenceFamily(M, blocks, 1)
    v = M // (q - 1)
    blocks = [tuple(sorted(set(row))) for row in (chosen % v).tolist()]
    return DifferenceFamily(v, blocks, 1)


def df_size(n: int, k: int) -> int:
    """Number of Singer orbits of an S_2[2,k,n] when gcd(k, n) = 1."""
    return (2 ** (n - 1) - 1) // ((2**k - 1) * (2 ** (k - 1) - 1))


def report_code_size(design: Design, report: SteinerReport) -> tuple[str, int]:
    """Size of the constant-dimension code formed by a verified design,
    labelled ``A_q(n, d, k)`` with subspace distance d = 2(k - t + 1)."""
    if not report.accepted:
        raise DesignRejected("design failed Steiner verification")
    d = 2 * (design.k - design.t + 1)
    return f"A_{design.q}({design.n},{d},{design.k})", len(design)
