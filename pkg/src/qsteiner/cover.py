"""Exact cover over Kramer-Mesner systems with right-hand side all ones.

The solver is Knuth's dancing links on flat integer arrays. The search is
iterative so that a run stopped by its node or time budget can be resumed
from the returned :attr:`SearchStats.resume` token.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

import numpy as np

from .km import KMMatrix


@dataclass
class CoverInstance:
    n_items: int
    options: dict[int, tuple[int, ...]]  # column id -> covered item ids
    excluded: tuple[int, ...] = ()

    def __post_init__(self):
        self.options = {int(c): tuple(sorted(int(r) for r in rows)) for c, rows in self.options.items()}
        for c, rows in self.options.items():
            if len(set(rows)) != len(rows):
                raise ValueError(f"option {c} repeats an item")
            if rows and not (0 <= rows[0] and rows[-1] < self.n_items):
                raise ValueError(f"option {c} covers an item out of range")
        self.excluded = tuple(sorted(set(self.excluded)))
        if set(self.excluded) & set(self.options):
            raise ValueError("a column cannot be both excluded and an option")

    @property
    def items(self) -> range:
        return range(self.n_items)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"items={self.n_items}\n")
            if self.excluded:
                fh.write("# excluded: " + ",".join(map(str, self.excluded)) + "\n")
            for c, rows in self.options.items():
                fh.write(f"{c}: {','.join(map(str, rows))}\n")

    @classmethod
    def read(cls, path) -> "CoverInstance":
        n_items, options, excluded = None, {}, ()
        for line in Path(path).read_text().splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("# excluded:"):
                excluded = tuple(int(v) for v in line.split(":", 1)[1].split(",") if v.strip())
            elif line.startswith("#"):
                continue
            elif line.startswith("items="):
                n_items = int(line.split("=", 1)[1])
            else:
                c, rows = line.split(":", 1)
                options[int(c)] = tuple(int(v) for v in rows.split(",") if v.strip())
        if n_items is None:
            raise ValueError(f"{path}: missing items= header")
        return cls(n_items, options, excluded)


@dataclass(frozen=True)
class SolutionSet:
    selected: tuple[int, ...]
    reps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "selected", tuple(sorted(self.selected)))

    def __len__(self) -> int:
        return len(self.selected)


@dataclass
class SearchStats:
    nodes: int = 0
    solutions: int = 0
    exhaustive: bool = False
    budget_exceeded: str | None = None  # "nodes" or "seconds"
    elapsed: float = 0.0
    resume: dict | None = None
    pruned: str | None = None  # set when a counting argument settled the search


def to_cover(km: KMMatrix) -> CoverInstance:
    """Reduce ``M x = 1`` to exact cover; columns with an entry >= 2 are excluded."""
    inc = km.incidence()
    bad = set(km.col[inc >= 2].tolist())
    options: dict[int, list[int]] = {}
    for r, c, v in zip(km.row.tolist(), km.col.tolist(), inc.tolist()):
        if c not in bad and v == 1:
            options.setdefault(c, []).append(r)
    return CoverInstance(km.shape[0], {c: tuple(rows) for c, rows in options.items()}, tuple(sorted(bad)))


def size_feasible(inst: CoverInstance) -> bool:
    """Can some multiset of option sizes (each option used at most once) sum
    to the number of items? A necessary condition for any exact cover."""
    counts: dict[int, int] = {}
    for rows in inst.options.values():
        counts[len(rows)] = counts.get(len(rows), 0) + 1
    target = inst.n_items
    mask = (1 << (target + 1)) - 1
    reach = 1
    for size, cnt in counts.items():
        if size == 0:
            continue
        # binary splitting of a bounded item
        part = 1
        while cnt > 0:
            take = min(part, cnt)
            reach = (reach | (reach << (size * take))) & mask
            cnt -= take
            part <<= 1
    return bool(reach >> target & 1)


def check_cover(inst: CoverInstance, sol: SolutionSet | tuple) -> bool:
    """True iff the selected options cover every item exactly once."""
    selected = sol.selected if isinstance(sol, SolutionSet) else tuple(sol)
    counts = [0] * inst.n_items
    for c in selected:
        if c not in inst.options:
            return False
        for r in inst.options[c]:
            counts[r] += 1
    return all(x == 1 for x in counts)


def cover_defects(inst: CoverInstance, selected) -> tuple[list[int], list[int]]:
    """Items left uncovered and items covered more than once."""
    counts = [0] * inst.n_items
    for c in selected:
        for r in inst.options.get(c, ()):
            counts[r] += 1
    return [i for i, x in enumerate(counts) if x == 0], [i for i, x in enumerate(counts) if x > 1]


class DancingLinks:
    """Dancing-links structure for one instance.

    Items are chosen by fewest remaining options, ties to the lowest item
    id. ``seed`` shuffles the order in which options are tried.
    """

    def __init__(self, inst: CoverInstance, seed: int | None = None):
        self.inst = inst
        cols = list(inst.options)
        if seed is not None:
            random.Random(seed).shuffle(cols)
        self.columns = cols
        N = inst.n_items
        total = N + 1 + sum(len(inst.options[c]) for c in cols)
        L = list(range(-1, N)) + [0] * (total - N - 1)
        R = list(range(1, N + 2)) + [0] * (total - N - 1)
        L[0], R[N] = N, 0
        U = list(range(total))
        D = list(range(total))
        top = [0] * total
        size = [0] * (N + 1)
        opt = [-1] * total
        node = N + 1
        for k, c in enumerate(cols):
            first = node
            rows = inst.options[c]
            for r in rows:
                h = r + 1
                top[node] = h
                opt[node] = k
                U[node] = U[h]
                D[node] = h
                D[U[h]] = node
                U[h] = node
                size[h] += 1
                L[node] = node - 1
                R[node] = node + 1
                node += 1
            if rows:
                L[first] = node - 1
                R[node - 1] = first
        self.L, self.R, self.U, self.D, self.top, self.size, self.opt = L, R, U, D, top, size, opt

    def _cover(self, c: int) -> None:
        L, R, U, D, top, size = self.L, self.R, self.U, self.D, self.top, self.size
        R[L[c]] = R[c]
        L[R[c]] = L[c]
        i = D[c]
        while i != c:
            j = R[i]
            while j != i:
                D[U[j]] = D[j]
                U[D[j]] = U[j]
                size[top[j]] -= 1
                j = R[j]
            i = D[i]

    def _uncover(self, c: int) -> None:
        L, R, U, D, top, size = self.L, self.R, self.U, self.D, self.top, self.size
        i = U[c]
        while i != c:
            j = L[i]
            while j != i:
                size[top[j]] += 1
                D[U[j]] = j
                U[D[j]] = j
                j = L[j]
            i = U[i]
        R[L[c]] = c
        L[R[c]] = c

    def _choose(self) -> int:
        R, size = self.R, self.size
        c = R[0]
        best, best_size = c, size[c]
        c = R[c]
        while c != 0 and best_size > 0:
            s = size[c]
            if s < best_size:
                best, best_size = c, s
            c = R[c]
        return best

    def _select(self, r: int) -> None:
        R, top = self.R, self.top
        j = R[r]
        while j != r:
            self._cover(top[j])
            j = R[j]

    def _deselect(self, r: int) -> None:
        L, top = self.L, self.top
        j = L[r]
        while j != r:
            self._uncover(top[j])
            j = L[j]

    def search(self, limit: int | None = None, max_nodes: int | None = None,
               max_seconds: float | None = None, resume: dict | None = None,
               stats: SearchStats | None = None) -> Iterator[SolutionSet]:
        """Yield exact covers until exhausted, ``limit`` reached or budget hit.

        The structure is restored to its initial state whenever the
        generator finishes; abandoning it midway leaves it dirty.
        """
        stats = stats if stats is not None else SearchStats()
        self.stats = stats
        D = self.D
        start = time.monotonic()
        stack: list[list[int]] = []  # [item header, current node, ordinal]
        backtrack = False

        if resume:
            for ordinal in resume["path"]:
                c = self._choose()
                self._cover(c)
                r = D[c]
                for _ in range(ordinal):
                    r = D[r]
                if r == c:
                    raise ValueError("resume token does not match this instance and seed")
                self._select(r)
                stack.append([c, r, ordinal])
            backtrack = bool(resume.get("backtrack"))

        def token(after_solution: bool) -> dict:
            return {"path": [s[2] for s in stack], "backtrack": after_solution}

        def unwind() -> None:
            while stack:
                c, r, _ = stack.pop()
                self._deselect(r)
                self._uncover(c)

        found = 0
        while True:
            if not backtrack:
                if self.R[0] == 0:
                    found += 1
                    stats.solutions += 1
                    yield SolutionSet(tuple(self.columns[self.opt[s[1]]] for s in stack))
                    if limit is not None and found >= limit:
                        stats.resume = token(after_solution=True)
                        break
                    backtrack = True
                    continue
                c = self._choose()
                if self.size[c] == 0:
                    backtrack = True
                    continue
                self._cover(c)
                r = D[c]
                self._select(r)
                stack.append([c, r, 0])
            else:
                if not stack:
                    stats.exhaustive = True
                    stats.resume = None
                    break
                entry = stack[-1]
                c, r = entry[0], entry[1]
                self._deselect(r)
                r = D[r]
                if r == c:
                    stack.pop()
                    self._uncover(c)
                    continue
                self._select(r)
                entry[1] = r
                entry[2] += 1
                backtrack = False
            stats.nodes += 1
            if max_nodes is not None and stats.nodes >= max_nodes:
                stats.budget_exceeded = "nodes"
                stats.resume = token(after_solution=False)
                break
            if max_seconds is not None and stats.nodes & 1023 == 0 and time.monotonic() - start > max_seconds:
                stats.budget_exceeded = "seconds"
                stats.resume = token(after_solution=False)
                break
        unwind()
        stats.elapsed += time.monotonic() - start


class CompiledSearch:
    """Chunked driver for the numba kernel; mirrors ``DancingLinks.search``."""

    CHUNK = 1 << 22

    def __init__(self, inst: CoverInstance, seed: int | None = None):
        from . import _dlx_kernel as kernel

        self.kernel = kernel
        self.dlx = DancingLinks(inst, seed)
        self.arrays = kernel.as_arrays(self.dlx)
        self.opt = np.array(self.dlx.opt, dtype=np.int64)

    def search(self, limit=None, max_nodes=None, max_seconds=None, resume=None,
               stats: SearchStats | None = None) -> Iterator[SolutionSet]:
        k = self.kernel
        stats = stats if stats is not None else SearchStats()
        depth_cap = self.dlx.inst.n_items + 1
        st_c = np.zeros(depth_cap, dtype=np.int64)
        st_r = np.zeros(depth_cap, dtype=np.int64)
        st_o = np.zeros(depth_cap, dtype=np.int64)
        state = np.zeros(5, dtype=np.int64)
        start = time.monotonic()
        if resume:
            path = np.array(resume["path"], dtype=np.int64)
            if not k.replay(*self.arrays, st_c, st_r, st_o, path):
                raise ValueError("resume token does not match this instance and seed")
            state[0] = len(path)
            state[1] = int(bool(resume.get("backtrack")))
        found = 0
        try:
            while True:
                chunk = self.CHUNK
                if max_nodes is not None:
                    chunk = min(chunk, max_nodes - stats.nodes)
                want = 64 if limit is None else min(64, limit - found)
                sols = np.empty((max(want, 1), depth_cap), dtype=np.int64)
                k.run(*self.arrays, st_c, st_r, st_o, state, max(chunk, 1), sols)
                stats.nodes += int(state[2])
                for row in sols[: state[3]]:
                    nodes = row[: int(np.argmax(row < 0))]
                    found += 1
                    stats.solutions += 1
                    yield SolutionSet(tuple(self.dlx.columns[o] for o in self.opt[nodes].tolist()))
                depth, status = int(state[0]), int(state[4])
                token = {"path": st_o[:depth].tolist(), "backtrack": bool(state[1])}
                if status == k.EXHAUSTED:
                    stats.exhaustive = True
                    stats.resume = None
                    break
                if limit is not None and found >= limit:
                    stats.resume = token
                    break
                if max_nodes is not None and stats.nodes >= max_nodes:
                    stats.budget_exceeded = "nodes"
                    stats.resume = token
                    break
                if max_seconds is not None and time.monotonic() - start > max_seconds:
                    stats.budget_exceeded = "seconds"
                    stats.resume = token
                    break
        finally:
            k.unwind(*self.arrays, st_c, st_r, int(state[0]))
            stats.elapsed += time.monotonic() - start


def _have_numba() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


class Search:
    """Iterable solution stream with statistics; see :func:`solve`."""

    def __init__(self, inst: CoverInstance, limit=None, max_nodes=None, max_seconds=None,
                 seed=None, resume=None, backend: str = "auto", prune: bool = True):
        self.inst = inst
        self.prune = prune
        self.stats = SearchStats()
        if backend == "auto":
            backend = "numba" if _have_numba() else "python"
        self.backend = backend
        if backend == "numba":
            self._engine = CompiledSearch(inst, seed)
        elif backend == "python":
            self._engine = DancingLinks(inst, seed)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self._args = dict(limit=limit, max_nodes=max_nodes, max_seconds=max_seconds, resume=resume)

    def __iter__(self) -> Iterator[SolutionSet]:
        if self.prune and not self._args["resume"] and not size_feasible(self.inst):
            self.stats.exhaustive = True
            self.stats.pruned = "option sizes cannot sum to the item count"
            return
        seen: set[tuple[int, ...]] = set()
        for sol in self._engine.search(stats=self.stats, **self._args):
            if sol.selected not in seen:
                seen.add(sol.selected)
                yield sol

    def run(self) -> list[SolutionSet]:
        return list(self)


def solve(inst: CoverInstance, limit: int | None = None, max_nodes: int | None = None,
          max_seconds: float | None = None, seed: int | None = None,
          resume: dict | None = None, backend: str = "auto", prune: bool = True) -> Search:
    """Search for exact covers of ``inst``.

    Iterate the result for solutions; ``.stats`` reports nodes, whether the
    run was exhaustive, and a resume token when a budget or limit stopped it.
    Both backends visit nodes in the same order, so tokens are interchangeable.
    With ``prune`` an instance whose option sizes cannot add up to the item
    count is reported exhaustive without searching.
    """
    return Search(inst, limit, max_nodes, max_seconds, seed, resume, backend, prune)


def restrict(inst: CoverInstance, col: int) -> CoverInstance:
    """Subinstance after selecting ``col``: its items and clashing options drop out."""
    chosen = set(inst.options[col])
    keep = [i for i in range(inst.n_items) if i not in chosen]
    renum = {old: new for new, old in enumerate(keep)}
    options = {
        c: tuple(renum[r] for r in rows)
        for c, rows in inst.options.items()
        if c != col and not chosen.intersection(rows)
    }
    return CoverInstance(len(keep), options)


def _sub_search(args):
    inst, col, max_nodes, max_seconds, seed = args
    sub = restrict(inst, col)
    search = solve(sub, max_nodes=max_nodes, max_seconds=max_seconds, seed=seed)
    sols = [tuple(sorted(s.selected + (col,))) for s in search]
    return sols, search.stats


def solve_parallel(inst: CoverInstance, workers: int = 2, max_nodes: int | None = None,
                   max_seconds: float | None = None, seed: int | None = None
                   ) -> tuple[list[SolutionSet], SearchStats]:
    """Split on the options of the first branching item; each worker owns a
    private subinstance. Budgets apply per branch."""
    if inst.n_items == 0:
        return [SolutionSet(())], SearchStats(solutions=1, exhaustive=True)
    counts = [0] * inst.n_items
    for rows in inst.options.values():
        for r in rows:
            counts[r] += 1
    item = min(range(inst.n_items), key=lambda i: (counts[i], i))
    branches = [c for c, rows in inst.options.items() if item in rows]
    jobs = [(inst, c, max_nodes, max_seconds, seed) for c in branches]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(_sub_search, jobs))
    merged: set[tuple[int, ...]] = set()
    total = SearchStats(exhaustive=True)
    for sols, st in results:
        merged.update(sols)
        total.nodes += st.nodes + 1
        total.elapsed += st.elapsed
        total.exhaustive &= st.exhaustive
        total.budget_exceeded = total.budget_exceeded or st.budget_exceeded
    total.solutions = len(merged)
    return [SolutionSet(s) for s in sorted(merged)], total


def write_solutions(path, solutions, reps_path=None, reps_of=None) -> None:
    """One solution per line as sorted column ids; optional sidecar with
    the k-orbit representatives in brace format."""
    with open(path, "w") as fh:
        for sol in solutions:
            fh.write((",".join(map(str, sol.selected)) or "-") + "\n")
    if reps_path is not None and reps_of is not None:
        with open(reps_path, "w") as fh:
            for i, sol in enumerate(solutions):
                fh.write(f"# solution {i}\n")
                for c in sol.selected:
                    fh.write(f"{reps_of(c)}\n")


def read_solutions(path) -> list[SolutionSet]:
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line == "-":
            out.append(SolutionSet(()))
        elif line and not line.startswith("#"):
            out.append(SolutionSet(tuple(int(v) for v in line.split(","))))
    return out


def random_instance(n_items: int, n_options: int, rng: np.random.Generator,
                    density: float = 0.25) -> CoverInstance:
    """Random small instance for testing."""
    options = {}
    for c in range(n_options):
        rows = np.flatnonzero(rng.random(n_items) < density)
        if len(rows) == 0:
            rows = rng.integers(0, n_items, size=1)
        options[c] = tuple(rows.tolist())
    return CoverInstance(n_items, options)
