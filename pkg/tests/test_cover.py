from __future__ import annotations

import numpy as np
import pytest

from oracles import count_exact_covers
from qsteiner.cover import (CoverInstance, SolutionSet, check_cover, cover_defects, random_instance,
                            read_solutions, size_feasible, solve, solve_parallel, to_cover, write_solutions)
from qsteiner.km import KMMatrix

# Knuth's small example: unique cover {0, 3, 4}
KNUTH = CoverInstance(7, {0: (2, 4, 5), 1: (0, 3, 6), 2: (1, 2, 5), 3: (0, 3), 4: (1, 6), 5: (3, 4, 6)})
BACKENDS = ("python", "numba")


@pytest.mark.parametrize("backend", BACKENDS)
def test_knuth_example(backend):
    search = solve(KNUTH, backend=backend)
    sols = search.run()
    assert [s.selected for s in sols] == [(0, 3, 4)]
    assert search.stats.exhaustive and search.stats.solutions == 1


@pytest.mark.parametrize("backend", BACKENDS)
def test_empty_instance(backend):
    sols = solve(CoverInstance(0, {}), backend=backend).run()
    assert [s.selected for s in sols] == [()]


def test_check_cover():
    assert check_cover(KNUTH, (0, 3, 4))
    assert check_cover(KNUTH, SolutionSet((4, 3, 0)))
    assert not check_cover(KNUTH, (0, 3))
    assert not check_cover(KNUTH, (0, 3, 4, 4))
    assert not check_cover(KNUTH, (0, 3, 4, 99))
    assert cover_defects(KNUTH, (0, 3)) == ([1, 6], [])


def test_to_cover_excludes_repeated_rows():
    km = KMMatrix(2, 3, (3, 3), np.array([0, 1, 0, 2]), np.array([0, 0, 1, 2]), np.array([1, 1, 2, 1]))
    inst = to_cover(km)
    assert inst.excluded == (1,)
    assert inst.options == {0: (0, 1), 2: (2,)}


def test_identity_matrix_instance():
    km = KMMatrix(3, 3, (4, 4), np.arange(4), np.arange(4), np.ones(4, dtype=np.int64))
    sols = solve(to_cover(km)).run()
    assert [s.selected for s in sols] == [(0, 1, 2, 3)]


def test_roundtrip(tmp_path):
    inst = CoverInstance(5, {3: (0, 1), 7: (2, 3, 4), 8: (4,)}, excluded=(1, 2))
    path = tmp_path / "inst.txt"
    inst.write(path)
    text = path.read_text()
    assert text.startswith("items=5\n") and "7: 2,3,4" in text
    again = CoverInstance.read(path)
    assert again.options == inst.options and again.excluded == inst.excluded


def test_solutions_file(tmp_path):
    sols = [SolutionSet((3, 1)), SolutionSet(())]
    write_solutions(tmp_path / "s.txt", sols, tmp_path / "s.reps", lambda c: f"{{{c}}}")
    assert (tmp_path / "s.txt").read_text() == "1,3\n-\n"
    assert "{3}" in (tmp_path / "s.reps").read_text()
    assert read_solutions(tmp_path / "s.txt") == [SolutionSet((1, 3)), SolutionSet(())]


def test_invalid_instances():
    with pytest.raises(ValueError):
        CoverInstance(3, {0: (0, 0)})
    with pytest.raises(ValueError):
        CoverInstance(3, {0: (5,)})


def test_counts_against_oracle():
    rng = np.random.default_rng(11)
    for _ in range(40):
        inst = random_instance(int(rng.integers(1, 14)), int(rng.integers(1, 25)), rng, density=0.3)
        expected = count_exact_covers(inst.n_items, inst.options)
        for backend in BACKENDS:
            sols = solve(inst, backend=backend, seed=int(rng.integers(100))).run()
            assert len(sols) == expected
            assert all(check_cover(inst, s) for s in sols)


def _grid_instance():
    """Tilings of a 2x6 strip by dominoes: 13 solutions."""
    cells = {(r, c): 2 * c + r for r in range(2) for c in range(6)}
    opts, k = {}, 0
    for (r, c), i in cells.items():
        for dr, dc in ((0, 1), (1, 0)):
            j = cells.get((r + dr, c + dc))
            if j is not None:
                opts[k] = (i, j)
                k += 1
    return CoverInstance(12, opts)


def test_seed_does_not_change_solution_set():
    inst = _grid_instance()
    base = {s.selected for s in solve(inst).run()}
    assert len(base) == 13
    for seed in range(5):
        assert {s.selected for s in solve(inst, seed=seed).run()} == base


def test_backends_visit_same_order():
    inst = _grid_instance()
    for seed in (None, 3):
        a = [s.selected for s in solve(inst, seed=seed, backend="python").run()]
        b = [s.selected for s in solve(inst, seed=seed, backend="numba").run()]
        assert a == b


@pytest.mark.parametrize("backend", BACKENDS)
def test_limit_and_resume(backend):
    inst = _grid_instance()
    everything = [s.selected for s in solve(inst, backend=backend).run()]
    got, resume = [], None
    while True:
        search = solve(inst, limit=2, resume=resume, backend=backend)
        got += [s.selected for s in search]
        resume = search.stats.resume
        if search.stats.exhaustive:
            break
        assert resume is not None
    assert got == everything


@pytest.mark.parametrize("backend", BACKENDS)
def test_node_budget_resume(backend):
    inst = _grid_instance()
    everything = [s.selected for s in solve(inst, backend=backend).run()]
    got, resume, rounds = [], None, 0
    while True:
        search = solve(inst, max_nodes=5, resume=resume, backend=backend)
        got += [s.selected for s in search]
        rounds += 1
        if search.stats.exhaustive:
            break
        assert search.stats.budget_exceeded == "nodes"
        resume = search.stats.resume
    assert rounds > 1 and sorted(got) == sorted(everything)


def test_resume_token_interchangeable():
    inst = _grid_instance()
    first = solve(inst, max_nodes=7, backend="python")
    head = [s.selected for s in first]
    rest = [s.selected for s in solve(inst, resume=first.stats.resume, backend="numba")]
    assert sorted(head + rest) == sorted(s.selected for s in solve(inst).run())


def test_time_budget():
    rng = np.random.default_rng(2)
    inst = random_instance(60, 400, rng, density=0.05)
    search = solve(inst, max_seconds=0.0, backend="python")
    search.run()
    assert search.stats.exhaustive or search.stats.budget_exceeded == "seconds"


def test_size_feasibility():
    assert size_feasible(KNUTH)
    # three items, options of size 2 only
    assert not size_feasible(CoverInstance(3, {0: (0, 1), 1: (1, 2), 2: (0, 2)}))
    pruned = solve(CoverInstance(3, {0: (0, 1), 1: (1, 2), 2: (0, 2)}))
    assert pruned.run() == [] and pruned.stats.exhaustive and pruned.stats.pruned


def test_size_pruning_is_sound():
    rng = np.random.default_rng(4)
    for _ in range(200):
        inst = random_instance(int(rng.integers(1, 10)), int(rng.integers(1, 8)), rng, density=0.4)
        if not size_feasible(inst):
            assert count_exact_covers(inst.n_items, inst.options) == 0
        unpruned = solve(inst, prune=False).run()
        assert len(solve(inst).run()) == len(unpruned)


def test_parallel_matches_serial():
    inst = _grid_instance()
    sols, stats = solve_parallel(inst, workers=2)
    assert {s.selected for s in sols} == {s.selected for s in solve(inst).run()}
    assert stats.exhaustive
