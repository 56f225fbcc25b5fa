"""Compiled dancing-links kernel (numba).

Same node layout and search order as :class:`qsteiner.cover.DancingLinks`;
the search state lives in caller-owned arrays so runs can be chunked and
resumed.
"""

from __future__ import annotations

import numpy as np
from numba import njit

EXHAUSTED, NODE_CHUNK, BUFFER_FULL = 0, 1, 2


@njit(cache=True)
def _cover(c, L, R, U, D, top, size):
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


@njit(cache=True)
def _uncover(c, L, R, U, D, top, size):
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


@njit(cache=True)
def _select(r, L, R, U, D, top, size):
    j = R[r]
    while j != r:
        _cover(top[j], L, R, U, D, top, size)
        j = R[j]


@njit(cache=True)
def _deselect(r, L, R, U, D, top, size):
    j = L[r]
    while j != r:
        _uncover(top[j], L, R, U, D, top, size)
        j = L[j]


@njit(cache=True)
def _choose(R, size):
    c = R[0]
    best = c
    best_size = size[c]
    c = R[c]
    while c != 0 and best_size > 0:
        if size[c] < best_size:
            best = c
            best_size = size[c]
        c = R[c]
    return best


@njit(cache=True)
def replay(L, R, U, D, top, size, st_c, st_r, st_o, path):
    """Re-enter a saved search position; returns False if the path is invalid."""
    for depth in range(len(path)):
        c = _choose(R, size)
        _cover(c, L, R, U, D, top, size)
        r = D[c]
        for _ in range(path[depth]):
            r = D[r]
        if r == c:
            return False
        _select(r, L, R, U, D, top, size)
        st_c[depth] = c
        st_r[depth] = r
        st_o[depth] = path[depth]
    return True


@njit(cache=True)
def unwind(L, R, U, D, top, size, st_c, st_r, depth):
    while depth > 0:
        depth -= 1
        _deselect(st_r[depth], L, R, U, D, top, size)
        _uncover(st_c[depth], L, R, U, D, top, size)


@njit(cache=True)
def run(L, R, U, D, top, size, st_c, st_r, st_o, state, max_nodes, sols):
    """Advance the search by at most ``max_nodes`` nodes.

    state = [depth, backtrack, nodes, n_solutions, status]; the first two
    are read and written, the rest are outputs for this call. Solutions are
    written to ``sols`` as selected node ids terminated by -1.
    """
    depth = state[0]
    backtrack = state[1]
    nodes = 0
    nsol = 0
    status = EXHAUSTED
    while True:
        if backtrack == 0:
            if R[0] == 0:
                for d in range(depth):
                    sols[nsol, d] = st_r[d]
                sols[nsol, depth] = -1
                nsol += 1
                backtrack = 1
                if nsol == sols.shape[0]:
                    status = BUFFER_FULL
                    break
                continue
            c = _choose(R, size)
            if size[c] == 0:
                backtrack = 1
                continue
            _cover(c, L, R, U, D, top, size)
            r = D[c]
            _select(r, L, R, U, D, top, size)
            st_c[depth] = c
            st_r[depth] = r
            st_o[depth] = 0
            depth += 1
        else:
            if depth == 0:
                status = EXHAUSTED
                break
            c = st_c[depth - 1]
            r = st_r[depth - 1]
            _deselect(r, L, R, U, D, top, size)
            r = D[r]
            if r == c:
                depth -= 1
                _uncover(c, L, R, U, D, top, size)
                continue
            _select(r, L, R, U, D, top, size)
            st_r[depth - 1] = r
            st_o[depth - 1] += 1
            backtrack = 0
        nodes += 1
        if nodes >= max_nodes:
            status = NODE_CHUNK
            break
    state[0] = depth
    state[1] = backtrack
    state[2] = nodes
    state[3] = nsol
    state[4] = status


def as_arrays(dlx) -> tuple[np.ndarray, ...]:
    return tuple(np.array(a, dtype=np.int64) for a in (dlx.L, dlx.R, dlx.U, dlx.D, dlx.top, dlx.size))
