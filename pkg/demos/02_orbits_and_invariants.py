"""
Orbits of subspaces
===================

The Singer cycle shifts exponents, the Frobenius map doubles them, and
together they generate the normalizer of order n(2^n - 1). A subspace is
identified with the sorted exponents of its nonzero vectors.
"""

import numpy as np

from qsteiner.ffield import build_field
from qsteiner.orbits import GroupSpec, act, build_orbit_table, canonical_form, inv_N, stabilizer_scan
from qsteiner.subspace import gauss_binom, span

F = build_field(2, 7)

X = span(F, [0, 1, 5])
print("X =", X, "dimension", X.k)

group = GroupSpec("normalizer", F)
Y = act(F, X, (3, 40))  # x -> 2^3 x + 40
print("g(X) =", Y)
print("same canonical form:", canonical_form(X, group) == canonical_form(Y, group))
print("same inv_N:", inv_N(F, X) == inv_N(F, Y))

# orbit tables for the three groups
for kind in ("singer", "galois", "normalizer"):
    g = GroupSpec(kind, F)
    for k in (2, 3):
        table = build_orbit_table(k, g)
        lengths, counts = np.unique(table.lengths, return_counts=True)
        print(f"{kind:10s} k={k}: {len(table):5d} orbits, lengths "
              + ", ".join(f"{l} x{c}" for l, c in zip(lengths.tolist(), counts.tolist())))
        assert table.total() == gauss_binom(7, k, 2)

# short orbits come from nontrivial stabilizers
g = GroupSpec("galois", F)
table = build_orbit_table(3, g)
fixed = [table.rep(i) for i in np.flatnonzero(table.lengths == 1)]
print("3-subspaces fixed by squaring:", [str(x) for x in fixed])
print("stabilizer orders by direct scan:", [stabilizer_scan(x, g) for x in fixed])
