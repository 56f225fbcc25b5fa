"""
No q-Fano plane with a Singer or Frobenius symmetry
===================================================

An S_2[2,3,7] would be a set of 381 planes in GF(2)^7 covering each of the
2667 lines once. Prescribing a group turns the search into an exact cover
over orbits.
"""

from collections import Counter

from qsteiner.cover import size_feasible, solve, to_cover
from qsteiner.ffield import build_field
from qsteiner.km import build_km
from qsteiner.orbits import GroupSpec, build_orbit_table

F = build_field(2, 7)

for kind in ("singer", "galois", "normalizer"):
    group = GroupSpec(kind, F)
    lines = build_orbit_table(2, group)
    planes = build_orbit_table(3, group)
    km = build_km(lines, planes)
    inst = to_cover(km)
    sizes = Counter(len(rows) for rows in inst.options.values())
    print(f"\n{kind}: {inst.n_items} line orbits, {len(inst.options)} usable plane orbits "
          f"({len(inst.excluded)} excluded), option sizes {dict(sizes)}")

    # a quick necessary condition: option sizes must be able to add up to the item count
    print("  sizes can sum to the item count:", size_feasible(inst))

    search = solve(inst)
    sols = search.run()
    st = search.stats
    print(f"  solutions: {len(sols)}, exhaustive: {st.exhaustive}, nodes: {st.nodes}")
    if st.pruned:
        print("  settled without branching:", st.pruned)
