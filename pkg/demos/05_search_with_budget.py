"""
Searching the flagship instance
===============================

The 105 x 30705 Kramer-Mesner system has exact covers, but finding one
takes hours of dancing links. Here we run a short budget and resume from
the saved position. The orbit tables alone take about half a minute.
"""

import json

from qsteiner.cover import solve, to_cover
from qsteiner.ffield import build_field
from qsteiner.km import build_km
from qsteiner.orbits import GroupSpec, build_orbit_table

F = build_field(2, 13)
group = GroupSpec("normalizer", F)
km = build_km(build_orbit_table(2, group), build_orbit_table(3, group))
inst = to_cover(km)
print(f"{inst.n_items} items, {len(inst.options)} options, {len(inst.excluded)} columns excluded")

search = solve(inst, limit=1, max_nodes=200_000, seed=2012)
found = search.run()
st = search.stats
print(f"first leg: {st.nodes} nodes, {len(found)} solutions, stopped by {st.budget_exceeded}")

token = json.loads(json.dumps(st.resume))  # survives a round trip through a file
more = solve(inst, limit=1, max_nodes=200_000, seed=2012, resume=token)
found += more.run()
print(f"second leg: {more.stats.nodes} nodes, {len(found)} solutions so far")
print("resume token depth:", len(more.stats.resume["path"]) if more.stats.resume else None)
