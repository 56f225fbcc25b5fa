"""
A q-Steiner system S_2[2,3,13]
==============================

Fifteen orbit representatives under the normalizer expand to 1 597 245
planes of GF(2)^13. Every 2-subspace lies in exactly one of them. One plane
per Singer orbit gives a cyclic (8191,7,1) difference family. Takes a few
seconds.
"""

import time

from qsteiner.designkit import RepsFile, expand, extract_df, report_code_size, verify_df, verify_steiner
from qsteiner.ffield import build_field
from qsteiner.orbits import GroupSpec
from qsteiner.presets import flagship_reps_path

rf = RepsFile.read(flagship_reps_path())
F = build_field(rf.q, rf.n)
group = GroupSpec(rf.group, F)
print(f"{len(rf.reps)} representatives, group order {group.order}")

t0 = time.perf_counter()
design = expand(rf.reps, group, rf.t, rf.k)
print(f"expanded to {len(design)} blocks (expected {design.expected_size}) in {time.perf_counter() - t0:.1f}s")

t0 = time.perf_counter()
report = verify_steiner(design, F)
print(f"coverage histogram {report.histogram} in {time.perf_counter() - t0:.1f}s")
print("accepted:", report.accepted)

label, size = report_code_size(design, report)
print(f"constant-dimension code: {label} >= {size}")

df = extract_df(design, F)
dr = verify_df(df)
print(f"difference family ({df.v},{df.k},{df.lam}): {len(df.blocks)} blocks, "
      f"{dr.differences} differences, accepted {dr.accepted}")
print("first blocks:", df.blocks[:3])
