"""q-analogs of Steiner systems from prescribed automorphism groups.

Exponent arithmetic in GF(q^n), subspace orbits under Singer, Galois and
normalizer groups, Kramer-Mesner matrices, exact cover by dancing links,
design verification and difference families.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .cover import CoverInstance, SearchStats, SolutionSet, check_cover, solve, to_cover
from .designkit import (Design, DifferenceFamily, RepsFile, expand, extract_df, report_code_size,
                        verify_df, verify_orbit_union, verify_steiner)
from .ffield import FieldTable, PrimePolynomial, build_field
from .km import KMMatrix, build_km
from .orbits import GroupSpec, OrbitTable, build_orbit_table, canonical_form, inv_F, inv_N, inv_S
from .subspace import Subspace, gauss_binom, span

__all__ = [
    "CoverInstance", "Design", "DifferenceFamily", "FieldTable", "GroupSpec", "KMMatrix",
    "OrbitTable", "PrimePolynomial", "RepsFile", "SearchStats", "SolutionSet", "Subspace",
    "build_field", "build_km", "build_orbit_table", "canonical_form", "check_cover", "expand",
    "extract_df", "gauss_binom", "inv_F", "inv_N", "inv_S", "report_code_size", "solve", "span",
    "to_cover", "verify_df", "verify_orbit_union", "verify_steiner",
]
