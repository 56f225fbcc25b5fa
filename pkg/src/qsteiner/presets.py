"""Default polynomials and named parameter presets."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .ffield import PrimePolynomial, find_primitive_poly


@lru_cache(maxsize=None)
def _poly_config() -> dict[str, str]:
    text = resources.files("qsteiner.data").joinpath("primitive_polys.json").read_text()
    return {k: v for k, v in json.loads(text).items() if not k.startswith("_")}


def default_poly(q: int, n: int) -> PrimePolynomial:
    """Configured primitive polynomial for GF(q^n), else the first one found by search."""
    text = _poly_config().get(f"{q},{n}")
    if text is None:
        return find_primitive_poly(q, n)
    return PrimePolynomial.parse(text, q, n)


@dataclass(frozen=True)
class Preset:
    name: str
    q: int
    t: int
    k: int
    n: int
    group: str
    long_running: bool = False


# Parameter sets for which no q-Steiner system with the given prescribed
# group exists. Only the first two are small enough for routine testing.
NONEXISTENCE_PRESETS = {
    p.name: p
    for p in [
        Preset("s2-2-3-7-singer", 2, 2, 3, 7, "singer"),
        Preset("s2-2-3-7-galois", 2, 2, 3, 7, "galois"),
        Preset("s2-3-4-8-singer", 2, 3, 4, 8, "singer", long_running=True),
        Preset("s2-2-4-10-norm", 2, 2, 4, 10, "normalizer", long_running=True),
        Preset("s2-2-4-13-norm", 2, 2, 4, 13, "normalizer", long_running=True),
        Preset("s2-3-4-10-norm", 2, 3, 4, 10, "normalizer", long_running=True),
        Preset("s3-2-3-7-singer", 3, 2, 3, 7, "singer", long_running=True),
        Preset("s5-2-3-7-norm", 5, 2, 3, 7, "normalizer", long_running=True),
    ]
}

FLAGSHIP = Preset("s2-2-3-13-norm", 2, 2, 3, 13, "normalizer", long_running=True)


def flagship_reps_path():
    return resources.files("qsteiner.data").joinpath("s2_2_3_13_reps.txt")
