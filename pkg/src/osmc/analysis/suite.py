"""Named instance suites shared by the CLI, the scripts and the tests."""

from __future__ import annotations

from osmc.generators import GeneratorSpec, generate
from osmc.planar import OSInstance


def _grid(w, h, terminals="all", seed=0, fraction=0.25):
    return GeneratorSpec("grid", {"w": w, "h": h}, terminals, fraction, seed)


def default_suite() -> list[GeneratorSpec]:
    """53 instances: grids up to 40x40, random planar, Halin, lower-bound
    S-Halin and cycles; n <= 5000 and k <= 160 throughout."""
    specs = [GeneratorSpec("cycle", {"k": k}) for k in (3, 4, 5, 8, 16)]
    policies = ("all", "boundary", "random", "blob")
    for idx, (w, h) in enumerate([(2, 2), (3, 3), (4, 4), (5, 5), (6, 6), (8, 8), (10, 10), (12, 12),
                                  (16, 16), (20, 20), (24, 24), (30, 30), (40, 40), (5, 20), (10, 30)]):
        specs.append(_grid(w, h, policies[idx % 4], seed=idx))
    for idx, (w, rate) in enumerate([(6, 0.2), (8, 0.3), (10, 0.45), (12, 0.3), (16, 0.2), (16, 0.45),
                                     (20, 0.3), (25, 0.3), (30, 0.2), (30, 0.45), (40, 0.3), (40, 0.2),
                                     (10, 0.3), (20, 0.45), (25, 0.2)]):
        specs.append(GeneratorSpec("random_planar", {"w": w, "h": w, "rate": rate},
                                   policies[idx % 4], 0.25, seed=idx))
    for idx, leaves in enumerate((3, 5, 8, 12, 20, 30, 50, 80, 100, 120, 140, 160)):
        specs.append(GeneratorSpec("halin", {"leaves": leaves}, policies[idx % 4], 0.25, seed=idx))
    specs += [GeneratorSpec("shalin_lower", {"k": k}) for k in (4, 8, 16, 32, 64, 128)]
    return specs


def small_suite() -> list[GeneratorSpec]:
    """Instances with k <= 16 (exhaustive shattering checks stay cheap)."""
    return [s for s in default_suite() if _k_of(s) <= 16]


def _k_of(spec: GeneratorSpec) -> int:
    p = spec.params
    if spec.family == "grid":
        return 2 * (p["w"] + p["h"]) - 4
    if spec.family == "random_planar":
        return 2 * (p["w"] + p.get("h", p["w"])) - 4
    if spec.family == "halin":
        return p["leaves"]
    return p["k"]


SUITES = {"default": default_suite, "small": small_suite}


def load_suite(name: str) -> list[OSInstance]:
    try:
        specs = SUITES[name]()
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}") from None
    return [generate(s) for s in specs]
