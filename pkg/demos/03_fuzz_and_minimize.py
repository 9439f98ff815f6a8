"""
Searching for small ratios
==========================

A seeded fuzz campaign followed by a few Nelder-Mead restarts.
"""

from atiyah_lab.generators import GeneratorSpec, collinear_vertical
from atiyah_lab.harness import fuzz, invariance_suite, multistart_minimize

rep = fuzz(GeneratorSpec(n_min=3, n_max=6, seed=7), 2000)
print("fuzz min ratio ", rep.min_ratio, "at sample", rep.argmin["sample"])
print("violations     ", len(rep.violations), " dependent", len(rep.independence_failures))

# the argmin comes with everything needed to replay it
print("argmin points  ", rep.argmin["points"])

# collinear configurations reach the bound; nearby starts descend back to it
ms = multistart_minimize(collinear_vertical([0, 1, 2, 3]), restarts=4, seed=1, budget=800)
for k, r in enumerate(ms.results):
    print(f"restart {k}: {r.start_ratio:.6f} -> {r.final_ratio:.12f}")

inv = invariance_suite(ms.best.final, trials=5)
for ch in inv.checks:
    print(f"{ch.name:12s} {ch.max_rel_delta:.1e}")
