"""Classify the five-letter family and print its strong-coincidence table.

Usage: python demos/classify_and_coincide.py [t]
"""

import sys

from rauzygeom import (
    check_nice,
    hokkaido_family,
    pisot_split,
    projections,
    strong_coincidence,
)

t = int(sys.argv[1]) if len(sys.argv) > 1 else 0
sub = hokkaido_family(t)
pd = pisot_split(sub)
print(f"family member t={t}: beta = {pd.beta_float():.12f}, "
      f"unit={pd.is_unit}, reducible={pd.is_reducible}")

verdict = check_nice(sub, pd)
for name in ("S1", "S2", "P", "N"):
    print(f"  {name}: {'pass' if verdict[name]['passed'] else 'FAIL'}")
print(f"  nice: {verdict['nice']}")

proj = projections(sub, pd)
table = strong_coincidence(sub, proj, depth_cap=20)
print(f"\nstrong coincidence ({len(table.pairs)} well-projecting pairs):")
for (a, b), k in sorted(table.pairs.items()):
    print(f"  {'^'.join(map(str, a))} vs {'^'.join(map(str, b))}: k = {k}")
