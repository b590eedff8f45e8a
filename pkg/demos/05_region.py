"""
Upload versus download for three messages
=========================================

Two verified schemes give the corners of the achievable region for K=3 and
one-bit messages. Spending 4 upload bits instead of 2 log2(3) saves one
download bit and gives the smaller total.
"""

from spircds.cli import region_csv
from spircds.constructions import min_total, region_points

print(region_csv(3, 1))

points = region_points(3, 1)
best = min_total(points)
print(f"least total: {best.total_bits:g} bits via {best.witness_scheme}")

# a coarse text plot of the staircase
for p in points:
    bar = "#" * int(round(4 * p.upload_bits))
    print(f"U={p.upload_bits:7.4f} D={p.download_bits:g} {bar} ({p.kind})")
