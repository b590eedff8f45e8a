"""
Three messages with two-bit downloads
======================================

Four queries per database (two bits each) buy a one-bit answer from each
side. Pair values come from a carry-free sum of the two query bits; value 3
is not used by any message and shows up as a dummy color.
"""

from spircds import canonical_conditions, canonical_scheme, full_report, repeat_scheme
from spircds.graph import export_dot, graph_from_scheme, validate_regularity

s = canonical_scheme("k3_u4")
cond = canonical_conditions("k3_u4")

# condition matrices: rows are database 1's queries, columns database 2's
for k in (1, 2, 3):
    print(f"f_{k}:", cond.matrix(k))
print("dummy pairs:", sorted(cond.dummy))

g = graph_from_scheme(s, cond.dummy)
print("regular:", validate_regularity(g).passed)
print(export_dot(g))

r = full_report(s)
print(f"U={r.upload_bits:g} D={r.download_bits:g} randomness={r.randomness_bits:g} passed={r.passed}")

# longer messages: run the scheme once per symbol with fresh randomness
for L in (2, 3):
    r = full_report(repeat_scheme(s, L))
    print(f"L={L}: D={r.download_bits:g} randomness={r.randomness_bits:g} passed={r.passed}")
