"""
Three messages with 2 log2(3) upload bits
==========================================

Each database sees one of three queries. Database 1 answers two bits,
database 2 one bit, and the databases share two random bits.
"""

import numpy as np

from spircds import canonical_scheme, evaluate_answers, format_report, full_report
from spircds.ensemble import marginal
from spircds.scheme import format_affine
from spircds.verifier import build_experiment

s = canonical_scheme("k3_u2log3")

# the answer table, one line per query
for side, answers in ((1, s.answers_x), (2, s.answers_y)):
    for label, specs in answers.items():
        print(f"database {side}  {label}: " + ", ".join(format_affine(sp, s.msg) for sp in specs))

# to fetch W2 the user draws one of the three pairs whose labels sum to 1 mod 3
print("pairs for W2:", s.strategy.pairs[1])

# a concrete run: W = (1, 0, 1), shared randomness S = (1, 0), query pair (A1, B0)
ax, ay = evaluate_answers(s, "A1", "B0", (1, 0, 1), (1, 0))
print("A1 ->", [int(v) for v in ax], " B0 ->", [int(v) for v in ay])
# B0 = W1 + S1 and the first symbol of A1 = W1 + W2 + S1, so their sum is W2
print("decoded W2 =", (int(ax[0]) + int(ay[0])) % 2)

# the exact experiment behind the checks: every (pair, W, S) outcome with its weight
d = build_experiment(s, 2)
print(len(d), "equiprobable outcomes; first rows:")
print(np.asarray(d.outcomes[:4]))

# database 1 sees each query with probability 1/3 whatever the user wants
print(marginal(d, ["Q1"]).table())

print(format_report(full_report(s)))
