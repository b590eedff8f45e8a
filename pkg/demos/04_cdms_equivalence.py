"""
Disclosure of multiple secrets as retrieval
============================================

Alice and Bob hold inputs x and y, K secrets and shared randomness. Carol
learns secret k exactly when f_k(x, y) holds. Read Alice and Bob as the two
databases and Carol's inputs as queries, and a CDMS instance is a SPIR
scheme. The verdicts agree on both sides, including for broken variants.
"""

from spircds import modular_conditions
from spircds.cdms import CdmsInstance, check_security, check_validity, emit_cdms, spir_from_cdms
from spircds.constructions import canonical_scheme
from spircds.scheme import parse_affine
from spircds.verifier import check_database_privacy, check_reliability

conditions = modular_conditions(3, 3)
ref = canonical_scheme("k3_u2log3")


def instance(name, rho, changes=()):
    ax, by = dict(ref.answers_x), dict(ref.answers_y)
    for side, label, exprs in changes:
        target = ax if side == 1 else by
        target[label] = tuple(parse_affine(e, ref.msg, rho) for e in exprs)
    if rho < ref.rho:
        cut = lambda specs: tuple(type(sp)(sp.w, sp.r[:rho], sp.c) for sp in specs)  # noqa: E731
        ax = {l: cut(v) for l, v in ax.items()}
        by = {l: cut(v) for l, v in by.items()}
    return CdmsInstance(3, 1, 2, rho, conditions, ax, by, name)


cases = [
    instance("intact", 2),
    instance("one_random_bit", 1),
    instance("B1_leaks", 2, [(2, "B1", ["W1+S2"])]),
    instance("A0_repeats", 2, [(1, "A0", ["S1", "S1"])]),
]

print(emit_cdms(cases[0]))
print(f"{'instance':<16}{'valid':>7}{'secure':>8}{'reliable':>10}{'private':>9}")
for c in cases:
    s = spir_from_cdms(c)
    row = [check_validity(c), check_security(c), check_reliability(s), check_database_privacy(s)]
    print(f"{c.name:<16}" + "".join(f"{str(r.passed):>{w}}" for r, w in zip(row, (7, 8, 10, 9))))
