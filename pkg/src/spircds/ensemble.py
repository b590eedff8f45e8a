"""Exact joint distributions over small discrete variables.

A :class:`JointDistribution` stores integer outcome codes together with
integer weights and their total, so every probability is the exact rational
``weight / total``. Independence and determinism are decided by integer
cross-multiplication, never by thresholding a floating-point entropy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

Decoder = Callable[[int], object]


class DistributionError(ValueError):
    pass


def _unique_rows(rows: np.ndarray):
    """Distinct rows in lexicographic order, plus the inverse index.

    Rows of non-negative codes are packed into one mixed-radix int64 key when
    that fits, which sorts far faster than ``np.unique(axis=0)``.
    """
    n, width = rows.shape
    if n == 0 or width == 0:
        return np.unique(rows, axis=0, return_inverse=True)
    radix = rows.max(axis=0) + 1
    if rows.min() >= 0 and np.sum(np.log2(radix.astype(float))) < 62:
        keys = np.zeros(n, dtype=np.int64)
        for j in range(width):
            keys = keys * radix[j] + rows[:, j]
        _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        return rows[first], inverse.reshape(-1)
    uniq, inverse = np.unique(rows, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


def _lexsorted_unique(rows: np.ndarray, weights: np.ndarray):
    """Merge duplicate rows, summing their weights; rows come back sorted."""
    if rows.shape[0] == 0:
        return rows, weights
    uniq, inverse = _unique_rows(rows)
    merged = np.zeros(uniq.shape[0], dtype=np.int64)
    np.add.at(merged, inverse, weights)
    return uniq, merged


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Probability table ``outcome -> weight / total`` over named variables.

    ``outcomes`` holds one row per distinct outcome (int64 codes, columns in
    the order of ``variables``), sorted lexicographically. ``decoders`` maps a
    variable name to a function turning a code back into a readable value; it
    only affects witness rendering.
    """

    variables: tuple[str, ...]
    outcomes: np.ndarray
    weights: np.ndarray
    total: int
    decoders: Mapping[str, Decoder] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise DistributionError(f"duplicate variable names: {self.variables}")
        if any(not v for v in self.variables):
            raise DistributionError("variable names must be non-empty")
        if self.outcomes.ndim != 2 or self.outcomes.shape[1] != len(self.variables):
            raise DistributionError("outcome table does not match the variable list")
        if self.outcomes.shape[0] != self.weights.shape[0]:
            raise DistributionError("one weight per outcome required")
        if np.any(self.weights <= 0):
            raise DistributionError("weights must be positive")
        if int(self.weights.sum()) != self.total:
            raise DistributionError("weights do not sum to the total")

    @classmethod
    def from_rows(
        cls,
        variables: Sequence[str],
        rows,
        weights=None,
        decoders: Mapping[str, Decoder] | None = None,
    ) -> "JointDistribution":
        """Build from (possibly repeated) outcome rows, equiprobable by default."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, len(variables))
        if weights is None:
            weights = np.ones(rows.shape[0], dtype=np.int64)
        else:
            weights = np.asarray(weights, dtype=np.int64)
        if rows.shape[0] == 0:
            raise DistributionError("empty distribution")
        uniq, merged = _lexsorted_unique(rows, weights)
        return cls(tuple(variables), uniq, merged, int(merged.sum()), dict(decoders or {}))

    @classmethod
    def from_probabilities(
        cls, variables: Sequence[str], table: Mapping[tuple, Fraction | int]
    ) -> "JointDistribution":
        """Build from an explicit ``{outcome tuple: probability}`` mapping."""
        probs = {tuple(k): Fraction(v) for k, v in table.items() if v != 0}
        if any(p < 0 for p in probs.values()):
            raise DistributionError("negative probability")
        if sum(probs.values()) != 1:
            raise DistributionError("probabilities must sum to exactly 1")
        denom = math.lcm(*(p.denominator for p in probs.values()))
        rows = list(probs)
        weights = [p.numerator * (denom // p.denominator) for p in probs.values()]
        return cls.from_rows(variables, rows, weights)

    @classmethod
    def uniform_product(cls, sizes: Mapping[str, int]) -> "JointDistribution":
        """Independent uniform variables; variable ``v`` takes values ``0..sizes[v]-1``."""
        names = list(sizes)
        grid = np.indices([sizes[n] for n in names]).reshape(len(names), -1).T
        return cls.from_rows(names, grid)

    def __len__(self) -> int:
        return self.outcomes.shape[0]

    def index(self, names: Iterable[str]) -> list[int]:
        names = list(names)
        unknown = [n for n in names if n not in self.variables]
        if unknown:
            raise DistributionError(f"unknown variable(s): {', '.join(map(str, unknown))}")
        return [self.variables.index(n) for n in names]

    def ordered(self, names: Iterable[str]) -> list[str]:
        """``names`` in declaration order."""
        wanted = set(names)
        self.index(wanted)
        return [v for v in self.variables if v in wanted]

    def probability(self, outcome: Sequence[int]) -> Fraction:
        hit = np.all(self.outcomes == np.asarray(outcome, dtype=np.int64), axis=1)
        w = int(self.weights[hit].sum())
        return Fraction(w, self.total)

    def table(self) -> dict[tuple[int, ...], Fraction]:
        return {
            tuple(int(v) for v in row): Fraction(int(w), self.total)
            for row, w in zip(self.outcomes, self.weights)
        }

    def decode(self, name: str, code: int) -> object:
        dec = self.decoders.get(name)
        return dec(int(code)) if dec else int(code)

    def describe(self, names: Sequence[str], codes: Sequence[int]) -> str:
        return " ".join(f"{n}={self.decode(n, c)}" for n, c in zip(names, codes))


def _group(d: JointDistribution, names: Sequence[str]):
    """Return (distinct rows, inverse index, weights per distinct row)."""
    uniq, inverse = _unique_rows(d.outcomes[:, d.index(names)])
    w = np.zeros(uniq.shape[0], dtype=np.int64)
    np.add.at(w, inverse, d.weights)
    return uniq, inverse, w


def marginal(d: JointDistribution, keep: Iterable[str]) -> JointDistribution:
    names = d.ordered(keep)
    if not names:
        raise DistributionError("marginal needs at least one variable")
    uniq, _, w = _group(d, names)
    return JointDistribution(
        tuple(names), uniq, w, d.total, {n: d.decoders[n] for n in names if n in d.decoders}
    )


def find_nondeterminism(
    d: JointDistribution, target: Iterable[str], given: Iterable[str]
) -> str | None:
    """Describe a ``given`` value admitting two ``target`` values, or None."""
    target, given = list(target), list(given)
    d.index(target + given)
    if set(target) <= set(given):
        return None
    tnames = [t for t in d.ordered(target) if t not in given]
    gnames = d.ordered(given)
    if not gnames:
        tu, _ = _unique_rows(d.outcomes[:, d.index(tnames)])
        if tu.shape[0] <= 1:
            return None
        return f"{d.describe(tnames, tu[0])} and {d.describe(tnames, tu[1])} both possible"
    g_uniq, g_inv, _ = _group(d, gnames)
    t_uniq, t_inv, _ = _group(d, tnames)
    # first target seen for each given value; any mismatch is a witness
    first_pos = np.full(g_uniq.shape[0], len(g_inv), dtype=np.int64)
    np.minimum.at(first_pos, g_inv, np.arange(len(g_inv)))
    first = t_inv[first_pos]
    bad = np.nonzero(t_inv != first[g_inv])[0]
    if bad.size == 0:
        return None
    i = int(bad[0])
    g = g_inv[i]
    return (
        f"given {d.describe(gnames, g_uniq[g])}: "
        f"{d.describe(tnames, t_uniq[first[g]])} and {d.describe(tnames, t_uniq[t_inv[i]])} "
        "both possible"
    )


def is_deterministic_given(
    d: JointDistribution, target: Iterable[str], given: Iterable[str]
) -> bool:
    return find_nondeterminism(d, target, given) is None


def find_dependence(
    d: JointDistribution, group_a: Iterable[str], group_b: Iterable[str]
) -> str | None:
    """Describe an outcome pair with ``p(a,b) != p(a) p(b)``, or None.

    Only outcome pairs in the joint support are inspected: if every present
    pair factorizes, the products over present pairs already sum to one, so
    no pair can be missing.
    """
    a, b = set(group_a), set(group_b)
    if not a or not b:
        raise DistributionError("independence groups must be non-empty")
    if a & b:
        raise DistributionError(f"groups overlap on {sorted(a & b)}")
    anames, bnames = d.ordered(a), d.ordered(b)
    _, a_inv, wa = _group(d, anames)
    _, b_inv, wb = _group(d, bnames)
    ab_uniq, ab_inv, wab = _group(d, anames + bnames)
    # representative row of each joint (a, b) value
    rep = np.full(ab_uniq.shape[0], len(ab_inv), dtype=np.int64)
    np.minimum.at(rep, ab_inv, np.arange(len(ab_inv)))
    total = d.total
    if total < 2**31:
        lhs = wab * total
        rhs = wa[a_inv[rep]] * wb[b_inv[rep]]
        bad = np.nonzero(lhs != rhs)[0]
    else:
        bad = [
            i for i in range(len(rep))
            if int(wab[i]) * total != int(wa[a_inv[rep[i]]]) * int(wb[b_inv[rep[i]]])
        ]
    if len(bad) == 0:
        return None
    i = int(bad[0])
    row = ab_uniq[i]
    n = len(anames)
    pa = Fraction(int(wa[a_inv[rep[i]]]), total)
    pb = Fraction(int(wb[b_inv[rep[i]]]), total)
    return (
        f"{d.describe(anames, row[:n])} with {d.describe(bnames, row[n:])}: "
        f"p(joint)={Fraction(int(wab[i]), total)} but p*p={pa * pb}"
    )


def is_independent(
    d: JointDistribution, group_a: Iterable[str], group_b: Iterable[str]
) -> bool:
    return find_dependence(d, group_a, group_b) is None


def first_difference(d1: JointDistribution, d2: JointDistribution) -> str | None:
    if d1.variables != d2.variables:
        raise DistributionError(f"variable lists differ: {d1.variables} vs {d2.variables}")
    t1, t2 = d1.table(), d2.table()
    for outcome in sorted(set(t1) | set(t2)):
        p1, p2 = t1.get(outcome, Fraction(0)), t2.get(outcome, Fraction(0))
        if p1 != p2:
            return f"{d1.describe(d1.variables, outcome)}: {p1} vs {p2}"
    return None


def distributions_equal(d1: JointDistribution, d2: JointDistribution) -> bool:
    if d1.variables != d2.variables:
        raise DistributionError(f"variable lists differ: {d1.variables} vs {d2.variables}")
    if d1.outcomes.shape != d2.outcomes.shape or not np.array_equal(d1.outcomes, d2.outcomes):
        return False
    if max(d1.total, d2.total) >= 2**31:
        return first_difference(d1, d2) is None
    return bool(np.all(d1.weights * d2.total == d2.weights * d1.total))


def entropy_bits(d: JointDistribution, vars: Iterable[str]) -> float:
    """Shannon entropy of the marginal on ``vars``, in bits."""
    names = list(vars)
    if not names:
        return 0.0
    m = marginal(d, names)
    if len(m) == 1:
        return 0.0
    total = m.total
    s = sum(int(w) * math.log2(int(w)) for w in m.weights)
    return math.log2(total) - s / total
