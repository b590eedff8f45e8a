"""Conditional disclosure of (multiple) secrets and its SPIR equivalent.

Alice holds input x, Bob holds input y, both share K secrets and some common
randomness, and each sends one signal to Carol. Secret k must be decodable
when the public condition f_k(x, y) holds and perfectly hidden otherwise.
When Carol draws (x, y) so that each input alone says nothing about which
condition holds, this is exactly two-database SPIR: inputs are queries,
signals are answers and secrets are messages (:func:`spir_from_cdms`).
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ensemble import JointDistribution, find_dependence, find_nondeterminism
from .field import FieldError, PrimeModulus
from .scheme import (
    Answers,
    FormatError,
    MessageSpec,
    Pair,
    QueryStrategy,
    Scheme,
    SchemeError,
    emit_answers,
    emit_common,
    indexed_pairs,
    iter_records,
    parse_common,
    read_header,
)
from .verifier import CheckResult

CDMS_HEADER = "cdms-instance"


class ConditionError(ValueError):
    pass


@dataclass(frozen=True)
class ConditionTable:
    """Predicates f_1..f_K as sets of satisfying input pairs.

    ``dummy`` colors pairs that satisfy no real condition with a dummy index
    (> K); pairs absent from both are simply unused.
    """

    space_x: tuple[str, ...]
    space_y: tuple[str, ...]
    satisfied: tuple[frozenset[Pair], ...]
    dummy: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "space_x", tuple(self.space_x))
        object.__setattr__(self, "space_y", tuple(self.space_y))
        object.__setattr__(self, "satisfied", tuple(frozenset(map(tuple, s)) for s in self.satisfied))
        object.__setattr__(self, "dummy", dict(self.dummy))
        xs, ys = set(self.space_x), set(self.space_y)
        seen: dict[Pair, int] = {}
        for k, pairs in enumerate(self.satisfied, start=1):
            for p in pairs:
                if p[0] not in xs or p[1] not in ys:
                    raise ConditionError(f"f_{k} references unknown input pair {p}")
                if p in seen:
                    raise ConditionError(
                        f"more than one condition holds at {p[0]}:{p[1]} (f_{seen[p]} and f_{k})"
                    )
                seen[p] = k
        for p, j in self.dummy.items():
            if p in seen:
                raise ConditionError(f"dummy pair {p} also satisfies f_{seen[p]}")
            if j <= self.K:
                raise ConditionError(f"dummy index {j} must exceed K={self.K}")

    @property
    def K(self) -> int:
        return len(self.satisfied)

    def holds(self, k: int, x: str, y: str) -> bool:
        return (x, y) in self.satisfied[k - 1]

    def condition_at(self, x: str, y: str) -> int | None:
        """The index k with f_k(x, y) = 1, or None."""
        for k, pairs in enumerate(self.satisfied, start=1):
            if (x, y) in pairs:
                return k
        return None

    def matrix(self, k: int) -> list[list[int]]:
        """f_k as a 0/1 table indexed [x][y]."""
        return [[int(self.holds(k, x, y)) for y in self.space_y] for x in self.space_x]

    def restricted(self, pairs: Iterable[Pair]) -> "ConditionTable":
        keep = set(map(tuple, pairs))
        return ConditionTable(
            self.space_x, self.space_y, tuple(s & keep for s in self.satisfied)
        )


def _digits(v: int, base: int, width: int) -> tuple[int, ...]:
    out = []
    for _ in range(width):
        v, d = divmod(v, base)
        out.append(d)
    return tuple(reversed(out))


def modular_conditions(
    K: int,
    M: int,
    symbols_per_side: int = 1,
    base: int | None = None,
    prefixes: tuple[str, str] = ("A", "B"),
) -> ConditionTable:
    """Conditions from carry-free modular sums of multi-symbol inputs.

    Inputs are length-``symbols_per_side`` vectors over {0..base-1},
    labelled by their digits (``A01``: first symbol 0, second 1). The pair
    value is ``sum_i ((x_i + y_i) mod base) * base**(s-1-i)``; f_k holds iff
    it equals k-1, values in [K, M) are dummy indices, larger values unused.
    """
    base = M if base is None else base
    if K < 1:
        raise ConditionError(f"K >= 1 required, got {K}")
    if M < K:
        raise ConditionError(f"M >= K required, got M={M}, K={K}")
    if base < 2 or symbols_per_side < 1:
        raise ConditionError("base >= 2 and at least one symbol per side required")
    if base**symbols_per_side < M:
        raise ConditionError(
            f"{symbols_per_side} symbol(s) over base {base} cannot express {M} values"
        )
    if base > 10:
        raise ConditionError("base > 10 has no single-digit labels")
    s = symbols_per_side
    inputs = [_digits(v, base, s) for v in range(base**s)]
    label = lambda p, digs: p + "".join(map(str, digs))  # noqa: E731
    satisfied: list[set[Pair]] = [set() for _ in range(K)]
    dummy: dict[Pair, int] = {}
    for xd in inputs:
        for yd in inputs:
            value = 0
            for a, b in zip(xd, yd):
                value = value * base + (a + b) % base
            pair = (label(prefixes[0], xd), label(prefixes[1], yd))
            if value < K:
                satisfied[value].add(pair)
            elif value < M:
                dummy[pair] = value + 1
    return ConditionTable(
        tuple(label(prefixes[0], d) for d in inputs),
        tuple(label(prefixes[1], d) for d in inputs),
        tuple(frozenset(s) for s in satisfied),
        dummy,
    )


@dataclass(frozen=True)
class CdmsInstance:
    """K secrets of L symbols over GF(q), rho shared randomness symbols,
    public conditions and affine signal maps for Alice (x) and Bob (y)."""

    K: int
    L: int
    q: int
    rho: int
    conditions: ConditionTable
    signals_x: Answers
    signals_y: Answers
    name: str = "cdms"

    def __post_init__(self):
        try:
            object.__setattr__(self, "q", PrimeModulus(self.q))
        except FieldError as exc:
            raise SchemeError(str(exc)) from None
        if self.K < 1 or self.L < 1 or self.rho < 0:
            raise SchemeError("K >= 1, L >= 1 and rho >= 0 required")
        if self.conditions.K != self.K:
            raise SchemeError(f"{self.conditions.K} conditions for {self.K} secrets")
        width = self.K * self.L
        for side, labels, signals in (
            ("x", self.conditions.space_x, self.signals_x),
            ("y", self.conditions.space_y, self.signals_y),
        ):
            signals = {l: tuple(v) for l, v in signals.items()}
            missing = [l for l in labels if l not in signals]
            if missing:
                raise SchemeError(f"unanswered query label: {missing[0]}")
            if set(signals) - set(labels):
                raise SchemeError(f"signal for unknown input on side {side}")
            if len({len(signals[l]) for l in labels}) != 1:
                raise SchemeError(f"unequal signal lengths on side {side}")
            for l in labels:
                for spec in signals[l]:
                    if len(spec.w) != width or len(spec.r) != self.rho:
                        raise SchemeError(f"coefficient arity mismatch for {l}")
            object.__setattr__(self, f"signals_{side}", {l: signals[l] for l in labels})


def _uniform_marginals(strategy: Sequence[Sequence[Pair]]) -> str | None:
    """Reason why some input alone would reveal k, or None."""
    for col, who in ((0, "Alice"), (1, "Bob")):
        laws = [
            {v: Fraction(m, len(pairs)) for v, m in Counter(p[col] for p in pairs).items()}
            for pairs in strategy
        ]
        for k, law in enumerate(laws[1:], start=2):
            if law != laws[0]:
                return f"{who}'s input distribution differs between k=1 and k={k}"
    return None


def spir_from_cdms(
    c: CdmsInstance, strategy: Sequence[Iterable[Pair]] | None = None, name: str | None = None
) -> Scheme:
    """Read a CDMS instance as a two-database SPIR scheme.

    Alice and Bob become databases 1 and 2, Carol's inputs become queries,
    signals become answers and secrets become messages. ``strategy[k-1]``
    lists the pairs Carol draws from (uniformly) to learn secret k; by
    default every pair satisfying f_k.
    """
    if c.K < 2:
        raise SchemeError(f"K >= 2 required for SPIR, got {c.K}")
    if strategy is None:
        strategy = [sorted(s) for s in c.conditions.satisfied]
    strategy = [list(map(tuple, ps)) for ps in strategy]
    if len(strategy) != c.K:
        raise SchemeError(f"strategy covers {len(strategy)} indices, K = {c.K}")
    for k, pairs in enumerate(strategy, start=1):
        for x, y in pairs:
            if not c.conditions.holds(k, x, y):
                raise ConditionError(f"pair does not satisfy f_{k}: {x}:{y}")
    leak = _uniform_marginals(strategy)
    if leak:
        raise ConditionError(f"strategy leaks the index: {leak}")
    qs = QueryStrategy(c.conditions.space_x, c.conditions.space_y, tuple(map(tuple, strategy)))
    return Scheme(
        MessageSpec(c.K, c.L, c.q), c.rho, qs, c.signals_x, c.signals_y, name or c.name
    )


def conditions_from_scheme(s: Scheme) -> ConditionTable:
    """f_k(x, y) = 1 iff (x, y) is one of the scheme's pairs for index k."""
    return ConditionTable(
        s.strategy.space_x, s.strategy.space_y, tuple(frozenset(p) for p in s.strategy.pairs)
    )


def cdms_from_scheme(s: Scheme) -> CdmsInstance:
    return CdmsInstance(
        s.K, s.msg.L, s.q, s.rho, conditions_from_scheme(s), s.answers_x, s.answers_y, s.name
    )


# -- CDMS-side verification ----------------------------------------------------


def _signal_distribution(c: CdmsInstance, x: str, y: str) -> JointDistribution:
    """Joint law of (S1..SK, AX, BY) at fixed inputs, secrets and randomness uniform."""
    q, L = int(c.q), c.L
    sx, sy = c.signals_x[x], c.signals_y[y]
    rows = []
    for S in itertools.product(range(q), repeat=c.K * c.L):
        secrets = [S[j * L:(j + 1) * L] for j in range(c.K)]
        codes = [sum(v * q**i for i, v in enumerate(reversed(s))) for s in secrets]
        for R in itertools.product(range(q), repeat=c.rho):
            values = S + R
            ax = [(sp.c + sum(a * v for a, v in zip(sp.w + sp.r, values))) % q for sp in sx]
            by = [(sp.c + sum(a * v for a, v in zip(sp.w + sp.r, values))) % q for sp in sy]
            rows.append(codes + [_pack(ax, q), _pack(by, q)])
    names = [f"S{j}" for j in range(1, c.K + 1)] + ["AX", "BY"]
    return JointDistribution.from_rows(names, rows)


def _pack(symbols: Sequence[int], q: int) -> int:
    code = 0
    for v in symbols:
        code = code * q + v
    return code


def _input_pairs(c: CdmsInstance, pairs: Iterable[Pair] | None) -> list[Pair]:
    if pairs is None:
        return [(x, y) for x in c.conditions.space_x for y in c.conditions.space_y]
    return list(map(tuple, pairs))


def check_validity(c: CdmsInstance, pairs: Iterable[Pair] | None = None) -> CheckResult:
    """Secret k is a function of the signals whenever f_k(x, y) = 1.

    ``pairs`` limits the inputs inspected (default: all of them).
    """
    for x, y in _input_pairs(c, pairs):
        k = c.conditions.condition_at(x, y)
        if k is None:
            continue
        w = find_nondeterminism(_signal_distribution(c, x, y), [f"S{k}"], ["AX", "BY"])
        if w:
            return CheckResult(False, f"inputs {x}:{y}, f_{k}=1: {w}")
    return CheckResult(True)


def check_security(
    c: CdmsInstance, pairs: Iterable[Pair] | None = None, joint: bool = True
) -> CheckResult:
    """Secrets whose condition fails are independent of the signals.

    With ``joint`` the undisclosed secrets must be independent of the
    signals as a group (the form that matches database privacy); otherwise
    each undisclosed secret is checked on its own.
    """
    for x, y in _input_pairs(c, pairs):
        k = c.conditions.condition_at(x, y)
        hidden = [f"S{j}" for j in range(1, c.K + 1) if j != k]
        if not hidden:
            continue
        d = _signal_distribution(c, x, y)
        groups = [hidden] if joint else [[h] for h in hidden]
        for g in groups:
            w = find_dependence(d, g, ["AX", "BY"])
            if w:
                return CheckResult(False, f"inputs {x}:{y}: {w}")
    return CheckResult(True)


# -- document format ---------------------------------------------------------


def emit_cdms(c: CdmsInstance) -> str:
    ct = c.conditions
    lines = emit_common(CDMS_HEADER, c.name, c.K, c.L, int(c.q), c.rho, ct.space_x, ct.space_y)
    xi = {l: i for i, l in enumerate(ct.space_x)}
    yi = {l: i for i, l in enumerate(ct.space_y)}
    order = lambda p: (xi[p[0]], yi[p[1]])  # noqa: E731
    for k, pairs in enumerate(ct.satisfied, start=1):
        lines.append(f"condition {k} " + " ".join(f"{x}:{y}" for x, y in sorted(pairs, key=order)))
    by_dummy: dict[int, list[Pair]] = {}
    for p, j in ct.dummy.items():
        by_dummy.setdefault(j, []).append(p)
    for j in sorted(by_dummy):
        lines.append(f"dummy {j} " + " ".join(f"{x}:{y}" for x, y in sorted(by_dummy[j], key=order)))
    lines.extend(emit_answers(c.signals_x, c.signals_y))
    return "\n".join(lines) + "\n"


def parse_cdms(text: str) -> CdmsInstance:
    records = list(iter_records(text))
    read_header(records, CDMS_HEADER)
    conds: list = []
    dummies: list = []
    common = parse_common(records, {"condition": conds, "dummy": dummies})
    dummy = {}
    for rec, j, pairs in dummies:
        for p in pairs:
            dummy[p] = j
    try:
        table = ConditionTable(
            common["space_x"],
            common["space_y"],
            tuple(frozenset(p) for p in indexed_pairs(conds, common["K"], "condition")),
            dummy,
        )
        return CdmsInstance(
            common["K"],
            common["L"],
            common["q"],
            common["rho"],
            table,
            common["answers_x"],
            common["answers_y"],
            common["name"],
        )
    except (SchemeError, ConditionError) as exc:
        raise FormatError(str(exc)) from None
