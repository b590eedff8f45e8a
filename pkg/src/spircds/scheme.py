"""Two-database SPIR schemes: data model, costs and the text document format.

A scheme fixes the field, the message set, the number of common-randomness
symbols, the user's query strategy (a uniform choice of a query pair for
each desired index) and an affine answer map per query label on each side.

Document format (one record per line, ``#`` starts a comment)::

    spir-scheme 1
    name k2_u2
    modulus 2
    messages 2
    length 1
    randomness 1
    labels.x A0 A1
    labels.y B0 B1
    pairs 1 A0:B0 A1:B1
    pairs 2 A0:B1 A1:B0
    answer.x A0 0 0 | 1 | 0
    ...

``answer.x LABEL w... | r... | c`` is one output symbol of database 1's
answer to LABEL: K*L message coefficients (message-major, ``W_j`` symbol
``l`` at position ``(j-1)*L + (l-1)``), rho randomness coefficients and a
constant. Lines for the same label appear in output-symbol order.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np

from .field import FieldElement, FieldError, PrimeModulus, eval_affine

SCHEME_HEADER = "spir-scheme"
FORMAT_VERSION = "1"

Pair = tuple[str, str]


class SchemeError(ValueError):
    """A scheme violates one of its structural invariants."""


class FormatError(ValueError):
    """A document could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class MessageSpec:
    K: int
    L: int = 1
    q: PrimeModulus = PrimeModulus(2)

    def __post_init__(self):
        try:
            object.__setattr__(self, "q", PrimeModulus(self.q))
        except FieldError as exc:
            raise SchemeError(str(exc)) from None
        if self.K < 2:
            raise SchemeError(f"K >= 2 required, got {self.K}")
        if self.L < 1:
            raise SchemeError(f"L >= 1 required, got {self.L}")

    @property
    def width(self) -> int:
        """Number of message symbols, K*L."""
        return self.K * self.L

    def message_index(self, j: int, l: int = 1) -> int:
        return (j - 1) * self.L + (l - 1)


def _check_labels(labels: Sequence[str], side: str) -> None:
    if not labels:
        raise SchemeError(f"empty query space for database {side}")
    dup = [l for l, n in Counter(labels).items() if n > 1]
    if dup:
        raise SchemeError(f"duplicate query label: {dup[0]}")
    for l in labels:
        if not l or re.search(r"[\s:|#]", l):
            raise SchemeError(f"invalid query label: {l!r}")


@dataclass(frozen=True)
class QueryStrategy:
    """Query pairs per desired index; ``pairs[k-1]`` serves message ``k``.

    Pairs are stored in canonical order (by label position), so two
    strategies listing the same sets compare equal.
    """

    space_x: tuple[str, ...]
    space_y: tuple[str, ...]
    pairs: tuple[tuple[Pair, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "space_x", tuple(self.space_x))
        object.__setattr__(self, "space_y", tuple(self.space_y))
        _check_labels(self.space_x, "1")
        _check_labels(self.space_y, "2")
        if set(self.space_x) & set(self.space_y):
            raise SchemeError("query labels must differ between the two databases")
        xi = {l: i for i, l in enumerate(self.space_x)}
        yi = {l: i for i, l in enumerate(self.space_y)}
        canon = []
        for k, ps in enumerate(self.pairs, start=1):
            ps = [tuple(p) for p in ps]
            if not ps:
                raise SchemeError(f"empty pairs[{k}]")
            for x, y in ps:
                if x not in xi or y not in yi:
                    raise SchemeError(f"unknown query label in pairs[{k}]: {x}:{y}")
            if len(set(ps)) != len(ps):
                raise SchemeError(f"duplicate pair in pairs[{k}]")
            for side, col in (("x", 0), ("y", 1)):
                counts = set(Counter(p[col] for p in ps).values())
                if len(counts) > 1:
                    raise SchemeError(
                        f"{side}-labels of pairs[{k}] are not uniform over their support"
                    )
            canon.append(tuple(sorted(ps, key=lambda p: (xi[p[0]], yi[p[1]]))))
        object.__setattr__(self, "pairs", tuple(canon))

    @property
    def K(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class AffineAnswerSpec:
    """One answer symbol: ``c + w . W + r . R`` over GF(q)."""

    w: tuple[int, ...]
    r: tuple[int, ...] = ()
    c: int = 0

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(v) for v in self.w))
        object.__setattr__(self, "r", tuple(int(v) for v in self.r))
        object.__setattr__(self, "c", int(self.c))

    def evaluate(self, W: Sequence[int], R: Sequence[int], q: int) -> FieldElement:
        fe = lambda v: FieldElement(int(v) % q, PrimeModulus(q))  # noqa: E731
        coeffs = [fe(v) for v in self.w + self.r]
        values = [fe(v) for v in tuple(W) + tuple(R)]
        return eval_affine(coeffs, values, fe(self.c))


Answers = Mapping[str, tuple[AffineAnswerSpec, ...]]


@dataclass(frozen=True)
class Scheme:
    msg: MessageSpec
    rho: int
    strategy: QueryStrategy
    answers_x: Answers
    answers_y: Answers
    name: str = "scheme"

    def __post_init__(self):
        if self.rho < 0:
            raise SchemeError(f"rho >= 0 required, got {self.rho}")
        if self.strategy.K != self.msg.K:
            raise SchemeError(
                f"strategy covers {self.strategy.K} indices but K = {self.msg.K}"
            )
        if not self.name or re.search(r"\s", self.name):
            raise SchemeError(f"invalid scheme name: {self.name!r}")
        for side, labels, answers in (
            ("x", self.strategy.space_x, self.answers_x),
            ("y", self.strategy.space_y, self.answers_y),
        ):
            answers = {l: tuple(v) for l, v in answers.items()}
            missing = [l for l in labels if l not in answers]
            if missing:
                raise SchemeError(f"unanswered query label: {missing[0]}")
            extra = [l for l in answers if l not in labels]
            if extra:
                raise SchemeError(f"answer for unknown query label: {extra[0]}")
            lengths = {len(answers[l]) for l in labels}
            if len(lengths) != 1:
                raise SchemeError(f"unequal answer lengths on side {side}: {sorted(lengths)}")
            for l in labels:
                for spec in answers[l]:
                    if len(spec.w) != self.msg.width or len(spec.r) != self.rho:
                        raise SchemeError(
                            f"coefficient arity mismatch for {l}: expected "
                            f"{self.msg.width} message and {self.rho} randomness coefficients"
                        )
                    for v in spec.w + spec.r + (spec.c,):
                        if not 0 <= v < self.msg.q:
                            raise SchemeError(f"coefficient {v} out of range for {l}")
            ordered = {l: answers[l] for l in labels}
            object.__setattr__(self, f"answers_{side}", ordered)

    @property
    def K(self) -> int:
        return self.msg.K

    @property
    def q(self) -> int:
        return int(self.msg.q)

    @property
    def answer_lengths(self) -> tuple[int, int]:
        st = self.strategy
        return len(self.answers_x[st.space_x[0]]), len(self.answers_y[st.space_y[0]])

    def answer_specs(self, side: int, label: str) -> tuple[AffineAnswerSpec, ...]:
        answers = self.answers_x if side == 1 else self.answers_y
        if label not in answers:
            raise SchemeError(f"unknown query label for database {side}: {label}")
        return answers[label]

    @cached_property
    def _matrices(self) -> dict:
        out = {}
        for side, answers in ((1, self.answers_x), (2, self.answers_y)):
            for label, specs in answers.items():
                out[side, label] = (
                    np.array([s.w for s in specs], dtype=np.int64).reshape(len(specs), -1),
                    np.array([s.r for s in specs], dtype=np.int64).reshape(len(specs), -1),
                    np.array([s.c for s in specs], dtype=np.int64),
                )
        return out

    def matrices(self, side: int, label: str):
        """(message coefficients, randomness coefficients, constants) as arrays."""
        self.answer_specs(side, label)
        return self._matrices[side, label]


def evaluate_answers(
    s: Scheme, x: str, y: str, W: Sequence[int], R: Sequence[int]
) -> tuple[tuple[FieldElement, ...], tuple[FieldElement, ...]]:
    """Evaluate both databases' answers for query pair (x, y)."""
    if len(W) != s.msg.width:
        raise SchemeError(f"expected {s.msg.width} message symbols, got {len(W)}")
    if len(R) != s.rho:
        raise SchemeError(f"expected {s.rho} randomness symbols, got {len(R)}")
    ax = tuple(spec.evaluate(W, R, s.q) for spec in s.answer_specs(1, x))
    ay = tuple(spec.evaluate(W, R, s.q) for spec in s.answer_specs(2, y))
    return ax, ay


def upload_cost(s: Scheme) -> float:
    return math.log2(len(s.strategy.space_x)) + math.log2(len(s.strategy.space_y))


def download_cost(s: Scheme) -> float:
    lx, ly = s.answer_lengths
    return (lx + ly) * math.log2(s.q)


def randomness_cost(s: Scheme) -> float:
    return s.rho * math.log2(s.q)


def relabel(s: Scheme, map_x: Mapping[str, str], map_y: Mapping[str, str]) -> Scheme:
    """Rename query labels; labels absent from a mapping keep their name."""
    mx = lambda l: map_x.get(l, l)  # noqa: E731
    my = lambda l: map_y.get(l, l)  # noqa: E731
    st = s.strategy
    strategy = QueryStrategy(
        tuple(map(mx, st.space_x)),
        tuple(map(my, st.space_y)),
        tuple(tuple((mx(x), my(y)) for x, y in ps) for ps in st.pairs),
    )
    return Scheme(
        s.msg,
        s.rho,
        strategy,
        {mx(l): v for l, v in s.answers_x.items()},
        {my(l): v for l, v in s.answers_y.items()},
        s.name,
    )


_TERM = re.compile(r"^(?:(\d+)\*)?(?:([WS])(\d+)(?:\.(\d+))?|(\d+))$")


def parse_affine(expr: str, msg: MessageSpec, rho: int) -> AffineAnswerSpec:
    """Parse a sum such as ``"W1+W2+S1"`` into an answer symbol.

    ``Wj`` is message j (``Wj.l`` its l-th symbol when L > 1), ``Si`` the
    i-th randomness symbol, bare integers are constants, ``2*W1`` scales and
    ``-`` negates a term.
    """
    q = int(msg.q)
    w, r, c = [0] * msg.width, [0] * rho, 0
    text = expr.replace(" ", "")
    if not text:
        raise FormatError(f"empty expression {expr!r}")
    for sign, term in re.findall(r"([+-]?)([^+-]+)", text):
        m = _TERM.match(term)
        if not m:
            raise FormatError(f"bad term {term!r} in {expr!r}")
        coef = int(m.group(1) or 1) * (-1 if sign == "-" else 1)
        if m.group(5) is not None:
            c = (c + coef * int(m.group(5))) % q
            continue
        kind, idx = m.group(2), int(m.group(3))
        if kind == "W":
            sym = int(m.group(4) or 1)
            if not (1 <= idx <= msg.K and 1 <= sym <= msg.L):
                raise FormatError(f"message term out of range: {term}")
            i = msg.message_index(idx, sym)
            w[i] = (w[i] + coef) % q
        else:
            if m.group(4) is not None or not 1 <= idx <= rho:
                raise FormatError(f"randomness term out of range: {term}")
            r[idx - 1] = (r[idx - 1] + coef) % q
    return AffineAnswerSpec(tuple(w), tuple(r), c)


def format_affine(spec: AffineAnswerSpec, msg: MessageSpec) -> str:
    """Inverse of :func:`parse_affine`, for display."""
    terms = []
    for j in range(1, msg.K + 1):
        for l in range(1, msg.L + 1):
            v = spec.w[msg.message_index(j, l)]
            if v:
                name = f"W{j}" if msg.L == 1 else f"W{j}.{l}"
                terms.append(name if v == 1 else f"{v}*{name}")
    for i, v in enumerate(spec.r, start=1):
        if v:
            terms.append(f"S{i}" if v == 1 else f"{v}*S{i}")
    if spec.c or not terms:
        terms.append(str(spec.c))
    return "+".join(terms)


# -- document format ---------------------------------------------------------


@dataclass
class Record:
    line: int
    key: str
    args: list[str] = field(default_factory=list)


def iter_records(text: str) -> Iterator[Record]:
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            key, *args = body.split()
            yield Record(n, key, args)


def read_header(records: list[Record], expected: str) -> None:
    if not records or records[0].key != expected:
        raise FormatError(f"expected header {expected!r}", records[0].line if records else 1)
    if records[0].args != [FORMAT_VERSION]:
        raise FormatError(f"unsupported version {records[0].args}", records[0].line)


def single_int(rec: Record) -> int:
    if len(rec.args) != 1:
        raise FormatError(f"{rec.key}: expected one value", rec.line)
    try:
        return int(rec.args[0])
    except ValueError:
        raise FormatError(f"{rec.key}: not an integer: {rec.args[0]!r}", rec.line) from None


def parse_pair_list(rec: Record, tokens: list[str]) -> list[Pair]:
    out = []
    for tok in tokens:
        x, sep, y = tok.partition(":")
        if not sep or not x or not y:
            raise FormatError(f"{rec.key}: bad pair {tok!r} (expected X:Y)", rec.line)
        out.append((x, y))
    return out


def parse_answer_record(rec: Record) -> tuple[str, AffineAnswerSpec]:
    if not rec.args:
        raise FormatError(f"{rec.key}: missing label", rec.line)
    label, rest = rec.args[0], " ".join(rec.args[1:])
    parts = rest.split("|")
    if len(parts) != 3:
        raise FormatError(
            f"{rec.key} {label}: expected 'w... | r... | c' coefficient groups", rec.line
        )
    try:
        w, r, c = (tuple(int(t) for t in p.split()) for p in parts)
    except ValueError:
        raise FormatError(f"{rec.key} {label}: non-integer coefficient", rec.line) from None
    if len(c) != 1:
        raise FormatError(f"{rec.key} {label}: expected one constant", rec.line)
    return label, AffineAnswerSpec(w, r, c[0])


def format_answer_record(key: str, label: str, spec: AffineAnswerSpec) -> str:
    w = " ".join(map(str, spec.w))
    r = " ".join(map(str, spec.r))
    return f"{key} {label} {w} | {r} | {spec.c}".replace("  ", " ")


class _Fields:
    """Collects scalar records, rejecting duplicates and reporting gaps."""

    def __init__(self):
        self.values: dict[str, tuple[int, list[str]]] = {}

    def put(self, rec: Record) -> None:
        if rec.key in self.values:
            raise FormatError(f"duplicate field {rec.key!r}", rec.line)
        self.values[rec.key] = (rec.line, rec.args)

    def int(self, key: str) -> int:
        if key not in self.values:
            raise FormatError(f"missing field {key!r}")
        line, args = self.values[key]
        return single_int(Record(line, key, args))

    def words(self, key: str) -> list[str]:
        if key not in self.values:
            raise FormatError(f"missing field {key!r}")
        return self.values[key][1]

    def line(self, key: str) -> int | None:
        return self.values.get(key, (None,))[0]


SCALAR_KEYS = ("name", "modulus", "messages", "length", "randomness", "labels.x", "labels.y")


def parse_common(records: list[Record], extra: dict) -> dict:
    """Parse the records shared by scheme and CDMS documents.

    ``extra`` maps additional indexed-record keys (``pairs``, ``condition``...)
    to lists that receive ``(record, index, pairs)`` tuples.
    """
    fields = _Fields()
    answers: dict[int, dict[str, list[AffineAnswerSpec]]] = {1: {}, 2: {}}
    for rec in records[1:]:
        if rec.key in SCALAR_KEYS:
            fields.put(rec)
        elif rec.key in ("answer.x", "answer.y"):
            label, spec = parse_answer_record(rec)
            side = 1 if rec.key == "answer.x" else 2
            answers[side].setdefault(label, []).append(spec)
        elif rec.key in extra:
            if not rec.args:
                raise FormatError(f"{rec.key}: missing index", rec.line)
            idx = single_int(Record(rec.line, rec.key, rec.args[:1]))
            extra[rec.key].append((rec, idx, parse_pair_list(rec, rec.args[1:])))
        else:
            raise FormatError(f"unknown field {rec.key!r}", rec.line)
    name = fields.words("name")
    if len(name) != 1:
        raise FormatError("name: expected one word", fields.line("name"))
    q = fields.int("modulus")
    try:
        PrimeModulus(q)
    except FieldError as exc:
        raise FormatError(str(exc), fields.line("modulus")) from None
    return dict(
        name=name[0],
        K=fields.int("messages"),
        L=fields.int("length"),
        q=q,
        rho=fields.int("randomness"),
        space_x=tuple(fields.words("labels.x")),
        space_y=tuple(fields.words("labels.y")),
        answers_x={l: tuple(v) for l, v in answers[1].items()},
        answers_y={l: tuple(v) for l, v in answers[2].items()},
    )


def emit_common(
    header: str, name: str, K: int, L: int, q: int, rho: int, space_x, space_y
) -> list[str]:
    return [
        f"{header} {FORMAT_VERSION}",
        f"name {name}",
        f"modulus {int(q)}",
        f"messages {K}",
        f"length {L}",
        f"randomness {rho}",
        "labels.x " + " ".join(space_x),
        "labels.y " + " ".join(space_y),
    ]


def emit_answers(answers_x: Answers, answers_y: Answers) -> list[str]:
    lines = []
    for key, answers in (("answer.x", answers_x), ("answer.y", answers_y)):
        for label, specs in answers.items():
            lines.extend(format_answer_record(key, label, spec) for spec in specs)
    return lines


def indexed_pairs(entries, count: int, key: str) -> tuple[tuple[Pair, ...], ...]:
    """Order ``(record, index, pairs)`` entries into a 1-based dense tuple."""
    got: dict[int, list[Pair]] = {}
    for rec, idx, pairs in entries:
        if not 1 <= idx <= count:
            raise FormatError(f"{key} index {idx} outside 1..{count}", rec.line)
        if idx in got:
            raise FormatError(f"duplicate {key} {idx}", rec.line)
        got[idx] = pairs
    missing = [k for k in range(1, count + 1) if k not in got]
    if missing:
        raise FormatError(f"missing {key} for index {missing[0]}")
    return tuple(tuple(got[k]) for k in range(1, count + 1))


def emit_scheme(s: Scheme) -> str:
    st = s.strategy
    lines = emit_common(
        SCHEME_HEADER, s.name, s.K, s.msg.L, s.q, s.rho, st.space_x, st.space_y
    )
    for k, ps in enumerate(st.pairs, start=1):
        lines.append(f"pairs {k} " + " ".join(f"{x}:{y}" for x, y in ps))
    lines.extend(emit_answers(s.answers_x, s.answers_y))
    return "\n".join(lines) + "\n"


def parse_scheme(text: str) -> Scheme:
    records = list(iter_records(text))
    read_header(records, SCHEME_HEADER)
    pairs: list = []
    common = parse_common(records, {"pairs": pairs})
    try:
        msg = MessageSpec(common["K"], common["L"], common["q"])
        strategy = QueryStrategy(
            common["space_x"],
            common["space_y"],
            indexed_pairs(pairs, msg.K, "pairs"),
        )
        return Scheme(
            msg,
            common["rho"],
            strategy,
            common["answers_x"],
            common["answers_y"],
            common["name"],
        )
    except SchemeError as exc:
        raise FormatError(str(exc)) from None
