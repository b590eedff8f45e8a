"""Exhaustive verification of two-database SPIR schemes.

For each desired index k the user's strategy pair F, the messages W and the
common randomness R are drawn independently and uniformly, and the answers
are computed from the scheme. The resulting finite experiment is tabulated
exactly and the three SPIR constraints are read off it:

* reliability: W_k is a function of (F, A1, A2);
* user privacy: for each database n, (Qn, An, W, R) has the same law for
  every k;
* database privacy: the other messages are independent of (F, A1, A2).

Two exact routes build the experiment. ``"enumerate"`` lists every
(F, W, R) outcome. ``"integrate"`` exploits the affine answer maps: given
(F, W) the answer vector is uniform on a coset of the image of the
randomness coefficients, so R is summed out exactly without being listed.
R is then absent from the table, and user privacy is decided on the query
marginal, which is equivalent because answers are a deterministic function
of (Qn, W, R) and (W, R) is independent of the query.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ensemble import (
    JointDistribution,
    distributions_equal,
    find_dependence,
    find_nondeterminism,
    first_difference,
    marginal,
)
from .scheme import (
    FORMAT_VERSION,
    FormatError,
    Scheme,
    download_cost,
    iter_records,
    randomness_cost,
    read_header,
    upload_cost,
)

GUARD = 10**7
# literal enumeration is used up to this many outcomes per index
LITERAL_LIMIT = 2**18
REPORT_HEADER = "spir-report"


class GuardError(RuntimeError):
    """The exact experiment would exceed the enumeration guard."""

    def __init__(self, size: int, guard: int = GUARD):
        self.size = size
        super().__init__(f"experiment has {size} outcomes, above the guard of {guard}")


class VerificationError(ValueError):
    """A construction's input or output failed verification."""


def _grid(q: int, width: int) -> np.ndarray:
    """All vectors of GF(q)^width, first coordinate most significant."""
    if width == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices((q,) * width).reshape(width, -1).T.astype(np.int64)


def _codes(vectors: np.ndarray, q: int) -> np.ndarray:
    width = vectors.shape[-1]
    weights = q ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return vectors @ weights


def _vector_decoder(q: int, width: int):
    def decode(code: int) -> str:
        digits = []
        for _ in range(width):
            code, d = divmod(code, q)
            digits.append(d)
        return "(" + ",".join(str(d) for d in reversed(digits)) + ")"

    return decode


def column_space(matrix: np.ndarray, q: int) -> np.ndarray:
    """Basis (as rows) of the span of the columns of ``matrix`` over GF(q)."""
    rows = [list(map(int, col)) for col in matrix.T % q]
    basis: list[list[int]] = []
    pivots: list[int] = []
    for v in rows:
        v = v[:]
        for b, p in zip(basis, pivots):
            if v[p]:
                f = v[p]
                v = [(a - f * c) % q for a, c in zip(v, b)]
        nz = next((i for i, a in enumerate(v) if a), None)
        if nz is None:
            continue
        inv = pow(v[nz], -1, q)
        v = [(a * inv) % q for a in v]
        for i, b in enumerate(basis):
            if b[nz]:
                f = b[nz]
                basis[i] = [(a - f * c) % q for a, c in zip(b, v)]
        basis.append(v)
        pivots.append(nz)
    return np.array(basis, dtype=np.int64).reshape(len(basis), matrix.shape[0])


def variable_names(s: Scheme, with_randomness: bool = True) -> list[str]:
    names = ["F", "Q1", "Q2", "A1", "A2"] + [f"W{j}" for j in range(1, s.K + 1)]
    return names + ["R"] if with_randomness else names


def experiment_size(s: Scheme, k: int, method: str = "enumerate") -> int:
    pairs = s.strategy.pairs[k - 1]
    nw = s.q ** s.msg.width
    if method == "enumerate":
        return len(pairs) * nw * s.q**s.rho
    size = 0
    for x, y in pairs:
        cr = np.vstack([s.matrices(1, x)[1], s.matrices(2, y)[1]])
        size += nw * s.q ** column_space(cr, s.q).shape[0]
    return size


def choose_method(s: Scheme) -> str:
    worst = max(experiment_size(s, k) for k in range(1, s.K + 1))
    return "enumerate" if worst <= LITERAL_LIMIT else "integrate"


def build_experiment(
    s: Scheme, k: int, method: str = "enumerate", guard: int = GUARD
) -> JointDistribution:
    """Exact joint law of (F, Q1, Q2, A1, A2, W1..WK[, R]) when retrieving W_k."""
    if not 1 <= k <= s.K:
        raise ValueError(f"index {k} outside 1..{s.K}")
    if method not in ("enumerate", "integrate"):
        raise ValueError(f"unknown method {method!r}")
    size = experiment_size(s, k, method)
    if size > guard:
        raise GuardError(size, guard)

    q, L = s.q, s.msg.L
    st = s.strategy
    xi = {l: i for i, l in enumerate(st.space_x)}
    yi = {l: i for i, l in enumerate(st.space_y)}
    ny = len(st.space_y)
    lx, ly = s.answer_lengths
    W = _grid(q, s.msg.width)
    wcodes = np.stack(
        [_codes(W[:, j * L:(j + 1) * L], q) for j in range(s.K)], axis=1
    )
    R = _grid(q, s.rho) if method == "enumerate" else None
    blocks, weights = [], []
    for x, y in st.pairs[k - 1]:
        mx, my = s.matrices(1, x), s.matrices(2, y)
        cw = np.vstack([mx[0], my[0]])
        cr = np.vstack([mx[1], my[1]])
        const = np.concatenate([mx[2], my[2]])
        base = W @ cw.T + const
        if method == "enumerate":
            noise = R @ cr.T
            weight = 1
        else:
            basis = column_space(cr, q)
            noise = _grid(q, basis.shape[0]) @ basis
            weight = q ** (s.rho - basis.shape[0])
        ans = (base[:, None, :] + noise[None, :, :]) % q
        nw, nn = ans.shape[0], ans.shape[1]
        ans = ans.reshape(nw * nn, lx + ly)
        n = ans.shape[0]
        cols = [
            np.full(n, xi[x] * ny + yi[y]),
            np.full(n, xi[x]),
            np.full(n, yi[y]),
            _codes(ans[:, :lx], q),
            _codes(ans[:, lx:], q),
            np.repeat(wcodes, nn, axis=0),
        ]
        if method == "enumerate":
            cols.append(np.tile(_codes(R, q), nw))
        blocks.append(np.column_stack(cols))
        weights.append(np.full(n, weight, dtype=np.int64))

    names = variable_names(s, method == "enumerate")
    decoders = {
        "F": lambda c: f"{st.space_x[c // ny]}:{st.space_y[c % ny]}",
        "Q1": lambda c: st.space_x[c],
        "Q2": lambda c: st.space_y[c],
        "A1": _vector_decoder(q, lx),
        "A2": _vector_decoder(q, ly),
        "R": _vector_decoder(q, s.rho),
    }
    decoders.update({f"W{j}": _vector_decoder(q, L) for j in range(1, s.K + 1)})
    return JointDistribution.from_rows(
        names, np.vstack(blocks), np.concatenate(weights), decoders
    )


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    witness: str | None = None

    def __post_init__(self):
        if self.passed != (self.witness is None):
            raise ValueError("a witness is present exactly when the check failed")
        if self.witness is not None:
            object.__setattr__(self, "witness", " ".join(self.witness.split()))

    def __bool__(self) -> bool:
        return self.passed

    @classmethod
    def from_witness(cls, witness: str | None) -> "CheckResult":
        return cls(witness is None, witness)


def _experiments(s: Scheme, method: str = "auto") -> list[JointDistribution]:
    if method == "auto":
        method = choose_method(s)
    return [build_experiment(s, k, method) for k in range(1, s.K + 1)]


def check_reliability(
    s: Scheme, experiments: Sequence[JointDistribution] | None = None
) -> CheckResult:
    experiments = experiments or _experiments(s)
    for k, d in enumerate(experiments, start=1):
        w = find_nondeterminism(d, [f"W{k}"], ["F", "A1", "A2"])
        if w:
            return CheckResult(False, f"k={k}: {w}")
    return CheckResult(True)


def check_user_privacy(
    s: Scheme, experiments: Sequence[JointDistribution] | None = None
) -> tuple[CheckResult, CheckResult]:
    experiments = experiments or _experiments(s)
    messages = [f"W{j}" for j in range(1, s.K + 1)]
    out = []
    for n in (1, 2):
        if "R" in experiments[0].variables:
            keep = [f"Q{n}", f"A{n}", *messages, "R"]
        else:
            keep = [f"Q{n}"]
        ref = marginal(experiments[0], keep)
        result = CheckResult(True)
        for k, d in enumerate(experiments[1:], start=2):
            other = marginal(d, keep)
            if not distributions_equal(ref, other):
                diff = first_difference(ref, other)
                result = CheckResult(False, f"k=1 vs k={k}: {diff}")
                break
        out.append(result)
    return out[0], out[1]


def check_database_privacy(
    s: Scheme, experiments: Sequence[JointDistribution] | None = None
) -> CheckResult:
    experiments = experiments or _experiments(s)
    for k, d in enumerate(experiments, start=1):
        others = [f"W{j}" for j in range(1, s.K + 1) if j != k]
        w = find_dependence(d, others, ["F", "A1", "A2"])
        if w:
            return CheckResult(False, f"k={k}: {w}")
    return CheckResult(True)


@dataclass(frozen=True)
class VerificationReport:
    scheme_name: str
    reliability: CheckResult
    user_privacy: tuple[CheckResult, CheckResult]
    database_privacy: CheckResult
    upload_bits: float
    download_bits: float
    randomness_bits: float

    @property
    def passed(self) -> bool:
        return bool(
            self.reliability and all(self.user_privacy) and self.database_privacy
        )

    @property
    def total_bits(self) -> float:
        return self.upload_bits + self.download_bits


def full_report(s: Scheme, method: str = "auto") -> VerificationReport:
    experiments = _experiments(s, method)
    return VerificationReport(
        s.name,
        check_reliability(s, experiments),
        check_user_privacy(s, experiments),
        check_database_privacy(s, experiments),
        upload_cost(s),
        download_cost(s),
        randomness_cost(s),
    )


def require_valid(s: Scheme, what: str) -> VerificationReport:
    report = full_report(s)
    if not report.passed:
        raise VerificationError(f"{what} failed verification:\n{format_report(report)}")
    return report


# -- brute-force decoding oracle ---------------------------------------------


def _eval_int(spec, values: Sequence[int], q: int) -> int:
    return (spec.c + sum(a * v for a, v in zip(spec.w + spec.r, values))) % q


def decode_table(s: Scheme, k: int) -> dict[tuple, set[tuple[int, ...]]]:
    """Map (x, y, answer1, answer2) to every W_k value consistent with it.

    Built by looping over all messages and randomness with plain integer
    arithmetic, independently of :func:`build_experiment`. The scheme is
    reliable for index k iff every entry holds a single value.
    """
    q, L = s.q, s.msg.L
    table: dict[tuple, set[tuple[int, ...]]] = {}
    lo = s.msg.message_index(k, 1)
    for x, y in s.strategy.pairs[k - 1]:
        sx, sy = s.answer_specs(1, x), s.answer_specs(2, y)
        for W in itertools.product(range(q), repeat=s.msg.width):
            for R in itertools.product(range(q), repeat=s.rho):
                values = W + R
                a1 = tuple(_eval_int(sp, values, q) for sp in sx)
                a2 = tuple(_eval_int(sp, values, q) for sp in sy)
                table.setdefault((x, y, a1, a2), set()).add(W[lo:lo + L])
    return table


def reliable_by_decode_table(s: Scheme) -> bool:
    return all(
        len(v) == 1 for k in range(1, s.K + 1) for v in decode_table(s, k).values()
    )


# -- report documents --------------------------------------------------------


def _status(c: CheckResult) -> str:
    return "pass" if c.passed else "FAIL"


def _num(v: float) -> str:
    return f"{v:.6f}".rstrip("0").rstrip(".")


def format_report(r: VerificationReport) -> str:
    rows = [
        ("scheme", r.scheme_name, None),
        ("reliability", _status(r.reliability), r.reliability.witness),
        ("user privacy (database 1)", _status(r.user_privacy[0]), r.user_privacy[0].witness),
        ("user privacy (database 2)", _status(r.user_privacy[1]), r.user_privacy[1].witness),
        ("database privacy", _status(r.database_privacy), r.database_privacy.witness),
        ("upload", f"{_num(r.upload_bits)} bits", None),
        ("download", f"{_num(r.download_bits)} bits", None),
        ("total", f"{_num(r.total_bits)} bits", None),
        ("randomness", f"{_num(r.randomness_bits)} bits", None),
    ]
    lines = []
    for key, value, witness in rows:
        lines.append(f"{key:<27}{value}")
        if witness:
            lines.append(f"  counterexample: {witness}")
    return "\n".join(lines) + "\n"


_CHECKS = ("reliability", "user_privacy.1", "user_privacy.2", "database_privacy")


def emit_report(r: VerificationReport) -> str:
    checks = dict(zip(_CHECKS, (r.reliability, *r.user_privacy, r.database_privacy)))
    lines = [f"{REPORT_HEADER} {FORMAT_VERSION}", f"name {r.scheme_name}"]
    for key, c in checks.items():
        lines.append(f"{key} {'pass' if c.passed else 'fail'}")
    for key, c in checks.items():
        if c.witness:
            lines.append(f"witness.{key} {c.witness}")
    lines += [
        f"upload_bits {r.upload_bits!r}",
        f"download_bits {r.download_bits!r}",
        f"randomness_bits {r.randomness_bits!r}",
    ]
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> VerificationReport:
    records = list(iter_records(text))
    read_header(records, REPORT_HEADER)
    values: dict[str, tuple[int, list[str]]] = {}
    for rec in records[1:]:
        if rec.key in values:
            raise FormatError(f"duplicate field {rec.key!r}", rec.line)
        values[rec.key] = (rec.line, rec.args)

    def get(key: str) -> list[str]:
        if key not in values:
            raise FormatError(f"missing field {key!r}")
        return values[key][1]

    def number(key: str) -> float:
        args = get(key)
        try:
            return float(args[0])
        except (IndexError, ValueError):
            raise FormatError(f"{key}: expected a number", values[key][0]) from None

    checks = []
    for key in _CHECKS:
        verdict = get(key)
        if verdict not in (["pass"], ["fail"]):
            raise FormatError(f"{key}: expected pass or fail", values[key][0])
        witness = values.get(f"witness.{key}")
        if (verdict == ["fail"]) != (witness is not None):
            raise FormatError(f"{key}: witness must accompany exactly a failed check")
        checks.append(CheckResult(verdict == ["pass"], " ".join(witness[1]) if witness else None))
    known = {"name", "upload_bits", "download_bits", "randomness_bits", *_CHECKS}
    known |= {f"witness.{c}" for c in _CHECKS}
    unknown = [k for k in values if k not in known]
    if unknown:
        raise FormatError(f"unknown field {unknown[0]!r}", values[unknown[0]][0])
    return VerificationReport(
        get("name")[0],
        checks[0],
        (checks[1], checks[2]),
        checks[3],
        number("upload_bits"),
        number("download_bits"),
        number("randomness_bits"),
    )

