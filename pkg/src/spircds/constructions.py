"""Concrete schemes and the generic ways of building new ones.

Canonical schemes (all over GF(2) with one-bit messages):

========== === ============ ========== ===========
name        K  upload bits  download   randomness
========== === ============ ========== ===========
k2_u2       2  2            2          1
k3_u2log3   3  2 log2 3     3          2
k3_u4       3  4            2          1
k4_u4       4  4            4          4
========== === ============ ========== ===========

:func:`double_scheme` turns a K=P scheme into a K=2P one at cost
(U + 2, 2D); :func:`repeat_scheme` runs a one-symbol scheme L times side by
side for L-symbol messages.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cdms import ConditionTable, modular_conditions
from .scheme import (
    AffineAnswerSpec,
    MessageSpec,
    QueryStrategy,
    Scheme,
    parse_affine,
)
from .verifier import VerificationError, VerificationReport, full_report, require_valid

CANONICAL_NAMES = ("k2_u2", "k3_u2log3", "k3_u4", "k4_u4")

# (K, M, symbols per side, base, randomness symbols, answers x, answers y)
_CANONICAL = {
    "k2_u2": (
        2, 2, 1, 2, 1,
        {"A0": ["S1"], "A1": ["W1+W2+S1"]},
        {"B0": ["W1+S1"], "B1": ["W2+S1"]},
    ),
    "k3_u2log3": (
        3, 3, 1, 3, 2,
        {
            "A0": ["S1", "S2"],
            "A1": ["W1+W2+S1", "W2+W3+S2"],
            "A2": ["W1+W3+S1", "W1+W2+S2"],
        },
        {"B0": ["W1+S1"], "B1": ["W2+S2"], "B2": ["W3+S1+S2"]},
    ),
    "k3_u4": (
        3, 4, 2, 2, 1,
        {"A00": ["S1"], "A01": ["W1+W2+S1"], "A10": ["W1+W3+S1"], "A11": ["W2+W3+S1"]},
        {"B00": ["W1+S1"], "B01": ["W2+S1"], "B10": ["W3+S1"], "B11": ["W1+W2+W3+S1"]},
    ),
    "k4_u4": (
        4, 4, 2, 2, 4,
        {
            "A00": ["S1", "S3"],
            "A01": ["W1+W2+S1", "W3+W4+S3"],
            "A10": ["S2", "S4"],
            "A11": ["W1+W2+S2", "W3+W4+S4"],
        },
        {
            "B00": ["W1+S1", "W3+S4"],
            "B01": ["W2+S1", "W4+S4"],
            "B10": ["W1+S2", "W3+S3"],
            "B11": ["W2+S2", "W4+S3"],
        },
    ),
}


def _check_name(name: str) -> None:
    if name not in _CANONICAL:
        raise KeyError(f"unknown canonical scheme {name!r}; choose from {', '.join(CANONICAL_NAMES)}")


def canonical_conditions(name: str) -> ConditionTable:
    """The modular condition table behind a canonical scheme's strategy."""
    _check_name(name)
    K, M, sym, base = _CANONICAL[name][:4]
    return modular_conditions(K, M, sym, base)


def canonical_scheme(name: str) -> Scheme:
    _check_name(name)
    K, _, _, _, rho, ax, ay = _CANONICAL[name]
    cond = canonical_conditions(name)
    msg = MessageSpec(K, 1, 2)
    strategy = QueryStrategy(cond.space_x, cond.space_y, tuple(map(tuple, cond.satisfied)))
    parse = lambda exprs: tuple(parse_affine(e, msg, rho) for e in exprs)  # noqa: E731
    return Scheme(
        msg,
        rho,
        strategy,
        {l: parse(e) for l, e in ax.items()},
        {l: parse(e) for l, e in ay.items()},
        name,
    )


def _tag(label: str, bit: int) -> str:
    # first character is the database tag (A/B); the block bit goes right after it
    return f"{label[:1]}{bit}{label[1:]}"


def _embed(
    spec: AffineAnswerSpec, msg_offset: int, width: int, r_offset: int, rho: int
) -> AffineAnswerSpec:
    w = [0] * width
    w[msg_offset:msg_offset + len(spec.w)] = spec.w
    r = [0] * rho
    r[r_offset:r_offset + len(spec.r)] = spec.r
    return AffineAnswerSpec(tuple(w), tuple(r), spec.c)


def double_scheme(s: Scheme, name: str | None = None) -> Scheme:
    """Build a 2P-message scheme from a verified P-message scheme.

    Each query gets a leading block bit. Messages 1..P are served by pairs
    whose block bits agree, messages P+1..2P by pairs whose bits differ.
    Every answer is two copies of the original answer: the first over
    W_1..W_P, the second over W_{P+1}..W_{2P}. Randomness comes in four
    fresh blocks: database 1 with bit b uses blocks (b, 2+b), database 2 with
    bit c uses blocks (c, 3-c), which swaps the second-half order on
    database 2's side. The result is re-verified and rejected if invalid.
    """
    require_valid(s, f"input scheme {s.name!r}")
    P, L, rho = s.K, s.msg.L, s.rho
    msg = MessageSpec(2 * P, L, s.q)
    width, half = msg.width, s.msg.width
    st = s.strategy

    def answers(side: int, labels):
        out = {}
        for label in labels:
            specs = s.answer_specs(side, label)
            for b in (0, 1):
                second = 2 + b if side == 1 else 3 - b
                out[_tag(label, b)] = tuple(
                    _embed(sp, 0, width, b * rho, 4 * rho) for sp in specs
                ) + tuple(_embed(sp, half, width, second * rho, 4 * rho) for sp in specs)
        return out

    pairs = []
    for same in (True, False):
        for ps in st.pairs:
            pairs.append(
                tuple(
                    (_tag(x, b), _tag(y, b if same else 1 - b))
                    for b in (0, 1)
                    for x, y in ps
                )
            )
    strategy = QueryStrategy(
        tuple(_tag(l, b) for b in (0, 1) for l in st.space_x),
        tuple(_tag(l, b) for b in (0, 1) for l in st.space_y),
        tuple(pairs),
    )
    out = Scheme(
        msg,
        4 * rho,
        strategy,
        answers(1, st.space_x),
        answers(2, st.space_y),
        name or f"double_{s.name}",
    )
    report = full_report(out)
    if not report.passed:
        raise VerificationError(f"doubling produced invalid scheme {out.name!r}")
    return out


def repeat_scheme(s: Scheme, L: int, name: str | None = None) -> Scheme:
    """Run a one-symbol scheme on each of L message symbols with fresh randomness.

    The query strategy is unchanged; answers are the L per-symbol answers
    concatenated, so upload stays put while download and randomness scale by L.
    """
    if L < 1:
        raise ValueError(f"L >= 1 required, got {L}")
    if s.msg.L != 1:
        raise ValueError(f"repetition needs one-symbol messages, got L={s.msg.L}")
    if L == 1:
        return s
    require_valid(s, f"input scheme {s.name!r}")
    msg = MessageSpec(s.K, L, s.q)
    rho = L * s.rho

    def spread(spec: AffineAnswerSpec, rep: int) -> AffineAnswerSpec:
        w = [0] * msg.width
        for j in range(1, s.K + 1):
            w[msg.message_index(j, rep + 1)] = spec.w[j - 1]
        r = [0] * rho
        r[rep * s.rho:(rep + 1) * s.rho] = spec.r
        return AffineAnswerSpec(tuple(w), tuple(r), spec.c)

    def answers(side: int, labels):
        return {
            l: tuple(spread(sp, rep) for rep in range(L) for sp in s.answer_specs(side, l))
            for l in labels
        }

    st = s.strategy
    return Scheme(
        msg, rho, st, answers(1, st.space_x), answers(2, st.space_y), name or f"{s.name}_L{L}"
    )


@dataclass(frozen=True)
class RegionPoint:
    upload_bits: float
    download_bits: float
    total_bits: float
    witness_scheme: str
    kind: str  # "corner" or "frontier"


@lru_cache(maxsize=None)
def verified_canonical(name: str) -> VerificationReport:
    report = full_report(canonical_scheme(name))
    if not report.passed:
        raise VerificationError(f"canonical scheme {name} failed verification")
    return report


def region_points(K: int = 3, L: int = 1) -> list[RegionPoint]:
    """Vertices of the optimal (upload, download) staircase, ascending upload.

    Known exactly only for K=3, L=1: the corners (2 log2 3, 3) and (4, 2),
    joined by the frontier vertex (4, 3). Each corner is backed by a
    canonical scheme that is verified here.
    """
    if (K, L) != (3, 1):
        raise ValueError("region known only for K=3, L=1")
    points = []
    for name in ("k3_u2log3", "k3_u4"):
        r = verified_canonical(name)
        points.append(RegionPoint(r.upload_bits, r.download_bits, r.total_bits, name, "corner"))
    low, high = points
    step = RegionPoint(
        high.upload_bits, low.download_bits, high.upload_bits + low.download_bits, "", "frontier"
    )
    return [low, step, high]


def min_total(points: list[RegionPoint]) -> RegionPoint:
    return min((p for p in points if p.kind == "corner"), key=lambda p: p.total_bits)

