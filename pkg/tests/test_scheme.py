import math

import pytest

from spircds.constructions import canonical_scheme
from spircds.scheme import (
    AffineAnswerSpec,
    FormatError,
    MessageSpec,
    QueryStrategy,
    Scheme,
    SchemeError,
    download_cost,
    emit_scheme,
    evaluate_answers,
    format_affine,
    parse_affine,
    parse_scheme,
    randomness_cost,
    relabel,
    upload_cost,
)


def ints(values):
    return tuple(int(v) for v in values)


def test_k3_u2log3_answers_at_a1_b1():
    ax, ay = evaluate_answers(canonical_scheme("k3_u2log3"), "A1", "B1", (1, 0, 1), (1, 0))
    assert ints(ax) == (0, 1)
    assert ints(ay) == (0,)


def test_a0_with_zero_randomness_is_zero():
    s = canonical_scheme("k3_u2log3")
    for W in [(0, 0, 0), (1, 1, 1), (1, 0, 1)]:
        ax, _ = evaluate_answers(s, "A0", "B0", W, (0, 0))
        assert ints(ax) == (0, 0)


def test_k3_u4_answers_at_a11_b11():
    # A11 = W2+W3+S1 = 1+0+1 = 0 and B11 = W1+W2+W3+S1 = 1+1+0+1 = 1 over GF(2)
    ax, ay = evaluate_answers(canonical_scheme("k3_u4"), "A11", "B11", (1, 1, 0), (1,))
    assert ints(ax) == (0,)
    assert ints(ay) == (1,)


def test_evaluate_rejects_bad_arity_and_label():
    s = canonical_scheme("k2_u2")
    with pytest.raises(SchemeError, match="message symbols"):
        evaluate_answers(s, "A0", "B0", (1,), (0,))
    with pytest.raises(SchemeError, match="unknown query label"):
        evaluate_answers(s, "A9", "B0", (1, 0), (0,))


@pytest.mark.parametrize(
    "name, upload, download, rho",
    [
        ("k3_u2log3", 2 * math.log2(3), 3.0, 2),
        ("k3_u4", 4.0, 2.0, 1),
        ("k2_u2", 2.0, 2.0, 1),
        ("k4_u4", 4.0, 4.0, 4),
    ],
)
def test_costs(name, upload, download, rho):
    s = canonical_scheme(name)
    assert upload_cost(s) == pytest.approx(upload, abs=1e-9)
    assert download_cost(s) == download
    assert randomness_cost(s) == rho


def test_answer_lengths():
    assert canonical_scheme("k3_u2log3").answer_lengths == (2, 1)
    assert canonical_scheme("k3_u4").answer_lengths == (1, 1)
    assert canonical_scheme("k4_u4").answer_lengths == (2, 2)


def test_download_cost_scales_with_field_size():
    msg = MessageSpec(2, 1, 3)
    st = QueryStrategy(("A0",), ("B0", "B1"), ((("A0", "B0"),), (("A0", "B1"),)))
    spec = AffineAnswerSpec((1, 0), (), 0)
    s = Scheme(msg, 0, st, {"A0": (spec,)}, {"B0": (spec,), "B1": (spec,)}, "toy")
    assert download_cost(s) == pytest.approx(2 * math.log2(3))
    assert upload_cost(s) == 1.0


@pytest.mark.parametrize("name", ["k2_u2", "k3_u2log3", "k3_u4", "k4_u4"])
def test_round_trip(name):
    s = canonical_scheme(name)
    text = emit_scheme(s)
    assert parse_scheme(text) == s
    assert emit_scheme(parse_scheme(text)) == text


def test_parse_missing_answer():
    text = "\n".join(l for l in emit_scheme(canonical_scheme("k2_u2")).splitlines() if not l.startswith("answer.y B1"))
    with pytest.raises(FormatError, match="unanswered query label"):
        parse_scheme(text)


def test_parse_non_prime_modulus():
    text = emit_scheme(canonical_scheme("k2_u2")).replace("modulus 2", "modulus 4")
    with pytest.raises(FormatError, match="modulus not prime"):
        parse_scheme(text)


def test_parse_errors_carry_line_numbers():
    text = emit_scheme(canonical_scheme("k2_u2")).replace("answer.x A1 1 1 | 1 | 0", "answer.x A1 1 x | 1 | 0")
    with pytest.raises(FormatError, match=r"line 12: answer.x A1"):
        parse_scheme(text)


def test_parse_bad_header():
    with pytest.raises(FormatError):
        parse_scheme("not-a-scheme 1\n")


def test_comments_and_blank_lines_are_ignored():
    text = emit_scheme(canonical_scheme("k2_u2"))
    noisy = "# a comment\n\n" + text.replace("randomness 1\n", "randomness 1\n\n# more\n")
    assert parse_scheme(noisy) == canonical_scheme("k2_u2")


def test_pair_under_unknown_label():
    text = emit_scheme(canonical_scheme("k2_u2")).replace("pairs 1 A0:B0", "pairs 1 A7:B0")
    with pytest.raises(FormatError, match="unknown query label"):
        parse_scheme(text)


def test_strategy_validation():
    with pytest.raises(SchemeError, match="duplicate pair"):
        QueryStrategy(("A0",), ("B0",), ((("A0", "B0"), ("A0", "B0")),))
    with pytest.raises(SchemeError, match="not uniform"):
        QueryStrategy(("A0", "A1"), ("B0", "B1"), ((("A0", "B0"), ("A0", "B1"), ("A1", "B0")),))
    with pytest.raises(SchemeError, match="must differ"):
        QueryStrategy(("A0",), ("A0",), ((("A0", "A0"),),))


def test_scheme_validation():
    s = canonical_scheme("k2_u2")
    ay = dict(s.answers_y)
    ay["B1"] = ay["B1"] * 2
    with pytest.raises(SchemeError, match="unequal answer lengths"):
        Scheme(s.msg, s.rho, s.strategy, s.answers_x, ay, "bad")
    ay["B1"] = (AffineAnswerSpec((0, 1), (1, 0), 0),)
    with pytest.raises(SchemeError, match="arity mismatch"):
        Scheme(s.msg, s.rho, s.strategy, s.answers_x, ay, "bad")
    ay["B1"] = (AffineAnswerSpec((0, 2), (1,), 0),)
    with pytest.raises(SchemeError, match="out of range"):
        Scheme(s.msg, s.rho, s.strategy, s.answers_x, ay, "bad")
    with pytest.raises(SchemeError, match="K >= 2"):
        MessageSpec(1)


def test_parse_affine_terms():
    msg = MessageSpec(3, 2, 3)
    spec = parse_affine("W1.2 + 2*W3 - S2 + 1", msg, 2)
    assert spec.w == (0, 1, 0, 0, 2, 0)
    assert spec.r == (0, 2)
    assert spec.c == 1
    assert parse_affine(format_affine(spec, msg), msg, 2) == spec


@pytest.mark.parametrize("expr", ["", "W4", "S3", "X1", "W1.3"])
def test_parse_affine_rejects(expr):
    with pytest.raises(FormatError):
        parse_affine(expr, MessageSpec(3, 2, 2), 2)


def test_format_affine_zero():
    assert format_affine(AffineAnswerSpec((0, 0), (0,), 0), MessageSpec(2)) == "0"


def test_relabel_preserves_answers():
    s = canonical_scheme("k2_u2")
    r = relabel(s, {"A0": "P", "A1": "Q"}, {"B1": "Z"})
    assert r.strategy.space_x == ("P", "Q")
    assert r.strategy.pairs[1] == (("P", "Z"), ("Q", "B0"))
    for W in [(0, 1), (1, 1)]:
        for R in [(0,), (1,)]:
            assert evaluate_answers(r, "P", "Z", W, R) == evaluate_answers(s, "A0", "B1", W, R)


def test_message_index_layout():
    msg = MessageSpec(3, 2)
    assert [msg.message_index(j, l) for j in (1, 2, 3) for l in (1, 2)] == list(range(6))
