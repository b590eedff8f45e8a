from dataclasses import replace

import pytest

from spircds.cdms import (
    CdmsInstance,
    ConditionError,
    ConditionTable,
    cdms_from_scheme,
    check_security,
    check_validity,
    conditions_from_scheme,
    emit_cdms,
    modular_conditions,
    parse_cdms,
    spir_from_cdms,
)
from spircds.constructions import canonical_conditions, canonical_scheme
from spircds.scheme import AffineAnswerSpec, SchemeError
from spircds.verifier import check_database_privacy, check_reliability

from conftest import mutant_b1, mutant_no_s2


def test_three_message_modular_conditions():
    c = modular_conditions(3, 3)
    assert c.space_x == ("A0", "A1", "A2")
    for x in range(3):
        for y in range(3):
            assert c.condition_at(f"A{x}", f"B{y}") == (x + y) % 3 + 1
    assert c.dummy == {}


def test_four_value_conditions_have_dummy_pairs():
    c = modular_conditions(3, 4, 2, 2)
    assert c.space_x == ("A00", "A01", "A10", "A11")
    assert sorted(c.dummy) == [("A00", "B11"), ("A01", "B10"), ("A10", "B01"), ("A11", "B00")]
    assert set(c.dummy.values()) == {4}
    # carry-free: 2*((x1+y1) mod 2) + ((x2+y2) mod 2) = k - 1
    assert c.condition_at("A01", "B01") == 1
    assert c.condition_at("A01", "B00") == 2
    assert c.condition_at("A10", "B00") == 3
    assert all(len(s) == 4 for s in c.satisfied)


def test_two_message_conditions():
    c = modular_conditions(2, 2)
    assert c.satisfied[0] == {("A0", "B0"), ("A1", "B1")}
    assert c.satisfied[1] == {("A0", "B1"), ("A1", "B0")}
    assert c.matrix(1) == [[1, 0], [0, 1]]


def test_modular_parameter_errors():
    with pytest.raises(ConditionError):
        modular_conditions(3, 4, 1, 2)
    with pytest.raises(ConditionError):
        modular_conditions(4, 3)


def test_condition_table_rejects_overlap():
    with pytest.raises(ConditionError, match="more than one condition"):
        ConditionTable(("a",), ("b",), (frozenset({("a", "b")}), frozenset({("a", "b")})))


def test_conditions_from_canonical_schemes():
    assert conditions_from_scheme(canonical_scheme("k3_u2log3")) == modular_conditions(3, 3)
    c = conditions_from_scheme(canonical_scheme("k2_u2"))
    assert [len(s) for s in c.satisfied] == [2, 2]


def cdms_k3():
    s = canonical_scheme("k3_u2log3")
    return CdmsInstance(3, 1, 2, 2, modular_conditions(3, 3), s.answers_x, s.answers_y, "k3_u2log3")


def test_spir_from_modular_cdms_is_the_canonical_scheme():
    assert spir_from_cdms(cdms_k3()) == canonical_scheme("k3_u2log3")


def test_round_trip_through_cdms():
    c = cdms_k3()
    strategy = [sorted(p) for p in c.conditions.satisfied]
    back = conditions_from_scheme(spir_from_cdms(c, strategy))
    assert back == c.conditions.restricted(p for ps in strategy for p in ps)
    assert cdms_from_scheme(canonical_scheme("k3_u2log3")) == c


def test_single_secret_is_not_spir():
    # plain CDS disclosing S1 iff the inputs match: Alice sends S1 masked by the
    # randomness symbol indexed by x, Bob sends the symbol indexed by y
    cond = ConditionTable(("A0", "A1"), ("B0", "B1"), (frozenset({("A0", "B0"), ("A1", "B1")}),))
    ax = {"A0": (AffineAnswerSpec((1,), (1, 0)),), "A1": (AffineAnswerSpec((1,), (0, 1)),)}
    by = {"B0": (AffineAnswerSpec((0,), (1, 0)),), "B1": (AffineAnswerSpec((0,), (0, 1)),)}
    c = CdmsInstance(1, 1, 2, 2, cond, ax, by, "cds")
    assert check_validity(c).passed
    assert check_security(c).passed
    with pytest.raises(SchemeError, match="K >= 2 required"):
        spir_from_cdms(c)


def test_dummy_pair_in_strategy_rejected():
    s = canonical_scheme("k3_u4")
    c = CdmsInstance(3, 1, 2, 1, canonical_conditions("k3_u4"), s.answers_x, s.answers_y)
    strategy = [list(p) for p in s.strategy.pairs]
    strategy[0] = strategy[0][:3] + [("A00", "B11")]
    with pytest.raises(ConditionError, match="pair does not satisfy f_1"):
        spir_from_cdms(c, strategy)


def test_leaky_strategy_rejected():
    c = cdms_k3()
    strategy = [sorted(p) for p in c.conditions.satisfied]
    strategy[0] = strategy[0][:1]
    with pytest.raises(ConditionError, match="leaks the index"):
        spir_from_cdms(c, strategy)


def test_validity_and_security_on_canonical():
    c = cdms_k3()
    assert check_validity(c).passed
    assert check_security(c).passed
    assert check_security(c, joint=False).passed


def test_dummy_pairs_leak_but_strategy_pairs_do_not():
    s = canonical_scheme("k3_u4")
    c = CdmsInstance(3, 1, 2, 1, canonical_conditions("k3_u4"), s.answers_x, s.answers_y)
    strategy_pairs = [p for ps in s.strategy.pairs for p in ps]
    assert check_validity(c).passed
    assert check_security(c, strategy_pairs).passed
    assert not check_security(c).passed


@pytest.mark.parametrize("mutant", [mutant_no_s2, mutant_b1])
def test_cdms_verdicts_match_spir_verdicts(mutant):
    s = mutant()
    c = cdms_from_scheme(s)
    assert check_validity(c).passed == check_reliability(s).passed
    assert check_security(c).passed == check_database_privacy(s).passed


def test_cdms_document_round_trip():
    s = canonical_scheme("k3_u4")
    c = CdmsInstance(3, 1, 2, 1, canonical_conditions("k3_u4"), s.answers_x, s.answers_y, "k3_u4_cdms")
    text = emit_cdms(c)
    assert "dummy 4 A00:B11 A01:B10 A10:B01 A11:B00" in text
    assert parse_cdms(text) == c
    assert emit_cdms(parse_cdms(text)) == text


def test_cdms_instance_validation():
    c = cdms_k3()
    with pytest.raises(SchemeError, match="conditions for"):
        replace(c, K=2)
    with pytest.raises(SchemeError, match="modulus not prime"):
        replace(c, q=6)
