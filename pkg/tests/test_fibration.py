from fractions import Fraction

import pytest

from k3lattice.errors import NoSection
from k3lattice.fibration import (
    KNOWN_CONFIGURATIONS,
    FiberConfiguration,
    KodairaType,
    audit,
    euler_sum,
    format_fibers,
    known_audits,
    mw_discriminant,
    parse_fibers,
    shioda_tate_rank,
)

# (type, Euler number, components, simple components)
KODAIRA = [
    (KodairaType("I", 1), 1, 1, 1),
    (KodairaType("I", 2), 2, 2, 2),
    (KodairaType("I", 7), 7, 7, 7),
    (KodairaType("I*", 0), 6, 5, 4),
    (KodairaType("I*", 5), 11, 10, 4),
    (KodairaType("II"), 2, 1, 1),
    (KodairaType("III"), 3, 2, 2),
    (KodairaType("IV"), 4, 3, 3),
    (KodairaType("IV*"), 8, 7, 3),
    (KodairaType("III*"), 9, 8, 2),
    (KodairaType("II*"), 10, 9, 1),
]


@pytest.mark.parametrize("kind,chi,m,s", KODAIRA)
def test_kodaira_table(kind, chi, m, s):
    assert (kind.chi, kind.m, kind.s) == (chi, m, s)


def test_kodaira_validation():
    with pytest.raises(ValueError):
        KodairaType("I", 0)
    with pytest.raises(ValueError):
        KodairaType("V")


def test_parse_fibers_notations():
    a = parse_fibers("6I2,I5*,I1")
    b = parse_fibers("6I_2 + I*_5 + I_1")
    assert a == b
    assert len(a) == 8
    assert parse_fibers("II*, III, IV*") == [KodairaType("II*"), KodairaType("III"), KodairaType("IV*")]
    assert format_fibers(a) == "6I2 + I5* + I1"
    with pytest.raises(ValueError):
        parse_fibers("I2, J3")


def test_kummer_fibrations_pass_every_audit():
    for name in ("kummer-D", "kummer-B"):
        rep = known_audits()[name]
        assert rep.passed
        assert rep.item("euler").value == 24
        assert rep.item("mw_rank").value == 0
        assert rep.item("discriminant").value == 64


def test_pullback_configuration():
    rep = known_audits()["cover-b-pullback"]
    assert rep.passed
    assert [i.name for i in rep.items] == ["euler"]


def test_x0_printed_and_corrected():
    printed = known_audits()["x0-printed"]
    assert not printed.passed
    assert printed.item("euler").value == 30
    corrected = known_audits()["x0-corrected"]
    assert corrected.passed
    assert corrected.item("discriminant").value == 2


def test_shioda_tate_and_discriminant():
    c = FiberConfiguration.parse("6I2 + I5* + I1", ns_rank=17, mw_order=2)
    assert euler_sum(c) == 24
    assert shioda_tate_rank(c) == 0
    assert mw_discriminant(c) == Fraction(2 ** 6 * 4 * 1, 4)
    with pytest.raises(NoSection):
        shioda_tate_rank(FiberConfiguration.parse("24I1", ns_rank=2, has_section=False))


def test_positive_mordell_weil_rank_is_reported():
    c = FiberConfiguration.parse("24I1", ns_rank=3, mw_rank_expected=None)
    rep = audit(c)
    assert rep.passed and rep.item("mw_rank").value == 1


def test_known_configuration_table_is_complete():
    assert set(KNOWN_CONFIGURATIONS) == {"kummer-D", "kummer-B", "cover-b-pullback", "x0-printed", "x0-corrected"}


def test_audit_json():
    data = known_audits()["kummer-D"].to_json()
    assert data["pass"] is True
    assert [c["check"] for c in data["checks"]] == ["euler", "mw_rank", "discriminant"]
