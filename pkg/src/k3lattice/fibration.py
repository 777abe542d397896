"""Kodaira fiber bookkeeping and the Euler number / Shioda-Tate / Mordell-Weil audits."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .errors import NoSection

K3_EULER = 24

_FIXED = {
    "II": (2, 1, 1),
    "III": (3, 2, 2),
    "IV": (4, 3, 3),
    "IV*": (8, 7, 3),
    "III*": (9, 8, 2),
    "II*": (10, 9, 1),
}


@dataclass(frozen=True, order=True)
class KodairaType:
    """I_n (n >= 1), I*_n (n >= 0), or one of II, III, IV, IV*, III*, II*."""

    tag: str
    n: int = 0

    def __post_init__(self):
        if self.tag == "I" and self.n < 1:
            raise ValueError("I_n needs n >= 1")
        if self.tag == "I*" and self.n < 0:
            raise ValueError("I*_n needs n >= 0")
        if self.tag not in ("I", "I*") and self.tag not in _FIXED:
            raise ValueError(f"unknown Kodaira type {self.tag!r}")

    @property
    def invariants(self) -> tuple[int, int, int]:
        """(Euler number, number of components, number of simple components)."""
        if self.tag == "I":
            return self.n, self.n, self.n
        if self.tag == "I*":
            return self.n + 6, self.n + 5, 4
        return _FIXED[self.tag]

    @property
    def chi(self) -> int:
        return self.invariants[0]

    @property
    def m(self) -> int:
        return self.invariants[1]

    @property
    def s(self) -> int:
        return self.invariants[2]

    def __str__(self) -> str:
        if self.tag == "I":
            return f"I{self.n}"
        if self.tag == "I*":
            return f"I{self.n}*"
        return self.tag


_TYPE = re.compile(r"^(\d*)\s*(?:I_?(\d+)(\*?)|I\*_?(\d+)|(II\*|III\*|IV\*|II|III|IV))$")


def parse_fibers(text: str) -> list[KodairaType]:
    """'6I2,I5*,I1' or '6I2 + I*5 + I1' -> multiset of Kodaira types."""
    out: list[KodairaType] = []
    for raw in re.split(r"[,+]", text):
        tok = raw.strip().replace(" ", "")
        if not tok:
            continue
        m = _TYPE.match(tok)
        if not m:
            raise ValueError(f"cannot parse fiber type {raw.strip()!r}")
        count = int(m.group(1)) if m.group(1) else 1
        if m.group(2) is not None:
            kind = KodairaType("I*" if m.group(3) else "I", int(m.group(2)))
        elif m.group(4) is not None:
            kind = KodairaType("I*", int(m.group(4)))
        else:
            kind = KodairaType(m.group(5))
        out.extend([kind] * count)
    return out


def format_fibers(fibers) -> str:
    counts: dict[KodairaType, int] = {}
    for f in fibers:
        counts[f] = counts.get(f, 0) + 1
    return " + ".join(f"{c}{f}" if c > 1 else str(f) for f, c in counts.items())


@dataclass
class FiberConfiguration:
    fibers: list[KodairaType]
    ns_rank: int
    has_section: bool = True
    mw_order: int | None = None
    mw_rank_expected: int | None = 0
    text: str = ""

    @classmethod
    def parse(cls, text: str, **kwargs) -> "FiberConfiguration":
        return cls(parse_fibers(text), text=text, **kwargs)

    @property
    def label(self) -> str:
        return self.text or format_fibers(self.fibers)


def euler_sum(config: FiberConfiguration) -> int:
    return sum(f.chi for f in config.fibers)


def shioda_tate_rank(config: FiberConfiguration) -> int:
    """rank(S) - 2 - sum(m_i - 1); negative values mean the configuration is impossible."""
    if not config.has_section:
        raise NoSection("Shioda-Tate needs a section")
    return config.ns_rank - 2 - sum(f.m - 1 for f in config.fibers)


def mw_discriminant(config: FiberConfiguration) -> Fraction:
    """prod(s_i) / n^2."""
    n = config.mw_order or 1
    return Fraction(prod(f.s for f in config.fibers), n * n)


@dataclass
class AuditItem:
    name: str
    passed: bool
    value: object
    expected: object

    def to_json(self) -> dict:
        return {"check": self.name, "pass": self.passed,
                "value": str(self.value), "expected": str(self.expected)}


@dataclass
class AuditReport:
    config: FiberConfiguration
    items: list[AuditItem] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def item(self, name: str) -> AuditItem:
        return next(i for i in self.items if i.name == name)

    def to_json(self) -> dict:
        return {
            "fibers": self.config.label,
            "rho": self.config.ns_rank,
            "pass": self.passed,
            "checks": [i.to_json() for i in self.items],
        }


def audit(config: FiberConfiguration, expected_disc: int | None = None) -> AuditReport:
    """Euler number, Mordell-Weil rank, and (for finite MW) the discriminant formula."""
    rep = AuditReport(config)
    chi = euler_sum(config)
    rep.items.append(AuditItem("euler", chi == K3_EULER, chi, K3_EULER))
    if not config.has_section:
        return rep
    rank = shioda_tate_rank(config)
    expected_rank = config.mw_rank_expected
    ok = rank >= 0 and (expected_rank is None or rank == expected_rank)
    rep.items.append(AuditItem("mw_rank", ok, rank, expected_rank if expected_rank is not None
                               else ">= 0"))
    if rank == 0 and config.mw_order is not None and expected_disc is not None:
        disc = mw_discriminant(config)
        rep.items.append(AuditItem("discriminant", disc == expected_disc, disc, expected_disc))
    return rep


# configurations claimed for the Kummer surface and its double covers
KNOWN_CONFIGURATIONS = {
    "kummer-D": ("6I2 + I5* + I1", dict(ns_rank=17, has_section=True, mw_order=2), 64),
    "kummer-B": ("4I2 + I2* + I1* + I1", dict(ns_rank=17, has_section=True, mw_order=2), 64),
    "cover-b-pullback": ("4I1 + I4* + I2* + I2", dict(ns_rank=17, has_section=False), None),
    "x0-printed": ("I2 + I10* + 6I2", dict(ns_rank=17, has_section=True, mw_order=2), 2),
    "x0-corrected": ("6I1 + I2 + I10*", dict(ns_rank=17, has_section=True, mw_order=2), 2),
}


def known_audits() -> dict[str, AuditReport]:
    return {name: audit(FiberConfiguration.parse(text, **kw), disc)
            for name, (text, kw, disc) in KNOWN_CONFIGURATIONS.items()}
