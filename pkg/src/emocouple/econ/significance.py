from __future__ import annotations

import enum


class Significance(str, enum.Enum):
    """Significance levels with their table codes."""

    NS = "NS"
    SIG5 = "*"
    SIG1 = "**"
    SIG01 = "***"
    NC = "NC"
    UNCLASSIFIED = "?"

    @property
    def code(self) -> str:
        return self.value

    @property
    def significant(self) -> bool:
        return self in (Significance.SIG5, Significance.SIG1, Significance.SIG01)

    @classmethod
    def from_code(cls, code: str) -> "Significance":
        return cls(code.strip())


def from_p_value(p: float) -> Significance:
    """Strict thresholds: p < 0.001, < 0.01, < 0.05; p == 0.05 is NS."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p-value out of range: {p}")
    if p < 0.001:
        return Significance.SIG01
    if p < 0.01:
        return Significance.SIG1
    if p < 0.05:
        return Significance.SIG5
    return Significance.NS
