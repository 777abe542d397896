"""Structured record for a verified divergence between printed data and recomputation."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Discrepancy:
    kind: str
    message: str
    resolution: str = ""

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "resolution": self.resolution}

    def line(self) -> str:
        tail = f" | resolution: {self.resolution}" if self.resolution else ""
        return f"DISCREPANCY {self.kind}: {self.message}{tail}"
