"""Character points and curve samples."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .sl2 import entry_text


@dataclass(frozen=True)
class CharPoint:
    """Values of named Fricke coordinates, exact or floating, with an optional label."""

    coords: tuple  # ((name, value), ...)
    label: str | None = None

    @classmethod
    def make(cls, values: Mapping[str, object], label: str | None = None) -> "CharPoint":
        return cls(tuple(values.items()), label)

    def as_dict(self) -> dict:
        return dict(self.coords)

    def __getitem__(self, name: str):
        return self.as_dict()[name]

    def values(self) -> tuple:
        return tuple(v for _, v in self.coords)

    def to_json_obj(self) -> dict:
        obj = {name: entry_text(v) for name, v in self.coords}
        if self.label is not None:
            obj["family"] = self.label
        return obj


@dataclass
class CurveSample:
    parameter: complex
    point: CharPoint
    traces: dict = field(default_factory=dict)
    residual: float = 0.0
    branch: int = 0
    flagged: bool = False
    note: str = ""
