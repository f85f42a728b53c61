"""Run configuration: matrix, translation set, grid, tolerances, output dir."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .canonical import CanonicalMatrix
from .filters import TranslationSet
from .io import config_hash, read_json, write_json
from .reports import DEFAULT_TOLERANCES
from .sampling import Grid


@dataclass(frozen=True)
class RunConfig:
    matrix: CanonicalMatrix
    ts: TranslationSet
    grid: Grid
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out_dir: str = "."

    def validate(self) -> None:
        if any(v <= 0 for v in self.tolerances.values()):
            raise ValueError("tolerances must be positive")
        out = Path(self.out_dir)
        if out.exists() and not out.is_dir():
            raise ValueError(f"output path {out} exists and is not a directory")

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix.to_dict(),
            "translation": self.ts.to_dict(),
            "grid": self.grid.to_dict(),
            "tolerances": dict(self.tolerances),
            "out_dir": self.out_dir,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "RunConfig":
        return cls(
            matrix=CanonicalMatrix.from_dict(obj["matrix"]),
            ts=TranslationSet.from_dict(obj["translation"]),
            grid=Grid.from_dict(obj["grid"]),
            tolerances=dict(obj.get("tolerances", DEFAULT_TOLERANCES)),
            out_dir=obj.get("out_dir", "."),
        )

    def save(self, path) -> None:
        write_json(path, self.to_dict())

    @classmethod
    def load(cls, path) -> "RunConfig":
        cfg = cls.from_dict(read_json(path))
        cfg.validate()
        return cfg

    @property
    def hash(self) -> str:
        return config_hash(self.to_dict())
