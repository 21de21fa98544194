"""Exact Lagrangian representations of bi-Hamiltonian pairs.

Every command takes a fixture name ("wdvv3"), a path to a JSON file, or an
already parsed dict, and returns a :class:`Report`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Union

from . import _core
from ._core import SCHEMA, BoundError, InputError, MathError, euler, is_total_divergence, total_x

__all__ = [
    "SCHEMA", "Report", "InputError", "MathError", "BoundError", "fixture", "transform", "derive",
    "check", "curvature", "recursion", "conservation", "euler", "total_x", "is_total_divergence",
]

Source = Union[str, Path, dict]


@dataclass
class Report:
    passed: bool
    data: dict[str, Any]
    summary: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed


def fixture(name: str) -> dict:
    return json.loads(_core.fixture(name))


def _load(source: Source) -> tuple[str, bool]:
    if isinstance(source, dict):
        return json.dumps(source), False
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        return path.read_text(), False
    return _core.fixture(str(source)), True


def _command(name: str):
    native = getattr(_core, name)

    def run(source: Source = "wdvv3", *, jet_bound: int = 6, triple_order: int = 2, rden_bound: int = 2,
            operator: str = "", density: str = "") -> Report:
        text, is_fixture = _load(source)
        ok, data, summary = native(text, jet_bound, triple_order, rden_bound, operator, density, is_fixture)
        return Report(ok, json.loads(data), list(summary))

    run.__name__ = name
    run.__doc__ = native.__doc__
    return run


transform = _command("transform")
derive = _command("derive")
check = _command("check")
curvature = _command("curvature")
recursion = _command("recursion")
conservation = _command("conservation")
