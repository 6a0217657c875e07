"""Verification reports and deterministic JSON output."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def rat(x: Fraction | int) -> str:
    """Exact ``"p/q"`` string for a rational (integers keep ``/1``)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s: str) -> Fraction:
    return Fraction(s)


def jsonable(obj: Any) -> Any:
    """Convert rationals, dataclass-like objects and tuples into plain JSON types."""
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return jsonable(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits.

    Key order is preserved, so equal inputs give byte-identical output.
    """
    return _dump(jsonable(obj), indent, 0)


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{_dump(k, indent, level + 1)}: {_dump(v, indent, level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [pad + _dump(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(type(obj).__name__)


@dataclass
class Violation:
    params: dict
    lhs: Any
    rhs: Any

    def to_dict(self):
        return {"params": self.params, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class Report:
    """Outcome of an exhaustive check.

    ``entries`` keeps every checked case (params, both sides, slack) and is
    only serialised on request; ``info`` carries non-asserted observations.
    """

    theorem: str
    range: dict
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    entries: list[dict] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, params: dict, lhs, rhs, ok: bool, keep: bool = True, **extra) -> None:
        self.checked += 1
        if keep:
            row = {"params": params, "lhs": lhs, "rhs": rhs}
            if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
                row["slack"] = rhs - lhs
            row.update(extra)
            self.entries.append(row)
        if not ok:
            self.violations.append(Violation(params, lhs, rhs))

    def to_dict(self, include_entries: bool = False) -> dict:
        d = {
            "theorem": self.theorem,
            "range": self.range,
            "checked": self.checked,
            "violations": [v.to_dict() for v in self.violations],
            "pass": self.passed,
        }
        if self.info:
            d["info"] = self.info
        if include_entries:
            d["entries"] = self.entries
        return d
