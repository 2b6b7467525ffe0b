"""Text and JSON rendering of reports.

A report is a nested structure of dicts, lists and scalars. Both renderers
walk the same structure, so the JSON output mirrors the text field for field.
Decimals are a rendering aid only; the exact rational is authoritative.
"""

from __future__ import annotations

import json
from decimal import Decimal, localcontext
from fractions import Fraction

DECIMAL_DIGITS = 12
NOTE = "decimals are rounded to 12 significant digits for display; exact rationals are authoritative"


def decimal_string(x: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    if d == 0:
        return "0"
    return format(d.normalize(), "f")


def _scalar_text(value) -> str:
    if isinstance(value, Fraction):
        return f"{value} ({decimal_string(value)})"
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    return str(value)


def _text_lines(value, indent: int) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, indent + 1))
            elif isinstance(item, (dict, list)):
                lines.append(f"{pad}{key}: (none)")
            else:
                lines.append(f"{pad}{key}: {_scalar_text(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                sub = _text_lines(item, indent + 1)
                first = sub[0].lstrip()
                lines.append(f"{pad}- {first}")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar_text(item)}")
    else:
        lines.append(f"{pad}{_scalar_text(value)}")
    return lines


def render_text(report: dict) -> str:
    return "\n".join(_text_lines(report, 0)) + "\n"


def _jsonable(value):
    if isinstance(value, Fraction):
        return {"exact": str(value), "decimal": decimal_string(value)}
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    return value


def render_json(report: dict) -> str:
    return json.dumps(_jsonable(report), indent=2, ensure_ascii=False) + "\n"


def render(report: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"unknown format {fmt!r}")
