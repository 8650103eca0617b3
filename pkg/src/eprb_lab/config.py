"""Angle grammar and context-file parsing shared by the CLI and the service.

Angles are accepted as plain radians ("1.5708", "-2") or as pi fractions,
so the canonical CHSH angles can be written exactly:

    pi        3pi/4       -pi/2       0.5pi       2*pi/3

Grammar: optional sign, optional numeric coefficient, "pi" (or the Greek
letter), optional "/" divisor. Parsed angles are normalized into [0, 2*pi).

Context files are CSV with the header ``theta,phi`` and one angle pair per
row, each cell in the same grammar.
"""

from __future__ import annotations

import math
import re

from .quantum import normalize_angle

_PI_FORM = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?P<coef>\d+(?:\.\d+)?)?\s*\*?\s*(?:pi|π)"
    r"\s*(?:/\s*(?P<div>\d+(?:\.\d+)?))?\s*$",
    re.IGNORECASE,
)


class AngleParseError(ValueError):
    """An angle string did not match the documented grammar."""


def parse_angle(value: float | int | str) -> float:
    """Parse one angle (radians or pi fraction) and normalize into [0, 2*pi)."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return normalize_angle(float(value))
    if not isinstance(value, str):
        raise AngleParseError(f"angle must be a number or string, got {value!r}")
    text = value.strip()
    match = _PI_FORM.match(text)
    if match:
        coef = float(match.group("coef")) if match.group("coef") else 1.0
        div = float(match.group("div")) if match.group("div") else 1.0
        if div == 0.0:
            raise AngleParseError(f"division by zero in angle {value!r}")
        radians = coef * math.pi / div
        if match.group("sign") == "-":
            radians = -radians
        return normalize_angle(radians)
    try:
        return normalize_angle(float(text))
    except (ValueError, OverflowError):
        raise AngleParseError(
            f"malformed angle {value!r}; expected radians or a pi fraction like '3pi/4'"
        ) from None


def parse_angle_list(text: str, expected: int = 4) -> tuple[float, ...]:
    """Parse a comma-separated angle list of exactly ``expected`` entries."""
    parts = [p for p in text.split(",")]
    if len(parts) != expected:
        raise AngleParseError(
            f"expected {expected} comma-separated angles, got {len(parts)} in {text!r}"
        )
    return tuple(parse_angle(p) for p in parts)


def parse_contexts_text(text: str) -> tuple[tuple[float, float], ...]:
    """Parse contexts CSV content (header ``theta,phi``) into angle pairs."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise AngleParseError("contexts file is empty")
    header = [h.strip().lower() for h in lines[0].split(",")]
    if header != ["theta", "phi"]:
        raise AngleParseError(
            f"contexts file must start with header 'theta,phi', got {lines[0]!r}"
        )
    pairs = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 2:
            raise AngleParseError(f"line {lineno}: expected 'theta,phi', got {line!r}")
        try:
            pairs.append((parse_angle(cells[0]), parse_angle(cells[1])))
        except AngleParseError as exc:
            raise AngleParseError(f"line {lineno}: {exc}") from None
    if not pairs:
        raise AngleParseError("contexts file contains no angle pairs")
    return tuple(pairs)


def load_contexts_file(path: str) -> tuple[tuple[float, float], ...]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise AngleParseError(f"cannot read contexts file {path!r}: {exc}") from exc
    return parse_contexts_text(text)
