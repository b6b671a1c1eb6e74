"""One-dimensional classical field along a path and its exact line integral.

Field documents are plain text, one ``key = value`` pair per line, ``#``
starting a comment. Recognised keys::

    kind       constant | grid | target
    amplitude  field value (constant)
    length     path length, > 0 (constant)
    samples    comma- or whitespace-separated values, at least 2 (grid)
    dx         uniform sample spacing, > 0 (grid)
    target     the integral itself (target)
    signed     true | false, admit negative field values (default false)

Example::

    kind = grid
    samples = 1.0, 1.5, 2.0
    dx = 0.25
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from os import PathLike
from typing import Literal

import numpy as np

FieldKind = Literal["constant", "grid", "target"]


class NegativeFieldError(ValueError):
    """A negative field value was supplied where only non-negative fields are allowed."""


@dataclass(frozen=True)
class MagnitudeScale:
    """Known order of magnitude ``M`` of the integral."""

    M: float

    def __post_init__(self):
        if not (self.M > 0 and math.isfinite(self.M)):
            raise ValueError(f"magnitude scale must be positive and finite, got {self.M}")


@dataclass(frozen=True)
class FieldSpec:
    kind: FieldKind
    amplitude: float = 0.0
    length: float = 0.0
    samples: tuple[float, ...] = ()
    dx: float = 0.0
    target: float = 0.0
    signed: bool = False

    def __post_init__(self):
        if self.kind == "constant":
            if not self.length > 0:
                raise ValueError("constant field needs a positive path length")
            values = (self.amplitude,)
        elif self.kind == "grid":
            if len(self.samples) < 2:
                raise ValueError("sampled grid needs at least 2 samples")
            if not self.dx > 0:
                raise ValueError("sampled grid needs a positive spacing dx")
            object.__setattr__(self, "samples", tuple(float(s) for s in self.samples))
            values = self.samples
        elif self.kind == "target":
            values = (self.target,)
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("field values must be finite")

    @classmethod
    def constant(cls, amplitude: float, length: float, signed: bool = False) -> FieldSpec:
        return cls("constant", amplitude=float(amplitude), length=float(length), signed=signed)

    @classmethod
    def grid(cls, samples, dx: float, signed: bool = False) -> FieldSpec:
        return cls("grid", samples=tuple(np.asarray(samples, dtype=float)), dx=float(dx), signed=signed)

    @classmethod
    def from_target(cls, integral: float, signed: bool = False) -> FieldSpec:
        return cls("target", target=float(integral), signed=signed)

    def min_value(self) -> float:
        if self.kind == "constant":
            return self.amplitude
        if self.kind == "grid":
            return min(self.samples)
        return self.target


def integrate(field: FieldSpec, nonnegative: bool | None = None) -> float:
    """Line integral of ``field`` from A to B.

    Constant fields are exact, grids use the trapezoid rule, and target fields
    return the stored value. With ``nonnegative`` true (the default for fields
    not marked ``signed``) a negative value raises :class:`NegativeFieldError`;
    the classical protocol depends on this.
    """
    if nonnegative is None:
        nonnegative = not field.signed
    if nonnegative and field.min_value() < 0:
        raise NegativeFieldError("classical protocols require a non-negative field")
    if field.kind == "constant":
        return field.amplitude * field.length
    if field.kind == "grid":
        s = np.asarray(field.samples)
        return float(field.dx * (s.sum() - 0.5 * (s[0] + s[-1])))
    return field.target


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def parse_field(text: str) -> FieldSpec:
    """Build a :class:`FieldSpec` from a ``key = value`` document."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, sep, value = line.partition(":")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key = key.strip().lower()
        if key in entries:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value.strip()

    known = {"kind", "amplitude", "length", "samples", "dx", "target", "signed"}
    unknown = set(entries) - known
    if unknown:
        raise ValueError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "kind" not in entries:
        raise ValueError("field document needs a 'kind'")

    signed_text = entries.get("signed", "false").lower()
    if signed_text not in _TRUE | _FALSE:
        raise ValueError(f"signed must be true/false, got {entries['signed']!r}")
    signed = signed_text in _TRUE

    kind = entries["kind"].lower()
    try:
        if kind == "constant":
            return FieldSpec.constant(float(entries["amplitude"]), float(entries["length"]), signed)
        if kind == "grid":
            samples = [float(tok) for tok in re.split(r"[,\s]+", entries["samples"]) if tok]
            return FieldSpec.grid(samples, float(entries["dx"]), signed)
        if kind == "target":
            return FieldSpec.from_target(float(entries["target"]), signed)
    except KeyError as exc:
        raise ValueError(f"{kind} field document is missing {exc.args[0]!r}") from None
    raise ValueError(f"unknown field kind {kind!r}")


def load_field(path: str | PathLike) -> FieldSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_field(fh.read())
