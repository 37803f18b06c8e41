"""Parsing of quantities with unit suffixes such as ``50 nm`` or ``6.3 GHz``."""

from __future__ import annotations

import math
import re

from scipy.constants import e, h


class UnitError(ValueError):
    """A value could not be read or has the wrong unit."""


_MICRO = ("u", "µ", "μ")


def _with_micro(base: str, scale: float, table: dict) -> None:
    for m in _MICRO:
        table[m + base] = scale


LENGTH = {"m": 1.0, "mm": 1e-3, "nm": 1e-9, "pm": 1e-12}
_with_micro("m", 1e-6, LENGTH)
FIELD = {"T": 1.0, "mT": 1e-3}
_with_micro("T", 1e-6, FIELD)
GRADIENT = {"T/m": 1.0, "mT/um": 1e3, "T/mm": 1e3}
DENSITY = {"kg/m^3": 1.0, "kg/m3": 1.0, "g/cm^3": 1e3, "g/cm3": 1e3}
CURRENT = {"A": 1.0, "mA": 1e-3}
_with_micro("A", 1e-6, CURRENT)
TEMPERATURE = {"K": 1.0, "mK": 1e-3}
# cyclic units on an angular quantity are multiplied by 2 pi
ANGULAR_FREQUENCY = {"rad/s": 1.0, "Hz": 2 * math.pi, "kHz": 2e3 * math.pi,
                     "MHz": 2e6 * math.pi, "GHz": 2e9 * math.pi}
# energies may be given as a frequency E / h
ENERGY = {"J": 1.0, "eV": e, "meV": 1e-3 * e, "Hz": h, "MHz": 1e6 * h, "GHz": 1e9 * h}
PSD = {"1/Hz": 1.0}
ASD = {"1/rtHz": 1.0, "1/sqrt(Hz)": 1.0, "/rtHz": 1.0}
DIMENSIONLESS = {"": 1.0}

CANONICAL = {
    id(LENGTH): "m", id(FIELD): "T", id(GRADIENT): "T/m", id(DENSITY): "kg/m^3",
    id(CURRENT): "A", id(TEMPERATURE): "K", id(ANGULAR_FREQUENCY): "rad/s",
    id(ENERGY): "J", id(PSD): "1/Hz", id(ASD): "1/rtHz", id(DIMENSIONLESS): "",
}

_NUMBER = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?|[-+]?inf|nan)\s*(.*?)\s*$")


def parse_quantity(text: str, units: dict) -> float:
    """Convert ``"<number> <unit>"`` to SI using the allowed ``units`` table.

    A bare number is taken to be in SI already.

    Raises:
        UnitError: If the number is malformed or the unit is not allowed.
    """
    m = _NUMBER.match(text)
    if not m:
        raise UnitError(f"cannot read a number from {text!r}")
    value = float(m.group(1))
    unit = m.group(2)
    if not math.isfinite(value):
        raise UnitError(f"value {text!r} is not finite")
    if unit == "":
        return value
    if unit not in units:
        allowed = ", ".join(sorted(u for u in units if u))
        raise UnitError(f"unit {unit!r} not allowed here (expected one of: {allowed})")
    scale = units[unit]
    if scale < 1:
        # dividing by the exact power of ten keeps "100 um" at exactly 1e-4
        inverse = round(1.0 / scale)
        if abs(inverse * scale - 1.0) < 1e-12:
            return value / inverse
    return value * scale


def format_quantity(value: float, units: dict) -> str:
    """Exact text form of an SI value, readable back by :func:`parse_quantity`."""
    unit = CANONICAL[id(units)]
    return f"{value!r} {unit}".rstrip()
