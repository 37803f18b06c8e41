from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from magnetomech import units as U


@pytest.mark.parametrize("text,table,value", [
    ("100 um", U.LENGTH, 1e-4),
    ("50 nm", U.LENGTH, 5e-8),
    ("0.5 µm", U.LENGTH, 5e-7),
    ("140 mT", U.FIELD, 0.14),
    ("4.1e4 T/m", U.GRADIENT, 4.1e4),
    ("8.57 g/cm^3", U.DENSITY, 8570.0),
    ("50 mK", U.TEMPERATURE, 0.05),
    ("1e-5 1/rtHz", U.ASD, 1e-5),
    ("3", U.DIMENSIONLESS, 3.0),
    ("1e-9", U.LENGTH, 1e-9),
])
def test_parse(text, table, value):
    assert U.parse_quantity(text, table) == value


def test_cyclic_units_become_angular():
    assert U.parse_quantity("1 MHz", U.ANGULAR_FREQUENCY) == pytest.approx(2 * math.pi * 1e6, rel=1e-15)
    assert U.parse_quantity("5 rad/s", U.ANGULAR_FREQUENCY) == 5.0


def test_energy_units():
    from scipy.constants import e, h
    assert U.parse_quantity("1 GHz", U.ENERGY) == pytest.approx(h * 1e9)
    assert U.parse_quantity("2 meV", U.ENERGY) == pytest.approx(2e-3 * e)


@pytest.mark.parametrize("text,table", [("1 T", U.LENGTH), ("abc", U.LENGTH), ("nan m", U.LENGTH),
                                        ("inf", U.FIELD), ("1 furlong", U.LENGTH)])
def test_bad_quantities(text, table):
    with pytest.raises(U.UnitError):
        U.parse_quantity(text, table)


@given(st.floats(allow_nan=False, allow_infinity=False),
       st.sampled_from([U.LENGTH, U.FIELD, U.GRADIENT, U.ENERGY, U.ANGULAR_FREQUENCY, U.DIMENSIONLESS]))
def test_format_round_trip(value, table):
    assert U.parse_quantity(U.format_quantity(value, table), table) == value
