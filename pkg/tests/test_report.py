from __future__ import annotations

import math

import pytest

from magnetomech.report import SWEEP_COLUMNS, evaluate, fmt, render_csv_row, render_text
from magnetomech.scenario import load_scenario, parse_scenario, serialize_scenario


@pytest.fixture(scope="module")
def flagship():
    return evaluate(load_scenario("paper-flagship"))


@pytest.fixture(scope="module")
def two_wire():
    return evaluate(load_scenario("paper-two-wire"))


def test_flagship_numbers(flagship):
    assert flagship.value("two_eta") == pytest.approx(20.4e-6, rel=0.02)
    assert flagship.value("g0_over_kappa") == pytest.approx(20.4, rel=0.02)
    assert flagship.value("cooperativity") == pytest.approx(400, rel=0.25)
    assert flagship.value("R_02_over_g0") < 0.01
    assert flagship.flags == []


def test_flagship_has_all_sweep_columns(flagship):
    for key in SWEEP_COLUMNS:
        assert flagship.has(key)
    with pytest.raises(KeyError):
        flagship.value("nonsense")


def test_assumptions_are_listed(flagship):
    text = " ".join(flagship.assumptions)
    assert "omega0" in text and "Gamma" in text


def test_two_wire_flags(two_wire):
    flags = " ".join(two_wire.flags)
    assert "pinned" in flags and "8.77914952e+03" in flags
    assert "a_I" in flags
    assert two_wire.value("g0_over_kappa") == pytest.approx(3.5, rel=0.10)
    assert two_wire.value("cooperativity") == pytest.approx(12, rel=0.25)


def test_two_wire_amplification_oracle(two_wire):
    assert two_wire.value("a_I") == pytest.approx(two_wire.value("a_I_perturbation"), rel=0.01)
    assert two_wire.value("a_B") == pytest.approx(two_wire.value("a_B_perturbation"), rel=0.01)


def test_validation_failure_is_flagged():
    text = serialize_scenario(load_scenario("paper-flagship")).replace(
        "thickness = 5e-08 m", "thickness = 2e-07 m", 1)
    ev = evaluate(parse_scenario(text))
    assert any("thin_film" in f for f in ev.flags)


def test_text_rendering(flagship):
    text = render_text(flagship)
    assert text.startswith("scenario: paper-flagship")
    assert "[coupling]" in text and "2pi x" in text
    assert "\u2014" not in text


def test_csv_row(flagship):
    keys, vals = render_csv_row(flagship)
    assert len(keys) == len(vals)
    assert keys[0] == "scenario" or "two_eta" in keys


def test_fmt():
    assert fmt(1.0) == "1.00000000e+00"
    assert fmt(math.nan) == "nan"
    assert fmt(-math.inf) == "-inf"
