from __future__ import annotations

import math

import pytest

from magnetomech.domain import DomainError
from magnetomech.scenario import (
    BUNDLED,
    DERIVED_PARAMETERS,
    ScenarioError,
    load_scenario,
    parameter_units,
    parse_scenario,
    scenario_sections,
    serialize_scenario,
    sweepable_parameters,
    with_parameter,
)

MINIMAL = """
[strip]
length = 100 um
width = 1 um
thickness = 50 nm
critical_field = 140 mT
density = 8.57e3 kg/m^3
penetration_depth = 39 nm
coherence_length = 38 nm

[cantilever]
thickness = 0.5 um
density = 2.3e3 kg/m^3
frequency = 1 MHz
damping = 1 Hz
temperature = 50 mK

[coil]
height = 1 um

[circuit]
frequency = 6.3 GHz
ej_over_ec = 50
flux_bias = 0.26469449
quality_factor = 1e6

[source]
kind = quadrupole
gradient = max
"""


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_scenarios_load_and_round_trip(name):
    sc = load_scenario(name)
    assert sc.name == name
    again = parse_scenario(serialize_scenario(sc), name)
    assert again == sc
    assert serialize_scenario(again) == serialize_scenario(sc)


def test_minimal_scenario_defaults():
    sc = parse_scenario(MINIMAL, "mini")
    assert sc.name == "mini"
    assert sc.coil.w_c is None and sc.coil.L_c is None
    assert sc.source.gradient is None
    assert sc.cantilever.Omega == pytest.approx(2 * math.pi * 1e6)
    assert sc.options.gamma_convention == "cyclic"
    assert sc.reference == ()


def test_circuit_from_energies():
    text = MINIMAL.replace("frequency = 6.3 GHz\nej_over_ec = 50",
                           "josephson_energy = 20 GHz\ncharging_energy = 0.25 GHz")
    sc = parse_scenario(text)
    assert sc.circuit.omega0 == pytest.approx(2 * math.pi * math.sqrt(8 * 20e9 * 0.25e9), rel=1e-12)


@pytest.mark.parametrize("edit,exc", [
    (("[coil]", "[coil]\nradius = 3 um"), ScenarioError),
    (("[source]", "[sauce]"), ScenarioError),
    (("width = 1 um", "width = 1 T"), ScenarioError),
    (("width = 1 um", "width = -1 um"), DomainError),
    (("kind = quadrupole", "kind = octupole"), ScenarioError),
    (("ej_over_ec = 50", "ej_over_ec = 50\njosephson_energy = 1 GHz"), ScenarioError),
    (("[strip]", "strip"), ScenarioError),
])
def test_rejections(edit, exc):
    with pytest.raises(exc):
        parse_scenario(MINIMAL.replace(*edit))


def test_missing_key():
    with pytest.raises(ScenarioError, match="missing"):
        parse_scenario(MINIMAL.replace("thickness = 50 nm\n", ""))


def test_load_from_path(tmp_path):
    p = tmp_path / "mine.ini"
    p.write_text(MINIMAL)
    assert load_scenario(str(p)).strip.w == 1e-6
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "absent.ini"))


def test_with_parameter():
    sc = load_scenario("paper-flagship")
    assert with_parameter(sc, "strip.width", 2e-6).strip.w == 2e-6
    assert with_parameter(sc, "coil.height_over_width", 3.0).coil.z_c == pytest.approx(3e-6)
    p = with_parameter(sc, "strip.pearl_over_width", 0.1)
    assert p.strip.pearl_length / p.strip.w == pytest.approx(0.1)
    assert set(DERIVED_PARAMETERS) <= set(sweepable_parameters())
    with pytest.raises(ScenarioError):
        parameter_units("strip.colour")
    with pytest.raises(ScenarioError):
        with_parameter(sc, "strip.colour", 1.0)


def test_every_sweepable_parameter_applies():
    sc = load_scenario("paper-flagship")
    for path in sweepable_parameters():
        parameter_units(path)
        assert with_parameter(sc, path, _plausible(path, sc)) is not None


def _plausible(path, sc):
    # scale whatever the scenario holds, or pick a safe value for unset fields
    defaults = {"coil.width": 2e-6, "coil.length": 50e-6, "source.current": 1.0,
                "source.wire_scale": 5e-6, "source.field": 1e-3}
    if path in defaults:
        return defaults[path]
    if path in DERIVED_PARAMETERS:
        return 0.5
    section, key = path.split(".")
    raw = scenario_sections(sc).get(section, {}).get(key)
    try:
        return 0.9 * float(raw.split()[0])
    except (AttributeError, ValueError):
        return 1e-12
