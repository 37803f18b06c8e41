"""Scenario files: sectioned ``key = value unit`` text read with configparser.

A scenario fixes the strip, cantilever, coil, circuit, field source, noise
levels and a few modelling options. Optional ``[reference]`` entries hold
published values that reports compare against.

Example::

    [strip]
    length = 100 um
    width = 1 um
    ...
    [source]
    kind = quadrupole
    gradient = max
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, replace
from importlib import resources

from . import units as U
from .coupling import ANGULAR, CYCLIC, CircuitSpec
from .domain import CantileverSpec, DomainError, StripSpec
from .noise import CONSISTENT, PRINTED, NoiseInputs
from .screening import APPROXIMATE, LONDON


class ScenarioError(ValueError):
    """The scenario text is malformed or incomplete."""


QUADRUPOLE = "quadrupole"
WIRE_PAIR = "wire-pair"
HOMOGENEOUS = "homogeneous"
SOURCE_KINDS = (QUADRUPOLE, WIRE_PAIR, HOMOGENEOUS)

BUNDLED = ("paper-flagship", "paper-two-wire", "paper-homogeneous")

# published values a report may be checked against: key -> (units, label)
REFERENCE_KEYS = {
    "two_eta": (U.DIMENSIONLESS, "2 eta"),
    "eta_over_eta_star": (U.DIMENSIONLESS, "eta / eta_star"),
    "wc_over_w": (U.DIMENSIONLESS, "optimal w_c / w"),
    "gradient": (U.GRADIENT, "field gradient b"),
    "g0_over_kappa": (U.DIMENSIONLESS, "g0 / kappa"),
    "cooperativity": (U.DIMENSIONLESS, "cooperativity"),
    "Gamma": (U.ANGULAR_FREQUENCY, "thermal decoherence Gamma"),
    "eta_lambda_ratio": (U.DIMENSIONLESS, "eta_Lambda / eta"),
    "a_I": (U.DIMENSIONLESS, "current-noise amplification a_I"),
    "a_B": (U.DIMENSIONLESS, "bias-noise amplification a_B"),
    "zeta": (U.DIMENSIONLESS, "wire-flux logarithm zeta"),
    "Omega_m": (U.ANGULAR_FREQUENCY, "magnetic spring Omega_m"),
    "R_02": (U.ANGULAR_FREQUENCY, "heating rate R_0->2"),
    "total_field": (U.FIELD, "total field at the coil wire"),
    "bias_field": (U.FIELD, "bias field B_b"),
}


@dataclass(frozen=True)
class CoilConfig:
    """Coil height plus optional width and length (None: optimal / strip length)."""

    z_c: float
    w_c: float | None = None
    L_c: float | None = None

    def __post_init__(self) -> None:
        if not self.z_c > 0:
            raise DomainError("coil height must be positive")
        if self.w_c is not None and not self.w_c > 0:
            raise DomainError("coil width must be positive")
        if self.L_c is not None and not self.L_c > 0:
            raise DomainError("coil length must be positive")


@dataclass(frozen=True)
class SourceConfig:
    """Field source.

    Attributes:
        kind: "quadrupole", "wire-pair" or "homogeneous".
        gradient: Gradient in T/m. None means the maximum gradient for a
            quadrupole, or the wire pair's own gradient for a wire pair.
        field: Uniform field in T for the homogeneous kind (None: maximum).
        field_convention: Maximum-field convention, "edge" or "corner".
        current: Wire current in A.
        wire_scale: Wire geometry scale z_w in m.
    """

    kind: str = QUADRUPOLE
    gradient: float | None = None
    field: float | None = None
    field_convention: str = "edge"
    current: float | None = None
    wire_scale: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in SOURCE_KINDS:
            raise ScenarioError(f"unknown source kind {self.kind!r}")
        if self.field_convention not in ("edge", "corner"):
            raise ScenarioError(f"unknown field convention {self.field_convention!r}")
        if self.kind == WIRE_PAIR and (self.current is None or self.wire_scale is None):
            raise ScenarioError("a wire-pair source needs current and wire_scale")


@dataclass(frozen=True)
class Options:
    gamma_convention: str = CYCLIC
    screening_model: str = LONDON
    amplification_form: str = CONSISTENT
    reference_tolerance: float = 0.05

    def __post_init__(self) -> None:
        if self.gamma_convention not in (CYCLIC, ANGULAR):
            raise ScenarioError(f"unknown gamma convention {self.gamma_convention!r}")
        if self.screening_model not in (LONDON, APPROXIMATE):
            raise ScenarioError(f"unknown screening model {self.screening_model!r}")
        if self.amplification_form not in (CONSISTENT, PRINTED):
            raise ScenarioError(f"unknown amplification form {self.amplification_form!r}")
        if not self.reference_tolerance > 0:
            raise ScenarioError("reference tolerance must be positive")


@dataclass(frozen=True)
class Scenario:
    name: str
    strip: StripSpec
    cantilever: CantileverSpec
    coil: CoilConfig
    circuit: CircuitSpec
    source: SourceConfig
    noise: NoiseInputs = field(default_factory=NoiseInputs)
    options: Options = field(default_factory=Options)
    reference: tuple[tuple[str, float], ...] = ()


# (section, key) -> (attribute, units) for the plain numeric fields
_STRIP = {"length": ("L", U.LENGTH), "width": ("w", U.LENGTH), "thickness": ("t", U.LENGTH),
          "critical_field": ("B_c", U.FIELD), "density": ("rho", U.DENSITY),
          "penetration_depth": ("lambda_L", U.LENGTH), "coherence_length": ("xi", U.LENGTH)}
_CANTILEVER = {"thickness": ("t0", U.LENGTH), "density": ("rho0", U.DENSITY),
               "frequency": ("Omega", U.ANGULAR_FREQUENCY), "damping": ("gamma", U.ANGULAR_FREQUENCY),
               "temperature": ("T", U.TEMPERATURE)}


def _get(section, key, units, required=True, keywords=()):
    if key not in section:
        if required:
            raise ScenarioError(f"[{section.name}] is missing {key!r}")
        return None
    raw = section[key].strip()
    if raw in keywords:
        return None
    try:
        return U.parse_quantity(raw, units)
    except U.UnitError as exc:
        raise ScenarioError(f"[{section.name}] {key}: {exc}") from exc


def _check_keys(section, allowed) -> None:
    extra = set(section.keys()) - set(allowed)
    if extra:
        raise ScenarioError(f"[{section.name}] has unknown keys: {', '.join(sorted(extra))}")


def _section(cp, name, required=True):
    if name not in cp:
        if required:
            raise ScenarioError(f"missing section [{name}]")
        return None
    return cp[name]


def _circuit(sec) -> CircuitSpec:
    _check_keys(sec, ("frequency", "ej_over_ec", "josephson_energy", "charging_energy",
                      "flux_bias", "quality_factor"))
    bias = _get(sec, "flux_bias", U.DIMENSIONLESS)
    Q = _get(sec, "quality_factor", U.DIMENSIONLESS)
    if "josephson_energy" in sec or "charging_energy" in sec:
        if "frequency" in sec or "ej_over_ec" in sec:
            raise ScenarioError("[circuit] give either frequency + ej_over_ec or the two energies")
        return CircuitSpec(_get(sec, "josephson_energy", U.ENERGY),
                           _get(sec, "charging_energy", U.ENERGY), bias, Q)
    return CircuitSpec.from_frequency(_get(sec, "frequency", U.ANGULAR_FREQUENCY),
                                      _get(sec, "ej_over_ec", U.DIMENSIONLESS), bias, Q)


def _noise(sec) -> NoiseInputs:
    if sec is None:
        return NoiseInputs()
    _check_keys(sec, ("current_asd", "current_psd", "bias_asd", "bias_psd"))
    out = {}
    for kind in ("current", "bias"):
        asd = _get(sec, f"{kind}_asd", U.ASD, required=False)
        psd = _get(sec, f"{kind}_psd", U.PSD, required=False)
        if asd is not None and psd is not None:
            raise ScenarioError(f"[noise] give {kind}_asd or {kind}_psd, not both")
        if asd is not None and asd < 0:
            raise ScenarioError(f"[noise] {kind}_asd must be non-negative")
        out[kind] = psd if psd is not None else (asd * asd if asd is not None else 0.0)
    return NoiseInputs(out["current"], out["bias"])


def _word(sec, key, default, choices):
    if sec is None or key not in sec:
        return default
    val = sec[key].strip()
    if val not in choices:
        raise ScenarioError(f"[{sec.name}] {key} must be one of {', '.join(choices)}, got {val!r}")
    return val


def parse_scenario(text: str, name: str = "scenario") -> Scenario:
    """Read a scenario from its text form.

    Raises:
        ScenarioError: On syntax errors, unknown keys or bad units.
        DomainError: If the values are physically invalid.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None,
                                   default_section="__none__")
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(f"cannot parse scenario: {exc}") from exc
    known = {"scenario", "strip", "cantilever", "coil", "circuit", "source", "noise", "options",
             "reference"}
    unknown = set(cp.sections()) - known
    if unknown:
        raise ScenarioError(f"unknown sections: {', '.join(sorted(unknown))}")

    meta = _section(cp, "scenario", required=False)
    if meta is not None:
        _check_keys(meta, ("name",))
        name = meta.get("name", name).strip()

    sec = _section(cp, "strip")
    _check_keys(sec, _STRIP)
    strip = StripSpec(**{attr: _get(sec, key, un) for key, (attr, un) in _STRIP.items()})

    sec = _section(cp, "cantilever")
    _check_keys(sec, _CANTILEVER)
    cant = CantileverSpec(**{attr: _get(sec, key, un) for key, (attr, un) in _CANTILEVER.items()})

    sec = _section(cp, "coil")
    _check_keys(sec, ("height", "width", "length"))
    coil = CoilConfig(_get(sec, "height", U.LENGTH),
                      _get(sec, "width", U.LENGTH, required=False, keywords=("optimal",)),
                      _get(sec, "length", U.LENGTH, required=False, keywords=("strip",)))

    circuit = _circuit(_section(cp, "circuit"))

    sec = _section(cp, "source")
    _check_keys(sec, ("kind", "gradient", "field", "field_convention", "current", "wire_scale"))
    kind = _word(sec, "kind", QUADRUPOLE, SOURCE_KINDS)
    source = SourceConfig(
        kind=kind,
        gradient=_get(sec, "gradient", U.GRADIENT, required=False, keywords=("max", "wires")),
        field=_get(sec, "field", U.FIELD, required=False, keywords=("max",)),
        field_convention=_word(sec, "field_convention", "edge", ("edge", "corner")),
        current=_get(sec, "current", U.CURRENT, required=False),
        wire_scale=_get(sec, "wire_scale", U.LENGTH, required=False),
    )

    noise = _noise(_section(cp, "noise", required=False))

    sec = _section(cp, "options", required=False)
    if sec is not None:
        _check_keys(sec, ("gamma_convention", "screening_model", "amplification_form",
                          "reference_tolerance"))
    tol = _get(sec, "reference_tolerance", U.DIMENSIONLESS, required=False) if sec is not None else None
    options = Options(
        gamma_convention=_word(sec, "gamma_convention", CYCLIC, (CYCLIC, ANGULAR)),
        screening_model=_word(sec, "screening_model", LONDON, (LONDON, APPROXIMATE)),
        amplification_form=_word(sec, "amplification_form", CONSISTENT, (CONSISTENT, PRINTED)),
        reference_tolerance=0.05 if tol is None else tol,
    )

    sec = _section(cp, "reference", required=False)
    reference = ()
    if sec is not None:
        _check_keys(sec, REFERENCE_KEYS)
        reference = tuple((k, _get(sec, k, REFERENCE_KEYS[k][0])) for k in REFERENCE_KEYS if k in sec)

    return Scenario(name, strip, cant, coil, circuit, source, noise, options, reference)


def _q(value, units):
    return U.format_quantity(value, units)


def scenario_sections(sc: Scenario) -> dict[str, dict[str, str]]:
    """Canonical SI text of every field, grouped by section."""
    s, c = sc.strip, sc.cantilever
    out = {
        "scenario": {"name": sc.name},
        "strip": {key: _q(getattr(s, attr), un) for key, (attr, un) in _STRIP.items()},
        "cantilever": {key: _q(getattr(c, attr), un) for key, (attr, un) in _CANTILEVER.items()},
        "coil": {"height": _q(sc.coil.z_c, U.LENGTH),
                 "width": "optimal" if sc.coil.w_c is None else _q(sc.coil.w_c, U.LENGTH),
                 "length": "strip" if sc.coil.L_c is None else _q(sc.coil.L_c, U.LENGTH)},
        "circuit": {"josephson_energy": _q(sc.circuit.E_J1, U.ENERGY),
                    "charging_energy": _q(sc.circuit.E_C, U.ENERGY),
                    "flux_bias": _q(sc.circuit.flux_bias, U.DIMENSIONLESS),
                    "quality_factor": _q(sc.circuit.Q, U.DIMENSIONLESS)},
    }
    src = sc.source
    sec = {"kind": src.kind}
    if src.kind == HOMOGENEOUS:
        sec["field"] = "max" if src.field is None else _q(src.field, U.FIELD)
        sec["field_convention"] = src.field_convention
    else:
        keyword = "max" if src.kind == QUADRUPOLE else "wires"
        sec["gradient"] = keyword if src.gradient is None else _q(src.gradient, U.GRADIENT)
    if src.kind == WIRE_PAIR:
        sec["current"] = _q(src.current, U.CURRENT)
        sec["wire_scale"] = _q(src.wire_scale, U.LENGTH)
    out["source"] = sec
    if callable(sc.noise.S_I_rel) or callable(sc.noise.S_B_rel):
        raise ScenarioError("frequency-dependent noise densities cannot be written to a scenario file")
    out["noise"] = {"current_psd": _q(sc.noise.S_I_rel, U.PSD), "bias_psd": _q(sc.noise.S_B_rel, U.PSD)}
    o = sc.options
    out["options"] = {"gamma_convention": o.gamma_convention, "screening_model": o.screening_model,
                      "amplification_form": o.amplification_form,
                      "reference_tolerance": _q(o.reference_tolerance, U.DIMENSIONLESS)}
    if sc.reference:
        out["reference"] = {k: _q(v, REFERENCE_KEYS[k][0]) for k, v in sc.reference}
    return out


def serialize_scenario(sc: Scenario) -> str:
    """Text form of a scenario; parsing it back gives an equal scenario."""
    buf = io.StringIO()
    for name, entries in scenario_sections(sc).items():
        buf.write(f"[{name}]\n")
        for k, v in entries.items():
            buf.write(f"{k} = {v}\n")
        buf.write("\n")
    return buf.getvalue()


def load_scenario(spec: str) -> Scenario:
    """Load a bundled scenario by name or a scenario file by path."""
    if spec in BUNDLED:
        text = resources.files("magnetomech.scenarios").joinpath(f"{spec}.ini").read_text(encoding="utf-8")
        return parse_scenario(text, spec)
    try:
        with open(spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {spec!r}: {exc.strerror}") from exc
    return parse_scenario(text, spec)


# derived sweep parameters: path -> (units, setter)
def _set_height_ratio(sc: Scenario, x: float) -> Scenario:
    return replace(sc, coil=replace(sc.coil, z_c=x * sc.strip.w))


def _set_pearl_ratio(sc: Scenario, x: float) -> Scenario:
    if x < 0:
        raise DomainError("Pearl length must be non-negative")
    return replace(sc, strip=replace(sc.strip, lambda_L=math.sqrt(x * sc.strip.w * sc.strip.t)))


def _set_width_ratio(sc: Scenario, x: float) -> Scenario:
    return replace(sc, coil=replace(sc.coil, w_c=x * sc.strip.w))


DERIVED_PARAMETERS = {
    "coil.height_over_width": _set_height_ratio,
    "coil.width_over_strip_width": _set_width_ratio,
    "strip.pearl_over_width": _set_pearl_ratio,
}

_UNITS = {
    "strip": {k: un for k, (_, un) in _STRIP.items()},
    "cantilever": {k: un for k, (_, un) in _CANTILEVER.items()},
    "coil": {"height": U.LENGTH, "width": U.LENGTH, "length": U.LENGTH},
    "circuit": {"josephson_energy": U.ENERGY, "charging_energy": U.ENERGY,
                "flux_bias": U.DIMENSIONLESS, "quality_factor": U.DIMENSIONLESS},
    "source": {"gradient": U.GRADIENT, "field": U.FIELD, "current": U.CURRENT, "wire_scale": U.LENGTH},
    "noise": {"current_psd": U.PSD, "bias_psd": U.PSD},
}


def sweepable_parameters() -> list[str]:
    names = [f"{s}.{k}" for s, keys in _UNITS.items() for k in keys]
    return sorted(names + list(DERIVED_PARAMETERS))


def parameter_units(path: str) -> dict:
    if path in DERIVED_PARAMETERS:
        return U.DIMENSIONLESS
    sec, _, key = path.partition(".")
    try:
        return _UNITS[sec][key]
    except KeyError:
        raise ScenarioError(f"unknown parameter {path!r}; choose from {', '.join(sweepable_parameters())}") from None


def with_parameter(sc: Scenario, path: str, value: float) -> Scenario:
    """Copy of ``sc`` with one numeric parameter (SI value) replaced."""
    units = parameter_units(path)
    if path in DERIVED_PARAMETERS:
        return DERIVED_PARAMETERS[path](sc, value)
    sec, _, key = path.partition(".")
    data = scenario_sections(sc)
    data.setdefault(sec, {})[key] = U.format_quantity(value, units)
    text = "".join(f"[{s}]\n" + "".join(f"{k} = {v}\n" for k, v in e.items()) for s, e in data.items())
    return parse_scenario(text, sc.name)
