"""Evaluate a scenario end to end and render the result as text or CSV."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import coupling as cp
from . import noise as nz
from . import sources as src
from .domain import CoilSpec, ValidationReport, effective_mass, validate_strip, zero_point_motion
from .scenario import HOMOGENEOUS, QUADRUPOLE, REFERENCE_KEYS, WIRE_PAIR, Scenario
from .screening import eta_lambda_ratio
from .strip import (
    HOMOGENEOUS as MODE_HOM,
    QUADRUPOLE as MODE_QUAD,
    StripState,
    chi,
    corner_field,
    eta_star,
    homogeneous_factor,
    max_gradient,
    max_homogeneous_field,
    optimal_coil_width,
)
from .domain import FLUX_QUANTUM

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Quantity:
    key: str
    value: float
    unit: str
    label: str
    section: str


@dataclass
class Evaluation:
    scenario: Scenario
    quantities: list[Quantity] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)
    validation: ValidationReport | None = None
    coupling: cp.CouplingReport | None = None
    noise: nz.NoiseReport | None = None

    def add(self, section, key, value, unit, label) -> None:
        self.quantities.append(Quantity(key, float(value), unit, label, section))

    def value(self, key: str) -> float:
        for q in self.quantities:
            if q.key == key:
                return q.value
        raise KeyError(key)

    def has(self, key: str) -> bool:
        return any(q.key == key for q in self.quantities)


def fmt(value: float) -> str:
    """Fixed scientific format with 9 significant digits."""
    if value is None:
        return ""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.8e}"


def evaluate(sc: Scenario, screening_panels: int = 1000) -> Evaluation:
    """Compute every derived quantity of a scenario.

    Raises:
        DomainError, NumericalError: Propagated from the physics modules.
    """
    ev = Evaluation(sc)
    strip, cant = sc.strip, sc.cantilever
    w = strip.w

    ev.validation = validate_strip(strip)
    for c in ev.validation.failures:
        ev.flags.append(f"validity check {c.name} fails: {c.detail} = {c.ratio:.4g}, "
                        f"required {c.relation} {c.threshold:g}")

    M = effective_mass(strip, cant)
    z_zp = zero_point_motion(M, cant.Omega)
    sec = "mechanics"
    ev.add(sec, "effective_mass", M, "kg", "effective mass M")
    ev.add(sec, "z_zp", z_zp, "m", "zero-point motion z_zp")
    ev.add(sec, "Omega", cant.Omega, "rad/s", "mechanical frequency Omega")
    ev.add(sec, "pearl_over_w", strip.pearl_length / w, "", "Pearl length over width Lambda/w")

    source = sc.source
    mode = MODE_HOM if source.kind == HOMOGENEOUS else MODE_QUAD
    zc_over_w = sc.coil.z_c / w
    w_c = sc.coil.w_c if sc.coil.w_c is not None else optimal_coil_width(zc_over_w, mode) * w
    L_c = sc.coil.L_c if sc.coil.L_c is not None else strip.L
    coil = CoilSpec(sc.coil.z_c, w_c, L_c)
    u = w_c / w
    b_max = max_gradient(strip)

    sec = "coil"
    ev.add(sec, "zc_over_w", zc_over_w, "", "coil height z_c / w")
    ev.add(sec, "wc_over_w", u, "", "coil width w_c / w" + (" (optimal)" if sc.coil.w_c is None else ""))
    ev.add(sec, "L_c", L_c, "m", "coil length L_c")

    sec = "source"
    wires = geometry = None
    b = None
    ev.add(sec, "b_max", b_max, "T/m", "maximum gradient b_max")
    if source.kind == QUADRUPOLE:
        b = b_max if source.gradient is None else source.gradient
        ev.add(sec, "gradient", b, "T/m", "quadrupole gradient b")
    elif source.kind == WIRE_PAIR:
        wires = src.WirePairSpec(source.current, source.wire_scale)
        b_wires = src.gradient_at_origin(wires)
        b = b_wires if source.gradient is None else source.gradient
        geometry = wires
        ev.add(sec, "gradient", b, "T/m", "gradient b")
        ev.add(sec, "gradient_from_wires", b_wires, "T/m", "closed-form gradient at the stated z_w")
        ev.add(sec, "wire_scale", wires.z_w, "m", "stated wire scale z_w")
        if abs(b / b_wires - 1) > 1e-6:
            z_eff = src.z_w_for_gradient(wires.I_w, b)
            geometry = src.WirePairSpec(wires.I_w, z_eff)
            ev.add(sec, "wire_scale_effective", z_eff, "m", "wire scale consistent with b")
            ev.flags.append(
                f"gradient {fmt(b)} T/m is pinned, but I_w = {wires.I_w:g} A at z_w = {fmt(wires.z_w)} m "
                f"gives {fmt(b_wires)} T/m; wire geometry quantities use z_w = {fmt(z_eff)} m")
            ev.assumptions.append("wire-pair: the pinned gradient sets eta and Omega_m; zeta, a_I, a_B, "
                                  "the bias and the field at the coil use the z_w consistent with it")
        ev.add(sec, "bias_field", src.bias_field(geometry), "T", "bias field B_b")
        series, exact = src.gradient_inhomogeneity(w, geometry)
        ev.add(sec, "inhomogeneity_series", series, "", "gradient inhomogeneity alpha (w/z_w)^2")
        ev.add(sec, "inhomogeneity_exact", exact, "", "gradient inhomogeneity from the wire field")
        ev.add(sec, "total_field", src.total_field_with_strip(w_c / 2, coil.z_c, geometry,
                                                              StripState(0.0, b), strip, b),
               "T", "total field at the coil wire (w_c/2, z_c)")
    else:
        B_edge = max_homogeneous_field(strip, "edge")
        B_corner = max_homogeneous_field(strip, "corner")
        B_a = max_homogeneous_field(strip, source.field_convention) if source.field is None else source.field
        ev.add(sec, "field", B_a, "T", "uniform field B_a")
        ev.add(sec, "field_max_edge", B_edge, "T", "maximum field, sqrt(2t/w) B_c")
        ev.add(sec, "field_max_corner", B_corner, "T", "maximum field, sqrt(t/w) B_c")
        limit = max_homogeneous_field(strip, source.field_convention)
        if B_a > limit * (1 + 1e-12):
            ev.flags.append(f"uniform field {fmt(B_a)} T exceeds the {source.field_convention} limit {fmt(limit)} T")
        ev.assumptions.append(f"maximum uniform field from the {source.field_convention} convention")

    if b is not None:
        corner = corner_field(strip, b)
        ev.add(sec, "corner_field", corner, "T", "field at the strip corner")
        if corner > strip.B_c * (1 + 1e-9):
            ev.flags.append(f"corner field {fmt(corner)} T exceeds B_c = {fmt(strip.B_c)} T")

    sec = "coupling"
    chi_val = chi(u, zc_over_w)
    ev.add(sec, "chi", chi_val, "", "geometric factor chi")
    if mode == MODE_QUAD:
        e_star = eta_star(z_zp, b, L_c, w)
        eta = e_star * chi_val
    else:
        e_star = eta_star(z_zp, b_max, L_c, w)
        hf = homogeneous_factor(u, zc_over_w)
        ev.add(sec, "homogeneous_factor", hf, "", "uniform-field geometric factor")
        eta = 2 * B_a * L_c * z_zp / FLUX_QUANTUM * hf
        ev.add(sec, "eta_over_eta_star_edge", 2 * B_edge / (b_max * w) * hf, "",
               "eta / eta_star with the sqrt(2t/w) B_c field")
        ev.add(sec, "eta_over_eta_star_corner", 2 * B_corner / (b_max * w) * hf, "",
               "eta / eta_star with the sqrt(t/w) B_c field")
    ev.add(sec, "eta_star", e_star, "", "eta_star" + (" (at b_max)" if mode == MODE_HOM else ""))
    ev.add(sec, "eta", eta, "", "coupling eta")
    ev.add(sec, "two_eta", 2 * eta, "", "2 eta")
    ev.add(sec, "eta_over_eta_star", eta / e_star, "", "eta / eta_star")
    ratio = eta_lambda_ratio(strip.pearl_length / w, coil, strip, sc.options.screening_model, screening_panels)
    ev.add(sec, "eta_lambda_ratio", ratio, "", f"eta_Lambda / eta ({sc.options.screening_model} model)")

    circuit = sc.circuit
    rep = cp.coupling_report(eta, e_star, chi_val, circuit, cant, source.kind, sc.options.gamma_convention)
    ev.coupling = rep
    sec = "circuit"
    ev.add(sec, "omega0", rep.omega0, "rad/s", "circuit frequency omega0")
    ev.add(sec, "ej_over_ec", circuit.ej_over_ec, "", "E_J / E_C at the bias point")
    ev.add(sec, "flux_bias", circuit.flux_bias, "", "flux bias Phi(0)/Phi0")
    ev.add(sec, "phi", rep.phi, "", "flux sensitivity phi")
    ev.add(sec, "g0", rep.g0, "rad/s", "single-photon coupling g0")
    ev.add(sec, "kappa", rep.kappa, "rad/s", "circuit decay kappa")
    ev.add(sec, "g0_over_kappa", rep.g0_over_kappa, "", "g0 / kappa")
    ev.add(sec, "Gamma", rep.Gamma, "rad/s", f"thermal decoherence Gamma ({rep.gamma_convention})")
    ev.add(sec, "cooperativity", rep.cooperativity, "", "single-photon cooperativity C")
    ev.assumptions.append(
        f"circuit: omega0 = 2pi x {fmt(rep.omega0 / TWO_PI)} Hz with E_J/E_C = {circuit.ej_over_ec:.4g} "
        "at the bias point (not fixed by the design, chosen by the scenario)")
    ev.assumptions.append(
        "Gamma = gamma k_B T / (hbar Omega_eff) with Omega_eff = "
        + ("Omega / 2pi" if rep.gamma_convention == cp.CYCLIC else "Omega"))
    if rep.phi == 0:
        ev.flags.append("coupling switched off: zero flux bias gives phi = 0")
    if not circuit.is_transmon:
        ev.flags.append(f"E_J/E_C = {circuit.ej_over_ec:.4g} is below the transmon regime "
                        f"({cp.TRANSMON_MIN_RATIO:g})")

    sec = "noise"
    S_I2 = sc.noise.current(2 * cant.Omega)
    R02 = nz.heating_rate(cant.Omega, S_I2)
    ev.add(sec, "R_02", R02, "rad/s", "parametric heating R_0->2")
    if rep.g0 > 0:
        ev.add(sec, "R_02_over_g0", R02 / rep.g0, "", "R_0->2 / g0")
    Omega_m = float("nan")
    if b is not None:
        Omega_m = nz.magnetic_spring(b, strip, M)
        ev.add(sec, "Omega_m", Omega_m, "rad/s", "magnetic spring Omega_m")
    a_I = a_B = zeta_val = float("nan")
    spectrum = ()
    if geometry is not None:
        form = sc.options.amplification_form
        zeta_val = nz.zeta(coil, wires)
        ev.add(sec, "zeta", zeta_val, "", "zeta at the stated z_w")
        if geometry is not wires:
            ev.add(sec, "zeta_effective", nz.zeta(coil, geometry), "", "zeta at the consistent z_w")
        a_I, a_B = nz.noise_amplification(coil, geometry, chi_val, w, form=form)
        pI, pB = nz.noise_amplification(coil, geometry, chi_val, w, form=nz.PRINTED)
        cI, cB = nz.noise_amplification(coil, geometry, chi_val, w, form=nz.CONSISTENT)
        oI, oB = nz.amplification_by_perturbation(coil, geometry, strip)
        ev.add(sec, "a_I", a_I, "", f"current-noise amplification a_I ({form})")
        ev.add(sec, "a_B", a_B, "", f"bias-noise amplification a_B ({form})")
        ev.add(sec, "a_I_printed", pI, "", "a_I, printed closed form")
        ev.add(sec, "a_B_printed", pB, "", "a_B, printed closed form")
        ev.add(sec, "a_I_perturbation", oI, "", "a_I from flux perturbation")
        ev.add(sec, "a_B_perturbation", oB, "", "a_B from flux perturbation")
        if abs(cI / oI - 1) > 0.01 or abs(cB / oB - 1) > 0.01:
            ev.flags.append("noise amplification closed form disagrees with flux perturbation by more than 1%")
        if abs(pI / oI - 1) > 0.01 or abs(pB / oB - 1) > 0.01:
            ev.flags.append(f"printed a_I, a_B differ from flux perturbation (ratios {pI / oI:.3f}, "
                            f"{pB / oB:.3f})")
        S = nz.flux_noise_psd((a_I, a_B), sc.noise, cant.Omega)
        spectrum = ((cant.Omega, S),)
        ev.add(sec, "S_Phi_rel", S, "1/Hz", "flux noise S_Phi / Phi0^2 at Omega")
    ev.noise = nz.NoiseReport(a_I, a_B, zeta_val, spectrum, Omega_m, R02)

    sec = "reference"
    tol = sc.options.reference_tolerance
    for key, published in sc.reference:
        label = REFERENCE_KEYS[key][1]
        if not ev.has(key):
            ev.flags.append(f"reference {key} has no computed counterpart for this source")
            continue
        computed = ev.value(key)
        r = computed / published if published != 0 else float("nan")
        ev.add(sec, f"{key}_vs_published", r, "", f"{label}: computed / published ({fmt(published)})")
        if not abs(r - 1) <= tol:
            ev.flags.append(f"{label}: computed {fmt(computed)} vs published {fmt(published)} (ratio {r:.4g})")
    return ev


SWEEP_COLUMNS = ("zc_over_w", "wc_over_w", "pearl_over_w", "chi", "eta_star", "eta", "two_eta",
                 "eta_over_eta_star", "eta_lambda_ratio", "g0", "kappa", "g0_over_kappa", "Gamma",
                 "cooperativity")


def render_text(ev: Evaluation) -> str:
    lines = [f"scenario: {ev.scenario.name}", f"source: {ev.scenario.source.kind}"]
    width = max(len(q.key) for q in ev.quantities)
    section = None
    for q in ev.quantities:
        if q.section != section:
            section = q.section
            lines.append("")
            lines.append(f"[{section}]")
        extra = f"  (2pi x {fmt(q.value / TWO_PI)} Hz)" if q.unit == "rad/s" else ""
        unit = f" {q.unit}" if q.unit else ""
        lines.append(f"  {q.key:<{width}}  {fmt(q.value)}{unit}{extra}  # {q.label}")
    lines.append("")
    lines.append("[validity]")
    for c in ev.validation.checks:
        lines.append(f"  {c.name:<{width}}  {'pass' if c.passed else 'FAIL'}  {c.detail} = {fmt(c.ratio)} "
                     f"(required {c.relation} {c.threshold:g})")
    lines.append("")
    lines.append("[flags]")
    lines.extend(f"  - {f}" for f in ev.flags) if ev.flags else lines.append("  none")
    lines.append("")
    lines.append("[assumptions]")
    lines.extend(f"  - {a}" for a in ev.assumptions)
    return "\n".join(lines) + "\n"


def render_csv_row(ev: Evaluation) -> tuple[list[str], list[str]]:
    keys = ["scenario"] + [q.key for q in ev.quantities] + ["flags"]
    vals = [ev.scenario.name] + [fmt(q.value) for q in ev.quantities] + [str(len(ev.flags))]
    return keys, vals
