"""Coupling budget of the flagship design.

Loads the bundled flagship scenario, prints the chain from strip
geometry to cooperativity, and compares each headline number with the
published value stored in the scenario.
"""

from __future__ import annotations

import math

from magnetomech.report import evaluate
from magnetomech.scenario import load_scenario


def main() -> None:
    ev = evaluate(load_scenario("paper-flagship"))
    rows = [
        ("maximum gradient b_max", ev.value("b_max"), "T/m"),
        ("zero-point motion z_zp", ev.value("z_zp"), "m"),
        ("optimal coil width w_c*/w", ev.value("wc_over_w"), ""),
        ("geometric factor chi", ev.value("chi"), ""),
        ("2 eta", ev.value("two_eta"), ""),
        ("g0 / 2pi", ev.value("g0") / (2 * math.pi), "Hz"),
        ("g0 / kappa", ev.value("g0_over_kappa"), ""),
        ("Gamma / 2pi", ev.value("Gamma") / (2 * math.pi), "Hz"),
        ("cooperativity", ev.value("cooperativity"), ""),
        ("finite-Lambda factor", ev.value("eta_lambda_ratio"), ""),
    ]
    for label, value, unit in rows:
        print(f"{label:28s} {value:12.4e} {unit}")
    print()
    for q in ev.quantities:
        if q.key.endswith("_vs_published"):
            print(f"{q.key:40s} {q.value:.3f}")
    for a in ev.assumptions:
        print("assumption:", a)


if __name__ == "__main__":
    main()
