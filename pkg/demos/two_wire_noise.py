"""Noise budget of the two-wire source.

Compares the closed-form flux sensitivities with a direct numerical
perturbation of the coil flux, then converts current noise into flux
noise and parametric heating.
"""

from __future__ import annotations

import math

from magnetomech.report import evaluate
from magnetomech.scenario import load_scenario


def main() -> None:
    ev = evaluate(load_scenario("paper-two-wire"))
    for key in ("a_I", "a_I_perturbation", "a_I_printed", "a_B", "a_B_perturbation", "a_B_printed"):
        print(f"{key:20s} {ev.value(key):10.4e}")
    print(f"{'S_Phi / Phi0^2':20s} {ev.value('S_Phi_rel'):10.4e} 1/Hz")
    print(f"{'R_02 / 2pi':20s} {ev.value('R_02') / (2 * math.pi):10.4e} Hz")
    print(f"{'Omega_m / 2pi':20s} {ev.value('Omega_m') / (2 * math.pi):10.4e} Hz")
    for flag in ev.flags:
        print("flag:", flag)


if __name__ == "__main__":
    main()
