"""Where the strip's field vanishes.

Maps the screening field around a displaced strip and follows the line
B_z = 0 above it. The optimal coil wires sit exactly on that line,
because moving a wire along y changes the flux by the local B_z.
"""

from __future__ import annotations

import numpy as np

from magnetomech.scenario import load_scenario
from magnetomech.strip import StripState, b_field, max_gradient, optimal_coil_width


def main() -> None:
    sc = load_scenario("paper-flagship")
    strip = sc.strip
    w = strip.w
    state = StripState(10e-9, max_gradient(strip))
    for zc in (0.25, 0.5, 1.0, 2.0, 3.0):
        y = np.linspace(0.0, 3.0 + 2 * zc, 4001) * w
        _, Bz = b_field(y, state.z_m + zc * w, state, strip)
        k = int(np.argmax(np.sign(Bz) != np.sign(Bz[0])))
        # linear interpolation between the two samples that bracket the sign change
        crossing = (y[k - 1] - Bz[k - 1] * (y[k] - y[k - 1]) / (Bz[k] - Bz[k - 1])) / w
        print(f"z_c/w = {zc:4.2f}: B_z = 0 at y/w = {crossing:.4f}, w_c*/2w = {optimal_coil_width(zc) / 2:.4f}")


if __name__ == "__main__":
    main()
