"""Optimal pick-up coil versus height, quadrupole against uniform field.

For each coil height the width is optimised, then the coupling relative
to the ideal bound is tabulated. Far from the strip the quadrupole
coupling falls as (z_c/w)^-1 and the uniform-field one as (z_c/w)^-2,
which the fitted log slopes confirm.
"""

from __future__ import annotations

import csv
import sys

import numpy as np

from magnetomech.strip import HOMOGENEOUS, QUADRUPOLE, chi, homogeneous_factor, optimal_coil_width


def main(out=sys.stdout) -> None:
    x = np.geomspace(0.1, 100, 31)
    quad = [chi(optimal_coil_width(v, QUADRUPOLE), v) for v in x]
    hom = [homogeneous_factor(optimal_coil_width(v, HOMOGENEOUS), v) for v in x]
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["zc_over_w", "wc_star_quadrupole", "chi", "wc_star_homogeneous", "g"])
    for v, q, h in zip(x, quad, hom):
        writer.writerow([f"{v:.6e}", f"{optimal_coil_width(v):.6e}", f"{q:.6e}",
                         f"{optimal_coil_width(v, HOMOGENEOUS):.6e}", f"{h:.6e}"])
    far = x >= 10
    sq = np.polyfit(np.log(x[far]), np.log(np.array(quad)[far]), 1)[0]
    sh = np.polyfit(np.log(x[far]), np.log(np.array(hom)[far]), 1)[0]
    print(f"# far-field slopes: quadrupole {sq:.3f}, homogeneous {sh:.3f}", file=sys.stderr)


if __name__ == "__main__":
    main()
