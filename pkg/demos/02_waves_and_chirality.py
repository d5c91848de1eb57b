#!/usr/bin/env python3
"""Family values on plane waves, and what the 000 slice measures.

For a circular plane wave of amplitude a, angular frequency w and
helicity sigma, the optical-chirality pseudoscalar

    chi = E . curl E + B . curl B

equals 2 sigma a^2 w^3 — positive for one handedness, negative for the
other, and exactly zero for linear polarization.  The time-time-time
component of the rank-3 family value is the same physics up to the
orientation factor s = g_00 * eps_0123:  Z_000 = -s * chi.

This script evaluates both, prints the observer-block decomposition,
and shows the linear-wave null result.
"""

import numpy as np

from zilchlab.minkowski import BOTH_SIGNATURES
from zilchlab.numeric import (
    eval_decomposition,
    eval_zilch,
    optical_chirality,
    orientation_factor,
)
from zilchlab.solutions import circular_plane_wave, linear_plane_wave, sample

EVENT = (0.3, 0.1, -0.4, 0.7)


def main() -> None:
    for helicity in (+1, -1):
        amplitude, frequency = 0.7, 2.0
        sol = circular_plane_wave(
            amplitude=amplitude, frequency=frequency, helicity=helicity
        )
        s = sample(sol, EVENT, depth=2)
        chi = optical_chirality(s)
        oracle = 2 * helicity * amplitude**2 * frequency**3
        print(
            f"circular wave helicity {helicity:+d}: chi = {chi:+.6f} "
            f"(closed form 2*sigma*a^2*w^3 = {oracle:+.6f})"
        )
        for conv in BOTH_SIGNATURES:
            z000 = eval_zilch(s, "kibble-3", conv)[0, 0, 0]
            s_factor = int(orientation_factor(conv))
            print(
                f"  under {conv.signature}: Z_000 = {z000:+.6f}, "
                f"orientation factor {s_factor:+d}, -s*chi = {-s_factor * chi:+.6f}"
            )
        rep = eval_decomposition(s, "off-shell")
        print("  observer blocks (off-shell variant):")
        for block, arr in sorted(rep.blocks().items()):
            arr = np.asarray(arr)
            print(f"    {block:18s} max |value| = {np.abs(arr).max():.6f}")
        print(f"    report chirality field: {rep.optical_chirality:+.6f}")
        print()

    lin = linear_plane_wave()
    s = sample(lin, EVENT, depth=2)
    z = eval_zilch(s, "kibble-3")
    print(
        "linear plane wave: chi = "
        f"{optical_chirality(s):+.2e}, max |Z_abc| = {np.abs(z).max():.2e} "
        "(identically zero: fields and derivatives stay in fixed planes)"
    )


if __name__ == "__main__":
    main()
