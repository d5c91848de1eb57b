#!/usr/bin/env python3
"""Finite-difference conservation check, and a trap worth knowing.

The conservation statement d_c Z_{ab}{}^c = 0 can be tested with no
symbolic input at all: evaluate the rank-3 family values on a lattice,
apply central finite differences, and watch the residual fall like
h^p as the lattice refines (p = stencil order).

The trap: on a SINGLE monochromatic circular plane wave every family
value is spacetime-CONSTANT (all quadratics in the rigidly rotating
E, B are translation invariant), so finite differences are exact and
the "residual" is pure roundoff — it GROWS as h shrinks.  The same
degeneracy persists for equal-frequency counter-propagating pairs
(separable cross harmonics).  A meaningful convergence study needs a
configuration whose family values genuinely vary along the derivative
axes; the simplest catalog choice is a counter-propagating pair with
UNEQUAL frequencies.
"""

import numpy as np

from zilchlab.numeric import GridSpec, divergence_residual_grid, eval_zilch
from zilchlab.solutions import circular_plane_wave, sample, superposition


def main() -> None:
    # Part 1: the constant-value degeneracy, measured.
    single = circular_plane_wave()
    events = [(0.0, 0.0, 0.0, 0.0), (0.7, -0.3, 0.2, 1.1), (-1.2, 0.5, 0.9, -0.4)]
    values = np.stack(
        [eval_zilch(sample(single, ev, depth=2), "kibble-3") for ev in events]
    )
    spread = np.abs(values - values[0]).max()
    print(
        f"single circular wave: max spread of Z_abc across events = {spread:.2e}"
        "\n  -> constant in spacetime; finite differences of it are exact,"
        "\n     so a grid study there measures roundoff, not truncation.\n"
    )

    # Part 2: a configuration that actually exercises the derivative.
    pair = superposition(
        [
            circular_plane_wave(),  # frequency 1 along +z
            circular_plane_wave(
                frequency=2.0, amplitude=0.8, direction=(0.0, 0.0, -1.0)
            ),
        ]
    )
    for stencil in (2, 4):
        grid = GridSpec(
            origin=(0.0, 0.0, 0.0, 0.0),
            spacing=0.19,
            extents=8,
            stencil_order=stencil,
        )
        table = divergence_residual_grid(pair, "kibble-3", grid, levels=3)
        print(f"bichromatic pair, stencil order {stencil}:")
        print("    h          residual       observed order")
        for row in table.rows:
            order = "" if row.observed_order is None else f"{row.observed_order:.3f}"
            print(f"    {row.h:<10.5g} {row.residual:<14.3e} {order}")
        print()

    # Part 3: the resolution guard.
    coarse = GridSpec(
        origin=(0.0, 0.0, 0.0, 0.0), spacing=1.0, extents=8, stencil_order=4
    )
    try:
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            divergence_residual_grid(pair, "kibble-3", coarse, levels=1)
    except Exception as err:
        print(f"under-resolved grid is refused: {err}")


if __name__ == "__main__":
    main()
