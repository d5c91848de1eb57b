#!/usr/bin/env python3
"""The variational symmetry behind the conservation laws, numerically.

The rank-3 conservation family exists because a second-order field
update is a variational symmetry of the two-potential action.  The
step with symmetric parameter matrix zeta is

    A_c -> A_c - zeta^{ab} G_{ca,b}
    C_c -> C_c + zeta^{ab} F_{ca,b}

and two facts make it special, BOTH of which hold off shell (for any
field configuration, not just solutions):

  1. the induced strength change is exactly
     delta F_{cd} = zeta^{ab} G_{cd,ab} (a pure curvature expression —
     gauge structure survives the step), and
  2. the Lagrangian changes by a total divergence,
     delta L = d_c (boundary current)^c, with a current built from the
     same superpotential that generates the conserved tensors.

This script verifies both facts on a catalog solution AND on a random
non-solution jet, demonstrating the off-shell character.
"""

import numpy as np

from zilchlab.minkowski import BOTH_SIGNATURES
from zilchlab.numeric import symmetry_variation_residual
from zilchlab.solutions import (
    ZilchSymmetryStep,
    apply_zilch_symmetry_step,
    circular_plane_wave,
    random_field_sample,
    sample,
)


def strength(s, sector="A"):
    arr = s.array(sector, 1)
    return np.swapaxes(arr, 0, 1) - arr  # curl_{ab} = pot_{b,a} - pot_{a,b}


def strength_dd(s, sector):
    arr = s.array(sector, 3)  # [c, d, j1, j2]
    return np.swapaxes(arr, 0, 1) - arr  # curl_{ab, j1 j2}


def main() -> None:
    rng = np.random.default_rng(11)
    zeta = rng.normal(size=(4, 4))
    zeta = 0.5 * (zeta + zeta.T)
    step = ZilchSymmetryStep(zeta)

    configs = [
        ("circular plane wave (solution)", sample(circular_plane_wave(), (0.2, 0.0, 0.5, -0.3), depth=3)),
        ("random jet (NOT a solution)", random_field_sample(seed=5, depth=3)),
    ]

    for label, s in configs:
        print(f"--- {label} ---")
        stepped = apply_zilch_symmetry_step(s, step)
        measured = strength(stepped) - strength(s)
        predicted = np.einsum("ab,cdab->cd", zeta, strength_dd(s, "C"))
        gap = np.abs(measured - predicted).max()
        print(f"  |delta F - zeta^ab G_cd,ab|_max = {gap:.3e}  (fact 1)")

        for conv in BOTH_SIGNATURES:
            res = symmetry_variation_residual(s, zeta, conv)
            print(
                f"  |delta L - div(current)| / scale = {res:.3e} "
                f"under {conv.signature}  (fact 2)"
            )
        print()

    print(
        "Both residuals sit at machine epsilon on the random jet too: "
        "the symmetry is variational OFF SHELL, which is exactly what "
        "lets the exact layer derive the conservation family without "
        "imposing the field equations first."
    )


if __name__ == "__main__":
    main()
