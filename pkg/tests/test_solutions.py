"""Tests for the analytic solution catalog: exactness, duality
partners, gauge independence, rotations, and the symmetry step."""

import math
from fractions import Fraction

import numpy as np
import pytest

from zilchlab import numeric as nm
from zilchlab.minkowski import BOTH_SIGNATURES, DEFAULT_CONVENTION
from zilchlab.noether import ZilchForm
from zilchlab.solutions import (
    AnalyticSolution,
    DualityRotation,
    ZilchSymmetryStep,
    apply_duality_rotation,
    apply_zilch_symmetry_step,
    circular_plane_wave,
    field_scale,
    linear_plane_wave,
    on_shell_residual,
    random_field_sample,
    sample,
    solution_from_config,
    standing_wave,
    superposition,
)

TILT = (2.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0)  # exact unit 3-vector
TILT_POL = (1.0 / 3.0, 2.0 / 3.0, -2.0 / 3.0)  # orthogonal exact unit


def catalog_variants():
    """A representative spread: every kind, both gauges, tilted axes."""
    return [
        linear_plane_wave(1.0, 1.0),
        linear_plane_wave(1.1, 1.7, direction=TILT, polarization=TILT_POL),
        linear_plane_wave(0.9, 2.0, gauge="lorenz"),
        circular_plane_wave(1.0, 1.0),
        circular_plane_wave(0.7, 2.0, helicity=-1),
        circular_plane_wave(1.3, 2.5, direction=TILT, gauge="lorenz"),
        standing_wave(0.8, 1.5),
        superposition(
            [
                circular_plane_wave(1.0, 1.0),
                circular_plane_wave(0.8, 2.0, direction=(0.0, 0.0, -1.0)),
            ]
        ),
    ]


def random_events(n, seed=11, span=2.0):
    rng = np.random.default_rng(seed)
    return rng.uniform(-span, span, size=(n, 4))


# ---------------------------------------------------------------------------
# exact-solution invariants


def test_duality_constraint_on_catalog():
    """G equals the Hodge dual of F at random events, every variant."""
    for conv in BOTH_SIGNATURES:
        for sol in catalog_variants():
            for ev in random_events(8):
                s = sample(sol, ev, depth=1)
                f = nm.strength(s, "A", 0)
                g = nm.strength(s, "C", 0)
                gap = np.abs(g - nm.hodge_dual(f, conv)).max()
                assert gap <= 1e-13


def test_null_wave_invariants():
    """Travelling plane waves are null: F.F = 0 and F.*F = 0."""
    conv = DEFAULT_CONVENTION
    gm = np.asarray(conv.g, dtype=float)
    waves = [
        linear_plane_wave(1.0, 1.0),
        linear_plane_wave(1.1, 1.7, direction=TILT, polarization=TILT_POL),
        circular_plane_wave(1.0, 1.0),
        circular_plane_wave(0.7, 2.0, direction=TILT, helicity=-1),
    ]
    for sol in waves:
        for ev in random_events(6, seed=5):
            s = sample(sol, ev, depth=1)
            f = nm.strength(s, "A", 0)
            sf = nm.hodge_dual(f, conv)
            fup = gm[:, None] * gm[None, :] * f
            assert abs(float(np.sum(f * fup))) <= 1e-12
            assert abs(float(np.sum(sf * fup))) <= 1e-12


def test_on_shell_residual_catalog_and_negative_control():
    for sol in catalog_variants():
        for ev in random_events(6, seed=7):
            assert on_shell_residual(sample(sol, ev, depth=2)) <= 1e-12
    # random jets are far from the solution surface (detector sanity)
    controls = [on_shell_residual(random_field_sample(seed)) for seed in range(20)]
    assert min(controls) > 1e-2


def test_superposition_is_a_solution():
    mix = superposition(
        [
            linear_plane_wave(0.6, 1.0),
            circular_plane_wave(0.9, 2.0, direction=TILT),
            standing_wave(0.4, 1.5),
        ]
    )
    for ev in random_events(8, seed=13):
        assert on_shell_residual(sample(mix, ev, depth=2)) <= 1e-12


def test_gauge_choice_invisible_in_strengths_and_zilch():
    """Temporal vs lorenz potentials differ, F/G/zilch do not."""
    pairs = [
        (linear_plane_wave(1.2, 1.5, gauge=g) for g in ("temporal", "lorenz")),
        (
            circular_plane_wave(0.8, 2.0, direction=TILT, gauge=g)
            for g in ("temporal", "lorenz")
        ),
    ]
    for pair in pairs:
        temporal, lorenz = pair
        for ev in random_events(4, seed=3):
            st = sample(temporal, ev, depth=2)
            sl = sample(lorenz, ev, depth=2)
            # the potentials themselves must differ (non-vacuous check)
            assert np.abs(st.array("A", 0) - sl.array("A", 0)).max() > 1e-3
            for order in (0, 1):
                for sector in ("A", "C"):
                    gap = np.abs(
                        nm.strength(st, sector, order)
                        - nm.strength(sl, sector, order)
                    ).max()
                    assert gap <= 1e-12
            for form in nm.NUMERIC_FORMS:
                gap = np.abs(
                    nm.eval_zilch(st, form) - nm.eval_zilch(sl, form)
                ).max()
                assert gap <= 1e-12


def test_circular_wave_field_magnitudes_match_oracle():
    """|E| = |B| = a*omega and E is orthogonal to B (frozen oracle)."""
    for amp, omega in ((1.0, 1.0), (2.0, 3.0), (0.7, 2.0)):
        sol = circular_plane_wave(amp, omega)
        for ev in [(0.0, 0.0, 0.0, 0.0), *random_events(5, seed=2)]:
            s = sample(sol, ev, depth=1)
            e = nm.electric_field(s)
            b = nm.magnetic_field(s)
            assert abs(float(np.linalg.norm(e)) - amp * omega) <= 1e-12 * max(
                1.0, amp * omega
            )
            assert abs(float(np.linalg.norm(b)) - amp * omega) <= 1e-12 * max(
                1.0, amp * omega
            )
            assert abs(float(np.dot(e, b))) <= 1e-12 * (amp * omega) ** 2


def test_poynting_vector_points_along_propagation():
    sol = circular_plane_wave(1.0, 1.0, direction=TILT)
    s = sample(sol, (0.4, -0.3, 0.2, 0.1), depth=1)
    poynting = np.cross(nm.electric_field(s), nm.magnetic_field(s))
    n = np.asarray(TILT)
    assert np.abs(poynting - np.dot(poynting, n) * n).max() <= 1e-12
    assert float(np.dot(poynting, n)) > 0.0


def test_zero_amplitude_gives_exact_zeros():
    sol = linear_plane_wave(0.0, 1.0)
    s = sample(sol, (0.3, 0.1, -0.5, 2.0), depth=3)
    for sector in ("A", "C"):
        for order in range(4):
            assert np.all(s.array(sector, order) == 0.0)


# ---------------------------------------------------------------------------
# closed-form derivatives against a finite-difference oracle


_FD8 = ((1, 4.0 / 5.0), (2, -1.0 / 5.0), (3, 4.0 / 105.0), (4, -1.0 / 280.0))


def _fd8_of_order2(sol, event, comp, derivs, axis, h=0.05):
    """8th-order central difference (in `axis`) of an order-2 entry."""
    total = 0.0
    for offset, weight in _FD8:
        for sgn in (1.0, -1.0):
            ev = list(event)
            ev[axis] += sgn * offset * h
            val = sample(sol, ev, depth=2).deriv("A", comp, derivs)
            total += sgn * weight * val
    return total / h


def test_order3_derivatives_match_fd_oracle():
    sol = circular_plane_wave(1.1, 1.3, direction=TILT)
    event = (0.25, -0.4, 0.6, 0.15)
    s = sample(sol, event, depth=3)
    scale = max(
        1e-30, float(np.abs(s.array("A", 3)).max())
    )
    rng = np.random.default_rng(21)
    for _ in range(12):
        comp = int(rng.integers(0, 4))
        derivs = tuple(int(d) for d in rng.integers(0, 4, size=2))
        axis = int(rng.integers(0, 4))
        exact = s.deriv("A", comp, (*derivs, axis))
        approx = _fd8_of_order2(sol, event, comp, derivs, axis)
        assert abs(exact - approx) / scale <= 1e-8


# ---------------------------------------------------------------------------
# duality rotations


def test_duality_rotation_identity_and_quarter_turn():
    s = sample(circular_plane_wave(), (0.1, 0.2, 0.3, 0.4), depth=2)
    ident = apply_duality_rotation(s, DualityRotation(angle=0.0))
    for order in range(3):
        assert np.array_equal(ident.array("A", order), s.array("A", order))
        assert np.array_equal(ident.array("C", order), s.array("C", order))
    quarter = apply_duality_rotation(s, DualityRotation(t=1))
    for order in range(3):
        assert np.array_equal(quarter.array("A", order), s.array("C", order))
        assert np.array_equal(quarter.array("C", order), -s.array("A", order))


def test_duality_rotation_is_exactly_orthogonal_in_t():
    for t in (Fraction(1, 3), Fraction(2), Fraction(-5, 7)):
        den = 1 + t * t
        c, sn = (1 - t * t) / den, 2 * t / den
        assert c * c + sn * sn == 1  # exact rational identity


def test_duality_rotation_group_law():
    s = sample(circular_plane_wave(1.0, 1.0, direction=TILT), (0.3, 0.0, -0.2, 0.7))
    t1, t2 = Fraction(1, 3), Fraction(1, 2)
    a1 = 2.0 * math.atan(float(t1))
    a2 = 2.0 * math.atan(float(t2))
    two_steps = apply_duality_rotation(
        apply_duality_rotation(s, DualityRotation(t=t1)), DualityRotation(t=t2)
    )
    one_step = apply_duality_rotation(s, DualityRotation(angle=a1 + a2))
    for order in range(4):
        gap = np.abs(
            two_steps.array("A", order) - one_step.array("A", order)
        ).max()
        assert gap <= 1e-13


def test_rotating_solution_equals_rotating_sample():
    rot = DualityRotation(angle=0.73)
    sol = superposition(
        [linear_plane_wave(0.9, 1.0), circular_plane_wave(0.5, 2.0, direction=TILT)]
    )
    ev = (0.2, 0.6, -0.1, 0.4)
    via_solution = sample(apply_duality_rotation(sol, rot), ev, depth=2)
    via_sample = apply_duality_rotation(sample(sol, ev, depth=2), rot)
    for sector in ("A", "C"):
        for order in range(3):
            gap = np.abs(
                via_solution.array(sector, order) - via_sample.array(sector, order)
            ).max()
            assert gap <= 1e-14


def test_rotation_induces_strength_rotation():
    rot = DualityRotation(angle=-1.1)
    c, sn = rot.cos_sin()
    s = sample(circular_plane_wave(1.2, 1.4), (0.5, 0.1, 0.2, -0.3), depth=1)
    rotated = apply_duality_rotation(s, rot)
    f, g = nm.strength(s, "A", 0), nm.strength(s, "C", 0)
    assert np.abs(nm.strength(rotated, "A", 0) - (c * f + sn * g)).max() <= 1e-14
    assert np.abs(nm.strength(rotated, "C", 0) - (-sn * f + c * g)).max() <= 1e-14


def test_duality_rotation_argument_validation():
    with pytest.raises(ValueError):
        DualityRotation()
    with pytest.raises(ValueError):
        DualityRotation(angle=0.1, t=1)
    with pytest.raises(TypeError):
        apply_duality_rotation(3.0, DualityRotation(t=1))


# ---------------------------------------------------------------------------
# zilch symmetry step


def test_zero_step_is_identity():
    s = sample(standing_wave(), (0.3, 0.2, 0.1, 0.0), depth=3)
    out = apply_zilch_symmetry_step(s, ZilchSymmetryStep(np.zeros((4, 4))))
    assert out.depth == 1
    for sector in ("A", "C"):
        for order in range(2):
            assert np.array_equal(out.array(sector, order), s.array(sector, order))


def test_step_requires_symmetric_parameter_and_depth():
    bad = np.zeros((4, 4))
    bad[0, 1] = 1.0
    with pytest.raises(ValueError):
        ZilchSymmetryStep(bad)
    with pytest.raises(ValueError):
        ZilchSymmetryStep(np.zeros((3, 3)))
    step = ZilchSymmetryStep(np.eye(4))
    shallow = sample(linear_plane_wave(), (0.0, 0.0, 0.0, 0.0), depth=1)
    with pytest.raises(ValueError):
        apply_zilch_symmetry_step(shallow, step)


def test_step_induces_stated_strength_change():
    """F -> F + zeta^{ab} G_{cd,ab} and G -> G - zeta^{ab} F_{cd,ab},
    off-shell (pure Bianchi consequence)."""
    rng = np.random.default_rng(17)
    zeta = rng.uniform(-1.0, 1.0, (4, 4))
    zeta = 0.5 * (zeta + zeta.T)
    step = ZilchSymmetryStep(zeta)
    for seed in range(6):
        s = random_field_sample(seed, depth=3)
        out = apply_zilch_symmetry_step(s, step)
        f0, g0 = nm.strength(s, "A", 0), nm.strength(s, "C", 0)
        f2, g2 = nm.strength(s, "A", 2), nm.strength(s, "C", 2)
        df = nm.strength(out, "A", 0) - f0
        dg = nm.strength(out, "C", 0) - g0
        assert np.abs(df - np.einsum("ab,cdab->cd", zeta, g2)).max() <= 1e-12
        assert np.abs(dg + np.einsum("ab,cdab->cd", zeta, f2)).max() <= 1e-12


def test_lagrangian_change_equals_current_divergence():
    """First-order Lagrangian change along the step = div of the paired
    boundary current — off-shell, so on random jets too."""
    rng = np.random.default_rng(29)
    zeta = rng.uniform(-1.0, 1.0, (4, 4))
    zeta = 0.5 * (zeta + zeta.T)
    for conv in BOTH_SIGNATURES:
        for sol in (circular_plane_wave(1.0, 1.0, direction=TILT), standing_wave()):
            for ev in random_events(4, seed=31):
                s = sample(sol, ev, depth=3)
                assert nm.symmetry_variation_residual(s, zeta, conv) <= 1e-10
        for seed in range(10):
            s = random_field_sample(seed, depth=3)
            assert nm.symmetry_variation_residual(s, zeta, conv) <= 1e-10


# ---------------------------------------------------------------------------
# configuration tables


def test_config_round_trip_each_kind():
    tables = [
        {"kind": "linear-plane-wave", "amplitude": 1.2, "frequency": 1.5},
        {
            "kind": "circular-plane-wave",
            "amplitude": 0.7,
            "frequency": 2.0,
            "direction": [2 / 3, 1 / 3, 2 / 3],
            "helicity": -1,
            "gauge": "lorenz",
        },
        {"kind": "standing-wave", "polarization": [0.0, 1.0, 0.0]},
        {
            "kind": "superposition",
            "parts": [
                {"kind": "circular-plane-wave"},
                {"kind": "circular-plane-wave", "frequency": 2.0, "direction": [0, 0, -1]},
            ],
        },
    ]
    for table in tables:
        sol = solution_from_config(table)
        assert isinstance(sol, AnalyticSolution)
        assert sol.kind == table["kind"]
        assert on_shell_residual(sample(sol, (0.1, 0.2, 0.3, 0.4), depth=2)) <= 1e-12


def test_config_errors_carry_location():
    with pytest.raises(ValueError, match=r"solution\.kind"):
        solution_from_config({"kind": "spherical-wave"})
    with pytest.raises(ValueError, match=r"solution\.typo"):
        solution_from_config({"kind": "linear-plane-wave", "typo": 1})
    with pytest.raises(ValueError, match=r"solution\.parts\[1\]"):
        solution_from_config(
            {
                "kind": "superposition",
                "parts": [{"kind": "linear-plane-wave"}, {"kind": "bad"}],
            }
        )
    with pytest.raises(ValueError, match=r"solution\.parts"):
        solution_from_config({"kind": "superposition", "parts": []})
    with pytest.raises(ValueError, match="direction"):
        solution_from_config(
            {"kind": "linear-plane-wave", "direction": [1.0, 1.0, 0.0]}
        )
    with pytest.raises(ValueError, match="frequency"):
        solution_from_config({"kind": "circular-plane-wave", "frequency": -2.0})
    with pytest.raises(ValueError, match="helicity"):
        solution_from_config({"kind": "circular-plane-wave", "helicity": 3})
    with pytest.raises(ValueError, match="orthogonal"):
        solution_from_config(
            {
                "kind": "linear-plane-wave",
                "direction": [0, 0, 1],
                "polarization": [0, 0.6, 0.8],
            }
        )


# ---------------------------------------------------------------------------
# sampling mechanics


def test_sample_validation_and_depth_bookkeeping():
    sol = linear_plane_wave()
    with pytest.raises(ValueError, match="4 coordinates"):
        sample(sol, (0.0, 0.0, 0.0))
    s = sample(sol, (0.0, 0.0, 0.0, 0.0), depth=2)
    with pytest.raises(ValueError, match="order"):
        s.deriv("A", 1, (0, 0, 0))
    with pytest.raises(ValueError, match="order"):
        s.array("A", 3)


def test_mixed_partials_symmetric():
    for maker in (
        lambda: sample(circular_plane_wave(1.0, 2.0, direction=TILT), (0.3, 0.1, 0.2, 0.5)),
        lambda: random_field_sample(5),
    ):
        s = maker()
        arr = s.array("A", 3)
        for perm_axes in ((0, 2, 1, 3), (0, 3, 2, 1), (0, 1, 3, 2)):
            assert np.array_equal(arr, np.transpose(arr, perm_axes))


def test_max_frequency_and_scaling():
    pair = superposition(
        [circular_plane_wave(1.0, 1.0), circular_plane_wave(0.8, 2.0, direction=(0, 0, -1))]
    )
    assert pair.max_frequency == pytest.approx(2.0)
    s1 = sample(pair, (0.1, 0.2, 0.3, 0.4), depth=1)
    s2 = sample(pair.scaled(3.0), (0.1, 0.2, 0.3, 0.4), depth=1)
    assert field_scale(s2) == pytest.approx(3.0 * field_scale(s1), rel=1e-14)
