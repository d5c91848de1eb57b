"""Closed-form source-free wave solutions with duality partners.

Every catalog solution stores both potentials as finite sums of
travelling trigonometric terms

    amp * cos(k_a x^a + phase),

so derivatives of any order are again closed-form terms (each
derivative multiplies by a wavevector component and advances the phase
by a quarter turn).  No numerical differentiation happens anywhere in
this module; samples are exact to round-off.

Field extraction conventions (documented in docs/conventions.md):
coordinates x^a = (t, x, y, z); F_ab = d_a A_b - d_b A_a; electric
field E_i = F_i0; magnetic field B_i = (1/2) eps_ijk F_jk.  The
magnetic-sector potential of each catalog entry is built so that its
strength equals the Hodge dual of the electric-sector strength, i.e.
the pair (E_C, B_C) extracted from G equals (-B, E).  With temporal
gauge and a transverse potential this is another closed-form wave.

The lorenz gauge variant adds a null gauge term (the gradient of a
wave-phase scalar) to both potentials: potentials change, strengths do
not, and the Lorenz condition holds because the phase covector is null
and the temporal-gauge potential is already transverse.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

FIELDS = ("A", "C")
KINDS = (
    "linear-plane-wave",
    "circular-plane-wave",
    "superposition",
    "standing-wave",
)
GAUGES = ("temporal", "lorenz")

# lorenz-variant gauge-term strengths, per sector (arbitrary nonzero
# choices, fixed so the gauge comparison test is not vacuous)
_GAUGE_STRENGTH = {"A": 0.3, "C": -0.2}

_QUARTER = math.pi / 2.0


@dataclass(frozen=True)
class TrigTerm:
    """One travelling term amp * cos(k . x + phase)."""

    amp: float
    k: tuple  # covector (k_0, k_1, k_2, k_3); derivative d_b brings down k_b
    phase: float

    def deriv_value(self, event, order: int) -> float:
        """cos factor after `order` quarter-turn phase advances (the
        wavevector product is applied by the caller)."""
        th = sum(ki * xi for ki, xi in zip(self.k, event))
        return self.amp * math.cos(th + self.phase + order * _QUARTER)


def _unit(v, name: str):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"{name} must be a unit vector (|{name}| = {norm:.6g})")
    return v / norm


def _orthogonal(e, n, name: str):
    e = _unit(e, name)
    if abs(float(np.dot(e, n))) > 1e-9:
        raise ValueError(f"{name} must be orthogonal to the propagation direction")
    e = e - np.dot(e, n) * n
    return e / np.linalg.norm(e)


def _wave_covector(omega: float, n) -> tuple:
    # phase theta = omega*(t - n.x) = k_a x^a
    return (omega, -omega * n[0], -omega * n[1], -omega * n[2])


def _terms_for_polarization(amplitude, p, k, phase):
    """Temporal-gauge potential terms for E = amplitude*omega*p*cos(theta+phase):
    the potential is -amplitude * p * sin(theta + phase)."""
    out = {comp: [] for comp in range(4)}
    for i in range(3):
        if p[i] != 0.0:
            out[i + 1].append(TrigTerm(-amplitude * p[i], k, phase - _QUARTER))
    return out


def _merge(*term_dicts):
    out = {comp: [] for comp in range(4)}
    for d in term_dicts:
        for comp, terms in d.items():
            out[comp].extend(terms)
    return out


def _gauge_terms(sector: str, amplitude: float, omega: float, k) -> dict:
    """Gradient of lam = g*(amp/omega)*cos(theta): adds
    -g*(amp/omega)*k_b*sin(theta) to component b."""
    g = _GAUGE_STRENGTH[sector]
    coeff = g * amplitude / omega
    return {
        comp: [TrigTerm(coeff * k[comp], k, -_QUARTER)] if k[comp] != 0.0 else []
        for comp in range(4)
    }


@dataclass(frozen=True)
class AnalyticSolution:
    """An exact solution: per-component term lists for both potentials."""

    kind: str
    gauge: str
    parameters: dict
    terms: dict  # {"A": {comp: [TrigTerm, ...]}, "C": {...}}

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown solution kind {self.kind!r}")
        if self.gauge not in GAUGES:
            raise ValueError(f"unknown gauge {self.gauge!r}")

    @property
    def max_frequency(self) -> float:
        """Largest |k_0| over all terms (for grid-resolution checks)."""
        out = 0.0
        for sector in FIELDS:
            for terms in self.terms[sector].values():
                for term in terms:
                    out = max(out, abs(term.k[0]))
        return out

    def scaled(self, factor: float) -> "AnalyticSolution":
        new_terms = {
            sector: {
                comp: [
                    TrigTerm(factor * t.amp, t.k, t.phase) for t in terms
                ]
                for comp, terms in self.terms[sector].items()
            }
            for sector in FIELDS
        }
        return AnalyticSolution(self.kind, self.gauge,
                                dict(self.parameters), new_terms)


def _travelling_wave_terms(amplitude, omega, n, pol_pairs, gauge):
    """Common builder: pol_pairs = ((p_A, phase_A), ...) for the A
    sector; the C sector uses the duality-partner polarizations
    (E_C, B_C) = (-B, E), i.e. p -> -(n x p) with the same phase."""
    k = _wave_covector(omega, n)
    a_terms = []
    c_terms = []
    for p, phase in pol_pairs:
        a_terms.append(_terms_for_polarization(amplitude, p, k, phase))
        c_terms.append(
            _terms_for_polarization(amplitude, -np.cross(n, p), k, phase)
        )
    a = _merge(*a_terms)
    c = _merge(*c_terms)
    if gauge == "lorenz":
        a = _merge(a, _gauge_terms("A", amplitude, omega, k))
        c = _merge(c, _gauge_terms("C", amplitude, omega, k))
    return a, c


def linear_plane_wave(
    amplitude: float = 1.0,
    frequency: float = 1.0,
    direction=(0.0, 0.0, 1.0),
    polarization=(1.0, 0.0, 0.0),
    gauge: str = "temporal",
) -> AnalyticSolution:
    """E = a*w*e*cos(w(t - n.x)), B = a*w*(n x e)*cos(...)."""
    if frequency <= 0:
        raise ValueError("frequency must be positive")
    n = _unit(direction, "direction")
    e = _orthogonal(polarization, n, "polarization")
    a_terms, c_terms = _travelling_wave_terms(
        amplitude, frequency, n, ((e, 0.0),), gauge
    )
    return AnalyticSolution(
        "linear-plane-wave",
        gauge,
        {
            "amplitude": amplitude,
            "frequency": frequency,
            "direction": tuple(n),
            "polarization": tuple(e),
        },
        {"A": a_terms, "C": c_terms},
    )


def circular_plane_wave(
    amplitude: float = 1.0,
    frequency: float = 1.0,
    direction=(0.0, 0.0, 1.0),
    helicity: int = 1,
    polarization=None,
    gauge: str = "temporal",
) -> AnalyticSolution:
    """E = a*w*(e1 cos(theta) + sigma e2 sin(theta)) with e2 = n x e1:
    two linear terms a quarter period apart."""
    if frequency <= 0:
        raise ValueError("frequency must be positive")
    if helicity not in (1, -1):
        raise ValueError("helicity must be +1 or -1")
    n = _unit(direction, "direction")
    if polarization is None:
        # any frame orthogonal to n; pick the least-aligned axis
        seed = np.zeros(3)
        seed[int(np.argmin(np.abs(n)))] = 1.0
        e1 = seed - np.dot(seed, n) * n
        e1 = e1 / np.linalg.norm(e1)
    else:
        e1 = _orthogonal(polarization, n, "polarization")
    e2 = np.cross(n, e1)
    # sigma*e2*sin(theta) = sigma*e2*cos(theta - pi/2)
    pol_pairs = ((e1, 0.0), (helicity * e2, -_QUARTER))
    a_terms, c_terms = _travelling_wave_terms(
        amplitude, frequency, n, pol_pairs, gauge
    )
    return AnalyticSolution(
        "circular-plane-wave",
        gauge,
        {
            "amplitude": amplitude,
            "frequency": frequency,
            "direction": tuple(n),
            "helicity": helicity,
            "polarization": tuple(e1),
        },
        {"A": a_terms, "C": c_terms},
    )


def standing_wave(
    amplitude: float = 1.0,
    frequency: float = 1.0,
    direction=(0.0, 0.0, 1.0),
    polarization=(1.0, 0.0, 0.0),
    gauge: str = "temporal",
) -> AnalyticSolution:
    """Equal counter-propagating linear waves: E = 2aw e cos(wt)cos(w n.x)."""
    n = _unit(direction, "direction")
    forward = linear_plane_wave(amplitude, frequency, n, polarization, gauge)
    backward = linear_plane_wave(amplitude, frequency, -n, polarization, gauge)
    merged = superposition([forward, backward])
    return AnalyticSolution(
        "standing-wave",
        gauge,
        {
            "amplitude": amplitude,
            "frequency": frequency,
            "direction": tuple(n),
            "polarization": forward.parameters["polarization"],
        },
        merged.terms,
    )


def superposition(parts) -> AnalyticSolution:
    """Sum of solutions (Maxwell is linear; the constraint pairing is
    linear too, so the duality partner of the sum is the sum of
    partners)."""
    parts = list(parts)
    if not parts:
        raise ValueError("superposition needs at least one part")
    gauges = {p.gauge for p in parts}
    gauge = gauges.pop() if len(gauges) == 1 else "temporal"
    terms = {
        sector: _merge(*(p.terms[sector] for p in parts)) for sector in FIELDS
    }
    return AnalyticSolution(
        "superposition",
        gauge,
        {"parts": tuple(p.kind for p in parts)},
        terms,
    )


# ---------------------------------------------------------------------------
# configuration tables


def _reject_unknown(table: dict, allowed, where: str):
    for key in table:
        if key not in allowed:
            raise ValueError(
                f"{where}.{key}: unknown key (allowed: {', '.join(sorted(allowed))})"
            )


def solution_from_config(table: dict, where: str = "solution") -> AnalyticSolution:
    """Build a catalog solution from a parsed configuration table.

    Keys: kind (required); amplitude (default 1.0); frequency (default
    1.0, angular); direction (default [0,0,1]); polarization (kind
    dependent); helicity (circular only, default +1); gauge (default
    "temporal"); parts (superposition only, list of solution tables).
    Unknown keys are rejected with their location.
    """
    if not isinstance(table, dict):
        raise ValueError(f"{where}: expected a table of solution settings")
    kind = table.get("kind")
    if kind not in KINDS:
        raise ValueError(
            f"{where}.kind: expected one of {', '.join(KINDS)}, got {kind!r}"
        )
    common = {"kind", "amplitude", "frequency", "direction", "gauge"}
    try:
        if kind == "superposition":
            _reject_unknown(table, {"kind", "parts"}, where)
            parts = table.get("parts")
            if not isinstance(parts, list) or not parts:
                raise ValueError(f"{where}.parts: expected a non-empty list of tables")
            return superposition(
                solution_from_config(part, f"{where}.parts[{i}]")
                for i, part in enumerate(parts)
            )
        args = {
            "amplitude": float(table.get("amplitude", 1.0)),
            "frequency": float(table.get("frequency", 1.0)),
            "direction": table.get("direction", (0.0, 0.0, 1.0)),
            "gauge": table.get("gauge", "temporal"),
        }
        if kind == "circular-plane-wave":
            _reject_unknown(table, common | {"helicity", "polarization"}, where)
            return circular_plane_wave(
                helicity=int(table.get("helicity", 1)),
                polarization=table.get("polarization"),
                **args,
            )
        _reject_unknown(table, common | {"polarization"}, where)
        maker = linear_plane_wave if kind == "linear-plane-wave" else standing_wave
        return maker(
            polarization=table.get("polarization", (1.0, 0.0, 0.0)), **args
        )
    except ValueError as err:
        msg = str(err)
        raise ValueError(msg if msg.startswith(where) else f"{where}: {msg}") from None


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class FieldSample:
    """Numeric jet point: all potential derivatives at one event.

    jets[sector][n] has shape (4,) + (4,)*n with entry [c, d1, ..., dn]
    equal to d_{d1} ... d_{dn} of potential component c.  Derivative
    axes are symmetric by construction (closed-form evaluation for
    catalog solutions; explicit symmetrization for random jets).
    """

    event: tuple
    depth: int
    jets: dict = field(repr=False)

    def deriv(self, sector: str, comp: int, derivs=()) -> float:
        order = len(derivs)
        if order > self.depth:
            raise ValueError(
                f"sample holds derivatives to order {self.depth}, asked for {order}"
            )
        return float(self.jets[sector][order][(comp, *derivs)])

    def array(self, sector: str, order: int) -> np.ndarray:
        if order > self.depth:
            raise ValueError(
                f"sample holds derivatives to order {self.depth}, asked for {order}"
            )
        return self.jets[sector][order]


def sample(sol: AnalyticSolution, event, depth: int = 3) -> FieldSample:
    """Evaluate the closed-form jets of a solution at one event."""
    event = tuple(float(x) for x in event)
    if len(event) != 4:
        raise ValueError("event must have 4 coordinates (t, x, y, z)")
    jets = {}
    for sector in FIELDS:
        arrays = [np.zeros((4,) + (4,) * n) for n in range(depth + 1)]
        for comp, terms in sol.terms[sector].items():
            for term in terms:
                k = np.asarray(term.k)
                kprod = np.array(1.0)
                for n in range(depth + 1):
                    arrays[n][comp] += term.deriv_value(event, n) * kprod
                    kprod = np.multiply.outer(kprod, k)
        jets[sector] = arrays
    return FieldSample(event, depth, jets)


def random_field_sample(seed: int, depth: int = 3, scale: float = 1.0) -> FieldSample:
    """Seeded off-shell jet point: independent uniform values on the
    distinct (sorted) multiindices, mirrored to all orderings."""
    rng = np.random.default_rng(seed)
    jets = {}
    for sector in FIELDS:
        arrays = []
        for n in range(depth + 1):
            arr = np.zeros((4,) + (4,) * n)
            for comp in range(4):
                for combo in itertools.combinations_with_replacement(range(4), n):
                    v = scale * rng.uniform(-1.0, 1.0)
                    for perm in set(itertools.permutations(combo)):
                        arr[(comp, *perm)] = v
            arrays.append(arr)
        jets[sector] = arrays
    return FieldSample((0.0, 0.0, 0.0, 0.0), depth, jets)


# ---------------------------------------------------------------------------
# transformations


@dataclass(frozen=True)
class DualityRotation:
    """Rotation mixing the two sectors: either a float angle or an
    exact rational parameter t with (cos, sin) = ((1-t^2)/(1+t^2),
    2t/(1+t^2))."""

    angle: float = None
    t: object = None

    def __post_init__(self):
        if (self.angle is None) == (self.t is None):
            raise ValueError("give exactly one of angle or t")

    def cos_sin(self):
        if self.t is not None:
            t = Fraction(self.t)
            den = 1 + t * t
            return float((1 - t * t) / den), float(2 * t / den)
        return math.cos(self.angle), math.sin(self.angle)


def apply_duality_rotation(obj, rotation: DualityRotation):
    """A -> c A + s C, C -> -s A + c C, applied to a solution's term
    lists or to a sample's jet arrays (same return type as the input)."""
    c, s = rotation.cos_sin()
    if isinstance(obj, AnalyticSolution):
        def mix(wa, wc):
            return {
                comp: [
                    TrigTerm(wa * t.amp, t.k, t.phase)
                    for t in obj.terms["A"][comp]
                    if wa != 0.0
                ]
                + [
                    TrigTerm(wc * t.amp, t.k, t.phase)
                    for t in obj.terms["C"][comp]
                    if wc != 0.0
                ]
                for comp in range(4)
            }

        params = dict(obj.parameters)
        params["rotations"] = params.get("rotations", ()) + (
            (c, s),
        )
        return AnalyticSolution(
            obj.kind, obj.gauge, params, {"A": mix(c, s), "C": mix(-s, c)}
        )
    if isinstance(obj, FieldSample):
        jets = {
            "A": [
                c * a + s * cc
                for a, cc in zip(obj.jets["A"], obj.jets["C"])
            ],
            "C": [
                -s * a + c * cc
                for a, cc in zip(obj.jets["A"], obj.jets["C"])
            ],
        }
        return FieldSample(obj.event, obj.depth, jets)
    raise TypeError(f"cannot rotate {type(obj).__name__}")


@dataclass(frozen=True)
class ZilchSymmetryStep:
    """First-order symmetry update with symmetric parameter matrix zeta:

        A_c -> A_c - zeta^{ab} G_{ca,b}
        C_c -> C_c + zeta^{ab} F_{ca,b}

    The induced strength change is F -> F + zeta^{ab} G_{cd,ab} (and
    G -> G - zeta^{ab} F_{cd,ab}).  This pairing carries half the weight
    of the exact layer's characteristic pair (which symmetrizes the two
    parameter slots with weight 2); correspondingly the matching
    boundary current is (1/2) zeta^{ab} U_{ab}^c.
    """

    zeta: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=float)
        if z.shape != (4, 4):
            raise ValueError("zeta must be a 4x4 matrix")
        if not np.allclose(z, z.T, atol=1e-14):
            raise ValueError("zeta must be symmetric")
        object.__setattr__(self, "zeta", z)


def _strength_derivs(s: FieldSample, sector: str, order: int) -> np.ndarray:
    """d_{J} of the curl: shape (4, 4) + (4,)*order, indices
    [a, b, j1, ..., jn] = (curl of `sector`)_{ab, j1...jn}."""
    arr = s.array(sector, order + 1)
    # arr[c, d, J] = potential_{c, d J}; curl_{ab} = pot_{b,a} - pot_{a,b}
    return np.swapaxes(arr, 0, 1) - arr


def apply_zilch_symmetry_step(s: FieldSample, step: ZilchSymmetryStep) -> FieldSample:
    """Apply the first-order update; the result keeps two fewer
    derivative orders than the input (the update consumes them)."""
    if s.depth < 2:
        raise ValueError("zilch symmetry step needs sample depth >= 2")
    new_depth = s.depth - 2
    z = step.zeta
    jets = {"A": [], "C": []}
    for n in range(new_depth + 1):
        g_deriv = _strength_derivs(s, "C", n + 1)
        f_deriv = _strength_derivs(s, "A", n + 1)
        # delta A_{c,J} = -zeta^{ab} G_{ca,bJ}; the b axis is the first
        # derivative slot (symmetric, so placement is conventional)
        delta_a = -np.einsum("ab,ca b...->c...", z, g_deriv)
        delta_c = +np.einsum("ab,ca b...->c...", z, f_deriv)
        jets["A"].append(s.jets["A"][n] + delta_a)
        jets["C"].append(s.jets["C"][n] + delta_c)
    return FieldSample(s.event, new_depth, jets)


# ---------------------------------------------------------------------------
# residuals


def field_scale(s: FieldSample) -> float:
    """Largest field-strength magnitude, used to normalize residuals."""
    f = _strength_derivs(s, "A", 0)
    g = _strength_derivs(s, "C", 0)
    return max(float(np.abs(f).max()), float(np.abs(g).max()))


def on_shell_residual(s: FieldSample, metric=(1, -1, -1, -1)) -> float:
    """max_a of |M_a|, |N_a| over both sectors, normalized by the
    field magnitude: M_a = (1/2) g^{bb} (curl)_{ba,b}."""
    if s.depth < 2:
        raise ValueError("on-shell residual needs sample depth >= 2")
    g = np.asarray(metric, dtype=float)
    worst = 0.0
    for sector in FIELDS:
        d = _strength_derivs(s, sector, 1)  # [b, a, j]
        m = 0.5 * np.einsum("b,bab->a", g, d)
        worst = max(worst, float(np.abs(m).max()))
    scale = field_scale(s)
    if scale == 0.0:
        return 0.0
    return worst / scale
