"""Lagrangians, Euler expressions, zilch-tensor families, symmetry
characteristics, and the exact off-shell identity suite.

Everything here is built twice where a cross-check is possible: once by
transcribing the closed formula, once through the variational machinery
(Euler operators, prolongations, Noether assembly).  All identities are
decided over exact rings; a check returns an `IdentityReport` whose
witness carries the first nonzero residual polynomial, if any.

Conventions
-----------
Field strengths are curls of the potentials,

    F_ab = d_a A_b - d_b A_a,      G_ab = d_a C_b - d_b C_a,

and the complex pair is W = A + iC with strength H_ab = (F + iG)_ab / 2.
Zilch families are stored all-lower, index order (a, b, c) with c the
current slot; internal current-like builders keep c contravariant and
are lowered at the end.  Expressions that must survive the duality
constraint G -> *F are built with curl markers (see `jets`); identity
checks expand the markers into C-jets first.

The two-potential ("real") formulation and the complex-pair ("complex")
formulation are both implemented.  Static bilinear expressions agree
between the formulations with a plus sign; every object derived from
the symmetry generator carries a relative minus sign.  Those frozen
relations are what `verify_complex_real_crosscheck` asserts, making the
complex suite an independent check of the real one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .jets import (
    EvolutionaryField,
    FreeIndexFamily,
    JetCoordinate,
    JetPolynomial,
    euler_operator,
    expand_g,
    g_marker,
    prolong_apply,
    star_f_in_a_jets,
    substitute_duality_constraint,
    substitute_fields,
    total_derivative,
)
from .minkowski import DEFAULT_CONVENTION, IDX, MetricConvention, kappa_mixed
from .rings import GaussianRational

P = JetPolynomial.coordinate
HALF = Fraction(1, 2)
I = GaussianRational(0, 1)

SYM_PAIRS = tuple((a, b) for a in IDX for b in IDX if a <= b)


class ZilchForm(Enum):
    """The zilch expressions implemented here, equivalent up to terms
    whose triviality the suite proves."""

    KIBBLE_1 = "kibble-1"
    KIBBLE_2 = "kibble-2"
    KIBBLE_3 = "kibble-3"
    DUALITY_SYMMETRIC = "duality-symmetric"
    LIPKIN = "lipkin"
    ANCO = "anco-pohjanpelto"
    MODIFIED = "modified"
    NOETHER = "noether"


REDUCED_FORMS = (
    ZilchForm.KIBBLE_1,
    ZilchForm.KIBBLE_2,
    ZilchForm.KIBBLE_3,
    ZilchForm.ANCO,
    ZilchForm.LIPKIN,
)
EXTENDED_FORMS = (
    ZilchForm.DUALITY_SYMMETRIC,
    ZilchForm.NOETHER,
    ZilchForm.MODIFIED,
)
COMPLEX_FORMS = (
    ZilchForm.DUALITY_SYMMETRIC,
    ZilchForm.ANCO,
    ZilchForm.NOETHER,
    ZilchForm.MODIFIED,
)


class LagrangianKind(Enum):
    STANDARD = "standard"
    REAL_DS = "real-duality-symmetric"
    COMPLEX_DS = "complex-duality-symmetric"


@dataclass
class IdentityReport:
    """Outcome of one exact identity check over concrete indices."""

    identity_name: str
    assignments_checked: int
    residual_zero: bool
    witness: tuple | None = None  # (index assignment, residual polynomial)
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.residual_zero


def _report(name: str, residuals: dict) -> IdentityReport:
    witness = None
    for key in sorted(residuals, key=str):
        if not residuals[key].is_zero():
            witness = (key, residuals[key])
            break
    return IdentityReport(
        identity_name=name,
        assignments_checked=len(residuals),
        residual_zero=witness is None,
        witness=witness,
    )


# ---------------------------------------------------------------------------
# field-strength jets


@lru_cache(maxsize=None)
def f_jet(a: int, b: int, derivs=()) -> JetPolynomial:
    """F_{ab,J} in A-jets."""
    return P("A", b, a, *derivs) - P("A", a, b, *derivs)


@lru_cache(maxsize=None)
def g_jet(a: int, b: int, derivs=()) -> JetPolynomial:
    """G_{ab,J} expanded in C-jets."""
    return P("C", b, a, *derivs) - P("C", a, b, *derivs)


@lru_cache(maxsize=None)
def g_jet_marked(a: int, b: int, derivs=()) -> JetPolynomial:
    """G_{ab,J} as an explicit curl marker (substitutable)."""
    return g_marker(a, b, *derivs)


@lru_cache(maxsize=None)
def star_f_jet(a: int, b: int, derivs, conv: MetricConvention) -> JetPolynomial:
    """(*F)_{ab,J} in A-jets."""
    return star_f_in_a_jets(a, b, derivs, conv)


@lru_cache(maxsize=None)
def h_jet(a: int, b: int, derivs=()) -> JetPolynomial:
    """Complex strength H_{ab,J} = (F + iG)_{ab,J} / 2 in W-jets."""
    return (P("W", b, a, *derivs) - P("W", a, b, *derivs)).scale(HALF)


@lru_cache(maxsize=None)
def hbar_jet(a: int, b: int, derivs=()) -> JetPolynomial:
    return (P("Wb", b, a, *derivs) - P("Wb", a, b, *derivs)).scale(HALF)


# ---------------------------------------------------------------------------
# Lagrangians and Euler expressions


@lru_cache(maxsize=None)
def build_lagrangian(
    kind: LagrangianKind, conv: MetricConvention = DEFAULT_CONVENTION
) -> JetPolynomial:
    """The Lagrangian density as an exact jet polynomial.

    standard:   -1/4 F_ab F^ab                     (A-jets)
    real DS:    -1/8 (F_ab F^ab + G_ab G^ab)       (A- and C-jets)
    complex DS: -1/2 H_ab Hbar^ab                  (W-, Wb-jets)
    """
    g = conv.g
    L = JetPolynomial.zero()
    if kind is LagrangianKind.STANDARD:
        for a in IDX:
            for b in IDX:
                L = L + (f_jet(a, b) * f_jet(a, b)).scale(Fraction(-g[a] * g[b], 4))
        return L
    if kind is LagrangianKind.REAL_DS:
        for a in IDX:
            for b in IDX:
                w = Fraction(-g[a] * g[b], 8)
                L = L + (f_jet(a, b) * f_jet(a, b)).scale(w)
                L = L + (g_jet(a, b) * g_jet(a, b)).scale(w)
        return L
    if kind is LagrangianKind.COMPLEX_DS:
        for a in IDX:
            for b in IDX:
                w = Fraction(-g[a] * g[b], 2)
                L = L + (h_jet(a, b) * hbar_jet(a, b)).scale(w)
        return L
    raise ValueError(f"unknown Lagrangian kind {kind!r}")


@lru_cache(maxsize=None)
def euler_m_hand(a: int, conv: MetricConvention) -> JetPolynomial:
    """M_a = 1/2 F^b{}_{a,b} transcribed directly (all-lower output)."""
    g = conv.g
    out = JetPolynomial.zero()
    for b in IDX:
        out = out + f_jet(b, a, (b,)).scale(Fraction(g[b], 2))
    return out


@lru_cache(maxsize=None)
def euler_n_hand(a: int, conv: MetricConvention) -> JetPolynomial:
    """N_a = 1/2 G^b{}_{a,b} in C-jets (all-lower output)."""
    g = conv.g
    out = JetPolynomial.zero()
    for b in IDX:
        out = out + g_jet(b, a, (b,)).scale(Fraction(g[b], 2))
    return out


@lru_cache(maxsize=None)
def euler_n_marked(a: int, conv: MetricConvention) -> JetPolynomial:
    """N_a with the curls kept as markers (substitutable).  Imposing the
    constraint maps this to half the divergence of *F, which vanishes
    identically in A-jets, so constrained expressions lose their N terms."""
    g = conv.g
    out = JetPolynomial.zero()
    for b in IDX:
        out = out + g_jet_marked(b, a, (b,)).scale(Fraction(g[b], 2))
    return out


@lru_cache(maxsize=None)
def euler_mscript_hand(a: int, conv: MetricConvention) -> JetPolynomial:
    """Complex Euler expression, all-lower: 1/2 g^{bc} Hbar_{ca,b}."""
    g = conv.g
    out = JetPolynomial.zero()
    for b in IDX:
        out = out + hbar_jet(b, a, (b,)).scale(Fraction(g[b], 2))
    return out


def build_euler_expressions(
    kind: LagrangianKind, conv: MetricConvention = DEFAULT_CONVENTION
) -> dict:
    """Euler-Lagrange expression families (upper index), computed with
    the Euler operator from the Lagrangian itself.

    Real DS kind returns {"M", "N"}; complex kind {"Mscript",
    "Mscript_bar"}; standard kind {"E"}.  The transcribed closed forms
    (half the divergence of the field strength) live in euler_*_hand
    and are proven equal by `verify_euler_expressions`.
    """
    L = build_lagrangian(kind, conv)
    if kind is LagrangianKind.STANDARD:
        return {"E": FreeIndexFamily.build(1, lambda a: euler_operator(L, "A", a))}
    if kind is LagrangianKind.REAL_DS:
        return {
            "M": FreeIndexFamily.build(1, lambda a: euler_operator(L, "A", a)),
            "N": FreeIndexFamily.build(1, lambda a: euler_operator(L, "C", a)),
        }
    if kind is LagrangianKind.COMPLEX_DS:
        fam = FreeIndexFamily.build(1, lambda a: euler_operator(L, "W", a))
        return {
            "Mscript": fam,
            "Mscript_bar": fam.map(lambda p: p.conjugate()),
        }
    raise ValueError(f"unknown Lagrangian kind {kind!r}")


# ---------------------------------------------------------------------------
# characteristics and boundary terms


def q_characteristic(a: int, b: int, c: int) -> JetPolynomial:
    """Q_{abc} = -2 G_{c(a,b)} in C-jets: the A-sector characteristic."""
    return -(g_jet(c, a, (b,)) + g_jet(c, b, (a,)))


def q_characteristic_marked(a: int, b: int, c: int) -> JetPolynomial:
    """Q_{abc} with the curl kept as a marker."""
    return -(g_jet_marked(c, a, (b,)) + g_jet_marked(c, b, (a,)))


def p_characteristic(a: int, b: int, c: int) -> JetPolynomial:
    """P_{abc} = 2 F_{c(a,b)} in A-jets: the C-sector characteristic."""
    return f_jet(c, a, (b,)) + f_jet(c, b, (a,))


def q_complex_characteristic(a: int, b: int, c: int) -> JetPolynomial:
    """Complex characteristic -4i H_{c(a,b)} in W-jets."""
    return (h_jet(c, a, (b,)) + h_jet(c, b, (a,))).scale(-2 * I)


def build_characteristics(
    formulation: str, conv: MetricConvention = DEFAULT_CONVENTION
) -> dict:
    """Evolutionary symmetry generators, one per symmetric index pair.

    Returns {(a, b): EvolutionaryField} for a <= b.  The real generator
    shifts A by Q_{abc} and C by P_{abc}; the complex generator shifts
    W by the complex characteristic and Wb by its conjugate.
    """
    if formulation == "real":
        return {
            (a, b): EvolutionaryField(
                {("A", c): q_characteristic(a, b, c) for c in IDX}
                | {("C", c): p_characteristic(a, b, c) for c in IDX}
            )
            for a, b in SYM_PAIRS
        }
    if formulation == "complex":
        return {
            (a, b): EvolutionaryField(
                {("W", c): q_complex_characteristic(a, b, c) for c in IDX}
                | {
                    ("Wb", c): q_complex_characteristic(a, b, c).conjugate()
                    for c in IDX
                }
            )
            for a, b in SYM_PAIRS
        }
    raise ValueError(f"unknown formulation {formulation!r}")


def boundary_term(
    a: int, b: int, c: int, conv: MetricConvention, uweight=Fraction(-1, 2)
) -> JetPolynomial:
    """Real boundary current U_{ab}{}^c (c contravariant):

        U_{ab}{}^c = -1/2 delta_(a^c G^{de}{}_{,b)} F_de
                     +1/2 delta_(a^c F^{de}{}_{,b)} G_de

    built with curl markers so the constraint substitution applies.
    `uweight` overrides the coefficient of the first term only (the
    single-coefficient mutation hook); the second stays +1/2.
    """
    g = conv.g

    def one(a_, b_):
        if a_ != c:
            return JetPolynomial.zero()
        out = JetPolynomial.zero()
        for d in IDX:
            for e in IDX:
                w = Fraction(g[d] * g[e])
                out = out + (g_jet_marked(d, e, (b_,)) * f_jet(d, e)).scale(
                    w * uweight
                )
                out = out + (f_jet(d, e, (b_,)) * g_jet_marked(d, e)).scale(w * HALF)
        return out

    return (one(a, b) + one(b, a)).scale(HALF)


def boundary_term_complex(
    a: int, b: int, c: int, conv: MetricConvention, uweight=None
) -> JetPolynomial:
    """Complex boundary current: -i delta_(a^c H^{de}{}_{,b)} Hbar_de
    plus its conjugate.  `uweight` overrides the leading -i; the
    conjugate completion is structural and follows the mutated term."""
    if uweight is None:
        uweight = -I
    g = conv.g

    def one(a_, b_):
        if a_ != c:
            return JetPolynomial.zero()
        out = JetPolynomial.zero()
        for d in IDX:
            for e in IDX:
                out = out + (h_jet(d, e, (b_,)) * hbar_jet(d, e)).scale(
                    Fraction(g[d] * g[e])
                )
        return out

    term = (one(a, b) + one(b, a)).scale(HALF).scale(uweight)
    return term + term.conjugate()


# ---------------------------------------------------------------------------
# zilch families (internal builders keep the current index c contravariant)


@lru_cache(maxsize=None)
def _zilch_up_real(
    form: ZilchForm, conv: MetricConvention, corr_weight=Fraction(-4)
) -> FreeIndexFamily:
    """Z_{ab}{}^c families of the real formulation."""
    g = conv.g

    def star(a, b, J=()):
        return star_f_jet(a, b, tuple(J), conv)

    if form is ZilchForm.KIBBLE_1:
        # Z_abc = *F_ad F^d{}_{b,c} - F_ad *F^d{}_{b,c}
        def entry(a, b, c):
            out = JetPolynomial.zero()
            for d in IDX:
                out = out + (star(a, d) * f_jet(d, b, (c,))).scale(Fraction(g[d]))
                out = out - (f_jet(a, d) * star(d, b, (c,))).scale(Fraction(g[d]))
            return out.scale(Fraction(g[c]))

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.KIBBLE_2:
        traces = {}
        for c in IDX:
            tr = JetPolynomial.zero()
            for d in IDX:
                for e in IDX:
                    tr = tr + (star(d, e) * f_jet(e, d, (c,))).scale(
                        Fraction(g[d] * g[e])
                    )
            traces[c] = tr

        def entry(a, b, c):
            out = JetPolynomial.zero()
            for d in IDX:
                pair = (star(d, a) * f_jet(b, d, (c,))) + (
                    star(d, b) * f_jet(a, d, (c,))
                )
                out = out + pair.scale(Fraction(g[d]))
            if a == b:
                out = out - traces[c].scale(Fraction(g[a], 2))
            return out.scale(Fraction(g[c]))

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.KIBBLE_3:
        def entry(a, b, c):
            out = JetPolynomial.zero()
            for d in IDX:
                pair = (star(d, a) * f_jet(b, d, (c,))) + (
                    star(d, b) * f_jet(a, d, (c,))
                )
                pair = pair - (f_jet(d, a) * star(b, d, (c,))) - (
                    f_jet(d, b) * star(a, d, (c,))
                )
                out = out + pair.scale(Fraction(g[d], 2))
            return out.scale(Fraction(g[c]))

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.ANCO:
        # Z'_{ab}{}^c = *F^{cd} F_{d(a,b)} - F^{cd} *F_{d(a,b)}
        def entry(a, b, c):
            out = JetPolynomial.zero()
            for d in IDX:
                w = Fraction(g[c] * g[d], 2)
                sym_f = f_jet(d, a, (b,)) + f_jet(d, b, (a,))
                sym_s = star(d, a, (b,)) + star(d, b, (a,))
                out = out + (star(c, d) * sym_f).scale(w)
                out = out - (f_jet(c, d) * sym_s).scale(w)
            return out

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.LIPKIN:
        base = _zilch_up_real(ZilchForm.ANCO, conv)

        def entry(a, b, c):
            out = base[a, b, c]
            for d in IDX:
                out = out + total_derivative(
                    lipkin_superpotential(a, b, c, d, conv), d
                )
            return out

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.DUALITY_SYMMETRIC:
        # Z_abc = G^d{}_(a F_b)d,c - F^d{}_(a G_b)d,c   (marked curls)
        def entry(a, b, c):
            out = JetPolynomial.zero()
            for d in IDX:
                w = Fraction(g[d], 2)
                out = out + (
                    (g_jet_marked(d, a) * f_jet(b, d, (c,)))
                    + (g_jet_marked(d, b) * f_jet(a, d, (c,)))
                ).scale(w)
                out = out - (
                    (f_jet(d, a) * g_jet_marked(b, d, (c,)))
                    + (f_jet(d, b) * g_jet_marked(a, d, (c,)))
                ).scale(w)
            return out.scale(Fraction(g[c]))

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.NOETHER:
        # general Noether assembly: -Q dL/dA' - P dL/dC' + U, with the
        # momenta taken from the Lagrangian by formal differentiation
        L = build_lagrangian(LagrangianKind.REAL_DS, conv)

        def entry(a, b, c):
            out = boundary_term(a, b, c, conv)
            for d in IDX:
                dLdA = L.partial(JetCoordinate("A", d, (c,)))
                dLdC = L.partial(JetCoordinate("C", d, (c,)))
                out = out - q_characteristic_marked(a, b, d) * dLdA
                out = out - p_characteristic(a, b, d) * dLdC
            return out

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.MODIFIED:
        base = _zilch_up_real(ZilchForm.DUALITY_SYMMETRIC, conv)
        corr = modified_correction_real(conv, weight=corr_weight)
        return base + corr

    raise ValueError(f"unsupported real zilch form {form!r}")


@lru_cache(maxsize=None)
def lipkin_superpotential(
    a: int, b: int, c: int, d: int, conv: MetricConvention
) -> JetPolynomial:
    """2 *F_{(a}{}^{[c} F_{b)}{}^{d]} -- the antisymmetric-pair object
    whose d-divergence turns the symmetric bilinear family into the
    compact historical one."""
    g = conv.g

    def orientation(a_, b_, c_, d_):
        return (star_f_jet(a_, c_, (), conv) * f_jet(b_, d_)).scale(
            Fraction(g[c_] * g[d_])
        )

    out = JetPolynomial.zero()
    for a_, b_ in ((a, b), (b, a)):
        for c_, d_, s in ((c, d, 1), (d, c, -1)):
            out = out + orientation(a_, b_, c_, d_).scale(Fraction(s, 4))
    return out.scale(2)


@lru_cache(maxsize=None)
def modified_correction_real(
    conv: MetricConvention, weight=Fraction(-4)
) -> FreeIndexFamily:
    """The on-shell-vanishing correction added to the plain
    duality-symmetric family to reach characteristic form:

        weight * G^e{}_{(a} kappa_{b)e}{}^{cd} M_d  -  (G,M -> F,N term)

    with weight = -4, built by explicit contraction with the
    antisymmetry projector and marked curls throughout.  The identity
    suite checks it against an independently hand-expanded form.
    """
    g = conv.g
    km = kappa_mixed()
    m_low = {d: euler_m_hand(d, conv) for d in IDX}
    n_low = {d: euler_n_marked(d, conv) for d in IDX}

    def entry(a, b, c):
        out = JetPolynomial.zero()
        for e in IDX:
            ge_a = g_jet_marked(e, a).scale(Fraction(g[e]))
            ge_b = g_jet_marked(e, b).scale(Fraction(g[e]))
            fe_a = f_jet(e, a).scale(Fraction(g[e]))
            fe_b = f_jet(e, b).scale(Fraction(g[e]))
            for d in IDX:
                k1 = km[a][e][c][d]
                k2 = km[b][e][c][d]
                if k1 == 0 and k2 == 0:
                    continue
                # the second projector slot is already contravariant, so
                # it contracts the covariant Euler expression directly
                md = m_low[d]
                nd = n_low[d]
                out = out + (ge_a * md).scale(weight * k2 * HALF)
                out = out + (ge_b * md).scale(weight * k1 * HALF)
                out = out - (fe_a * nd).scale(weight * k2 * HALF)
                out = out - (fe_b * nd).scale(weight * k1 * HALF)
        return out

    return FreeIndexFamily.build(3, entry)


def modified_correction_hand(conv: MetricConvention) -> FreeIndexFamily:
    """Independent expansion of the same correction:

        -2 delta^c_{(b} G^d{}_{a)} M_d + 2 G^c{}_{(a} M_{b)}
        +2 delta^c_{(b} F^d{}_{a)} N_d - 2 F^c{}_{(a} N_{b)} .
    """
    g = conv.g
    m_low = {d: euler_m_hand(d, conv) for d in IDX}
    n_low = {d: euler_n_marked(d, conv) for d in IDX}

    def entry(a, b, c):
        def half_pattern(a_, b_):
            out = JetPolynomial.zero()
            if b_ == c:
                for d in IDX:
                    gd_a = g_jet_marked(d, a_).scale(Fraction(g[d]))
                    fd_a = f_jet(d, a_).scale(Fraction(g[d]))
                    out = out - (gd_a * m_low[d]).scale(2)
                    out = out + (fd_a * n_low[d]).scale(2)
            gc_a = g_jet_marked(c, a_).scale(Fraction(g[c]))
            fc_a = f_jet(c, a_).scale(Fraction(g[c]))
            out = out + (gc_a * m_low[b_]).scale(2)
            out = out - (fc_a * n_low[b_]).scale(2)
            return out

        return (half_pattern(a, b) + half_pattern(b, a)).scale(HALF)

    return FreeIndexFamily.build(3, entry)


@lru_cache(maxsize=None)
def _zilch_up_complex(form: ZilchForm, conv: MetricConvention) -> FreeIndexFamily:
    """Z_{ab}{}^c families of the complex-pair formulation (W-jets)."""
    g = conv.g

    if form is ZilchForm.DUALITY_SYMMETRIC:
        # Z_abc = 2i Hbar^d{}_{(a} H_{b)d,c} + conjugate
        def entry(a, b, c):
            out = JetPolynomial.zero()
            for d in IDX:
                pair = (hbar_jet(d, a) * h_jet(b, d, (c,))) + (
                    hbar_jet(d, b) * h_jet(a, d, (c,))
                )
                out = out + pair.scale(I * Fraction(g[d]))
            out = out + out.conjugate()
            return out.scale(Fraction(g[c]))

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.ANCO:
        # 2i Hbar_{d(a,b)} H^{dc} + conjugate
        def entry(a, b, c):
            out = JetPolynomial.zero()
            for d in IDX:
                sym_hb = (hbar_jet(d, a, (b,)) + hbar_jet(d, b, (a,))).scale(HALF)
                out = out + (sym_hb * h_jet(d, c)).scale(
                    2 * I * Fraction(g[c] * g[d])
                )
            return out + out.conjugate()

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.NOETHER:
        L = build_lagrangian(LagrangianKind.COMPLEX_DS, conv)

        def entry(a, b, c):
            out = boundary_term_complex(a, b, c, conv)
            for d in IDX:
                dLdW = L.partial(JetCoordinate("W", d, (c,)))
                dLdWb = L.partial(JetCoordinate("Wb", d, (c,)))
                qc = q_complex_characteristic(a, b, d)
                out = out - qc * dLdW - qc.conjugate() * dLdWb
            return out

        return FreeIndexFamily.build(3, entry)

    if form is ZilchForm.MODIFIED:
        # Assembled so the characteristic identity holds exactly: minus
        # the plain family, plus the conjugate-completed correction
        #   -8i H^e{}_{(a} kappa_{b)e}{}^{cd} Mscript_d + conjugate.
        # Under W -> A + iC this equals minus the real modified family,
        # consistent with the generator-chain sign relations.
        base = _zilch_up_complex(ZilchForm.DUALITY_SYMMETRIC, conv)
        km = kappa_mixed()
        ms_low = {d: euler_mscript_hand(d, conv) for d in IDX}

        def entry(a, b, c):
            out = JetPolynomial.zero()
            for e in IDX:
                he_a = h_jet(e, a).scale(Fraction(g[e]))
                he_b = h_jet(e, b).scale(Fraction(g[e]))
                for d in IDX:
                    k1 = km[a][e][c][d]
                    k2 = km[b][e][c][d]
                    if k1 == 0 and k2 == 0:
                        continue
                    out = out + (he_a * ms_low[d]).scale(-4 * I * k2)
                    out = out + (he_b * ms_low[d]).scale(-4 * I * k1)
            return (out + out.conjugate()) - base[a, b, c]

        return FreeIndexFamily.build(3, entry)

    raise ValueError(
        f"zilch form {form.value!r} is not defined in the complex formulation"
    )


def build_zilch(
    form: ZilchForm,
    formulation: str = "real",
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> FreeIndexFamily:
    """The requested zilch family with all indices lowered, storage
    order (a, b, c), c the current slot."""
    g = conv.g
    if formulation == "real":
        fam = _zilch_up_real(form, conv)
    elif formulation == "complex":
        fam = _zilch_up_complex(form, conv)
    else:
        raise ValueError(f"unknown formulation {formulation!r}")
    return FreeIndexFamily(
        {
            (a, b, c): fam[a, b, c].scale(Fraction(g[c]))
            for a in IDX
            for b in IDX
            for c in IDX
        }
    )


# ---------------------------------------------------------------------------
# trivial currents


@lru_cache(maxsize=None)
def family_superpotential(
    a: int, b: int, c: int, d: int, conv: MetricConvention, drop_deltas: bool = False
) -> JetPolynomial:
    """The antisymmetric-pair superpotential T_{ab}{}^{cd} whose
    d-divergence is the difference between the Noether and modified
    zilch families:

        T_{ab}{}^{cd} = 2 ( F_{(a}{}^{[c} G_{b)}{}^{d]}
                           - delta_{(a}{}^{[c} G_{b)e} F^{d]e}
                           + delta_{(a}{}^{[c} F_{b)e} G^{d]e} ) .

    `drop_deltas` removes the two Kronecker-delta terms (the documented
    mutation hook).
    """
    g = conv.g

    def orientation(a_, b_, c_, d_):
        out = (f_jet(a_, c_) * g_jet_marked(b_, d_)).scale(Fraction(g[c_] * g[d_]))
        if not drop_deltas and a_ == c_:
            for e in IDX:
                w = Fraction(g[e] * g[d_])
                out = out - (g_jet_marked(b_, e) * f_jet(d_, e)).scale(w)
                out = out + (f_jet(b_, e) * g_jet_marked(d_, e)).scale(w)
        return out

    total = JetPolynomial.zero()
    for a_, b_ in ((a, b), (b, a)):
        for c_, d_, s in ((c, d, 1), (d, c, -1)):
            total = total + orientation(a_, b_, c_, d_).scale(Fraction(s, 4))
    return total.scale(2)


@lru_cache(maxsize=None)
def superpotential_current(
    a: int, b: int, c: int, conv: MetricConvention, drop_deltas: bool = False
) -> JetPolynomial:
    """The stated trivial current: d_d T_{ab}{}^{cd}."""
    out = JetPolynomial.zero()
    for d in IDX:
        out = out + total_derivative(
            expand_g(family_superpotential(a, b, c, d, conv, drop_deltas)), d
        )
    return out


# ---------------------------------------------------------------------------
# substitution helpers


def to_real(p: JetPolynomial) -> JetPolynomial:
    """Expand the complex pair: W -> A + iC, Wb -> A - iC."""
    return substitute_fields(
        p,
        {
            "W": lambda comp, derivs: P("A", comp, *derivs)
            + P("C", comp, *derivs).scale(I),
            "Wb": lambda comp, derivs: P("A", comp, *derivs)
            - P("C", comp, *derivs).scale(I),
        },
    )


def rotation_cos_sin(t) -> tuple:
    """Exact rational point on the circle: ((1-t^2)/(1+t^2), 2t/(1+t^2))."""
    t = Fraction(t)
    den = 1 + t * t
    return (1 - t * t) / den, 2 * t / den


def rotate_real(p: JetPolynomial, t) -> JetPolynomial:
    """Apply the potential-level mixing A -> cA + sC, C -> -sA + cC with
    the exact rational cosine/sine pair of parameter t (markers must be
    expanded first)."""
    c, s = rotation_cos_sin(t)
    return substitute_fields(
        p,
        {
            "A": lambda comp, derivs: P("A", comp, *derivs).scale(c)
            + P("C", comp, *derivs).scale(s),
            "C": lambda comp, derivs: P("A", comp, *derivs).scale(-s)
            + P("C", comp, *derivs).scale(c),
        },
    )


def rotate_complex_quarter(p: JetPolynomial) -> JetPolynomial:
    """Exact quarter-turn phase: W -> -iW, Wb -> iWb."""
    return substitute_fields(
        p,
        {
            "W": lambda comp, derivs: P("W", comp, *derivs).scale(-I),
            "Wb": lambda comp, derivs: P("Wb", comp, *derivs).scale(I),
        },
    )


# ---------------------------------------------------------------------------
# identity suite


def verify_variational_symmetry(
    formulation: str = "real",
    conv: MetricConvention = DEFAULT_CONVENTION,
    uweight=None,
) -> IdentityReport:
    """Central claim, checked off shell for all 10 index pairs:

        pr v_{ab}(L) - d_c U_{ab}{}^c = 0 .

    The generator is a variational symmetry: applying its prolongation
    to the Lagrangian yields a total divergence identically, with no
    use of the field equations.
    """
    if formulation == "real":
        L = build_lagrangian(LagrangianKind.REAL_DS, conv)

        def U(a, b, c):
            return boundary_term(
                a,
                b,
                c,
                conv,
                uweight=Fraction(-1, 2) if uweight is None else uweight,
            )

    elif formulation == "complex":
        L = build_lagrangian(LagrangianKind.COMPLEX_DS, conv)

        def U(a, b, c):
            return boundary_term_complex(a, b, c, conv, uweight=uweight)

    else:
        raise ValueError(f"unknown formulation {formulation!r}")
    vs = build_characteristics(formulation, conv)
    residuals = {}
    for (a, b), v in vs.items():
        lhs = prolong_apply(v, L, 2)
        div = JetPolynomial.zero()
        for c in IDX:
            div = div + total_derivative(expand_g(U(a, b, c)), c)
        residuals[(a, b)] = lhs - div
    return _report(f"variational-symmetry/{formulation}", residuals)


def verify_characteristic_form(
    formulation: str = "real",
    conv: MetricConvention = DEFAULT_CONVENTION,
    corr_weight=Fraction(-4),
) -> IdentityReport:
    """The conservation law in characteristic form, off shell:

    real:     d_c Zmod_{ab}{}^c = -2 G_{c(a,b)} M^c + 2 F_{c(a,b)} N^c
    complex:  d_c Zmod_{ab}{}^c = Qc_{ab}{}^c Mscript_c + conjugate

    i.e. the divergence of the modified family equals characteristic
    times Euler expression, so conservation holds on shell and the
    multiplier structure is exhibited off shell.
    """
    g = conv.g
    residuals = {}
    if formulation == "real":
        zt = _zilch_up_real(ZilchForm.MODIFIED, conv, corr_weight)
        m_low = {d: euler_m_hand(d, conv) for d in IDX}
        n_low = {d: euler_n_hand(d, conv) for d in IDX}
        for a, b in SYM_PAIRS:
            div = JetPolynomial.zero()
            for c in IDX:
                div = div + total_derivative(expand_g(zt[a, b, c]), c)
            rhs = JetPolynomial.zero()
            for c in IDX:
                rhs = rhs + (q_characteristic(a, b, c) * m_low[c]).scale(
                    Fraction(g[c])
                )
                rhs = rhs + (p_characteristic(a, b, c) * n_low[c]).scale(
                    Fraction(g[c])
                )
            residuals[(a, b)] = div - rhs
    elif formulation == "complex":
        zt = _zilch_up_complex(ZilchForm.MODIFIED, conv)
        ms_low = {d: euler_mscript_hand(d, conv) for d in IDX}
        for a, b in SYM_PAIRS:
            div = JetPolynomial.zero()
            for c in IDX:
                div = div + total_derivative(zt[a, b, c], c)
            rhs = JetPolynomial.zero()
            for c in IDX:
                rhs = rhs + (q_complex_characteristic(a, b, c) * ms_low[c]).scale(
                    Fraction(g[c])
                )
            rhs = rhs + rhs.conjugate()
            residuals[(a, b)] = div - rhs
    else:
        raise ValueError(f"unknown formulation {formulation!r}")
    return _report(f"characteristic-form/{formulation}", residuals)


def verify_characteristic_intermediate(
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> IdentityReport:
    """Partial-integration bookkeeping for the real formulation: the
    divergence of the plain family splits as

        d_c Z_{ab}{}^c = -(4 G^e{}_{(a} kappa_{b)e}{}^{cd} M_c)_{,d}
                         - 2 G_{c(a,b)} M^c
                         +(4 F^e{}_{(a} kappa_{b)e}{}^{cd} N_c)_{,d}
                         + 2 F_{c(a,b)} N^c

    which pins how the modified family absorbs the derivative terms.
    """
    g = conv.g
    km = kappa_mixed()
    z = _zilch_up_real(ZilchForm.DUALITY_SYMMETRIC, conv)
    m_low = {d: euler_m_hand(d, conv) for d in IDX}
    n_low = {d: euler_n_hand(d, conv) for d in IDX}
    residuals = {}
    for a, b in SYM_PAIRS:
        lhs = JetPolynomial.zero()
        for c in IDX:
            lhs = lhs + total_derivative(expand_g(z[a, b, c]), c)
        rhs = JetPolynomial.zero()
        for d in IDX:
            inner = JetPolynomial.zero()
            for e in IDX:
                ge_a = expand_g(g_jet_marked(e, a)).scale(Fraction(g[e]))
                ge_b = expand_g(g_jet_marked(e, b)).scale(Fraction(g[e]))
                fe_a = f_jet(e, a).scale(Fraction(g[e]))
                fe_b = f_jet(e, b).scale(Fraction(g[e]))
                for c in IDX:
                    k1 = km[a][e][c][d]
                    k2 = km[b][e][c][d]
                    if k1 == 0 and k2 == 0:
                        continue
                    inner = inner - (
                        (ge_a * m_low[c]).scale(k2) + (ge_b * m_low[c]).scale(k1)
                    ).scale(2)
                    inner = inner + (
                        (fe_a * n_low[c]).scale(k2) + (fe_b * n_low[c]).scale(k1)
                    ).scale(2)
            rhs = rhs + total_derivative(inner, d)
        for c in IDX:
            rhs = rhs + (q_characteristic(a, b, c) * m_low[c]).scale(Fraction(g[c]))
            rhs = rhs + (p_characteristic(a, b, c) * n_low[c]).scale(Fraction(g[c]))
        residuals[(a, b)] = lhs - rhs
    return _report("characteristic-form/partial-integration", residuals)


def verify_triviality_relations(
    conv: MetricConvention = DEFAULT_CONVENTION, drop_deltas: bool = False
) -> IdentityReport:
    """Triviality ledger for the differences of the current families:

    (i)   the stated superpotential current has identically vanishing
          divergence (trivial current of the second kind);
    (ii)  Noether family - plain family = on-shell-vanishing correction
          + superpotential current (first- plus second-kind split);
    (iii) Noether family - modified family = superpotential current;
    (iv)  the correction built by projector contraction agrees with its
          independent hand expansion.
    """
    zn = _zilch_up_real(ZilchForm.NOETHER, conv)
    zm = _zilch_up_real(ZilchForm.MODIFIED, conv)
    zp = _zilch_up_real(ZilchForm.DUALITY_SYMMETRIC, conv)
    corr = modified_correction_real(conv)
    corr_hand = modified_correction_hand(conv)
    residuals = {}
    for a, b in SYM_PAIRS:
        div = JetPolynomial.zero()
        for c in IDX:
            div = div + total_derivative(superpotential_current(a, b, c, conv), c)
        residuals[("superpotential-divergence", a, b)] = div
        for c in IDX:
            triv = superpotential_current(a, b, c, conv, drop_deltas)
            zn_e = expand_g(zn[a, b, c])
            zm_e = expand_g(zm[a, b, c])
            zp_e = expand_g(zp[a, b, c])
            co_e = expand_g(corr[a, b, c])
            residuals[("noether-minus-modified", a, b, c)] = zn_e - zm_e - triv
            residuals[("noether-minus-plain", a, b, c)] = zn_e - zp_e - co_e - triv
            residuals[("correction-dual-route", a, b, c)] = co_e - expand_g(
                corr_hand[a, b, c]
            )
    return _report("triviality-ledger", residuals)


def verify_zilch_equivalence_remark(
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> IdentityReport:
    """Equivalence relations among the zilch forms, exact in A-jets:

      - the three classical forms agree pairwise;
      - reordering: Zsym_{abc} = Z_{c(ab)}, and conversely
        Z_{abc} = -2 Zsym_{abc} + 3 Zsym_{(abc)};
      - the compact historical form differs from the symmetric bilinear
        one by an identically conserved superpotential term;
      - under the duality constraint the two-potential families reduce
        to their A-jet counterparts: the plain family to the third
        classical form, the Noether family to the symmetric bilinear
        form, and the boundary current to zero.
    """
    k1 = build_zilch(ZilchForm.KIBBLE_1, "real", conv)
    k2 = build_zilch(ZilchForm.KIBBLE_2, "real", conv)
    k3 = build_zilch(ZilchForm.KIBBLE_3, "real", conv)
    zp = build_zilch(ZilchForm.ANCO, "real", conv)
    residuals = {}
    third = Fraction(1, 3)
    for a in IDX:
        for b in IDX:
            for c in IDX:
                residuals[("kibble-1-vs-3", a, b, c)] = k1[a, b, c] - k3[a, b, c]
                residuals[("kibble-1-vs-2", a, b, c)] = k1[a, b, c] - k2[a, b, c]
                zcab = (k3[c, a, b] + k3[c, b, a]).scale(HALF)
                residuals[("reorder", a, b, c)] = zp[a, b, c] - zcab
                zsym = (
                    zp[a, b, c]
                    + zp[a, c, b]
                    + zp[b, a, c]
                    + zp[b, c, a]
                    + zp[c, a, b]
                    + zp[c, b, a]
                ).scale(third * HALF)
                residuals[("converse", a, b, c)] = (
                    k3[a, b, c] + zp[a, b, c].scale(2) - zsym.scale(3)
                )
    # the historical correction is identically conserved
    lip_up = _zilch_up_real(ZilchForm.LIPKIN, conv)
    anco_up = _zilch_up_real(ZilchForm.ANCO, conv)
    for a, b in SYM_PAIRS:
        div = JetPolynomial.zero()
        for c in IDX:
            div = div + total_derivative(lip_up[a, b, c] - anco_up[a, b, c], c)
        residuals[("lipkin-extra-divergence", a, b)] = div
    # reductions under the constraint
    zds_up = _zilch_up_real(ZilchForm.DUALITY_SYMMETRIC, conv)
    k3_up = _zilch_up_real(ZilchForm.KIBBLE_3, conv)
    zn_up = _zilch_up_real(ZilchForm.NOETHER, conv)
    for a, b in SYM_PAIRS:
        for c in IDX:
            red = substitute_duality_constraint(zds_up[a, b, c], conv)
            residuals[("constraint-reduction-plain", a, b, c)] = red - k3_up[a, b, c]
            redn = substitute_duality_constraint(zn_up[a, b, c], conv)
            residuals[("constraint-reduction-noether", a, b, c)] = (
                redn - anco_up[a, b, c]
            )
            residuals[("boundary-term-reduces-to-zero", a, b, c)] = (
                substitute_duality_constraint(boundary_term(a, b, c, conv), conv)
            )
    rep = _report("equivalence-remark", residuals)
    rep.details["jet-variables"] = "A-jets after constraint substitution"
    return rep


def verify_zilch_algebra(
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> IdentityReport:
    """Index symmetry and trace of the zilch families.

    Symmetry Z_{abc} = Z_{(ab)c} is asserted for every form as built
    (the classical unsymmetrized form becomes symmetric once expressed
    in A-jets, which is how it is built here).  The parameter-pair
    trace g^{ab} Z_{ab}{}^c is not one uniform statement:

      - the three classical orderings are traceless off shell in A-jets
        (for the second by its explicit trace subtraction, for the
        others by the eps-tensor symmetry of tr(*F F'));
      - the plain two-potential family becomes traceless once the
        constraint maps it onto the third classical form;
      - the symmetric bilinear family, its superpotential-shifted
        historical variant, and the constrained Noether family each
        trace to the explicit Euler multiple -2 (*F)_c{}^d M_d, and the
        constrained modified family to +4 (*F)_c{}^d M_d -- all of
        which vanish precisely on shell.

    Every branch is asserted exactly; the status per form is recorded
    in the report details.
    """
    g = conv.g
    residuals = {}
    status = {}

    def euler_multiple(c, w):
        out = JetPolynomial.zero()
        for d in IDX:
            out = out + (star_f_jet(c, d, (), conv) * euler_m_hand(d, conv)).scale(
                Fraction(w * g[d])
            )
        return out

    trace_rule = {
        ZilchForm.KIBBLE_1: ("off-shell", False, 0),
        ZilchForm.KIBBLE_2: ("off-shell", False, 0),
        ZilchForm.KIBBLE_3: ("off-shell", False, 0),
        ZilchForm.ANCO: ("on-shell only", False, -2),
        ZilchForm.LIPKIN: ("on-shell only", False, -2),
        ZilchForm.DUALITY_SYMMETRIC: ("after constraint", True, 0),
        ZilchForm.NOETHER: ("on-shell only", True, -2),
        ZilchForm.MODIFIED: ("on-shell only", True, 4),
    }
    for form in REDUCED_FORMS + EXTENDED_FORMS:
        fam = build_zilch(form, "real", conv)
        sym_ok = all(
            (fam[a, b, c] - fam[b, a, c]).is_zero()
            for a in IDX
            for b in IDX
            for c in IDX
        )
        residuals[(form.value, "symmetry")] = (
            JetPolynomial.zero() if sym_ok else JetPolynomial.constant(1)
        )
        kind, constrain, weight = trace_rule[form]
        entry = {"symmetric": sym_ok, "traceless": kind}
        if weight:
            entry["trace-euler-multiple"] = weight
        for c in IDX:
            tr = JetPolynomial.zero()
            for a in IDX:
                tr = tr + fam[a, a, c].scale(Fraction(g[a]))
            label = "trace"
            if constrain:
                tr = substitute_duality_constraint(tr, conv)
                label = "trace-constrained"
            residuals[(form.value, label, c)] = tr - euler_multiple(c, weight)
        if form is ZilchForm.KIBBLE_1:
            entry["note"] = (
                "symmetry is not manifest term-by-term; it holds after "
                "expansion in potential jets, which is the built form"
            )
        status[form.value] = entry
    rep = _report("zilch-algebra", residuals)
    rep.details["per-form"] = status
    return rep


def verify_noether_current_construction(
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> IdentityReport:
    """Two facts about the Noether assembly:

    - the Lagrangian momenta equal half the raised field strengths,
      dL/dA_{d,c} = F^{dc}/2 (and likewise for C and the complex pair);
    - the assembled current -Q dL/dA' - P dL/dC' + U equals the closed
      bilinear form -F^{cd} G_{d(a,b)} + G^{cd} F_{d(a,b)} + U.
    """
    g = conv.g
    L = build_lagrangian(LagrangianKind.REAL_DS, conv)
    Lc = build_lagrangian(LagrangianKind.COMPLEX_DS, conv)
    residuals = {}
    for d in IDX:
        for c in IDX:
            mom = L.partial(JetCoordinate("A", d, (c,)))
            residuals[("momentum-a", d, c)] = mom - f_jet(d, c).scale(
                Fraction(g[d] * g[c], 2)
            )
            momc = L.partial(JetCoordinate("C", d, (c,)))
            residuals[("momentum-c", d, c)] = momc - g_jet(d, c).scale(
                Fraction(g[d] * g[c], 2)
            )
            momw = Lc.partial(JetCoordinate("W", d, (c,)))
            residuals[("momentum-w", d, c)] = momw - hbar_jet(d, c).scale(
                Fraction(g[d] * g[c], 2)
            )
    zn = _zilch_up_real(ZilchForm.NOETHER, conv)
    for a, b in SYM_PAIRS:
        for c in IDX:
            closed = boundary_term(a, b, c, conv)
            for d in IDX:
                w = Fraction(g[c] * g[d])
                sym_g = (
                    g_jet_marked(d, a, (b,)) + g_jet_marked(d, b, (a,))
                ).scale(HALF)
                sym_f = (f_jet(d, a, (b,)) + f_jet(d, b, (a,))).scale(HALF)
                closed = closed - (f_jet(c, d) * sym_g).scale(w)
                closed = closed + (g_jet_marked(c, d) * sym_f).scale(w)
            residuals[("noether-closed-form", a, b, c)] = expand_g(
                zn[a, b, c]
            ) - expand_g(closed)
    return _report("noether-current-construction", residuals)


def verify_euler_expressions(
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> IdentityReport:
    """Euler-operator output equals the transcribed closed forms (half
    the divergence of the strengths, the wave/gradient split, and the
    standard-theory expression -F^{ab}{}_{,b})."""
    g = conv.g
    residuals = {}
    fams = build_euler_expressions(LagrangianKind.REAL_DS, conv)
    for a in IDX:
        residuals[("m", a)] = fams["M"][a] - euler_m_hand(a, conv).scale(
            Fraction(g[a])
        )
        residuals[("n", a)] = fams["N"][a] - euler_n_hand(a, conv).scale(
            Fraction(g[a])
        )
        box = JetPolynomial.zero()
        grad = JetPolynomial.zero()
        for b in IDX:
            box = box + P("A", a, b, b).scale(Fraction(g[b], 2))
            grad = grad + P("A", b, a, b).scale(Fraction(g[b], 2))
        residuals[("m-split", a)] = euler_m_hand(a, conv) - (box - grad)
    fams_c = build_euler_expressions(LagrangianKind.COMPLEX_DS, conv)
    for a in IDX:
        residuals[("mscript", a)] = fams_c["Mscript"][a] - euler_mscript_hand(
            a, conv
        ).scale(Fraction(g[a]))
        box = JetPolynomial.zero()
        grad = JetPolynomial.zero()
        for b in IDX:
            box = box + P("Wb", a, b, b).scale(Fraction(g[b], 4))
            grad = grad + P("Wb", b, a, b).scale(Fraction(g[b], 4))
        residuals[("mscript-split", a)] = euler_mscript_hand(a, conv) - (box - grad)
        img = to_real(euler_mscript_hand(a, conv))
        want = (euler_m_hand(a, conv) - euler_n_hand(a, conv).scale(I)).scale(HALF)
        residuals[("mscript-real-image", a)] = img - want
        residuals[("n-marked", a)] = expand_g(euler_n_marked(a, conv)) - euler_n_hand(
            a, conv
        )
        # the constrained N is half the divergence of *F: identically
        # zero in A-jets
        residuals[("n-constrained", a)] = substitute_duality_constraint(
            euler_n_marked(a, conv), conv
        )
    fam_std = build_euler_expressions(LagrangianKind.STANDARD, conv)
    for a in IDX:
        want = JetPolynomial.zero()
        for b in IDX:
            want = want - f_jet(a, b, (b,)).scale(Fraction(g[a] * g[b]))
        residuals[("standard", a)] = fam_std["E"][a] - want
    return _report("euler-expressions", residuals)


def verify_duality_invariance_symbolic(
    conv: MetricConvention = DEFAULT_CONVENTION, tvals=(1, 2, Fraction(1, 3))
) -> IdentityReport:
    """Exact rational duality rotations leave the zilch families alone
    and rotate the characteristic doublet into itself:

      - the plain and modified two-potential families are invariant
        under A -> cA + sC, C -> -sA + cC for every exact (c, s) pair;
      - (Q, P) transforms as the same doublet,
        Q -> cQ + sP,  P -> -sQ + cP;
      - the complex characteristic picks up exactly the phase -i under
        a quarter turn W -> -iW, leaving the full generator unchanged.
    """
    residuals = {}
    zds = _zilch_up_real(ZilchForm.DUALITY_SYMMETRIC, conv)
    zmod = _zilch_up_real(ZilchForm.MODIFIED, conv)
    for t in tvals:
        c, s = rotation_cos_sin(t)
        assert c * c + s * s == 1
        for a, b in SYM_PAIRS:
            for cc in IDX:
                p = expand_g(zds[a, b, cc])
                residuals[("plain", str(t), a, b, cc)] = rotate_real(p, t) - p
                q = q_characteristic(a, b, cc)
                p_ = p_characteristic(a, b, cc)
                residuals[("q-doublet", str(t), a, b, cc)] = rotate_real(q, t) - (
                    q.scale(c) + p_.scale(s)
                )
                residuals[("p-doublet", str(t), a, b, cc)] = rotate_real(p_, t) - (
                    q.scale(-s) + p_.scale(c)
                )
            pm = expand_g(zmod[a, b, 0])
            residuals[("modified", str(t), a, b)] = rotate_real(pm, t) - pm
    for a, b in SYM_PAIRS:
        for cc in IDX:
            qc = q_complex_characteristic(a, b, cc)
            residuals[("complex-quarter-phase", a, b, cc)] = rotate_complex_quarter(
                qc
            ) - qc.scale(-I)
    return _report("duality-invariance/symbolic", residuals)


def verify_complex_real_crosscheck(
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> IdentityReport:
    """Frozen sign relations between the formulations under W -> A + iC:

        Lagrangian            ->  + real Lagrangian
        plain zilch family    ->  + real plain family
        static bilinear form  ->  + (real Noether family - boundary)
        characteristic        ->  - (Q + iP)
        boundary current      ->  - real boundary current
        Noether family        ->  - real Noether family
        modified family       ->  - real modified family

    Static expressions map with a plus sign; everything derived from
    the generator chain maps with a minus sign.  These exact relations
    make the complex identity suite an independent cross-check of the
    real one rather than a re-derivation.
    """
    residuals = {}
    Lc = to_real(build_lagrangian(LagrangianKind.COMPLEX_DS, conv))
    L = build_lagrangian(LagrangianKind.REAL_DS, conv)
    residuals[("lagrangian",)] = Lc - L
    zc = _zilch_up_complex(ZilchForm.DUALITY_SYMMETRIC, conv)
    z = _zilch_up_real(ZilchForm.DUALITY_SYMMETRIC, conv)
    zca = _zilch_up_complex(ZilchForm.ANCO, conv)
    zn = _zilch_up_real(ZilchForm.NOETHER, conv)
    zcn = _zilch_up_complex(ZilchForm.NOETHER, conv)
    zcm = _zilch_up_complex(ZilchForm.MODIFIED, conv)
    zm = _zilch_up_real(ZilchForm.MODIFIED, conv)
    for a, b in SYM_PAIRS:
        for c in IDX:
            residuals[("plain", a, b, c)] = to_real(zc[a, b, c]) - expand_g(z[a, b, c])
            u = boundary_term(a, b, c, conv)
            residuals[("static-bilinear", a, b, c)] = to_real(zca[a, b, c]) - expand_g(
                zn[a, b, c] - u
            )
            residuals[("boundary", a, b, c)] = to_real(
                boundary_term_complex(a, b, c, conv)
            ) + expand_g(u)
            residuals[("noether", a, b, c)] = to_real(zcn[a, b, c]) + expand_g(
                zn[a, b, c]
            )
            residuals[("modified", a, b, c)] = to_real(zcm[a, b, c]) + expand_g(
                zm[a, b, c]
            )
            qc = q_complex_characteristic(a, b, c)
            residuals[("characteristic", a, b, c)] = (
                to_real(qc)
                + q_characteristic(a, b, c)
                + p_characteristic(a, b, c).scale(I)
            )
    return _report("complex-real-crosscheck", residuals)


# ---------------------------------------------------------------------------
# mutations: documented single-coefficient breakages, used to prove the
# identity checks are sensitive


def _mutated_characteristic_sign(conv: MetricConvention) -> IdentityReport:
    L = build_lagrangian(LagrangianKind.REAL_DS, conv)
    residuals = {}
    for a, b in SYM_PAIRS:
        v = EvolutionaryField(
            {("A", c): -q_characteristic(a, b, c) for c in IDX}
            | {("C", c): p_characteristic(a, b, c) for c in IDX}
        )
        lhs = prolong_apply(v, L, 2)
        div = JetPolynomial.zero()
        for c in IDX:
            div = div + total_derivative(expand_g(boundary_term(a, b, c, conv)), c)
        residuals[(a, b)] = lhs - div
    return _report("variational-symmetry/real", residuals)


MUTATIONS = {
    "boundary-weight-real": (
        "first coefficient of the real boundary current: -1/2 -> -1",
        lambda conv: verify_variational_symmetry("real", conv, uweight=Fraction(-1)),
    ),
    "characteristic-sign": (
        "sign of the A-sector characteristic: -2 G -> +2 G",
        _mutated_characteristic_sign,
    ),
    "modified-correction-weight": (
        "correction weight in the modified family: -4 -> -2",
        lambda conv: verify_characteristic_form("real", conv, Fraction(-2)),
    ),
    "superpotential-deltas-dropped": (
        "Kronecker-delta terms of the superpotential dropped",
        lambda conv: verify_triviality_relations(conv, drop_deltas=True),
    ),
    "boundary-weight-complex": (
        "leading coefficient of the complex boundary current: -i -> -2i",
        lambda conv: verify_variational_symmetry("complex", conv, uweight=-2 * I),
    ),
}


def run_mutation(
    name: str, conv: MetricConvention = DEFAULT_CONVENTION
) -> IdentityReport:
    """Re-run the relevant identity check with one documented
    coefficient mutated; a sensitive suite reports a nonzero witness."""
    if name not in MUTATIONS:
        raise KeyError(f"unknown mutation {name!r}; have {sorted(MUTATIONS)}")
    description, runner = MUTATIONS[name]
    rep = runner(conv)
    rep.identity_name = f"mutation/{name}"
    rep.details["description"] = description
    rep.details["expected"] = "nonzero witness"
    return rep


# ---------------------------------------------------------------------------
# the default suite


def run_identity_suite(conv: MetricConvention = DEFAULT_CONVENTION) -> list:
    """All exact off-shell checks, in report order."""
    return [
        verify_euler_expressions(conv),
        verify_variational_symmetry("real", conv),
        verify_variational_symmetry("complex", conv),
        verify_characteristic_form("real", conv),
        verify_characteristic_form("complex", conv),
        verify_characteristic_intermediate(conv),
        verify_triviality_relations(conv),
        verify_zilch_equivalence_remark(conv),
        verify_zilch_algebra(conv),
        verify_noether_current_construction(conv),
        verify_duality_invariance_symbolic(conv),
        verify_complex_real_crosscheck(conv),
    ]
