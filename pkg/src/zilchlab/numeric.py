"""Floating-point evaluation of the conserved bilinear families.

Everything in this module works on sampled jet data (`FieldSample`)
with plain ``numpy.einsum`` contractions.  The tensor expressions are
transcribed here independently of the exact-arithmetic layer -- the two
layers share only names (form labels, metric conventions), never
computed expressions -- so numeric agreement between them is a real
cross-check rather than a tautology.

Index conventions (shared with the exact layer and documented in
``docs/conventions.md``):

- coordinates are ordered ``(t, x, y, z)``;
- curl arrays carry all-lower indices, ``F[a, b, j1, ..., jn]`` being
  the n-th coordinate derivative of the curl component ``F_{ab}``;
- rank-3 family values are stored all-lower as ``Z[a, b, c]`` with
  ``(a, b)`` the parameter pair and ``c`` the current index;
- the electric/magnetic split uses ``E_i = F_{i0}`` and
  ``B_i = (1/2) eps_{ijk} F_{jk}`` with ``eps_{123} = +1``, at the
  component level (no metric factors), for either signature.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .minkowski import DEFAULT_CONVENTION, MetricConvention
from .noether import EXTENDED_FORMS, REDUCED_FORMS, ZilchForm
from .solutions import (
    AnalyticSolution,
    FieldSample,
    apply_duality_rotation,
    field_scale,
    sample,
)

NUMERIC_FORMS = tuple(REDUCED_FORMS) + tuple(EXTENDED_FORMS)

_TINY = 1e-300


def _eps4() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        sign = 1
        p = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if p[i] > p[j]:
                    sign = -sign
        eps[perm] = sign
    eps.setflags(write=False)
    return eps


_EPS4 = _eps4()

_EPS3 = _EPS4[1:, 1:, 1:, 0].copy() * 0.0
for _p in itertools.permutations(range(3)):
    _s = 1
    _q = list(_p)
    for _i in range(3):
        for _j in range(_i + 1, 3):
            if _q[_i] > _q[_j]:
                _s = -_s
    _EPS3[_p] = _s
_EPS3.setflags(write=False)


def levi_civita(conv: MetricConvention = DEFAULT_CONVENTION) -> np.ndarray:
    """All-lower alternating symbol with the convention's eps_{0123}."""
    return conv.epsilon0123 * _EPS4


def strength(s: FieldSample, sector: str = "A", order: int = 0) -> np.ndarray:
    """Derivatives of the curl: ``out[a, b, j1..jn] = (curl)_{ab, j1..jn}``."""
    arr = s.array(sector, order + 1)
    return np.swapaxes(arr, 0, 1) - arr


def hodge_dual(F: np.ndarray, conv: MetricConvention = DEFAULT_CONVENTION) -> np.ndarray:
    """``(1/2) eps_{ab}{}^{cd} F_{cd}``; trailing derivative axes ride along."""
    gm = np.asarray(conv.g, dtype=float)
    em = levi_civita(conv) * gm[None, None, :, None] * gm[None, None, None, :]
    return 0.5 * np.tensordot(em, F, axes=([2, 3], [0, 1]))


def _euler_expression(s: FieldSample, sector: str, order: int, conv: MetricConvention) -> np.ndarray:
    """All-lower Euler expression of one sector, with derivatives:
    ``out[a, j1..jn] = (1/2) g^{bb} (curl)_{ba, b j1..jn}``."""
    gm = np.asarray(conv.g, dtype=float)
    arr = strength(s, sector, order + 1)
    extra = "fghi"[:order]
    return 0.5 * np.einsum(f"b,bab{extra}->a{extra}", gm, arr)


def _field_arrays(s: FieldSample, conv: MetricConvention, needed: set) -> dict:
    arrays: dict = {}
    for key, order in sorted(needed):
        if key == "F":
            arrays[(key, order)] = strength(s, "A", order)
        elif key == "G":
            arrays[(key, order)] = strength(s, "C", order)
        elif key == "SF":
            arrays[(key, order)] = hodge_dual(strength(s, "A", order), conv)
        elif key == "M":
            arrays[(key, order)] = _euler_expression(s, "A", order, conv)
        elif key == "N":
            arrays[(key, order)] = _euler_expression(s, "C", order, conv)
        else:
            raise KeyError(key)
    return arrays


def _needed_arrays(terms: Iterable[_Term], nder: int) -> set:
    needed = set()
    for term in terms:
        for _, key, order in term.factors:
            for bump in range(nder + 1):
                needed.add((key, order + bump))
    return needed


# ---------------------------------------------------------------------------
# term tables: every family value is a finite sum of
#     coef * (constant factors) * X_{..., derivs} * Y_{..., derivs}
# and the analytic divergence follows by the product rule on the two
# field factors.  Constant factors are the metric vector 'g' and the
# diagonal lowered metric 'dg'.


@dataclass(frozen=True)
class _Term:
    coef: float
    consts: tuple  # of (subscript, key) with key in {"g", "dg"}
    factors: tuple  # of (subscript, field key, derivative order)


def _t(coef, consts, factors) -> _Term:
    return _Term(float(coef), tuple(consts), tuple(factors))


def _kibble1_terms() -> tuple:
    return (
        _t(1.0, (("d", "g"),), (("ad", "SF", 0), ("dbc", "F", 1))),
        _t(-1.0, (("d", "g"),), (("ad", "F", 0), ("dbc", "SF", 1))),
    )


def _kibble2_terms() -> tuple:
    return (
        _t(1.0, (("d", "g"),), (("da", "SF", 0), ("bdc", "F", 1))),
        _t(1.0, (("d", "g"),), (("db", "SF", 0), ("adc", "F", 1))),
        _t(-0.5, (("ab", "dg"), ("d", "g"), ("e", "g")), (("de", "SF", 0), ("edc", "F", 1))),
    )


def _kibble3_terms() -> tuple:
    return (
        _t(0.5, (("d", "g"),), (("da", "SF", 0), ("bdc", "F", 1))),
        _t(0.5, (("d", "g"),), (("db", "SF", 0), ("adc", "F", 1))),
        _t(-0.5, (("d", "g"),), (("da", "F", 0), ("bdc", "SF", 1))),
        _t(-0.5, (("d", "g"),), (("db", "F", 0), ("adc", "SF", 1))),
    )


def _anco_terms() -> tuple:
    return (
        _t(0.5, (("d", "g"),), (("cd", "SF", 0), ("dab", "F", 1))),
        _t(0.5, (("d", "g"),), (("cd", "SF", 0), ("dba", "F", 1))),
        _t(-0.5, (("d", "g"),), (("cd", "F", 0), ("dab", "SF", 1))),
        _t(-0.5, (("d", "g"),), (("cd", "F", 0), ("dba", "SF", 1))),
    )


def _lipkin_trivial_terms() -> tuple:
    """d-divergence of the pair superpotential
    ``2 *F_{(a}{}^{[c} F_{b)}{}^{d]}`` with the current index lowered:
    eight product-rule monomials."""
    rows = []
    for xa, xb in (("a", "b"), ("b", "a")):
        rows.append(_t(0.5, (("d", "g"),), ((f"{xa}cd", "SF", 1), (f"{xb}d", "F", 0))))
        rows.append(_t(0.5, (("d", "g"),), ((f"{xa}c", "SF", 0), (f"{xb}dd", "F", 1))))
        rows.append(_t(-0.5, (("d", "g"),), ((f"{xa}dd", "SF", 1), (f"{xb}c", "F", 0))))
        rows.append(_t(-0.5, (("d", "g"),), ((f"{xa}d", "SF", 0), (f"{xb}cd", "F", 1))))
    return tuple(rows)


def _duality_symmetric_terms() -> tuple:
    return (
        _t(0.5, (("d", "g"),), (("da", "G", 0), ("bdc", "F", 1))),
        _t(0.5, (("d", "g"),), (("db", "G", 0), ("adc", "F", 1))),
        _t(-0.5, (("d", "g"),), (("da", "F", 0), ("bdc", "G", 1))),
        _t(-0.5, (("d", "g"),), (("db", "F", 0), ("adc", "G", 1))),
    )


def _boundary_terms() -> tuple:
    """The boundary current of the variational symmetry, lowered:
    ``(1/2) g_{c(a} [F^{de}{}_{,b)} G_{de} - G^{de}{}_{,b)} F_{de}] / 1``
    with the inner scalar carrying its own factor 1/2."""
    rows = []
    for xa, xb in (("a", "b"), ("b", "a")):
        rows.append(_t(0.25, ((f"c{xa}", "dg"), ("d", "g"), ("e", "g")), ((f"de{xb}", "F", 1), ("de", "G", 0))))
        rows.append(_t(-0.25, ((f"c{xa}", "dg"), ("d", "g"), ("e", "g")), ((f"de{xb}", "G", 1), ("de", "F", 0))))
    return tuple(rows)


def _noether_terms() -> tuple:
    rows = [
        _t(0.5, (("d", "g"),), (("cd", "G", 0), ("dab", "F", 1))),
        _t(0.5, (("d", "g"),), (("cd", "G", 0), ("dba", "F", 1))),
        _t(-0.5, (("d", "g"),), (("cd", "F", 0), ("dab", "G", 1))),
        _t(-0.5, (("d", "g"),), (("cd", "F", 0), ("dba", "G", 1))),
    ]
    rows.extend(_boundary_terms())
    return tuple(rows)


def _correction_terms() -> tuple:
    """On-shell-vanishing correction carried by the modified family
    (weight -4 of the projector contraction, hand-expanded)."""
    rows = []
    for xa, xb in (("a", "b"), ("b", "a")):
        rows.append(_t(-1.0, ((f"c{xb}", "dg"), ("d", "g")), ((f"d{xa}", "G", 0), ("d", "M", 0))))
        rows.append(_t(1.0, ((f"c{xb}", "dg"), ("d", "g")), ((f"d{xa}", "F", 0), ("d", "N", 0))))
        rows.append(_t(1.0, (), ((f"c{xa}", "G", 0), (f"{xb}", "M", 0))))
        rows.append(_t(-1.0, (), ((f"c{xa}", "F", 0), (f"{xb}", "N", 0))))
    return tuple(rows)


def _noether_trivial_terms() -> tuple:
    """d-divergence (current index lowered) of the pair superpotential
    whose divergence separates the Noether assembly from the modified
    family:

        2 ( F_{(a}{}^{[c} G_{b)}{}^{d]}
            - delta_{(a}{}^{[c} G_{b)e} F^{d]e}
            + delta_{(a}{}^{[c} F_{b)e} G^{d]e} ) .

    The Kronecker-delta pieces whose delta carries the divergence index
    turn into derivatives along a free index, so this table is valid
    only at derivative level zero (the evaluator enforces that).
    """
    rows = []
    for xa, xb in (("a", "b"), ("b", "a")):
        # + F_{a'}{}^{c} G_{b'}{}^{d} piece, both product-rule halves
        rows.append(_t(0.5, (("d", "g"),), ((f"{xa}cd", "F", 1), (f"{xb}d", "G", 0))))
        rows.append(_t(0.5, (("d", "g"),), ((f"{xa}c", "F", 0), (f"{xb}dd", "G", 1))))
        # - F_{a'}{}^{d} G_{b'}{}^{c} piece
        rows.append(_t(-0.5, (("d", "g"),), ((f"{xa}dd", "F", 1), (f"{xb}c", "G", 0))))
        rows.append(_t(-0.5, (("d", "g"),), ((f"{xa}d", "F", 0), (f"{xb}cd", "G", 1))))
        # delta_{a'}{}^{c} scalar piece: divergence lands on a free index
        rows.append(_t(-0.5, ((f"c{xa}", "dg"), ("e", "g"), ("d", "g")), ((f"{xb}ed", "G", 1), ("de", "F", 0))))
        rows.append(_t(-0.5, ((f"c{xa}", "dg"), ("e", "g"), ("d", "g")), ((f"{xb}e", "G", 0), ("ded", "F", 1))))
        rows.append(_t(0.5, ((f"c{xa}", "dg"), ("e", "g"), ("d", "g")), ((f"{xb}ed", "F", 1), ("de", "G", 0))))
        rows.append(_t(0.5, ((f"c{xa}", "dg"), ("e", "g"), ("d", "g")), ((f"{xb}e", "F", 0), ("ded", "G", 1))))
        # delta_{a'}{}^{d} scalar piece: the divergence becomes a
        # derivative along the free index a'
        rows.append(_t(0.5, (("e", "g"),), ((f"{xb}e{xa}", "G", 1), (f"ce", "F", 0))))
        rows.append(_t(0.5, (("e", "g"),), ((f"{xb}e", "G", 0), (f"ce{xa}", "F", 1))))
        rows.append(_t(-0.5, (("e", "g"),), ((f"{xb}e{xa}", "F", 1), (f"ce", "G", 0))))
        rows.append(_t(-0.5, (("e", "g"),), ((f"{xb}e", "F", 0), (f"ce{xa}", "G", 1))))
    return tuple(rows)


def _form_terms(form: ZilchForm) -> tuple:
    if form is ZilchForm.KIBBLE_1:
        return _kibble1_terms()
    if form is ZilchForm.KIBBLE_2:
        return _kibble2_terms()
    if form is ZilchForm.KIBBLE_3:
        return _kibble3_terms()
    if form is ZilchForm.ANCO:
        return _anco_terms()
    if form is ZilchForm.LIPKIN:
        return _anco_terms() + _lipkin_trivial_terms()
    if form is ZilchForm.DUALITY_SYMMETRIC:
        return _duality_symmetric_terms()
    if form is ZilchForm.NOETHER:
        return _noether_terms()
    if form is ZilchForm.MODIFIED:
        return _duality_symmetric_terms() + _correction_terms()
    raise ValueError(
        f"form {form.value!r} has no numeric evaluation; "
        f"supported: {[f.value for f in NUMERIC_FORMS]}"
    )


_DERIV_AXIS = "z"


def _const_array(key: str, gm: np.ndarray) -> np.ndarray:
    if key == "g":
        return gm
    if key == "dg":
        return np.diag(gm)
    raise KeyError(key)


def _eval_terms(
    terms: Iterable[_Term],
    arrays: dict,
    gm: np.ndarray,
    nder: int,
) -> np.ndarray:
    out_sub = "abc" + (_DERIV_AXIS if nder else "")
    total = np.zeros((4,) * len(out_sub))
    for term in terms:
        variants = []
        if nder == 0:
            variants.append(term.factors)
        else:
            for bump in range(len(term.factors)):
                new = []
                for i, (sub, key, order) in enumerate(term.factors):
                    if i == bump:
                        new.append((sub + _DERIV_AXIS, key, order + 1))
                    else:
                        new.append((sub, key, order))
                variants.append(tuple(new))
        for factors in variants:
            subs = [sub for sub, _ in term.consts] + [sub for sub, _, _ in factors]
            ops = [_const_array(key, gm) for _, key in term.consts]
            ops += [arrays[(key, order)] for _, key, order in factors]
            spec = ",".join(subs) + "->" + out_sub
            total = total + term.coef * np.einsum(spec, *ops, optimize=True)
    return total


def _max_factor_order(terms: Iterable[_Term]) -> int:
    return max(order for term in terms for _, _, order in term.factors)


def _depth_needed(terms: Iterable[_Term], nder: int) -> int:
    """Sample depth required: a curl factor of derivative order k needs
    jets of order k+1, an Euler-expression factor needs one more."""
    needed = 2
    for term in terms:
        for _, key, order in term.factors:
            base = order + nder + (2 if key in ("M", "N") else 1)
            needed = max(needed, base)
    return needed


def _require_depth(s: FieldSample, needed: int) -> None:
    if s.depth < needed:
        raise ValueError(
            f"insufficient derivative depth: need {needed}, sample holds {s.depth}"
        )


def eval_zilch(
    s: FieldSample,
    form: ZilchForm | str,
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> np.ndarray:
    """All-lower family value ``Z[a, b, c]`` at one sampled event."""
    form = ZilchForm(form)
    terms = _form_terms(form)
    _require_depth(s, _depth_needed(terms, nder=0))
    gm = np.asarray(conv.g, dtype=float)
    arrays = _field_arrays(s, conv, _needed_arrays(terms, 0))
    return _eval_terms(terms, arrays, gm, nder=0)


def eval_zilch_derivative(
    s: FieldSample,
    form: ZilchForm | str,
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> np.ndarray:
    """Coordinate derivatives ``out[a, b, c, e] = d_e Z_{abc}`` from the
    closed-form product rule (no discretization)."""
    form = ZilchForm(form)
    terms = _form_terms(form)
    _require_depth(s, _depth_needed(terms, nder=1))
    gm = np.asarray(conv.g, dtype=float)
    arrays = _field_arrays(s, conv, _needed_arrays(terms, 1))
    return _eval_terms(terms, arrays, gm, nder=1)


def divergence(
    s: FieldSample,
    form: ZilchForm | str,
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> np.ndarray:
    """``div[a, b] = d_c Z_{ab}{}^c`` from closed-form derivatives."""
    gm = np.asarray(conv.g, dtype=float)
    zd = eval_zilch_derivative(s, form, conv)
    return np.einsum("c,abcc->ab", gm, zd)


def eval_modified_correction(
    s: FieldSample, conv: MetricConvention = DEFAULT_CONVENTION
) -> np.ndarray:
    """The on-shell-vanishing part of the modified family alone."""
    _require_depth(s, 2)
    gm = np.asarray(conv.g, dtype=float)
    arrays = _field_arrays(s, conv, _needed_arrays(_correction_terms(), 0))
    return _eval_terms(_correction_terms(), arrays, gm, nder=0)


def eval_lipkin_trivial(
    s: FieldSample, conv: MetricConvention = DEFAULT_CONVENTION
) -> np.ndarray:
    """Evaluated divergence of the pair superpotential separating the
    compact historical family from the symmetrized one."""
    _require_depth(s, 2)
    gm = np.asarray(conv.g, dtype=float)
    arrays = _field_arrays(s, conv, _needed_arrays(_lipkin_trivial_terms(), 0))
    return _eval_terms(_lipkin_trivial_terms(), arrays, gm, nder=0)


def eval_noether_trivial(
    s: FieldSample, conv: MetricConvention = DEFAULT_CONVENTION
) -> np.ndarray:
    """Evaluated divergence of the superpotential separating the Noether
    assembly from the modified family."""
    _require_depth(s, 2)
    gm = np.asarray(conv.g, dtype=float)
    arrays = _field_arrays(s, conv, _needed_arrays(_noether_trivial_terms(), 0))
    return _eval_terms(_noether_trivial_terms(), arrays, gm, nder=0)


def eval_boundary_current(
    s: FieldSample, conv: MetricConvention = DEFAULT_CONVENTION
) -> np.ndarray:
    """The boundary current of the variational symmetry, all-lower."""
    _require_depth(s, 2)
    gm = np.asarray(conv.g, dtype=float)
    arrays = _field_arrays(s, conv, _needed_arrays(_boundary_terms(), 0))
    return _eval_terms(_boundary_terms(), arrays, gm, nder=0)


# ---------------------------------------------------------------------------
# electric/magnetic split and the observer decomposition


def electric_field(s: FieldSample, order: int = 0) -> np.ndarray:
    """``E_i = F_{i0}`` (components); trailing axes are derivatives."""
    return strength(s, "A", order)[1:, 0]


def magnetic_field(s: FieldSample, order: int = 0) -> np.ndarray:
    """``B_i = (1/2) eps_{ijk} F_{jk}`` with 3-space eps_{123} = +1."""
    F = strength(s, "A", order)
    return 0.5 * np.tensordot(_EPS3, F[1:, 1:], axes=([1, 2], [0, 1]))


def _spatial_curl(v1: np.ndarray) -> np.ndarray:
    """``(curl v)_i = eps_{ijk} d_j v_k`` from ``v1[i, a] = d_a v_i``
    (a being the 4D derivative axis; only spatial entries are used)."""
    return np.einsum("ijk,kj->i", _EPS3, v1[:, 1:])


def optical_chirality(s: FieldSample) -> float:
    """The helicity-aligned pseudoscalar ``E . curl E + B . curl B``.

    Orientation-independent (defined at the component level from the
    fixed E/B extraction), strictly positive for the positive-helicity
    circular wave of the catalog.
    """
    _require_depth(s, 2)
    E = electric_field(s)
    B = magnetic_field(s)
    E1 = electric_field(s, 1)
    B1 = magnetic_field(s, 1)
    return float(E @ _spatial_curl(E1) + B @ _spatial_curl(B1))


@dataclass(frozen=True)
class DecompositionReport:
    """Observer blocks of the family value for the rest observer
    ``u^a = (1, 0, 0, 0)`` with spatial frame vectors along the axes.

    Blocks are stored exactly as slices of the all-lower rank-3 array,
    so they carry the metric orientation of the convention; the
    ``optical_chirality`` field is the orientation-independent
    pseudoscalar (see ``optical_chirality``).
    """

    variant: str
    z000: float
    z00i: np.ndarray
    zi00: np.ndarray
    zi0j: np.ndarray
    zij0: np.ndarray
    zijk: np.ndarray
    optical_chirality: float

    def blocks(self) -> dict:
        return {
            "z000": np.asarray(self.z000),
            "z00i": self.z00i,
            "zi00": self.zi00,
            "zi0j": self.zi0j,
            "zij0": self.zij0,
            "zijk": self.zijk,
        }


DECOMPOSITION_VARIANTS = ("off-shell", "on-shell-form")


def orientation_factor(conv: MetricConvention = DEFAULT_CONVENTION) -> float:
    """Sign relating the E/B block formulas to the all-lower slices:
    the blocks involve one alternating-symbol contraction and an odd
    number of metric raisings, so the factor is ``g_{00} eps_{0123}``."""
    return float(conv.g[0] * conv.epsilon0123)


def eval_decomposition(
    s: FieldSample,
    variant: str = "off-shell",
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> DecompositionReport:
    """Observer blocks evaluated from E, B and their derivatives.

    variant 'off-shell': slice-exact expressions, valid on any jet;
    variant 'on-shell-form': time derivatives rewritten with the vacuum
    evolution equations, valid on solutions.
    """
    if variant not in DECOMPOSITION_VARIANTS:
        raise ValueError(
            f"unknown decomposition variant {variant!r}; "
            f"expected one of {DECOMPOSITION_VARIANTS}"
        )
    _require_depth(s, 2)
    E = electric_field(s)
    B = magnetic_field(s)
    E1 = electric_field(s, 1)
    B1 = magnetic_field(s, 1)
    Edot = E1[:, 0]
    Bdot = B1[:, 0]
    dE = E1[:, 1:]  # dE[i, j] = d_j E_i
    dB = B1[:, 1:]
    curlE = _spatial_curl(E1)
    curlB = _spatial_curl(B1)
    delta = np.eye(3)

    if variant == "off-shell":
        z000 = float(E @ Bdot - B @ Edot)
        z00i = np.einsum("j,ji->i", E, dB) - np.einsum("j,ji->i", B, dE)
        zi00 = np.cross(E, Edot) + np.cross(B, Bdot)
        zi0j = np.einsum("ikl,k,lj->ij", _EPS3, E, dE) + np.einsum(
            "ikl,k,lj->ij", _EPS3, B, dB
        )
        zij0 = (
            delta * z000
            + np.outer(Edot, B)
            + np.outer(B, Edot)
            - np.outer(Bdot, E)
            - np.outer(E, Bdot)
        )
        # 2 X_{(i} Y_{j),k} written out as X_i dY[j,k] + X_j dY[i,k]
        zijk = np.einsum("ij,k->ijk", delta, z00i)
        zijk -= np.einsum("i,jk->ijk", E, dB) + np.einsum("j,ik->ijk", E, dB)
        zijk += np.einsum("i,jk->ijk", B, dE) + np.einsum("j,ik->ijk", B, dE)
    else:
        z000 = float(-E @ curlE - B @ curlB)
        zi00 = np.cross(E, curlB) - np.cross(B, curlE)
        z00i = zi00 + np.einsum("j,ij->i", E, dB) - np.einsum("j,ij->i", B, dE)
        zij0 = (
            delta * z000
            + np.outer(curlB, B)
            + np.outer(B, curlB)
            + np.outer(curlE, E)
            + np.outer(E, curlE)
        )
        zi0j = (
            zij0
            - np.outer(E, curlE)
            - np.outer(B, curlB)
            - np.einsum("ikl,jk,l->ij", _EPS3, dE, E)
            - np.einsum("ikl,jk,l->ij", _EPS3, dB, B)
        )
        zijk = np.einsum("ij,k->ijk", delta, z00i)
        zijk -= np.einsum("i,jk->ijk", E, dB) + np.einsum("j,ik->ijk", E, dB)
        zijk += np.einsum("i,jk->ijk", B, dE) + np.einsum("j,ik->ijk", B, dE)

    orient = orientation_factor(conv)
    chi = float(E @ curlE + B @ curlB)
    return DecompositionReport(
        variant=variant,
        z000=orient * z000,
        z00i=orient * z00i,
        zi00=orient * zi00,
        zi0j=orient * zi0j,
        zij0=orient * zij0,
        zijk=orient * zijk,
        optical_chirality=chi,
    )


def decomposition_by_contraction(
    s: FieldSample, conv: MetricConvention = DEFAULT_CONVENTION
) -> dict:
    """The same observer blocks as literal slices of the evaluated
    rank-3 array (classic index order), the cross-check path."""
    Z = eval_zilch(s, ZilchForm.KIBBLE_1, conv)
    return {
        "z000": np.asarray(Z[0, 0, 0]),
        "z00i": Z[0, 0, 1:].copy(),
        "zi00": Z[1:, 0, 0].copy(),
        "zi0j": Z[1:, 0, 1:].copy(),
        "zij0": Z[1:, 1:, 0].copy(),
        "zijk": Z[1:, 1:, 1:].copy(),
    }


def _bilinear_scale(s: FieldSample) -> float:
    """Magnitude scale of (field) x (first derivative) bilinears; keeps
    residuals meaningful on configurations whose family values vanish
    identically (e.g. a linearly polarized wave)."""
    s0 = s1 = 0.0
    for sector in ("A", "C"):
        s0 = max(s0, float(np.abs(strength(s, sector, 0)).max()))
        s1 = max(s1, float(np.abs(strength(s, sector, 1)).max()))
    return s0 * s1


def decomposition_residual(
    s: FieldSample,
    variant: str = "off-shell",
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> float:
    """Max deviation between the formula path and the contraction path,
    relative to the largest block entry (floored by the bilinear scale
    of the field, so identically vanishing blocks compare to it)."""
    rep = eval_decomposition(s, variant, conv)
    direct = decomposition_by_contraction(s, conv)
    scale = max(float(np.abs(v).max()) for v in direct.values())
    scale = max(scale, _bilinear_scale(s), _TINY)
    dev = 0.0
    for name, block in rep.blocks().items():
        dev = max(dev, float(np.abs(block - direct[name]).max()))
    if dev == 0.0:
        return 0.0
    return dev / scale


# ---------------------------------------------------------------------------
# stress-energy and the scalar Lagrangian


def eval_stress_energy(
    s: FieldSample, conv: MetricConvention = DEFAULT_CONVENTION
) -> np.ndarray:
    """All-lower ``T_{ab}`` of the matrix form ``T = -(1/2)(F^2 + *F^2)``
    (squares in the mixed-index matrix sense).

    Symmetric and identically traceless.  The mixed value is
    orientation-independent with ``T^0{}_0 = -(energy density)``; the
    all-lower time-time entry therefore carries the signature sign
    (``-u`` under '+---', ``+u`` under '-+++').
    """
    _require_depth(s, 1)
    gm = np.asarray(conv.g, dtype=float)
    F = strength(s, "A", 0)
    SF = hodge_dual(F, conv)
    Fm = gm[:, None] * F  # F^a{}_b
    SFm = gm[:, None] * SF
    Tmix = -0.5 * (Fm @ Fm + SFm @ SFm)
    return gm[:, None] * Tmix


def energy_density(s: FieldSample) -> float:
    """``(1/2)(|E|^2 + |B|^2)`` from the component-level E/B split."""
    E = electric_field(s)
    B = magnetic_field(s)
    return float(0.5 * (E @ E + B @ B))


def lagrangian_density(
    s: FieldSample, conv: MetricConvention = DEFAULT_CONVENTION
) -> float:
    """``-(1/8)(F^{ab} F_{ab} + G^{ab} G_{ab})`` of the two-potential theory."""
    _require_depth(s, 1)
    gm = np.asarray(conv.g, dtype=float)
    F = strength(s, "A", 0)
    G = strength(s, "C", 0)
    ff = np.einsum("a,b,ab,ab->", gm, gm, F, F)
    gg = np.einsum("a,b,ab,ab->", gm, gm, G, G)
    return float(-0.125 * (ff + gg))


def symmetry_variation_residual(
    s: FieldSample,
    zeta: np.ndarray,
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> float:
    """Numeric shadow of the variational-symmetry identity: under the
    second-order field variation with symmetric parameter ``zeta^{ab}``
    (characteristic normalization: ``delta F = 2 zeta^{cd} G_{ab,cd}``,
    ``delta G = -2 zeta^{cd} F_{ab,cd}``),

        delta L  =  d_c [ zeta^{ab} U_{ab}{}^c ]

    holds off shell.  Returns |delta L - div| relative to the larger of
    the two sides (0.0 when both vanish)."""
    _require_depth(s, 3)
    zeta = np.asarray(zeta, dtype=float)
    gm = np.asarray(conv.g, dtype=float)
    F = strength(s, "A", 0)
    G = strength(s, "C", 0)
    F1 = strength(s, "A", 1)
    G1 = strength(s, "C", 1)
    F2 = strength(s, "A", 2)
    G2 = strength(s, "C", 2)

    dF = 2.0 * np.einsum("cd,abcd->ab", zeta, G2)
    dG = -2.0 * np.einsum("cd,abcd->ab", zeta, F2)
    delta_l = float(
        -0.25 * np.einsum("a,b,ab,ab->", gm, gm, F, dF)
        - 0.25 * np.einsum("a,b,ab,ab->", gm, gm, G, dG)
    )

    # d_c [zeta^{cb} scalarU_b] with
    # scalarU_b = (1/2) g^{dd} g^{ee} (F_{de,b} G_{de} - G_{de,b} F_{de})
    du = 0.5 * (
        np.einsum("d,e,debc,de->bc", gm, gm, F2, G)
        + np.einsum("d,e,deb,dec->bc", gm, gm, F1, G1)
        - np.einsum("d,e,debc,de->bc", gm, gm, G2, F)
        - np.einsum("d,e,deb,dec->bc", gm, gm, G1, F1)
    )
    div = float(np.einsum("cb,bc->", zeta, du))

    dev = abs(delta_l - div)
    if dev == 0.0:
        return 0.0
    # both sides can vanish on special field configurations (e.g. plane
    # waves), so normalize by the bilinear scale of the inputs instead
    zscale = float(np.abs(zeta).max())
    fscale = max(float(np.abs(F).max()), float(np.abs(G).max()))
    d2scale = max(float(np.abs(F2).max()), float(np.abs(G2).max()))
    return dev / max(abs(delta_l), abs(div), zscale * fscale * d2scale, _TINY)


# ---------------------------------------------------------------------------
# divergence residuals: analytic and grid-based


def _bilinear_derivative_scale(s: FieldSample) -> float:
    """Magnitude of the terms entering a family divergence before
    cancellation: the product rule produces sums of (curl) x (second
    curl derivative) and (first derivative) squared.  Normalizing by
    this keeps the residual meaningful even when the family value
    itself is spacetime-constant (as on a single circular wave)."""
    s0 = s1 = s2 = 0.0
    for sector in ("A", "C"):
        s0 = max(s0, float(np.abs(strength(s, sector, 0)).max()))
        s1 = max(s1, float(np.abs(strength(s, sector, 1)).max()))
        s2 = max(s2, float(np.abs(strength(s, sector, 2)).max()))
    return s0 * s2 + s1 * s1


def _divergence_residual(
    samples_iter: Iterable[FieldSample],
    form: ZilchForm | str,
    conv: MetricConvention,
) -> float:
    form = ZilchForm(form)
    gm = np.asarray(conv.g, dtype=float)
    worst = 0.0
    scale = 0.0
    for s in samples_iter:
        zd = eval_zilch_derivative(s, form, conv)
        div = np.einsum("c,abcc->ab", gm, zd)
        worst = max(worst, float(np.abs(div).max()))
        scale = max(scale, _bilinear_derivative_scale(s))
    if worst == 0.0:
        return 0.0
    return worst / max(scale, _TINY)


def divergence_residual_analytic(
    sol: AnalyticSolution,
    form: ZilchForm | str,
    events: Sequence,
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> float:
    """Max |d_c Z_{ab}{}^c| over the events, from order-3 closed-form
    derivatives, relative to the bilinear derivative scale of the field
    (O(1) for non-solutions, near machine zero on solutions)."""
    return _divergence_residual(
        (sample(sol, event, depth=3) for event in events), form, conv
    )


def divergence_residual_samples(
    samples: Sequence[FieldSample],
    form: ZilchForm | str,
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> float:
    """Same residual on pre-built samples (e.g. random jets for the
    negative control)."""
    return _divergence_residual(samples, form, conv)


_STENCILS = {
    2: ((1, 1.0 / 2.0),),
    4: ((1, 2.0 / 3.0), (2, -1.0 / 12.0)),
    6: ((1, 3.0 / 4.0), (2, -3.0 / 20.0), (3, 1.0 / 60.0)),
}


@dataclass(frozen=True)
class GridSpec:
    """Uniform evaluation grid for the finite-difference diagnostic.

    origin: lowest-corner event (t, x, y, z);
    spacing: step per axis at the coarsest level (scalar or 4 values);
    extents: number of intervals per axis (the box is fixed while
    refinement halves the step);
    stencil_order: accuracy order of the central first-derivative
    stencil, one of {2, 4, 6}.
    """

    origin: tuple = (0.0, 0.0, 0.0, 0.0)
    spacing: tuple = (0.25, 0.25, 0.25, 0.25)
    extents: tuple = (8, 8, 8, 8)
    stencil_order: int = 4

    def __post_init__(self):
        origin = tuple(float(x) for x in np.atleast_1d(self.origin))
        spacing = np.atleast_1d(np.asarray(self.spacing, dtype=float))
        if spacing.size == 1:
            spacing = np.repeat(spacing, 4)
        extents = np.atleast_1d(np.asarray(self.extents, dtype=int))
        if extents.size == 1:
            extents = np.repeat(extents, 4)
        if len(origin) != 4 or spacing.size != 4 or extents.size != 4:
            raise ValueError("origin, spacing and extents must describe 4 axes")
        if self.stencil_order not in _STENCILS:
            raise ValueError(
                f"stencil_order must be one of {sorted(_STENCILS)}, "
                f"got {self.stencil_order}"
            )
        if (spacing <= 0).any() or (extents < 2 * self._radius_static(self.stencil_order)).any():
            raise ValueError(
                "grid too small for the chosen stencil: every axis needs "
                f"at least {2 * self._radius_static(self.stencil_order)} intervals"
            )
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", tuple(float(h) for h in spacing))
        object.__setattr__(self, "extents", tuple(int(n) for n in extents))

    @staticmethod
    def _radius_static(order: int) -> int:
        return max(m for m, _ in _STENCILS[order])

    @property
    def radius(self) -> int:
        return self._radius_static(self.stencil_order)


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    residual: float
    observed_order: float | None


@dataclass(frozen=True)
class ConvergenceTable:
    form: str
    stencil_order: int
    rows: tuple

    def observed_orders(self) -> tuple:
        return tuple(r.observed_order for r in self.rows if r.observed_order is not None)

    def to_csv(self) -> str:
        lines = ["h,residual,observed_order"]
        for r in self.rows:
            order = "" if r.observed_order is None else format(r.observed_order, ".17g")
            lines.append(
                f"{format(r.h, '.17g')},{format(r.residual, '.17g')},{order}"
            )
        return "\n".join(lines) + "\n"


class UnresolvedWaveError(ValueError):
    """Raised when the coarsest grid does not resolve the solution."""


def _probe_events(grid: GridSpec, max_per_axis: int = 3) -> list:
    radius = grid.radius
    axes = []
    for ax in range(4):
        lo, hi = radius, grid.extents[ax] - radius
        if hi < lo:
            raise ValueError("grid too small for the stencil")
        count = min(max_per_axis, hi - lo + 1)
        idx = np.unique(np.linspace(lo, hi, count).round().astype(int))
        axes.append(idx)
    events = []
    for combo in itertools.product(*axes):
        events.append(
            tuple(
                grid.origin[ax] + combo[ax] * grid.spacing[ax] for ax in range(4)
            )
        )
    return events


def divergence_residual_grid(
    sol: AnalyticSolution,
    form: ZilchForm | str,
    grid: GridSpec,
    levels: int = 3,
    conv: MetricConvention = DEFAULT_CONVENTION,
    workers: int = 1,
) -> ConvergenceTable:
    """Finite-difference divergence residual across ``levels`` grid
    refinements (each halving the step), with the observed convergence
    order between consecutive levels.

    The residual is the max over probe events of
    ``|sum_c g^{cc} D_c Z_{abc}|`` with ``D_c`` the chosen central
    stencil applied to exactly evaluated rank-3 samples; it is reported
    in absolute terms (so it scales with the square of the amplitude).
    """
    form = ZilchForm(form)
    gm = np.asarray(conv.g, dtype=float)
    if levels < 1:
        raise ValueError("need at least one grid level")

    max_freq = sol.max_frequency
    if max_freq > 0:
        wavelength = 2.0 * math.pi / max_freq
        coarsest = max(grid.spacing)
        points_per_wavelength = wavelength / coarsest
        if points_per_wavelength < 16.0:
            message = (
                "coarsest grid does not resolve the wave: "
                f"{points_per_wavelength:.2f} points per wavelength < 16"
            )
            warnings.warn(message)
            raise UnresolvedWaveError(message)

    taps = _STENCILS[grid.stencil_order]
    probes = _probe_events(grid)

    def zilch_at(event):
        return eval_zilch(sample(sol, event, depth=2), form, conv)

    def residual_at(event, h_scale):
        div = np.zeros((4, 4))
        for c in range(4):
            deriv_c = np.zeros((4, 4))
            h = grid.spacing[c] * h_scale
            for offset, weight in taps:
                shift = np.zeros(4)
                shift[c] = offset * h
                zp = zilch_at(tuple(np.asarray(event) + shift))
                zm = zilch_at(tuple(np.asarray(event) - shift))
                deriv_c += weight * (zp[:, :, c] - zm[:, :, c]) / h
            div += gm[c] * deriv_c
        return float(np.abs(div).max())

    rows = []
    previous = None
    for level in range(levels):
        h_scale = 0.5**level
        if workers > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=workers) as pool:
                values = list(pool.map(lambda e: residual_at(e, h_scale), probes))
        else:
            values = [residual_at(e, h_scale) for e in probes]
        residual = max(values)
        order = None
        if previous is not None and residual > 0:
            order = math.log2(previous / residual)
        rows.append(
            ConvergenceRow(
                h=max(grid.spacing) * h_scale, residual=residual, observed_order=order
            )
        )
        previous = residual
    return ConvergenceTable(
        form=form.value, stencil_order=grid.stencil_order, rows=tuple(rows)
    )


# ---------------------------------------------------------------------------
# invariance diagnostics


def duality_invariance_residual(
    s: FieldSample,
    form: ZilchForm | str,
    rotation,
    conv: MetricConvention = DEFAULT_CONVENTION,
) -> float:
    """|Z(rotated sample) - Z(sample)| relative to max |Z|."""
    z0 = eval_zilch(s, form, conv)
    z1 = eval_zilch(apply_duality_rotation(s, rotation), form, conv)
    dev = float(np.abs(z1 - z0).max())
    if dev == 0.0:
        return 0.0
    return dev / max(float(np.abs(z0).max()), _TINY)


def relative_deviation(x: np.ndarray, y: np.ndarray) -> float:
    """Max |x - y| over max(|x|, |y|); 0.0 when both vanish."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dev = float(np.abs(x - y).max())
    if dev == 0.0:
        return 0.0
    scale = max(float(np.abs(x).max()), float(np.abs(y).max()), _TINY)
    return dev / scale


# ---------------------------------------------------------------------------
# CSV emission


def rank3_csv(rows: Sequence[tuple]) -> str:
    """One CSV row per (event, component): header
    ``t,x,y,z,a,b,c,value``; ``rows`` holds (event, Z) pairs."""
    lines = ["t,x,y,z,a,b,c,value"]
    for event, Z in rows:
        Z = np.asarray(Z)
        ev = ",".join(format(float(x), ".17g") for x in event)
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    lines.append(f"{ev},{a},{b},{c},{format(Z[a, b, c], '.17g')}")
    return "\n".join(lines) + "\n"


def rank2_csv(rows: Sequence[tuple], names=("a", "b")) -> str:
    lines = [f"t,x,y,z,{names[0]},{names[1]},value"]
    for event, T in rows:
        T = np.asarray(T)
        ev = ",".join(format(float(x), ".17g") for x in event)
        for a in range(4):
            for b in range(4):
                lines.append(f"{ev},{a},{b},{format(T[a, b], '.17g')}")
    return "\n".join(lines) + "\n"
