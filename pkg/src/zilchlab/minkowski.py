"""Flat-spacetime tensor algebra over index range 0..3.

Metric, Levi-Civita symbol, Hodge dual, the antisymmetry projector
kappa, and small fixed-rank tensor containers.  Everything here is
ring-agnostic: components may be exact rationals, Gaussian rationals,
or floats; the operations only use +, -, *, / by integers.

Conventions are carried explicitly by a `MetricConvention` value
(signature and the sign of epsilon_{0123}); a run uses exactly one.
The default is signature (+,-,-,-) with epsilon_{0123} = +1, which
makes the dual act on the electric/magnetic pair as (E, B) -> (-B, E)
under the dictionary F_{0i} = E_i, F_{ij} = -eps_{ijk} B_k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

IDX = (0, 1, 2, 3)

_HALF = Fraction(1, 2)

_SIGNATURES = {
    "+---": (1, -1, -1, -1),
    "-+++": (-1, 1, 1, 1),
}


def _perm_sign(p) -> int:
    sign = 1
    q = list(p)
    for i in range(4):
        for j in range(i + 1, 4):
            if q[i] > q[j]:
                sign = -sign
    return sign


_EPS_EVEN = {p: _perm_sign(p) for p in itertools.permutations(IDX)}


@dataclass(frozen=True)
class MetricConvention:
    """Signature and orientation choice shared by a whole run.

    signature: "+---" or "-+++" (diagonal Minkowski metric)
    epsilon0123: the value of the all-lower Levi-Civita symbol at
        indices (0,1,2,3), either +1 or -1
    """

    signature: str = "+---"
    epsilon0123: int = 1

    def __post_init__(self):
        if self.signature not in _SIGNATURES:
            raise ValueError(f"unsupported signature {self.signature!r}")
        if self.epsilon0123 not in (1, -1):
            raise ValueError("epsilon0123 must be +1 or -1")

    @property
    def g(self) -> tuple:
        """Diagonal of g_{ab} (= diagonal of g^{ab})."""
        return _SIGNATURES[self.signature]

    def eps(self, a, b, c, d) -> int:
        """All-lower Levi-Civita symbol epsilon_{abcd}."""
        return self.epsilon0123 * _EPS_EVEN.get((a, b, c, d), 0)


DEFAULT_CONVENTION = MetricConvention()
BOTH_SIGNATURES = (MetricConvention("+---"), MetricConvention("-+++"))


def _freeze2(rows):
    t = tuple(tuple(r) for r in rows)
    if len(t) != 4 or any(len(r) != 4 for r in t):
        raise ValueError("Rank2 needs a 4x4 array")
    return t


class Rank2:
    """A 4x4 tensor with all-lower index placement M_{ab}.

    The optional antisymmetry flag is validated at construction and
    preserved by the operations that keep it.
    """

    __slots__ = ("components", "antisymmetric")

    def __init__(self, rows, antisymmetric: bool = False):
        comp = _freeze2(rows)
        if antisymmetric:
            for a in IDX:
                for b in IDX:
                    if comp[a][b] != -comp[b][a]:
                        raise ValueError(
                            f"antisymmetry violated at ({a},{b}): "
                            f"{comp[a][b]!r} vs -{comp[b][a]!r}"
                        )
        object.__setattr__(self, "components", comp)
        object.__setattr__(self, "antisymmetric", antisymmetric)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Rank2 is immutable")

    @classmethod
    def from_func(cls, f, antisymmetric: bool = False) -> "Rank2":
        return cls([[f(a, b) for b in IDX] for a in IDX], antisymmetric)

    @classmethod
    def zero(cls, value=0) -> "Rank2":
        return cls([[value] * 4 for _ in IDX], antisymmetric=True)

    def __getitem__(self, ab):
        a, b = ab
        return self.components[a][b]

    def __eq__(self, other):
        if not isinstance(other, Rank2):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __add__(self, other):
        return Rank2.from_func(
            lambda a, b: self[a, b] + other[a, b],
            antisymmetric=self.antisymmetric and other.antisymmetric,
        )

    def __sub__(self, other):
        return Rank2.from_func(
            lambda a, b: self[a, b] - other[a, b],
            antisymmetric=self.antisymmetric and other.antisymmetric,
        )

    def __neg__(self):
        return Rank2.from_func(lambda a, b: -self[a, b], self.antisymmetric)

    def scale(self, s) -> "Rank2":
        return Rank2.from_func(lambda a, b: s * self[a, b], self.antisymmetric)

    def transpose(self) -> "Rank2":
        return Rank2.from_func(lambda a, b: self[b, a], self.antisymmetric)

    def is_zero(self, tol=None) -> bool:
        if tol is None:
            return all(not self[a, b] for a in IDX for b in IDX)
        return all(abs(self[a, b]) <= tol for a in IDX for b in IDX)

    def __repr__(self):
        return f"Rank2({[list(r) for r in self.components]})"


class Rank3:
    """A 4x4x4 tensor; storage order (first, second, third) = Z_{abc}."""

    __slots__ = ("components",)

    def __init__(self, blocks):
        t = tuple(_freeze2(b) for b in blocks)
        if len(t) != 4:
            raise ValueError("Rank3 needs a 4x4x4 array")
        object.__setattr__(self, "components", t)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Rank3 is immutable")

    @classmethod
    def from_func(cls, f) -> "Rank3":
        return cls([[[f(a, b, c) for c in IDX] for b in IDX] for a in IDX])

    def __getitem__(self, abc):
        a, b, c = abc
        return self.components[a][b][c]

    def __eq__(self, other):
        if not isinstance(other, Rank3):
            return NotImplemented
        return self.components == other.components

    def __add__(self, other):
        return Rank3.from_func(lambda a, b, c: self[a, b, c] + other[a, b, c])

    def __sub__(self, other):
        return Rank3.from_func(lambda a, b, c: self[a, b, c] - other[a, b, c])

    def is_zero(self, tol=None) -> bool:
        if tol is None:
            return all(not self[a, b, c] for a in IDX for b in IDX for c in IDX)
        return all(abs(self[a, b, c]) <= tol for a in IDX for b in IDX for c in IDX)

    def __repr__(self):
        return f"Rank3({[[list(r) for r in blk] for blk in self.components]})"


# ---------------------------------------------------------------------------
# index gymnastics


def raise_both(F: Rank2, conv: MetricConvention) -> Rank2:
    """F^{ab} from F_{ab} (diagonal metric, so this is a sign mask)."""
    g = conv.g
    return Rank2.from_func(lambda a, b: g[a] * g[b] * F[a, b], F.antisymmetric)


def lower_both(F: Rank2, conv: MetricConvention) -> Rank2:
    # the metric is its own inverse on the diagonal
    return raise_both(F, conv)


def mixed_first_up(F: Rank2, conv: MetricConvention) -> Rank2:
    """Matrix of components F^a{}_b = g^{ac} F_{cb}."""
    g = conv.g
    return Rank2.from_func(lambda a, b: g[a] * F[a, b])


def hodge_dual(F: Rank2, conv: MetricConvention = DEFAULT_CONVENTION) -> Rank2:
    """*F_{ab} = 1/2 eps_{abcd} F^{cd}.

    Applying twice gives -F (Lorentzian signature).  Input must be
    antisymmetric; violations raise.
    """
    for a in IDX:
        for b in IDX:
            if F[a, b] != -F[b, a]:
                raise ValueError(f"hodge_dual needs an antisymmetric input; "
                                 f"({a},{b}) slot violates it")
    Fup = raise_both(F, conv)

    def comp(a, b):
        acc = 0
        for c in IDX:
            for d in IDX:
                e = conv.eps(a, b, c, d)
                if e:
                    acc = acc + e * Fup[c, d]
        # multiply by an exact 1/2 so integer/rational rings stay exact
        return _HALF * acc

    return Rank2.from_func(comp, antisymmetric=True)


def kappa_all_lower(conv: MetricConvention):
    """kappa_{abcd} = g_{c[a} g_{b]d} as a nested tuple of Fractions."""
    g = conv.g

    def k(a, b, c, d):
        t1 = g[c] * g[b] if (c == a and b == d) else 0
        t2 = g[c] * g[a] if (c == b and a == d) else 0
        return Fraction(t1 - t2, 2)

    return tuple(
        tuple(tuple(tuple(k(a, b, c, d) for d in IDX) for c in IDX) for b in IDX)
        for a in IDX
    )


def kappa_mixed():
    """kappa_{ab}{}^{cd} = 1/2 (delta_a^c delta_b^d - delta_b^c delta_a^d).

    Metric-independent; contracting it with M_{cd} antisymmetrizes.
    """

    def k(a, b, c, d):
        return Fraction((a == c and b == d) - (b == c and a == d), 2)

    return tuple(
        tuple(tuple(tuple(k(a, b, c, d) for d in IDX) for c in IDX) for b in IDX)
        for a in IDX
    )


def kappa_contract(M: Rank2) -> Rank2:
    """M_{[ab]} = kappa_{ab}{}^{cd} M_{cd}, i.e. the antisymmetric part."""
    return Rank2.from_func(
        lambda a, b: _HALF * (M[a, b] - M[b, a]), antisymmetric=True
    )


def verify_kibble_matrix_identity(
    F: Rank2, conv: MetricConvention = DEFAULT_CONVENTION, tol=None
) -> bool:
    """Check F.*F = 1/4 tr(F.*F) 1 in mixed components F^a{}_b.

    The identity holds for every antisymmetric F_{ab}; the check
    therefore also validates antisymmetry of the input (a symmetric
    matrix has *F = 0 and would satisfy the equation vacuously, which
    is not an instance of the identity).  `tol = None` demands exact
    zero (rational rings); a float tolerance enables the numeric path.
    """
    anti_ok = all(
        (F[a, b] == -F[b, a]) if tol is None else abs(F[a, b] + F[b, a]) <= tol
        for a in IDX
        for b in IDX
    )

    g = conv.g
    # dual computed from the antisymmetric part so non-antisymmetric
    # probes still get a meaningful residual instead of an exception
    A = kappa_contract(F)
    S = hodge_dual(A, conv)
    Fm = mixed_first_up(F, conv)
    Sm = mixed_first_up(S, conv)
    P = Rank2.from_func(lambda a, b: sum(Fm[a, c] * Sm[c, b] for c in IDX))
    tr = sum(P[a, a] for a in IDX)
    quarter_tr = Fraction(1, 4) * tr
    resid = Rank2.from_func(lambda a, b: P[a, b] - (quarter_tr if a == b else 0))
    return anti_ok and resid.is_zero(tol)
