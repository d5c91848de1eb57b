"""Exact symbolic calculus on finite jet space.

Jet coordinates are the components of a handful of 4-component fields
together with their partial derivatives up to order 4, treated as
independent variables.  Expressions are sparse polynomials over these
coordinates with Gaussian-rational coefficients; equality of canonical
term maps is the notion of identity everywhere in this package.

Field alphabet
--------------
``A``   electric-sector potential (4 components)
``C``   magnetic-sector potential
``W``   complex potential A + iC, ``Wb`` its conjugate
``G``   marker for the curl of C: G_ab = d_a C_b - d_b C_a, kept as an
        explicit symbol so that the duality-constraint substitution
        G -> *F is applied to the expression as written (expanding the
        marker and trying to re-extract it later is ambiguous off
        shell: curls obey the Bianchi identity, *F does not)
``S``   symmetrized first-derivative symbol used internally by the
        raw-coordinate path of the constraint substitution
``x``   explicit spacetime coordinate factors

Free indices are always made concrete (expanded over 0..3); families of
expressions parametrized by free indices are plain dicts from index
tuples to polynomials, wrapped in `FreeIndexFamily`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .minkowski import DEFAULT_CONVENTION, IDX, MetricConvention
from .rings import GaussianRational, parse_gaussian

MAX_ORDER = 4
MAX_DEGREE = 4

# rank in the canonical monomial ordering; "x" sorts first so explicit
# coordinate factors lead each serialized monomial
_FIELD_RANK = {"x": 0, "A": 1, "C": 2, "W": 3, "Wb": 4, "G": 5, "S": 6}
POTENTIALS = ("A", "C", "W", "Wb")


class OrderOverflowError(ValueError):
    """A jet coordinate would exceed the supported derivative order."""


class JetCoordinate:
    """One jet coordinate: field label, component(s), sorted derivative
    multiindex.

    `comp` is a tuple: one index for potentials and x, an index pair
    for the G and S markers.  Derivative indices commute, so `derivs`
    is kept sorted; each coordinate has exactly one representation.
    """

    __slots__ = ("field", "comp", "derivs", "_key", "_hash")

    def __init__(self, field: str, comp, derivs=()):
        if field not in _FIELD_RANK:
            raise ValueError(f"unknown field label {field!r}")
        comp = (comp,) if isinstance(comp, int) else tuple(comp)
        derivs = tuple(sorted(derivs))
        want = 2 if field in ("G", "S") else 1
        if len(comp) != want:
            raise ValueError(f"{field} takes {want} component index(es), got {comp}")
        if not all(i in IDX for i in comp + derivs):
            raise ValueError(f"indices out of range in {field}{comp}{derivs}")
        if field == "G" and comp[0] >= comp[1]:
            raise ValueError("G marker stores its antisymmetric pair as a < b")
        if field == "S" and comp[0] > comp[1]:
            raise ValueError("S symbol stores its symmetric pair as a <= b")
        if field == "x" and derivs:
            raise ValueError("coordinate factors carry no derivative indices")
        order = len(derivs) + (1 if field in ("G", "S") else 0)
        if order > MAX_ORDER:
            raise OrderOverflowError(
                f"jet order {order} exceeds the supported maximum {MAX_ORDER}"
            )
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "comp", comp)
        object.__setattr__(self, "derivs", derivs)
        object.__setattr__(self, "_key", (_FIELD_RANK[field], comp, len(derivs), derivs))
        object.__setattr__(self, "_hash", hash((field, comp, derivs)))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("JetCoordinate is immutable")

    @property
    def order(self) -> int:
        """Derivative order counted in the underlying potential."""
        return len(self.derivs) + (1 if self.field in ("G", "S") else 0)

    def with_deriv(self, direction: int) -> "JetCoordinate":
        return JetCoordinate(self.field, self.comp, self.derivs + (direction,))

    def __eq__(self, other):
        return (
            isinstance(other, JetCoordinate)
            and self.field == other.field
            and self.comp == other.comp
            and self.derivs == other.derivs
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        comp = "".join(map(str, self.comp))
        ders = "".join(map(str, self.derivs))
        return f"{self.field}[{comp};{ders}]"


_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


def _coerce_coeff(c) -> GaussianRational:
    if isinstance(c, GaussianRational):
        return c
    return GaussianRational.coerce(c)


class JetPolynomial:
    """Sparse polynomial over jet coordinates, canonical by construction.

    Terms map sorted coordinate tuples (monomials, with repetition for
    powers) to nonzero Gaussian-rational coefficients.  Two polynomials
    are equal iff their term maps are equal.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None, _internal=False):
        if terms is None:
            terms = {}
        clean = {}
        for mono, coeff in terms.items():
            coeff = _coerce_coeff(coeff)
            if coeff.is_zero():
                continue
            if not _internal:
                mono = tuple(sorted(mono))
                degree = sum(1 for c in mono if c.field != "x")
                if degree > MAX_DEGREE:
                    raise ValueError(
                        f"monomial degree {degree} exceeds cap {MAX_DEGREE}"
                    )
            clean[mono] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("JetPolynomial is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "JetPolynomial":
        return cls({})

    @classmethod
    def constant(cls, c) -> "JetPolynomial":
        return cls({(): c})

    @classmethod
    def coordinate(cls, field, comp, *derivs) -> "JetPolynomial":
        return cls({(JetCoordinate(field, comp, derivs),): _ONE})

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def ring(self) -> str:
        if any(not c.is_real() for c in self.terms.values()):
            return "gaussian-rational"
        return "rational"

    def degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(1 for c in m if c.field != "x") for m in self.terms)

    def max_order(self) -> int:
        orders = [c.order for m in self.terms for c in m if c.field != "x"]
        return max(orders, default=0)

    def fields_present(self) -> set:
        return {c.field for m in self.terms for c in m}

    def coefficient(self, *coords) -> GaussianRational:
        return self.terms.get(tuple(sorted(coords)), _ZERO)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = out.get(mono, _ZERO) + coeff
            if acc.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = acc
        return JetPolynomial(out, _internal=True)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return JetPolynomial(
            {m: -c for m, c in self.terms.items()}, _internal=True
        )

    def scale(self, s) -> "JetPolynomial":
        s = _coerce_coeff(s)
        if s.is_zero():
            return JetPolynomial.zero()
        return JetPolynomial(
            {m: s * c for m, c in self.terms.items()}, _internal=True
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(sorted(m1 + m2))
                degree = sum(1 for c in mono if c.field != "x")
                if degree > MAX_DEGREE:
                    raise ValueError(
                        f"product monomial degree {degree} exceeds cap {MAX_DEGREE}"
                    )
                acc = out.get(mono, _ZERO) + c1 * c2
                if acc.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = acc
        return JetPolynomial(out, _internal=True)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, JetPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus -----------------------------------------------------------

    def partial(self, coord: JetCoordinate) -> "JetPolynomial":
        """Formal partial derivative with respect to one jet coordinate."""
        out = {}
        for mono, coeff in self.terms.items():
            mult = mono.count(coord)
            if not mult:
                continue
            rest = list(mono)
            rest.remove(coord)
            rest = tuple(rest)
            acc = out.get(rest, _ZERO) + coeff * mult
            if acc.is_zero():
                out.pop(rest, None)
            else:
                out[rest] = acc
        return JetPolynomial(out, _internal=True)

    def conjugate(self) -> "JetPolynomial":
        """Complex conjugation: conjugate coefficients, swap W and Wb."""
        swap = {"W": "Wb", "Wb": "W"}
        out = {}
        for mono, coeff in self.terms.items():
            new = tuple(
                sorted(
                    JetCoordinate(swap.get(c.field, c.field), c.comp, c.derivs)
                    for c in mono
                )
            )
            out[new] = coeff.conjugate()
        return JetPolynomial(out, _internal=True)

    # -- display ------------------------------------------------------------

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        n = len(self.terms)
        return f"<JetPolynomial {n} term{'s' if n != 1 else ''}>"


# ---------------------------------------------------------------------------
# total derivatives, Euler operator, prolongation


def total_derivative(p: JetPolynomial, direction: int) -> JetPolynomial:
    """Total derivative d/dx^direction acting through all jet
    coordinates and explicit coordinate factors.

    Raises OrderOverflowError if a coordinate of order 4 would be
    pushed beyond the supported jet space.
    """
    if direction not in IDX:
        raise ValueError(f"direction must be in 0..3, got {direction}")
    out = JetPolynomial.zero()
    for mono, coeff in p.terms.items():
        for i, c in enumerate(mono):
            if c.field == "x":
                if c.comp[0] == direction:
                    rest = mono[:i] + mono[i + 1 :]
                    out = out + JetPolynomial({rest: coeff})
                continue
            lifted = c.with_deriv(direction)  # may raise OrderOverflowError
            new = tuple(sorted(mono[:i] + (lifted,) + mono[i + 1 :]))
            out = out + JetPolynomial({new: coeff}, _internal=True)
    return out


def iterated_total_derivative(p: JetPolynomial, directions) -> JetPolynomial:
    for d in directions:
        p = total_derivative(p, d)
    return p


def euler_operator(L: JetPolynomial, field: str, comp: int) -> JetPolynomial:
    """Euler-Lagrange expression of L with respect to one field component.

    Implemented to second order,
        E = d/du - sum_b D_b d/du_{,b} + sum_{b<=c} D_b D_c d/du_{,bc},
    the sums running over distinct sorted multiindices.  Inputs of jet
    order above 2 are rejected.
    """
    if field not in POTENTIALS:
        raise ValueError(f"euler_operator targets a potential, got {field!r}")
    if L.max_order() > 2:
        raise OrderOverflowError(
            f"euler_operator supports jet order <= 2, got {L.max_order()}"
        )
    out = L.partial(JetCoordinate(field, comp))
    for b in IDX:
        out = out - total_derivative(
            L.partial(JetCoordinate(field, comp, (b,))), b
        )
    for b in IDX:
        for c in range(b, 4):
            second = L.partial(JetCoordinate(field, comp, (b, c)))
            if second.is_zero():
                continue
            out = out + total_derivative(total_derivative(second, b), c)
    return out


@dataclass(frozen=True)
class EvolutionaryField:
    """A symmetry generator in evolutionary form.

    `characteristic` maps (field_label, component) to the jet
    polynomial Q for that component; absent entries act as zero.
    """

    characteristic: dict

    def __post_init__(self):
        for (field, comp), q in self.characteristic.items():
            if field not in POTENTIALS:
                raise ValueError(f"characteristic targets unknown field {field!r}")
            if comp not in IDX:
                raise ValueError(f"component {comp} out of range")
            if not isinstance(q, JetPolynomial):
                raise TypeError("characteristic entries must be JetPolynomials")

    def q(self, field: str, comp: int) -> JetPolynomial:
        return self.characteristic.get((field, comp), JetPolynomial.zero())


def prolong_apply(v: EvolutionaryField, p: JetPolynomial, max_order: int) -> JetPolynomial:
    """Apply the prolonged evolutionary field to p:

        pr v (p) = sum over coordinates u_J present in p of
                   (D_J Q_u) * dp/du_J ,

    the sum running over distinct sorted multiindices J up to
    max_order.  Exceeding max_order or the global jet cap raises.
    """
    if p.max_order() > max_order:
        raise OrderOverflowError(
            f"p has jet order {p.max_order()} > max_order {max_order}"
        )
    coords = {c for mono in p.terms for c in mono if c.field in POTENTIALS}
    out = JetPolynomial.zero()
    cache = {}
    for c in sorted(coords):
        q = v.characteristic.get((c.field, c.comp[0]))
        if q is None or q.is_zero():
            continue
        key = (c.field, c.comp[0], c.derivs)
        if key not in cache:
            cache[key] = iterated_total_derivative(q, c.derivs)
        out = out + cache[key] * p.partial(c)
    return out


def is_identically_zero(p: JetPolynomial) -> bool:
    """True iff the canonical term map of p is empty."""
    return p.is_zero()


# ---------------------------------------------------------------------------
# substitutions


def substitute_fields(p: JetPolynomial, images: dict) -> JetPolynomial:
    """Linear field substitution.

    `images` maps a field label to a function (comp, derivs) -> JetPolynomial
    giving the image of that coordinate; unmapped fields pass through.
    Used for W = A + iC expansion, duality rotations, and zeroing a
    sector.
    """
    out = JetPolynomial.zero()
    for mono, coeff in p.terms.items():
        acc = JetPolynomial.constant(coeff)
        for c in mono:
            fn = images.get(c.field)
            factor = (
                JetPolynomial({(c,): _ONE}, _internal=True)
                if fn is None
                else fn(c.comp if len(c.comp) > 1 else c.comp[0], c.derivs)
            )
            acc = acc * factor
        out = out + acc
    return out


def g_marker(a: int, b: int, *derivs) -> JetPolynomial:
    """The curl marker G_{ab,derivs} with its antisymmetry canonicalized."""
    if a == b:
        return JetPolynomial.zero()
    if a < b:
        return JetPolynomial.coordinate("G", (a, b), *derivs)
    return -JetPolynomial.coordinate("G", (b, a), *derivs)


def expand_g(p: JetPolynomial) -> JetPolynomial:
    """Replace curl markers by their C-jet definition
    G_{ab,J} = C_{b,aJ} - C_{a,bJ}, and S symbols by the symmetrized
    first derivatives they stand for."""

    def g_image(comp, derivs):
        a, b = comp
        return JetPolynomial.coordinate("C", b, a, *derivs) - JetPolynomial.coordinate(
            "C", a, b, *derivs
        )

    def s_image(comp, derivs):
        a, b = comp
        half = Fraction(1, 2)
        return (
            JetPolynomial.coordinate("C", a, b, *derivs)
            + JetPolynomial.coordinate("C", b, a, *derivs)
        ).scale(half)

    return substitute_fields(p, {"G": g_image, "S": s_image})


def star_f_in_a_jets(a: int, b: int, derivs, conv: MetricConvention) -> JetPolynomial:
    """(*F)_{ab,J} expanded in A-jets:
    1/2 eps_{abcd} g^{cc'} g^{dd'} (A_{d',c'J} - A_{c',d'J})."""
    g = conv.g
    out = JetPolynomial.zero()
    half = Fraction(1, 2)
    for c in IDX:
        for d in IDX:
            e = conv.eps(a, b, c, d)
            if not e:
                continue
            w = Fraction(e * g[c] * g[d]) * half
            out = out + (
                JetPolynomial.coordinate("A", d, c, *derivs)
                - JetPolynomial.coordinate("A", c, d, *derivs)
            ).scale(w)
    return out


def substitute_duality_constraint(
    p: JetPolynomial, conv: MetricConvention = DEFAULT_CONVENTION
) -> JetPolynomial:
    """Impose G = *F: replace every curl of C by the corresponding
    derivative of the dual field strength, expanded in A-jets.

    C-dependence must enter through curl patterns.  Marked G
    coordinates substitute directly.  Raw C-jets are accepted at order
    exactly 1, where splitting off the symmetrized part is canonical;
    any surviving symmetrized part, a bare C component, or a raw C-jet
    of order >= 2 raises with the offending monomial (for order >= 2
    the curl extraction from raw coordinates is genuinely ambiguous:
    curls satisfy the Bianchi identity off shell while *F does not, so
    such expressions must be built with the G marker).
    """
    for mono in p.terms:
        for c in mono:
            if c.field == "C" and len(c.derivs) == 0:
                raise ValueError(f"bare potential component in monomial: {mono}")
            if c.field == "C" and len(c.derivs) >= 2:
                raise ValueError(
                    "raw C-jet of order >= 2 in monomial "
                    f"{mono}; build derivative-of-curl expressions with "
                    "the G marker (raw extraction is ambiguous off shell)"
                )
            if c.field in ("W", "Wb"):
                raise ValueError(
                    f"complex potentials in monomial {mono}; expand to the "
                    "real pair before imposing the constraint"
                )

    # order-1 raw C-jets: C_{a,b} = S_{ab} - 1/2 G_{ab}
    def c_image(comp, derivs):
        a, b = comp, derivs[0]
        s = JetPolynomial.coordinate("S", tuple(sorted((a, b))))
        return s - g_marker(a, b).scale(Fraction(1, 2))

    p = substitute_fields(p, {"C": c_image})

    def g_image(comp, derivs):
        a, b = comp
        return star_f_in_a_jets(a, b, derivs, conv)

    p = substitute_fields(p, {"G": g_image})
    for mono in p.terms:
        for c in mono:
            if c.field == "S":
                raise ValueError(
                    f"C-dependence not expressible through curls; residual "
                    f"symmetrized part in monomial: {mono}"
                )
    return p


# ---------------------------------------------------------------------------
# free-index families


class FreeIndexFamily:
    """A family of jet polynomials indexed by concrete free indices.

    Entries map index tuples (each index 0..3) to JetPolynomials; all
    tuples must share one length.  Families support pointwise ring
    operations and symmetry checks on index slots.
    """

    __slots__ = ("entries", "nfree")

    def __init__(self, entries: dict):
        entries = {
            (k,) if isinstance(k, int) else tuple(k): v for k, v in entries.items()
        }
        lengths = {len(k) for k in entries}
        if len(lengths) != 1:
            raise ValueError("all index tuples must have the same length")
        nfree = lengths.pop()
        for k, v in entries.items():
            if not all(i in IDX for i in k):
                raise ValueError(f"index assignment {k} out of range")
            if not isinstance(v, JetPolynomial):
                raise TypeError("family entries must be JetPolynomials")
        object.__setattr__(self, "entries", dict(entries))
        object.__setattr__(self, "nfree", nfree)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("FreeIndexFamily is immutable")

    @classmethod
    def build(cls, nfree: int, fn) -> "FreeIndexFamily":
        import itertools

        return cls({k: fn(*k) for k in itertools.product(IDX, repeat=nfree)})

    def __getitem__(self, key):
        key = (key,) if isinstance(key, int) else tuple(key)
        return self.entries[key]

    def keys(self):
        return sorted(self.entries)

    def map(self, fn) -> "FreeIndexFamily":
        return FreeIndexFamily({k: fn(v) for k, v in self.entries.items()})

    def __add__(self, other):
        return FreeIndexFamily(
            {k: self.entries[k] + other.entries[k] for k in self.entries}
        )

    def __sub__(self, other):
        return FreeIndexFamily(
            {k: self.entries[k] - other.entries[k] for k in self.entries}
        )

    def scale(self, s) -> "FreeIndexFamily":
        return self.map(lambda p: p.scale(s))

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.entries.values())

    def symmetric_in(self, i: int, j: int) -> bool:
        for k, v in self.entries.items():
            swapped = list(k)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            if v != self.entries[tuple(swapped)]:
                return False
        return True


# ---------------------------------------------------------------------------
# serialization

_COORD_RE = re.compile(r"^([A-Za-z]+)\[(\d*);(\d*)\]$")


def _coord_text(c: JetCoordinate) -> str:
    comp = "".join(map(str, c.comp))
    ders = "".join(map(str, c.derivs))
    return f"{c.field}[{comp};{ders}]"


def to_text(p: JetPolynomial) -> str:
    """Deterministic, sorted, human-readable form: one monomial per
    line, coefficient first, coordinates space-separated."""
    if p.is_zero():
        return "0"
    lines = []
    for mono in sorted(p.terms, key=lambda m: tuple(c._key for c in m)):
        coeff = p.terms[mono]
        parts = [str(coeff)] + [_coord_text(c) for c in mono]
        lines.append(" ".join(parts))
    return "\n".join(lines)


def from_text(text: str) -> JetPolynomial:
    out = JetPolynomial.zero()
    for line in text.strip().splitlines():
        line = line.strip()
        if not line or line == "0":
            continue
        tokens = line.split()
        coeff = parse_gaussian(tokens[0])
        coords = []
        for tok in tokens[1:]:
            m = _COORD_RE.match(tok)
            if not m:
                raise ValueError(f"cannot parse coordinate token {tok!r}")
            field, comp, ders = m.group(1), m.group(2), m.group(3)
            coords.append(
                JetCoordinate(field, tuple(map(int, comp)), tuple(map(int, ders)))
            )
        out = out + JetPolynomial({tuple(coords): coeff})
    return out
