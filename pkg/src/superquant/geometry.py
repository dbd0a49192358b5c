"""Vector fields, symbol fields, and differential operators on R^{p|q}.

Three graded modules live here, all with exact rational coefficients:

* ``SuperVectorField`` — derivations X = sum X^i d/dy^i with polynomial
  components;
* ``SymbolField`` — degree-k polynomial symbols: coefficients tensored with
  symmetric monomials in the frame vectors e_1..e_{p+q} (odd frame vectors
  anticommute and square to zero), twisted by a density weight;
* ``DiffOperator`` — differential operators between density modules, kept in
  normal form: coefficients to the left of derivative monomials whose odd
  factors carry ascending indices, any sign having been folded into the
  coefficient.

Conventions that fix every sign below: odd derivatives act from the left;
an operator of odd parity passes a function coefficient g at the cost of
(-1)^{parity(g)}; the divergence of X = sum X^i d/dy^i is
sum_i (-1)^{parity(y^i) parity(X^i)} dX^i/dy^i.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .supercore import (
    Rational,
    Signature,
    SuperPolynomial,
    _check_same_signature,
    _ops,
    as_fraction,
    iter_monomials,
)

_odd_below = _ops.odd_below
_odd_merge_sign = _ops.odd_merge_sign


def _acc(d: dict, key, poly: SuperPolynomial) -> None:
    cur = d.get(key)
    if cur is None:
        if poly:
            d[key] = poly
    else:
        s = cur + poly
        if s:
            d[key] = s
        else:
            del d[key]


def _validate_terms(signature: Signature, terms) -> dict:
    p, q = signature.p, signature.q
    limit = 1 << q
    canon: dict = {}
    for key, poly in terms.items():
        evens, mask = key
        evens = tuple(int(e) for e in evens)
        if len(evens) != p or any(e < 0 for e in evens):
            raise ValueError(f"bad even multi-index {evens} for signature {signature}")
        if not 0 <= mask < limit:
            raise ValueError(f"bad odd mask {mask} for signature {signature}")
        if not isinstance(poly, SuperPolynomial):
            poly = SuperPolynomial.scalar(signature, poly)
        if poly.signature != signature:
            raise ValueError("coefficient signature mismatch")
        if poly:
            _acc(canon, (evens, mask), poly)
    return canon


def _key_degree(key) -> int:
    evens, mask = key
    return sum(evens) + mask.bit_count()


# ---------------------------------------------------------------------------
# vector fields


class SuperVectorField:
    """Polynomial derivation X = sum_i X^i d/dy^i."""

    __slots__ = ("signature", "components")

    def __init__(self, signature: Signature, components: Sequence):
        comps = []
        for c in components:
            if not isinstance(c, SuperPolynomial):
                c = SuperPolynomial.scalar(signature, c)
            _check_same_signature(c, SuperPolynomial.zero(signature))
            comps.append(c)
        if len(comps) != signature.n:
            raise ValueError(
                f"expected {signature.n} components, got {len(comps)}"
            )
        self.signature = signature
        self.components = tuple(comps)

    @classmethod
    def zero(cls, signature: Signature) -> "SuperVectorField":
        z = SuperPolynomial.zero(signature)
        return cls(signature, [z] * signature.n)

    @classmethod
    def euler(cls, signature: Signature) -> "SuperVectorField":
        """The Euler field sum_i y^i d/dy^i."""
        return cls(
            signature,
            [SuperPolynomial.coordinate(signature, i) for i in range(1, signature.n + 1)],
        )

    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        _check_same_signature(self, f)
        out = SuperPolynomial.zero(self.signature)
        for i, comp in enumerate(self.components, start=1):
            if comp:
                df = f.partial(i)
                if df:
                    out = out + comp * df
        return out

    def divergence(self) -> SuperPolynomial:
        sig = self.signature
        out = SuperPolynomial.zero(sig)
        for i, comp in enumerate(self.components, start=1):
            if not comp:
                continue
            if sig.parity(i) == 0:
                out = out + comp.partial(i)
            else:
                ce, co = comp.graded_parts()
                out = out + ce.partial(i) - co.partial(i)
        return out

    def graded_parts(self) -> list[tuple[int, "SuperVectorField"]]:
        """Split into homogeneous fields [(parity, field)], zeros omitted."""
        sig = self.signature
        buckets = {0: [], 1: []}
        for i, comp in enumerate(self.components, start=1):
            ce, co = comp.graded_parts()
            if sig.parity(i) == 0:
                buckets[0].append(ce)
                buckets[1].append(co)
            else:
                buckets[0].append(co)
                buckets[1].append(ce)
        out = []
        for par in (0, 1):
            if any(buckets[par]):
                out.append((par, SuperVectorField(sig, buckets[par])))
        return out

    def parity(self) -> int | None:
        parts = self.graded_parts()
        if not parts:
            return 0
        if len(parts) == 1:
            return parts[0][0]
        return None

    def is_zero(self) -> bool:
        return not any(self.components)

    def __add__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        _check_same_signature(self, other)
        return SuperVectorField(
            self.signature,
            [a + b for a, b in zip(self.components, other.components)],
        )

    def __sub__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return SuperVectorField(self.signature, [-c for c in self.components])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SuperVectorField(
                self.signature, [c * other for c in self.components]
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SuperVectorField):
            return NotImplemented
        return (
            self.signature == other.signature and self.components == other.components
        )

    __hash__ = None

    def __repr__(self):
        return f"SuperVectorField({self.signature}, {list(self.components)!r})"

    def __str__(self):
        from . import expr

        return expr.format_vfield(self)


def bracket(x: SuperVectorField, y: SuperVectorField) -> SuperVectorField:
    """Super commutator of vector fields."""
    _check_same_signature(x, y)
    sig = x.signature
    comps = [SuperPolynomial.zero(sig) for _ in range(sig.n)]
    for chi, xp in x.graded_parts():
        for eta, yp in y.graded_parts():
            sign = -1 if chi and eta else 1
            for i in range(sig.n):
                comps[i] = (
                    comps[i]
                    + xp.apply(yp.components[i])
                    - sign * yp.apply(xp.components[i])
                )
    return SuperVectorField(sig, comps)


def lie_density(x: SuperVectorField, lam: Rational, f: SuperPolynomial) -> SuperPolynomial:
    """Lie derivative of a density of weight lam along x."""
    return x.apply(f) + (as_fraction(lam) * x.divergence()) * f


# ---------------------------------------------------------------------------
# symbol fields


class SymbolField:
    """Homogeneous degree-k symbol with a density twist.

    Terms map ``(even_exponents, odd_selection)`` frame monomials to
    polynomial coefficients; every key satisfies
    ``sum(even_exponents) + |odd_selection| == degree``.
    """

    __slots__ = ("signature", "weight", "degree", "_terms")

    def __init__(self, signature: Signature, weight: Rational, degree: int, terms=None):
        if degree < 0:
            raise ValueError("symbol degree must be non-negative")
        self.signature = signature
        self.weight = as_fraction(weight)
        self.degree = degree
        canon = _validate_terms(signature, terms or {})
        for key in canon:
            if _key_degree(key) != degree:
                raise ValueError(
                    f"frame monomial {key} has degree {_key_degree(key)}, expected {degree}"
                )
        self._terms = canon

    @classmethod
    def _raw(cls, signature, weight, degree, terms) -> "SymbolField":
        self = cls.__new__(cls)
        self.signature = signature
        self.weight = weight
        self.degree = degree
        self._terms = terms
        return self

    @classmethod
    def zero(cls, signature: Signature, weight: Rational, degree: int) -> "SymbolField":
        return cls(signature, weight, degree, {})

    @classmethod
    def monomial(
        cls,
        signature: Signature,
        weight: Rational,
        evens: Iterable[int],
        odds: Iterable[int],
        coeff=1,
    ) -> "SymbolField":
        mask = 0
        for t in odds:
            if not 1 <= t <= signature.q:
                raise ValueError(f"odd frame index {t} out of range 1..{signature.q}")
            bit = 1 << (t - 1)
            if mask & bit:
                raise ValueError("repeated odd frame index")
            mask |= bit
        evens = tuple(evens)
        degree = sum(evens) + mask.bit_count()
        if not isinstance(coeff, SuperPolynomial):
            coeff = SuperPolynomial.scalar(signature, coeff)
        return cls(signature, weight, degree, {(evens, mask): coeff})

    def items(self):
        return self._terms.items()

    def coefficient(self, evens: Iterable[int], odds: Iterable[int]) -> SuperPolynomial:
        mask = 0
        for t in odds:
            mask |= 1 << (t - 1)
        return self._terms.get(
            (tuple(evens), mask), SuperPolynomial.zero(self.signature)
        )

    def is_zero(self) -> bool:
        return not self._terms

    def scalar_poly(self) -> SuperPolynomial:
        """The coefficient of a degree-0 symbol as a plain superfunction."""
        if self.degree != 0:
            raise ValueError("scalar_poly requires a degree-0 symbol")
        return self._terms.get(
            ((0,) * self.signature.p, 0), SuperPolynomial.zero(self.signature)
        )

    def _compatible(self, other: "SymbolField") -> None:
        if self.signature != other.signature:
            raise ValueError("signature mismatch")
        if self.weight != other.weight:
            raise ValueError(f"weight mismatch: {self.weight} vs {other.weight}")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, SymbolField):
            return NotImplemented
        self._compatible(other)
        terms = dict(self._terms)
        for key, poly in other._terms.items():
            _acc(terms, key, poly)
        deg = other.degree if self.is_zero() else self.degree
        return SymbolField._raw(self.signature, self.weight, deg, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SymbolField._raw(
            self.signature,
            self.weight,
            self.degree,
            {k: -v for k, v in self._terms.items()},
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            if not c:
                return SymbolField.zero(self.signature, self.weight, self.degree)
            return SymbolField._raw(
                self.signature,
                self.weight,
                self.degree,
                {k: v * c for k, v in self._terms.items()},
            )
        return NotImplemented

    __rmul__ = __mul__

    def scale_poly(self, f: SuperPolynomial) -> "SymbolField":
        """Left multiplication of the coefficients by a superfunction."""
        terms: dict = {}
        for key, poly in self._terms.items():
            _acc(terms, key, f * poly)
        return SymbolField._raw(self.signature, self.weight, self.degree, terms)

    def vee(self, v: Sequence[Rational]) -> "SymbolField":
        """Symmetric product with a homogeneous frame vector (column)."""
        sig = self.signature
        vec = [as_fraction(c) for c in v]
        if len(vec) != sig.n:
            raise ValueError(f"expected {sig.n} vector components")
        even_supp = any(vec[: sig.p])
        odd_supp = any(vec[sig.p :])
        if even_supp and odd_supp:
            raise ValueError("frame vector must be parity homogeneous")
        terms: dict = {}
        for (b, m), g in self._terms.items():
            if even_supp:
                for r in range(sig.p):
                    c = vec[r]
                    if c:
                        key = (b[:r] + (b[r] + 1,) + b[r + 1 :], m)
                        _acc(terms, key, g * c)
            elif odd_supp:
                ge, go = g.graded_parts()
                gs = ge - go
                for t in range(1, sig.q + 1):
                    c = vec[sig.p + t - 1]
                    if not c:
                        continue
                    bit = 1 << (t - 1)
                    if m & bit:
                        continue
                    sign = -1 if _odd_below(m, bit) & 1 else 1
                    _acc(terms, (b, m | bit), gs * (c * sign))
        return SymbolField._raw(sig, self.weight, self.degree + 1, terms)

    def as_mixed(self) -> "MixedSymbol":
        return MixedSymbol(self.signature, self.weight, {self.degree: self})

    def __eq__(self, other):
        if not isinstance(other, SymbolField):
            return NotImplemented
        if self.signature != other.signature or self.weight != other.weight:
            return False
        if self._terms != other._terms:
            return False
        return self.degree == other.degree or not self._terms

    __hash__ = None

    def __repr__(self):
        return (
            f"SymbolField({self.signature}, weight={self.weight}, "
            f"degree={self.degree}, {self._terms!r})"
        )

    def __str__(self):
        from . import expr

        return expr.format_symbol(self)


class MixedSymbol:
    """A finite sum of symbols of distinct degrees at one weight."""

    __slots__ = ("signature", "weight", "_parts")

    def __init__(self, signature: Signature, weight: Rational, parts=None):
        self.signature = signature
        self.weight = as_fraction(weight)
        canon = {}
        for k, field in (parts or {}).items():
            if field.is_zero():
                continue
            if field.signature != signature or field.weight != self.weight:
                raise ValueError("inconsistent part in mixed symbol")
            if field.degree != k:
                raise ValueError("part stored under wrong degree")
            canon[k] = field
        self._parts = canon

    @classmethod
    def from_fields(
        cls, signature: Signature, weight: Rational, fields: Iterable[SymbolField]
    ) -> "MixedSymbol":
        out = cls(signature, weight, {})
        for f in fields:
            out = out + f.as_mixed()
        return out

    def part(self, k: int) -> SymbolField:
        got = self._parts.get(k)
        if got is None:
            return SymbolField.zero(self.signature, self.weight, k)
        return got

    def degrees(self) -> list[int]:
        return sorted(self._parts)

    def parts(self):
        return [self._parts[k] for k in sorted(self._parts)]

    def is_zero(self) -> bool:
        return not self._parts

    def __add__(self, other):
        if isinstance(other, SymbolField):
            other = other.as_mixed()
        if not isinstance(other, MixedSymbol):
            return NotImplemented
        if self.signature != other.signature or self.weight != other.weight:
            raise ValueError("signature or weight mismatch")
        parts = dict(self._parts)
        for k, field in other._parts.items():
            if k in parts:
                s = parts[k] + field
                if s.is_zero():
                    del parts[k]
                else:
                    parts[k] = s
            else:
                parts[k] = field
        return MixedSymbol(self.signature, self.weight, parts)

    def __sub__(self, other):
        if isinstance(other, SymbolField):
            other = other.as_mixed()
        return self + (-other)

    def __neg__(self):
        return MixedSymbol(
            self.signature, self.weight, {k: -v for k, v in self._parts.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MixedSymbol(
                self.signature,
                self.weight,
                {k: v * other for k, v in self._parts.items()}
                if as_fraction(other)
                else {},
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, SymbolField):
            other = other.as_mixed()
        if not isinstance(other, MixedSymbol):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.weight == other.weight
            and self._parts == other._parts
        )

    __hash__ = None

    def __repr__(self):
        return f"MixedSymbol({self.signature}, weight={self.weight}, {self._parts!r})"

    def __str__(self):
        from . import expr

        return expr.format_symbol(self)


# ---------------------------------------------------------------------------
# differential operators


class DiffOperator:
    """Normal-form differential operator between density modules.

    Terms map derivative multi-indices ``(even_powers, odd_subset)`` to
    polynomial coefficients standing to the left; within a term the odd
    derivative factors carry ascending indices and the rightmost factor acts
    first.
    """

    __slots__ = ("signature", "lam", "mu", "_terms")

    def __init__(self, signature: Signature, lam: Rational, mu: Rational, terms=None):
        self.signature = signature
        self.lam = as_fraction(lam)
        self.mu = as_fraction(mu)
        self._terms = _validate_terms(signature, terms or {})

    @classmethod
    def _raw(cls, signature, lam, mu, terms) -> "DiffOperator":
        self = cls.__new__(cls)
        self.signature = signature
        self.lam = lam
        self.mu = mu
        self._terms = terms
        return self

    @classmethod
    def zero(cls, signature: Signature, lam: Rational, mu: Rational) -> "DiffOperator":
        return cls(signature, lam, mu, {})

    @classmethod
    def multiplication(
        cls, f: SuperPolynomial, lam: Rational, mu: Rational
    ) -> "DiffOperator":
        sig = f.signature
        return cls(sig, lam, mu, {((0,) * sig.p, 0): f})

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def order(self) -> int:
        if not self._terms:
            return 0
        return max(_key_degree(k) for k in self._terms)

    def coefficient(self, evens: Iterable[int], odds: Iterable[int]) -> SuperPolynomial:
        mask = 0
        for t in odds:
            mask |= 1 << (t - 1)
        return self._terms.get(
            (tuple(evens), mask), SuperPolynomial.zero(self.signature)
        )

    def apply(self, f: SuperPolynomial) -> SuperPolynomial:
        """Evaluate on a superfunction."""
        _check_same_signature(self, f)
        sig = self.signature
        out = SuperPolynomial.zero(sig)
        for (ae, am), coeff in self._terms.items():
            g = f
            # rightmost (largest-index) odd factor acts first
            for t in range(sig.q, 0, -1):
                if am & (1 << (t - 1)):
                    g = g.partial(sig.p + t)
                    if not g:
                        break
            if not g:
                continue
            for ix in range(sig.p):
                for _ in range(ae[ix]):
                    g = g.partial(ix + 1)
                    if not g:
                        break
                if not g:
                    break
            if g:
                out = out + coeff * g
        return out

    # -- composition -------------------------------------------------------

    def _push_through(self, ae, am, g: SuperPolynomial) -> dict:
        """Normal-order (d^(ae,am)) o (g .) as sum_key M_h o d^key."""
        sig = self.signature
        state = {((0,) * sig.p, 0): g}
        # process derivative factors right-to-left: odd descending, then even
        for t in range(sig.q, 0, -1):
            bit = 1 << (t - 1)
            if not am & bit:
                continue
            new: dict = {}
            for (e, m), h in state.items():
                dh = h.partial(sig.p + t)
                if dh:
                    _acc(new, (e, m), dh)
                if m & bit:
                    continue  # repeated odd derivative annihilates
                he, ho = h.graded_parts()
                hs = he - ho
                if hs:
                    sign = -1 if _odd_below(m, bit) & 1 else 1
                    _acc(new, (e, m | bit), sign * hs)
            state = new
        for ix in range(sig.p):
            for _ in range(ae[ix]):
                new = {}
                for (e, m), h in state.items():
                    dh = h.partial(ix + 1)
                    if dh:
                        _acc(new, (e, m), dh)
                    _acc(new, (e[:ix] + (e[ix] + 1,) + e[ix + 1 :], m), h)
                state = new
        return state

    def compose(self, other: "DiffOperator") -> "DiffOperator":
        """self o other (other acts first); weights must chain."""
        _check_same_signature(self, other)
        if self.lam != other.mu:
            raise ValueError(
                f"weight mismatch in composition: {self.lam} vs {other.mu}"
            )
        sig = self.signature
        out: dict = {}
        for (ae, am), f in self._terms.items():
            for (be, bm), g in other._terms.items():
                for (ce, cm), h in self._push_through(ae, am, g).items():
                    s = _odd_merge_sign(cm, bm)
                    if s == 0:
                        continue
                    key = (
                        tuple(x + y for x, y in zip(ce, be)),
                        cm | bm,
                    )
                    coeff = f * h
                    if s < 0:
                        coeff = -coeff
                    _acc(out, key, coeff)
        return DiffOperator._raw(sig, other.lam, self.mu, out)

    # -- structure ---------------------------------------------------------

    def graded_parts(self) -> list[tuple[int, "DiffOperator"]]:
        """Split into homogeneous operators [(parity, operator)], zeros omitted."""
        buckets: dict[int, dict] = {0: {}, 1: {}}
        for (ae, am), coeff in self._terms.items():
            dpar = am.bit_count() & 1
            ce, co = coeff.graded_parts()
            if ce:
                buckets[dpar][(ae, am)] = ce
            if co:
                buckets[dpar ^ 1][(ae, am)] = co
        out = []
        for par in (0, 1):
            if buckets[par]:
                out.append(
                    (par, DiffOperator._raw(self.signature, self.lam, self.mu, buckets[par]))
                )
        return out

    def parity(self) -> int | None:
        parts = self.graded_parts()
        if not parts:
            return 0
        if len(parts) == 1:
            return parts[0][0]
        return None

    def _compatible(self, other: "DiffOperator") -> None:
        _check_same_signature(self, other)
        if self.lam != other.lam or self.mu != other.mu:
            raise ValueError("operator weight mismatch")

    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        self._compatible(other)
        terms = dict(self._terms)
        for key, poly in other._terms.items():
            _acc(terms, key, poly)
        return DiffOperator._raw(self.signature, self.lam, self.mu, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return DiffOperator._raw(
            self.signature,
            self.lam,
            self.mu,
            {k: -v for k, v in self._terms.items()},
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = as_fraction(other)
            if not c:
                return DiffOperator.zero(self.signature, self.lam, self.mu)
            return DiffOperator._raw(
                self.signature,
                self.lam,
                self.mu,
                {k: v * c for k, v in self._terms.items()},
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.lam == other.lam
            and self.mu == other.mu
            and self._terms == other._terms
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"DiffOperator({self.signature}, lam={self.lam}, mu={self.mu}, "
            f"{self._terms!r})"
        )

    def __str__(self):
        from . import expr

        return expr.format_operator(self)


def operators_agree(
    d1: DiffOperator, d2: DiffOperator, extra_degree: int = 3
) -> bool:
    """Evaluation oracle for operator equality.

    Applies both operators to every monomial of total degree up to the larger
    order plus ``extra_degree``; for polynomial coefficients of degree at most
    ``extra_degree`` this is equivalent to coefficient-wise equality.
    """
    if d1.signature != d2.signature:
        return False
    bound = max(d1.order, d2.order) + extra_degree
    for mono in iter_monomials(d1.signature, bound):
        if d1.apply(mono) != d2.apply(mono):
            return False
    return True


def density_operator(x: SuperVectorField, weight: Rational) -> DiffOperator:
    """The density Lie derivative along x as a first-order operator."""
    sig = x.signature
    w = as_fraction(weight)
    terms: dict = {}
    for i in range(1, sig.n + 1):
        comp = x.components[i - 1]
        if not comp:
            continue
        if sig.parity(i) == 0:
            key = (
                tuple(1 if k == i - 1 else 0 for k in range(sig.p)),
                0,
            )
        else:
            key = ((0,) * sig.p, 1 << (i - sig.p - 1))
        _acc(terms, key, comp)
    div = x.divergence()
    if w and div:
        _acc(terms, ((0,) * sig.p, 0), w * div)
    return DiffOperator._raw(sig, w, w, terms)


def lie_operator(x: SuperVectorField, d: DiffOperator) -> DiffOperator:
    """Lie derivative of an operator between density modules.

    For homogeneous pieces this is L^mu_X o D - (-1)^{parity(X) parity(D)}
    D o L^lam_X, extended additively.
    """
    _check_same_signature(x, d)
    out = DiffOperator.zero(d.signature, d.lam, d.mu)
    for chi, xp in x.graded_parts():
        l_mu = density_operator(xp, d.mu)
        l_lam = density_operator(xp, d.lam)
        for dpar, dp in d.graded_parts():
            out = out + l_mu.compose(dp)
            tail = dp.compose(l_lam)
            out = out + (tail if chi and dpar else -tail)
    return out


# ---------------------------------------------------------------------------
# the tensor action on symbols


def _rho_elementary(sig: Signature, j: int, i: int, key) -> list:
    """Action on a frame monomial of the endomorphism taking e_i to e_j.

    Returns ``[(integer coefficient, new_key), ...]`` for the derivation
    action on the canonical monomial, signs included.
    """
    b, m = key
    p = sig.p
    ti, tj = sig.parity(i), sig.parity(j)
    if ti == 0:
        mult = b[i - 1]
        if not mult:
            return []
        b2 = b[: i - 1] + (b[i - 1] - 1,) + b[i:]
        if tj == 0:
            b3 = b2[: j - 1] + (b2[j - 1] + 1,) + b2[j:]
            return [(mult, (b3, m))]
        bit = 1 << (j - p - 1)
        if m & bit:
            return []
        sign = -1 if _odd_below(m, bit) & 1 else 1
        return [(mult * sign, (b2, m | bit))]
    bit_i = 1 << (i - p - 1)
    if not m & bit_i:
        return []
    prefix = _odd_below(m, bit_i)
    sign0 = -1 if ((ti ^ tj) and prefix & 1) else 1
    if tj == 0:
        b2 = b[: j - 1] + (b[j - 1] + 1,) + b[j:]
        return [(sign0, (b2, m ^ bit_i))]
    bit_j = 1 << (j - p - 1)
    if bit_j == bit_i:
        return [(sign0, (b, m))]
    m2 = m ^ bit_i
    if m2 & bit_j:
        return []
    lo, hi = (bit_i, bit_j) if bit_i < bit_j else (bit_j, bit_i)
    between = m2 & (hi - 1) & ~((lo << 1) - 1)
    sign = -sign0 if between.bit_count() & 1 else sign0
    return [(sign, (b, m2 | bit_j))]


def lie_symbol(x: SuperVectorField, s: SymbolField) -> SymbolField:
    """Lie derivative of a twisted symbol field along x.

    Transports coefficients along x and rotates the frame monomials through
    the Jacobian of x, including the density-twist contribution of weight
    ``s.weight``.
    """
    if x.signature != s.signature:
        raise ValueError("signature mismatch")
    sig = s.signature
    delta = s.weight
    n = sig.n
    acc: dict = {}
    for chi, xp in x.graded_parts():
        jac = []
        for i in range(1, n + 1):
            ti = sig.parity(i)
            sfac = 1 if (ti and chi) else -1
            for j in range(1, n + 1):
                dcomp = xp.components[j - 1].partial(i)
                if dcomp:
                    jac.append((i, j, sfac * dcomp))
        for key, g in s.items():
            tg = xp.apply(g)
            if tg:
                _acc(acc, key, tg)
            ge, go = g.graded_parts()
            gs = ge + go if chi == 0 else ge - go
            if not gs:
                continue
            for i, j, jij in jac:
                c = gs * jij
                if not c:
                    continue
                for mult, key2 in _rho_elementary(sig, j, i, key):
                    _acc(acc, key2, mult * c)
                if i == j:
                    w = -delta if sig.parity(i) == 0 else delta
                    if w:
                        _acc(acc, key, w * c)
    return SymbolField._raw(sig, delta, s.degree, acc)


def interior(h: Sequence[Rational], s: SymbolField) -> SymbolField:
    """Contraction of a symbol with a homogeneous covector row.

    Lowers the degree by one; as an operator of the covector's parity it
    passes coefficient functions with the super sign.
    """
    sig = s.signature
    row = [as_fraction(c) for c in h]
    if len(row) != sig.n:
        raise ValueError(f"expected {sig.n} covector components")
    even_supp = any(row[: sig.p])
    odd_supp = any(row[sig.p :])
    if even_supp and odd_supp:
        raise ValueError("covector must be parity homogeneous")
    out_degree = max(s.degree - 1, 0)
    terms: dict = {}
    for (b, m), g in s.items():
        if even_supp:
            for r in range(sig.p):
                c = row[r]
                if c and b[r]:
                    key = (b[:r] + (b[r] - 1,) + b[r + 1 :], m)
                    _acc(terms, key, g * (c * b[r]))
        elif odd_supp:
            ge, go = g.graded_parts()
            gs = ge - go
            if not gs:
                continue
            for t in range(1, sig.q + 1):
                c = row[sig.p + t - 1]
                if not c:
                    continue
                bit = 1 << (t - 1)
                if not m & bit:
                    continue
                sign = -1 if _odd_below(m, bit) & 1 else 1
                _acc(terms, (b, m ^ bit), gs * (c * sign))
    return SymbolField._raw(sig, s.weight, out_degree, terms)


def symbol_divergence(s: SymbolField) -> SymbolField:
    """Divergence of a symbol: contract each coordinate derivative with its
    dual frame covector, with the coordinate-parity sign."""
    sig = s.signature
    out = SymbolField.zero(sig, s.weight, max(s.degree - 1, 0))
    for j in range(1, sig.n + 1):
        dterms: dict = {}
        for key, g in s.items():
            dg = g.partial(j)
            if dg:
                dterms[key] = dg
        if not dterms:
            continue
        ds = SymbolField._raw(sig, s.weight, s.degree, dterms)
        row = [Fraction(0)] * sig.n
        row[j - 1] = Fraction(1)
        contracted = interior(row, ds)
        out = out + (contracted if sig.parity(j) == 0 else -contracted)
    return out


# ---------------------------------------------------------------------------
# the affine correspondence


def affine_quantize(s: SymbolField | MixedSymbol, lam: Rational) -> DiffOperator:
    """Coefficient-wise quantization: frame monomials become derivatives."""
    lam = as_fraction(lam)
    if isinstance(s, SymbolField):
        s = s.as_mixed()
    terms: dict = {}
    for field in s.parts():
        for key, poly in field.items():
            _acc(terms, key, poly)
    return DiffOperator._raw(s.signature, lam, lam + s.weight, terms)


def affine_symbol(d: DiffOperator) -> MixedSymbol:
    """Total symbol of an operator, split by degree."""
    sig = d.signature
    delta = d.mu - d.lam
    by_degree: dict[int, dict] = {}
    for key, poly in d.items():
        by_degree.setdefault(_key_degree(key), {})[key] = poly
    parts = {
        k: SymbolField._raw(sig, delta, k, terms) for k, terms in by_degree.items()
    }
    return MixedSymbol(sig, delta, parts)


def principal_symbol(k: int, d: DiffOperator) -> SymbolField:
    """Top-degree part of the symbol of an operator of order at most k."""
    if d.order > k:
        raise ValueError(f"operator order {d.order} exceeds requested degree {k}")
    sig = d.signature
    terms = {key: poly for key, poly in d.items() if _key_degree(key) == k}
    return SymbolField._raw(sig, d.mu - d.lam, k, terms)
