"""The projective superalgebra acting on R^{p|q}.

Elements are (1+p+q)-square rational matrices modulo multiples of the
identity, graded as constants / linear maps / quadratic directions through
the block decomposition with index 0 as the extra projective slot.  This
module provides brackets, the vector-field realization, the invariant
bilinear forms with exact dual bases, the quantization defect maps, Casimir
application, and every scalar constant of the theory (eigenvalues, critical
values, quantization coefficients).

Two algebra variants exist per signature: ``sl`` for q != p+1 (elements are
normalized to supertraceless representatives) and ``psl`` for q = p+1
(representatives are normalized to a zero corner entry; supertraceless
elements form the simple part, while the Euler class extends it to the full
projective algebra).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CriticalValueError, DomainError
from .geometry import (
    DiffOperator,
    MixedSymbol,
    SuperVectorField,
    SymbolField,
    affine_quantize,
    affine_symbol,
    interior,
    lie_operator,
    lie_symbol,
)
from .supercore import Rational, Signature, SuperPolynomial, as_fraction

ALGEBRA_SL = "sl"
ALGEBRA_PSL = "psl"


def default_algebra(signature: Signature) -> str:
    return ALGEBRA_PSL if signature.q == signature.p + 1 else ALGEBRA_SL


def normalize_algebra(signature: Signature, algebra: str | None) -> str:
    if algebra is None:
        return default_algebra(signature)
    name = algebra.lower()
    if name in ("sl", "gl"):
        name = ALGEBRA_SL
    elif name in ("psl", "pgl"):
        name = ALGEBRA_PSL
    else:
        raise DomainError(f"unknown algebra variant {algebra!r}")
    if name != default_algebra(signature):
        raise DomainError(
            f"algebra {name!r} is not valid for signature {signature}: "
            f"use {default_algebra(signature)!r}"
        )
    return name


# ---------------------------------------------------------------------------
# exact matrix helpers (module-private; sizes are tiny)


def _mat(rows) -> tuple:
    return tuple(tuple(as_fraction(v) for v in row) for row in rows)


def _zero_matrix(size: int) -> tuple:
    return tuple((Fraction(0),) * size for _ in range(size))


def _identity(size: int) -> tuple:
    return tuple(
        tuple(Fraction(1 if r == c else 0) for c in range(size)) for r in range(size)
    )


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_sub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_scale(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def _mat_mul(a, b):
    # Basis matrices are sparse; skipping zero entries keeps the bracket
    # tables cheap even with exact rational entries.
    size = len(a)
    out = [[Fraction(0)] * size for _ in range(size)]
    for r in range(size):
        row = a[r]
        acc = out[r]
        for k in range(size):
            ark = row[k]
            if not ark:
                continue
            brow = b[k]
            for c in range(size):
                bkc = brow[c]
                if bkc:
                    acc[c] += ark * bkc
    return tuple(tuple(row) for row in out)


def _full_parity(signature: Signature, a: int) -> int:
    """Parity of full-matrix index a in 0..p+q (index 0 is even)."""
    return 0 if a <= signature.p else 1


def _supertrace_full(m, signature: Signature) -> Fraction:
    total = Fraction(0)
    for a in range(len(m)):
        if _full_parity(signature, a):
            total -= m[a][a]
        else:
            total += m[a][a]
    return total


def _matrix_parity_part(m, signature: Signature, parity: int):
    size = len(m)
    return tuple(
        tuple(
            m[r][c]
            if (_full_parity(signature, r) ^ _full_parity(signature, c)) == parity
            else Fraction(0)
            for c in range(size)
        )
        for r in range(size)
    )


def _super_commutator(m1, m2, signature: Signature):
    """Bracket of raw full matrices, bilinear over the parity blocks."""
    out = _zero_matrix(len(m1))
    parts1 = [(s, _matrix_parity_part(m1, signature, s)) for s in (0, 1)]
    parts2 = [(t, _matrix_parity_part(m2, signature, t)) for t in (0, 1)]
    for s, a in parts1:
        for t, b in parts2:
            term = _mat_sub(
                _mat_mul(a, b),
                _mat_scale(Fraction(-1 if s and t else 1), _mat_mul(b, a)),
            )
            out = _mat_add(out, term)
    return out


def _invert(matrix) -> tuple:
    """Exact Gauss-Jordan inverse of a rational matrix."""
    size = len(matrix)
    aug = [list(row) + [Fraction(1 if r == c else 0) for c in range(size)]
           for r, row in enumerate(matrix)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if aug[r][col]), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[size:]) for row in aug)


# ---------------------------------------------------------------------------
# elements


class PglElement:
    """An element of the projective superalgebra, stored as a canonical
    representative: supertraceless for ``sl``, zero corner entry for ``psl``."""

    __slots__ = ("signature", "matrix", "algebra")

    def __init__(self, signature: Signature, matrix, algebra: str | None = None):
        algebra = normalize_algebra(signature, algebra)
        size = 1 + signature.n
        m = _mat(matrix)
        if len(m) != size or any(len(row) != size for row in m):
            raise ValueError(f"expected a {size}x{size} matrix for {signature}")
        if algebra == ALGEBRA_SL:
            s = _supertrace_full(m, signature)
            if s:
                scale = s / (signature.p + 1 - signature.q)
                m = _mat_sub(m, _mat_scale(scale, _identity(size)))
        else:
            c = m[0][0]
            if c:
                m = _mat_sub(m, _mat_scale(c, _identity(size)))
        self.signature = signature
        self.matrix = m
        self.algebra = algebra

    def supertrace(self) -> Fraction:
        return _supertrace_full(self.matrix, self.signature)

    def is_zero(self) -> bool:
        return all(not v for row in self.matrix for v in row)

    def __add__(self, other):
        if not isinstance(other, PglElement):
            return NotImplemented
        if self.signature != other.signature:
            raise ValueError("signature mismatch")
        return PglElement(
            self.signature, _mat_add(self.matrix, other.matrix), self.algebra
        )

    def __sub__(self, other):
        if not isinstance(other, PglElement):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return PglElement(
            self.signature, _mat_scale(Fraction(-1), self.matrix), self.algebra
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PglElement(
                self.signature,
                _mat_scale(as_fraction(other), self.matrix),
                self.algebra,
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PglElement):
            return NotImplemented
        return self.signature == other.signature and self.matrix == other.matrix

    def __hash__(self):
        return hash((self.signature, self.matrix))

    def __repr__(self):
        return f"PglElement({self.signature}, {self.matrix!r}, {self.algebra!r})"


class GradedElement:
    """Graded data (constant part, linear part, quadratic-direction part)."""

    __slots__ = ("signature", "h_minus", "h_zero", "h_plus")

    def __init__(self, signature: Signature, h_minus=None, h_zero=None, h_plus=None):
        n = signature.n
        self.signature = signature
        self.h_minus = tuple(
            as_fraction(v) for v in (h_minus if h_minus is not None else [0] * n)
        )
        zero_block = [[0] * n for _ in range(n)]
        self.h_zero = _mat(h_zero if h_zero is not None else zero_block)
        self.h_plus = tuple(
            as_fraction(v) for v in (h_plus if h_plus is not None else [0] * n)
        )
        if len(self.h_minus) != n or len(self.h_plus) != n:
            raise ValueError(f"expected {n} vector components")
        if len(self.h_zero) != n or any(len(r) != n for r in self.h_zero):
            raise ValueError(f"expected a {n}x{n} linear block")

    def to_pgl(self, algebra: str | None = None) -> PglElement:
        n = self.signature.n
        rows = [(Fraction(0),) + self.h_plus]
        for i in range(n):
            rows.append((self.h_minus[i],) + self.h_zero[i])
        return PglElement(self.signature, rows, algebra)

    def __eq__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.h_minus == other.h_minus
            and self.h_zero == other.h_zero
            and self.h_plus == other.h_plus
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"GradedElement({self.signature}, {self.h_minus!r}, "
            f"{self.h_zero!r}, {self.h_plus!r})"
        )


def pgl_to_graded(x: PglElement) -> GradedElement:
    n = x.signature.n
    m = x.matrix
    a = m[0][0]
    h_minus = tuple(m[i][0] for i in range(1, n + 1))
    h_plus = tuple(m[0][j] for j in range(1, n + 1))
    h_zero = tuple(
        tuple(m[i][j] - (a if i == j else 0) for j in range(1, n + 1))
        for i in range(1, n + 1)
    )
    return GradedElement(x.signature, h_minus, h_zero, h_plus)


def pgl_bracket(a: PglElement, b: PglElement) -> PglElement:
    if a.signature != b.signature:
        raise ValueError("signature mismatch")
    return PglElement(
        a.signature, _super_commutator(a.matrix, b.matrix, a.signature), a.algebra
    )


# ---------------------------------------------------------------------------
# graded basis elements


def _elementary_full(signature: Signature, r: int, c: int, value=1) -> tuple:
    size = 1 + signature.n
    return tuple(
        tuple(as_fraction(value) if (i, j) == (r, c) else Fraction(0) for j in range(size))
        for i in range(size)
    )


def basis_e(signature: Signature, algebra: str | None = None) -> list[PglElement]:
    """Constant directions: the matrix placing 1 in column 0, row i."""
    return [
        PglElement(signature, _elementary_full(signature, i, 0), algebra)
        for i in range(1, signature.n + 1)
    ]


def basis_eps(signature: Signature, algebra: str | None = None) -> list[PglElement]:
    """Quadratic directions: the matrix placing 1 in row 0, column i."""
    return [
        PglElement(signature, _elementary_full(signature, 0, i), algebra)
        for i in range(1, signature.n + 1)
    ]


def scaled_eps(signature: Signature, i: int) -> PglElement:
    """The normalized quadratic direction used in the lowering map."""
    if signature.q == signature.p + 1:
        raise DomainError("scaled quadratic directions require q != p+1")
    sign = -1 if signature.parity(i) else 1
    scale = Fraction(sign, 2 * (signature.p - signature.q + 1))
    return PglElement(
        signature, _elementary_full(signature, 0, i, scale), ALGEBRA_SL
    )


def g0_element(signature: Signature, block, algebra: str | None = None) -> PglElement:
    return GradedElement(signature, None, block, None).to_pgl(algebra)


def euler_element(signature: Signature, algebra: str | None = None) -> PglElement:
    n = signature.n
    block = [[-1 if i == j else 0 for j in range(n)] for i in range(n)]
    return g0_element(signature, block, algebra)


def _block_elementary(n: int, i: int, j: int, value=1):
    return [[value if (r, c) == (i - 1, j - 1) else 0 for c in range(n)] for r in range(n)]


def g0_basis(signature: Signature, algebra: str | None = None) -> list[PglElement]:
    """Basis of the linear part: all elementary blocks for ``sl``; for
    ``psl`` the off-diagonal blocks plus supertraceless diagonal differences."""
    algebra = normalize_algebra(signature, algebra)
    n = signature.n
    out = []
    if algebra == ALGEBRA_SL:
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                out.append(g0_element(signature, _block_elementary(n, i, j), algebra))
        return out
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out.append(g0_element(signature, _block_elementary(n, i, j), algebra))
    for i in range(1, n):
        si = -1 if signature.parity(i) else 1
        sj = -1 if signature.parity(i + 1) else 1
        block = [[0] * n for _ in range(n)]
        block[i - 1][i - 1] = si
        block[i][i] = -sj
        out.append(g0_element(signature, block, algebra))
    return out


def g0_basis_euler_split(signature: Signature) -> list[PglElement]:
    """Alternative linear-part basis: off-diagonals, supertraceless diagonal
    differences, and the identity block; valid when p != q (sl only)."""
    if normalize_algebra(signature, None) != ALGEBRA_SL:
        raise DomainError("the euler-split basis is an sl-variant basis")
    if signature.p == signature.q:
        raise DomainError("the euler-split basis requires p != q")
    n = signature.n
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                out.append(g0_element(signature, _block_elementary(n, i, j)))
    for i in range(1, n):
        si = -1 if signature.parity(i) else 1
        sj = -1 if signature.parity(i + 1) else 1
        block = [[0] * n for _ in range(n)]
        block[i - 1][i - 1] = si
        block[i][i] = -sj
        out.append(g0_element(signature, block))
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    out.append(g0_element(signature, ident))
    return out


def graded_basis(
    signature: Signature, algebra: str | None = None, scheme: str = "elementary"
) -> list[PglElement]:
    """Full basis ordered as constants, linear part, quadratic directions."""
    algebra = normalize_algebra(signature, algebra)
    if scheme == "elementary":
        middle = g0_basis(signature, algebra)
    elif scheme == "euler-split":
        middle = g0_basis_euler_split(signature)
    else:
        raise ValueError(f"unknown basis scheme {scheme!r}")
    return basis_e(signature, algebra) + middle + basis_eps(signature, algebra)


# ---------------------------------------------------------------------------
# the vector-field realization


def realize(h) -> SuperVectorField:
    """The vector field attached to an algebra element.

    Constants act by negated coordinate derivatives, linear blocks by negated
    signed linear fields, and quadratic directions by a coordinate function
    times the Euler field.
    """
    if isinstance(h, SuperVectorField):
        return h
    if isinstance(h, PglElement):
        h = pgl_to_graded(h)
    if not isinstance(h, GradedElement):
        raise TypeError(f"cannot realize {type(h).__name__}")
    sig = h.signature
    n = sig.n
    comps = [SuperPolynomial.zero(sig) for _ in range(n)]
    for i in range(n):
        v = h.h_minus[i]
        if v:
            comps[i] = comps[i] - SuperPolynomial.scalar(sig, v)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a = h.h_zero[i - 1][j - 1]
            if not a:
                continue
            tj = sig.parity(j)
            ti = sig.parity(i)
            sign = -1 if (tj and (ti ^ tj)) else 1
            comps[i - 1] = comps[i - 1] - (sign * a) * SuperPolynomial.coordinate(
                sig, j
            )
    if any(h.h_plus):
        f = SuperPolynomial.zero(sig)
        for j in range(1, n + 1):
            xi = h.h_plus[j - 1]
            if xi:
                sign = -1 if sig.parity(j) else 1
                f = f + (sign * xi) * SuperPolynomial.coordinate(sig, j)
        for i in range(1, n + 1):
            comps[i - 1] = comps[i - 1] + f * SuperPolynomial.coordinate(sig, i)
    return SuperVectorField(sig, comps)


# ---------------------------------------------------------------------------
# invariant forms and dual bases


def killing_form(a: PglElement, b: PglElement) -> Fraction:
    """The invariant form of the generic variant: a fixed multiple of the
    supertrace of the product."""
    sig = a.signature
    if sig != b.signature:
        raise ValueError("signature mismatch")
    if sig.q == sig.p + 1:
        raise DomainError("the Killing form degenerates when q = p+1")
    return 2 * (sig.p + 1 - sig.q) * _supertrace_full(
        _mat_mul(a.matrix, b.matrix), sig
    )


def kaplansky_form(a: PglElement, b: PglElement) -> Fraction:
    """The invariant form of the q = p+1 variant: supertrace of the product,
    well defined on supertraceless classes."""
    sig = a.signature
    if sig != b.signature:
        raise ValueError("signature mismatch")
    if sig.q != sig.p + 1:
        raise DomainError("this form is specific to q = p+1")
    if a.supertrace() or b.supertrace():
        raise DomainError(
            "the form requires supertraceless representatives on both sides"
        )
    return _supertrace_full(_mat_mul(a.matrix, b.matrix), sig)


@dataclass(frozen=True)
class DualBasisPair:
    basis: tuple
    dual: tuple
    form: str


_dual_cache: dict = {}
_dual_lock = threading.Lock()


def dual_basis_pair(
    signature: Signature, algebra: str | None = None, scheme: str = "elementary"
) -> DualBasisPair:
    """Exact dual bases for the invariant form, via Gram-matrix inversion."""
    algebra = normalize_algebra(signature, algebra)
    key = (signature, algebra, scheme)
    with _dual_lock:
        cached = _dual_cache.get(key)
    if cached is not None:
        return cached
    basis = graded_basis(signature, algebra, scheme)
    form = killing_form if algebra == ALGEBRA_SL else kaplansky_form
    size = len(basis)
    gram = tuple(
        tuple(form(basis[i], basis[j]) for j in range(size)) for i in range(size)
    )
    inverse = _invert(gram)
    dual = []
    for j in range(size):
        acc = None
        for k in range(size):
            c = inverse[k][j]
            if not c:
                continue
            term = c * basis[k]
            acc = term if acc is None else acc + term
        if acc is None:
            raise ValueError("degenerate form: no dual element")
        dual.append(acc)
    for i in range(size):
        for j in range(size):
            want = Fraction(1 if i == j else 0)
            if form(basis[i], dual[j]) != want:
                raise AssertionError("dual basis verification failed")
    pair = DualBasisPair(
        tuple(basis),
        tuple(dual),
        "Killing" if algebra == ALGEBRA_SL else "Kaplansky",
    )
    with _dual_lock:
        _dual_cache[key] = pair
    return pair


# ---------------------------------------------------------------------------
# quantization defect maps


def _as_field(h) -> SuperVectorField:
    if isinstance(h, (PglElement, GradedElement, SuperVectorField)):
        return realize(h)
    raise TypeError(f"expected an algebra element or field, got {type(h).__name__}")


def affine_defect(h, s: SymbolField, lam: Rational, *, full: bool = False):
    """Difference between the operator-level and symbol-level actions.

    Conjugates the operator Lie derivative through coefficient-wise
    quantization at weight lam and subtracts the symbol Lie derivative.  For
    affine elements this vanishes; for quadratic directions it lowers the
    degree by exactly one.  With ``full=True`` the whole mixed symbol is
    returned; otherwise concentration in degree k-1 is checked and that part
    returned.
    """
    x = _as_field(h)
    lam = as_fraction(lam)
    op = affine_quantize(s, lam)
    mixed = affine_symbol(lie_operator(x, op)) - lie_symbol(x, s).as_mixed()
    if full:
        return mixed
    target = max(s.degree - 1, 0)
    for deg in mixed.degrees():
        if deg != target:
            raise ValueError(
                f"defect has an unexpected degree-{deg} part (expected only {target})"
            )
    return mixed.part(target)


def affine_defect_closed_form(h, s: SymbolField, lam: Rational) -> SymbolField:
    """Scalar-multiple-of-contraction form of the quantization defect for a
    quadratic direction."""
    if isinstance(h, PglElement):
        h = pgl_to_graded(h)
    if not isinstance(h, GradedElement):
        raise TypeError("expected an algebra element")
    if any(h.h_minus) or any(v for row in h.h_zero for v in row):
        raise DomainError("the closed form applies to pure quadratic directions")
    sig = s.signature
    lam = as_fraction(lam)
    factor = -(lam * (sig.p - sig.q + 1) + s.degree - 1)
    row = list(h.h_plus)
    return factor * interior(row, s)


def casimir_defect(s: SymbolField, lam: Rational) -> SymbolField:
    """The degree-lowering part of the quantized Casimir action."""
    sig = s.signature
    if sig.q == sig.p + 1:
        raise DomainError("the lowering map requires q != p+1")
    lam = as_fraction(lam)
    total = SymbolField.zero(sig, s.weight, max(s.degree - 1, 0))
    es = basis_e(sig)
    for i in range(1, sig.n + 1):
        lowered = lie_symbol(realize(es[i - 1]), s)
        defect = affine_defect(scaled_eps(sig, i), lowered, lam)
        total = total + 2 * defect
    return total


# ---------------------------------------------------------------------------
# Casimir application and scalar constants


REP_SYMBOL = "L"
REP_AFFINE = "affine"


def casimir_apply(
    s: SymbolField,
    lam: Rational,
    rep: str = REP_SYMBOL,
    algebra: str | None = None,
    scheme: str = "elementary",
) -> MixedSymbol:
    """Apply the quadratic Casimir of the invariant form to a symbol.

    With ``rep="L"`` the generators act by the symbol Lie derivative; with
    ``rep="affine"`` they act by the operator Lie derivative conjugated
    through coefficient-wise quantization at weight lam.
    """
    sig = s.signature
    algebra = normalize_algebra(sig, algebra)
    lam = as_fraction(lam)
    pair = dual_basis_pair(sig, algebra, scheme)
    fields = [(realize(u), realize(ud)) for u, ud in zip(pair.basis, pair.dual)]
    if rep == REP_SYMBOL:
        out = SymbolField.zero(sig, s.weight, s.degree)
        for xu, xud in fields:
            out = out + lie_symbol(xud, lie_symbol(xu, s))
        return out.as_mixed()
    if rep == REP_AFFINE:
        op = affine_quantize(s, lam)
        total = DiffOperator.zero(sig, op.lam, op.mu)
        for xu, xud in fields:
            total = total + lie_operator(xud, lie_operator(xu, op))
        return affine_symbol(total)
    raise ValueError(f"unknown representation {rep!r}")


def casimir_eigenvalue(k: int, delta: Rational, signature: Signature) -> Fraction:
    """Casimir eigenvalue on degree-k symbols of weight delta (generic variant)."""
    pq = signature.p - signature.q
    if pq + 1 == 0:
        raise DomainError("the eigenvalue formula requires q != p+1")
    if k < 0:
        raise ValueError("degree must be non-negative")
    d = as_fraction(delta)
    return (
        Fraction(pq, 2) * d * d
        - Fraction(2 * k + pq, 2) * d
        + Fraction(k * (k + pq), pq + 1)
    )


def psl_casimir_eigenvalue(k: int) -> Fraction:
    """Casimir eigenvalue on degree-k symbols in the q = p+1 variant."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    return Fraction(2 * k * (k - 1))


def critical_values_for_degree(signature: Signature, k: int) -> frozenset:
    """Weights at which degree-k quantization is obstructed."""
    pq = signature.p - signature.q
    if pq + 1 == 0:
        raise DomainError("critical values are defined for q != p+1")
    if k < 0:
        raise ValueError("degree must be non-negative")
    return frozenset(Fraction(2 * k - l + pq, pq + 1) for l in range(1, k + 1))


def critical_values(signature: Signature, kmax: int) -> frozenset:
    out: set = set()
    for k in range(kmax + 1):
        out |= critical_values_for_degree(signature, k)
    return frozenset(out)


def is_critical(delta: Rational, signature: Signature, kmax: int) -> bool:
    return as_fraction(delta) in critical_values(signature, kmax)


def critical_pairs(
    delta: Rational, signature: Signature, kmax: int
) -> list[tuple[int, int]]:
    """Degree pairs (k, l), l < k <= kmax, whose eigenvalues collide at delta."""
    d = as_fraction(delta)
    out = []
    for k in range(kmax + 1):
        ak = casimir_eigenvalue(k, d, signature)
        for l in range(k):
            if casimir_eigenvalue(l, d, signature) == ak:
                out.append((k, l))
    return out


def ensure_noncritical(signature: Signature, k: int, delta: Rational) -> None:
    d = as_fraction(delta)
    if d in critical_values_for_degree(signature, k):
        pairs = critical_pairs(d, signature, k)
        raise CriticalValueError(
            f"weight {d} is critical for degree {k} at signature {signature}: "
            f"eigenvalue collisions {pairs}",
            value=d,
            pairs=pairs,
        )


def quantization_coefficient(
    k: int, r: int, lam: Rational, delta: Rational, signature: Signature
) -> Fraction:
    """Closed-form coefficient of the r-fold divergence in degree-k
    quantization."""
    pq = signature.p - signature.q
    if pq + 1 == 0:
        raise DomainError("the coefficient formula requires q != p+1")
    if not 0 <= r <= k:
        raise ValueError(f"step r={r} out of range 0..{k}")
    if r == 0:
        return Fraction(1)
    lam = as_fraction(lam)
    d = as_fraction(delta)
    num = Fraction(1)
    for j in range(1, r + 1):
        num *= (pq + 1) * lam + k - j
    den = Fraction(1)
    for j in range(1, r + 1):
        factor = pq + 2 * k - j - (pq + 1) * d
        if factor == 0:
            raise CriticalValueError(
                f"vanishing denominator at step j={j}: weight {d} is critical "
                f"for degree {k} at signature {signature}",
                value=d,
                pairs=[(k, k - j)],
            )
        den *= factor
    for j in range(1, r + 1):
        den *= j
    return num / den


def psl_quantization_coefficient(k: int, r: int) -> Fraction:
    """Divergence coefficients in the q = p+1 variant; degree 1 is excluded
    (there the one-parameter family replaces a fixed coefficient)."""
    if not 0 <= r <= k:
        raise ValueError(f"step r={r} out of range 0..{k}")
    if r == 0:
        return Fraction(1)
    if k == 1:
        raise DomainError(
            "degree-1 coefficients are not determined in the q = p+1 variant"
        )
    num = Fraction(1)
    for j in range(1, r + 1):
        num *= k - j
    den = Fraction(1)
    for j in range(1, r + 1):
        den *= (2 * k - 1 - j) * j
    return num / den
