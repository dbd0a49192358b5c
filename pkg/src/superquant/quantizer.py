"""Equivariant quantization maps.

The closed-form quantization sums coefficient-weighted iterated divergences,
the recursive path builds the same operator as a Casimir eigenvector, and
the q = p+1 variant carries a genuine one-parameter family on degree-1
symbols.  The inverse symbol map peels an operator top order first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .geometry import (
    DiffOperator,
    MixedSymbol,
    SymbolField,
    affine_quantize,
    principal_symbol,
    symbol_divergence,
)
from .projective import (
    casimir_defect,
    casimir_eigenvalue,
    ensure_noncritical,
    psl_quantization_coefficient,
    quantization_coefficient,
)
from .supercore import Signature, as_fraction

VARIANT_SL = "generic-sl"
VARIANT_PSL = "psl-family"


def default_variant(signature: Signature) -> str:
    return VARIANT_PSL if signature.q == signature.p + 1 else VARIANT_SL


@dataclass(frozen=True)
class QuantizationConfig:
    """Weights and variant for one quantization problem.

    ``lam`` is the source density weight, ``delta`` the weight shift carried
    by the symbols, ``mu = lam + delta`` the target weight.  ``t`` is the
    family parameter of the q = p+1 variant (ignored elsewhere).
    """

    signature: Signature
    lam: Fraction = Fraction(0)
    delta: Fraction = Fraction(0)
    variant: str | None = None
    t: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "lam", as_fraction(self.lam))
        object.__setattr__(self, "delta", as_fraction(self.delta))
        object.__setattr__(self, "t", as_fraction(self.t))
        variant = self.variant or default_variant(self.signature)
        if variant not in (VARIANT_SL, VARIANT_PSL):
            raise DomainError(f"unknown variant {variant!r}")
        psl_signature = self.signature.q == self.signature.p + 1
        if variant == VARIANT_SL and psl_signature:
            raise DomainError(
                f"variant {VARIANT_SL!r} requires q != p+1, got {self.signature}"
            )
        if variant == VARIANT_PSL and not psl_signature:
            raise DomainError(
                f"variant {VARIANT_PSL!r} requires q = p+1, got {self.signature}"
            )
        object.__setattr__(self, "variant", variant)

    @property
    def mu(self) -> Fraction:
        return self.lam + self.delta


def _check_symbol(s: SymbolField | MixedSymbol, cfg: QuantizationConfig) -> None:
    if s.signature != cfg.signature:
        raise DomainError(
            f"symbol signature {s.signature} does not match config {cfg.signature}"
        )
    if s.weight != cfg.delta:
        raise DomainError(
            f"symbol weight {s.weight} does not match config shift {cfg.delta}"
        )


def quantize(s: SymbolField | MixedSymbol, cfg: QuantizationConfig) -> DiffOperator:
    """Equivariant quantization of a symbol (mixed degrees summed per part)."""
    _check_symbol(s, cfg)
    if isinstance(s, MixedSymbol):
        total = DiffOperator.zero(cfg.signature, cfg.lam, cfg.mu)
        for part in s.parts():
            total = total + quantize(part, cfg)
        return total
    if cfg.variant == VARIANT_PSL:
        return quantize_psl(s, cfg)
    k = s.degree
    ensure_noncritical(cfg.signature, k, cfg.delta)
    total = DiffOperator.zero(cfg.signature, cfg.lam, cfg.mu)
    cur = s
    for r in range(k + 1):
        c = quantization_coefficient(k, r, cfg.lam, cfg.delta, cfg.signature)
        if c:
            total = total + c * affine_quantize(cur, cfg.lam)
        if r < k:
            cur = symbol_divergence(cur)
    return total


def quantize_recursive(
    s: SymbolField | MixedSymbol, cfg: QuantizationConfig
) -> DiffOperator:
    """Quantization built degree-by-degree from the eigenvector recursion.

    Independent of the closed form: the lower parts are produced by the
    degree-lowering map divided by eigenvalue gaps, so that the total symbol
    is a Casimir eigenvector under the quantized action.
    """
    _check_symbol(s, cfg)
    if cfg.variant != VARIANT_SL:
        raise DomainError("the recursive path is defined for the generic variant")
    if isinstance(s, MixedSymbol):
        total = DiffOperator.zero(cfg.signature, cfg.lam, cfg.mu)
        for part in s.parts():
            total = total + quantize_recursive(part, cfg)
        return total
    k = s.degree
    ensure_noncritical(cfg.signature, k, cfg.delta)
    top_eigen = casimir_eigenvalue(k, cfg.delta, cfg.signature)
    parts = [s]
    cur = s
    for r in range(k - 1, -1, -1):
        gap = top_eigen - casimir_eigenvalue(r, cfg.delta, cfg.signature)
        if gap == 0:
            raise DomainError(
                f"eigenvalue collision between degrees {k} and {r}"
            )
        cur = (Fraction(1) / gap) * casimir_defect(cur, cfg.lam)
        parts.append(cur)
    mixed = MixedSymbol.from_fields(cfg.signature, cfg.delta, parts)
    return affine_quantize(mixed, cfg.lam)


def quantize_psl(
    s: SymbolField | MixedSymbol, cfg: QuantizationConfig
) -> DiffOperator:
    """Quantization in the q = p+1 variant.

    Degree 1 carries the one-parameter family: coefficient-wise quantization
    plus t times multiplication by the symbol divergence.  Other degrees use
    the closed form at superdimension -1, whose coefficients are independent
    of both weights.
    """
    _check_symbol(s, cfg)
    if cfg.variant != VARIANT_PSL:
        raise DomainError("this path requires the q = p+1 variant")
    if isinstance(s, MixedSymbol):
        total = DiffOperator.zero(cfg.signature, cfg.lam, cfg.mu)
        for part in s.parts():
            total = total + quantize_psl(part, cfg)
        return total
    k = s.degree
    if k == 1:
        out = affine_quantize(s, cfg.lam)
        if cfg.t:
            div_poly = symbol_divergence(s).scalar_poly()
            out = out + DiffOperator.multiplication(
                cfg.t * div_poly, cfg.lam, cfg.mu
            )
        return out
    total = DiffOperator.zero(cfg.signature, cfg.lam, cfg.mu)
    cur = s
    for r in range(k + 1):
        c = psl_quantization_coefficient(k, r)
        if c:
            total = total + c * affine_quantize(cur, cfg.lam)
        if r < k:
            cur = symbol_divergence(cur)
    return total


def symbol_map(d: DiffOperator, cfg: QuantizationConfig) -> MixedSymbol:
    """Inverse of quantization: peel the operator top order first.

    Returns the mixed symbol whose per-degree parts quantize back to ``d``.
    """
    if d.signature != cfg.signature:
        raise DomainError(
            f"operator signature {d.signature} does not match config {cfg.signature}"
        )
    if d.lam != cfg.lam or d.mu != cfg.mu:
        raise DomainError(
            f"operator weights ({d.lam}, {d.mu}) do not match config "
            f"({cfg.lam}, {cfg.mu})"
        )
    parts: list[SymbolField] = []
    cur = d
    for k in range(d.order, -1, -1):
        sk = principal_symbol(k, cur)
        if sk.is_zero():
            continue
        parts.append(sk)
        cur = cur - quantize(sk, cfg)
    if not cur.is_zero():
        raise AssertionError("peeling failed to terminate at zero")
    return MixedSymbol.from_fields(cfg.signature, cfg.delta, parts)
