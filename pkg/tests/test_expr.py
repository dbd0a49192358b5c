"""Tests for expression parsing, formatting, and JSON encoding."""

import random
from fractions import Fraction

import pytest

from superquant import (
    DiffOperator,
    ExprError,
    MixedSymbol,
    Signature,
    SuperPolynomial,
    SuperVectorField,
    SymbolField,
)
from superquant.expr import (
    format_operator,
    format_poly,
    format_symbol,
    format_value,
    format_vfield,
    parse,
    value_from_json,
    value_to_json,
)

S11 = Signature(1, 1)
S21 = Signature(2, 1)
S22 = Signature(2, 2)
S12 = Signature(1, 2)
S10 = Signature(1, 0)


def poly(sig, text):
    return parse("poly", text, sig)


class TestParsePoly:
    def test_rational_literal(self):
        assert poly(S11, "3/4") == SuperPolynomial.scalar(S11, Fraction(3, 4))
        assert poly(S11, "-2") == SuperPolynomial.scalar(S11, -2)

    def test_odd_transposition_sign(self):
        # t2*t1 = -t1*t2 in canonical form.
        assert poly(S22, "t2*t1") == -SuperPolynomial.monomial(S22, (0, 0), (1, 2))

    def test_odd_square_vanishes(self):
        assert poly(S11, "t1*t1").is_zero()

    def test_powers_and_products(self):
        f = poly(S21, "2*x1^2*x2 - x2*x1^2*2")
        assert f.is_zero()
        g = poly(S21, "(1 + x1)*(1 - x1)")
        assert g == SuperPolynomial.one(S21) - poly(S21, "x1^2")

    def test_unary_minus(self):
        assert poly(S11, "-x1 + x1").is_zero()

    def test_parse_errors_carry_position(self):
        with pytest.raises(ExprError) as info:
            poly(S11, "x1 + y3")
        assert info.value.position == 5
        with pytest.raises(ExprError):
            poly(S11, "x2")  # even index out of range
        with pytest.raises(ExprError):
            poly(S11, "t1^2")  # caret on an odd atom
        with pytest.raises(ExprError):
            poly(S11, "x1^0")
        with pytest.raises(ExprError):
            poly(S11, "1/0")
        with pytest.raises(ExprError):
            poly(S11, "x1 +")
        with pytest.raises(ExprError):
            poly(S11, "(x1")
        with pytest.raises(ExprError):
            poly(S11, "x1 x1")

    def test_derivative_atoms_rejected_in_poly(self):
        with pytest.raises(ExprError):
            poly(S11, "dx1")
        with pytest.raises(ExprError):
            poly(S11, "ex1")


class TestParseVfield:
    def test_simple_field(self):
        x = parse("vfield", "x1*dx1 + t1*dt1", S11)
        expected = SuperVectorField(
            S11,
            [SuperPolynomial.coordinate(S11, 1), SuperPolynomial.coordinate(S11, 2)],
        )
        assert x == expected

    def test_sign_absorption_across_classes(self):
        # dt1*t1 = -t1*dt1 as a formal monomial.
        a = parse("vfield", "dt1*t1", S11)
        b = parse("vfield", "-t1*dt1", S11)
        assert a == b

    def test_field_needs_exactly_one_derivative(self):
        with pytest.raises(ExprError):
            parse("vfield", "x1", S11)
        with pytest.raises(ExprError):
            parse("vfield", "dx1*dx1", S11)

    def test_symbol_atoms_rejected(self):
        with pytest.raises(ExprError):
            parse("vfield", "ex1", S11)


class TestParseSymbolOperator:
    def test_symbol_degree_inference(self):
        s = parse("symbol", "x1*ex1^2", S21, weight=Fraction(1, 5))
        assert isinstance(s, SymbolField)
        assert s.degree == 2
        assert s.weight == Fraction(1, 5)
        assert s.coefficient((2, 0), ()) == SuperPolynomial.coordinate(S21, 1)

    def test_symbol_mixed_degrees(self):
        s = parse("symbol", "ex1^2 + ex1 + 1", S21)
        assert isinstance(s, MixedSymbol)
        assert s.degrees() == [0, 1, 2]

    def test_symbol_odd_generator_sign(self):
        a = parse("symbol", "et2*et1", S22)
        b = parse("symbol", "-et1*et2", S22)
        assert a == b

    def test_operator_parse_and_weights(self):
        d = parse(
            "operator",
            "x1*dx1 + (1/2)",
            S10,
            lam=Fraction(1, 2),
            mu=Fraction(1, 2),
        )
        assert isinstance(d, DiffOperator)
        assert d.lam == Fraction(1, 2)
        g = parse("poly", "x1^3", S10)
        assert d.apply(g) == parse("poly", "3*x1^3 + (1/2)*x1^3", S10)

    def test_operator_odd_coefficient_and_derivative(self):
        # Formal sign absorption: dt1*t1 = -t1*dt1 (no Leibniz in the term language).
        a = parse("operator", "dt1*t1", S11)
        b = parse("operator", "-t1*dt1", S11)
        assert a == b


class TestFormatting:
    def test_poly_examples(self):
        f = poly(S21, "1 - 2*x1 + (3/4)*x2*t1")
        assert format_poly(f) == "1 - 2*x1 + (3/4)*x2*t1"

    def test_zero_prints_as_zero(self):
        assert format_poly(SuperPolynomial.zero(S21)) == "0"
        assert format_vfield(SuperVectorField.zero(S21)) == "0"

    def test_operator_constant_term_style(self):
        d = parse("operator", "x1*dx1 + (1/2)", S10)
        assert format_operator(d) == "x1*dx1 + (1/2)"

    def test_leading_negative(self):
        f = poly(S11, "-x1 - 1")
        assert format_poly(f) == "-1 - x1"

    def test_str_hooks(self):
        f = poly(S11, "x1*t1")
        assert str(f) == "x1*t1"
        s = parse("symbol", "ex1 + 1", S11)
        assert str(s) == "ex1 + 1"
        d = parse("operator", "dx1*dt1", S11)
        assert str(d) == format_operator(d)
        x = parse("vfield", "x1*dx1", S11)
        assert str(x) == "x1*dx1"


def rand_fraction(rng):
    return Fraction(rng.randint(-5, 5), rng.choice([1, 2, 3]))


def rand_poly(sig, rng):
    f = SuperPolynomial.zero(sig)
    for _ in range(rng.randint(1, 4)):
        evens = tuple(rng.randint(0, 2) for _ in range(sig.p))
        odds = [i + 1 for i in range(sig.q) if rng.random() < 0.5]
        f = f + SuperPolynomial.monomial(sig, evens, odds, rand_fraction(rng))
    return f


def rand_vfield(sig, rng):
    return SuperVectorField(sig, [rand_poly(sig, rng) for _ in range(sig.n)])


def rand_symbol(sig, weight, degree, rng):
    s = SymbolField.zero(sig, weight, degree)
    for _ in range(3):
        evens = [0] * sig.p
        rest = degree
        odds = []
        for i in range(sig.q):
            if rest and rng.random() < 0.4 and (i + 1) not in odds:
                odds.append(i + 1)
                rest -= 1
        for _ in range(rest):
            if not sig.p:
                break
            evens[rng.randrange(sig.p)] += 1
        if sum(evens) + len(odds) != degree:
            continue
        s = s + SymbolField.monomial(sig, weight, evens, odds, rand_poly(sig, rng))
    return s


def rand_operator(sig, lam, mu, rng):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        evens = tuple(rng.randint(0, 1) for _ in range(sig.p))
        mask = rng.randrange(1 << sig.q)
        terms[(evens, mask)] = rand_poly(sig, rng)
    return DiffOperator(sig, lam, mu, terms)


class TestRoundTrip:
    @pytest.mark.parametrize("sig", [S10, S11, S21, S22, S12])
    def test_poly_text_round_trip(self, sig):
        rng = random.Random(hash((sig.p, sig.q)) & 0xFFFF)
        for _ in range(20):
            f = rand_poly(sig, rng)
            assert parse("poly", format_poly(f), sig) == f

    @pytest.mark.parametrize("sig", [S11, S21, S22, S12])
    def test_vfield_text_round_trip(self, sig):
        rng = random.Random(3 + sig.n)
        for _ in range(15):
            x = rand_vfield(sig, rng)
            assert parse("vfield", format_vfield(x), sig) == x

    @pytest.mark.parametrize("sig", [S11, S21, S22])
    def test_symbol_text_round_trip(self, sig):
        rng = random.Random(5 + sig.n)
        w = Fraction(1, 5)
        for degree in range(4):
            s = rand_symbol(sig, w, degree, rng)
            out = parse("symbol", format_symbol(s), sig, weight=w)
            if isinstance(out, MixedSymbol):
                assert out == s.as_mixed()
            else:
                assert out == s or (out.is_zero() and s.is_zero())

    @pytest.mark.parametrize("sig", [S11, S21, S22])
    def test_operator_text_round_trip(self, sig):
        rng = random.Random(7 + sig.n)
        lam, mu = Fraction(1, 3), Fraction(8, 15)
        for _ in range(15):
            d = rand_operator(sig, lam, mu, rng)
            assert parse("operator", format_operator(d), sig, lam=lam, mu=mu) == d

    def test_format_is_canonical_fixed_point(self):
        # format(parse(format(v))) == format(v)
        rng = random.Random(99)
        d = rand_operator(S22, 0, 0, rng)
        text = format_operator(d)
        assert format_operator(parse("operator", text, S22)) == text


class TestJson:
    def test_poly_json_round_trip(self):
        rng = random.Random(11)
        for sig in (S10, S21, S22):
            f = rand_poly(sig, rng)
            doc = value_to_json(f)
            assert doc["kind"] == "poly"
            assert value_from_json(doc) == f

    def test_vfield_json_round_trip(self):
        rng = random.Random(13)
        x = rand_vfield(S22, rng)
        doc = value_to_json(x)
        assert doc["kind"] == "vfield"
        assert value_from_json(doc) == x

    def test_symbol_json_round_trip_and_weight(self):
        rng = random.Random(17)
        s = rand_symbol(S21, Fraction(1, 5), 2, rng)
        doc = value_to_json(s)
        assert doc["weights"] == {"delta": "1/5"}
        assert value_from_json(doc) == s

    def test_mixed_symbol_json_round_trip(self):
        s = parse("symbol", "ex1^2 + ex1 + 1", S21, weight=Fraction(1, 5))
        doc = value_to_json(s)
        out = value_from_json(doc)
        assert out == s

    def test_operator_json_schema(self):
        d = parse(
            "operator",
            "x1^2*t1*dx1 + dt1",
            S21,
            lam=Fraction(1, 3),
            mu=Fraction(8, 15),
        )
        doc = value_to_json(d)
        assert doc["signature"] == {"p": 2, "q": 1}
        assert doc["weights"] == {"lambda": "1/3", "mu": "8/15"}
        keys = [t["key"] for t in doc["terms"]]
        assert "x^(2,0);t{1};d x^(1,0);d t{}" in keys
        assert "x^(0,0);t{};d x^(0,0);d t{1}" in keys
        assert value_from_json(doc) == d

    def test_symbol_key_prefix(self):
        s = parse("symbol", "ex1*et1", S11)
        doc = value_to_json(s)
        assert doc["terms"][0]["key"] == "x^(0);t{};e x^(1);e t{1}"

    def test_rationals_never_decimal(self):
        s = parse("symbol", "(1/3)*ex1", S11, weight=Fraction(2, 7))
        doc = value_to_json(s)
        assert doc["terms"][0]["coeff"] == "1/3"
        assert doc["weights"]["delta"] == "2/7"

    def test_format_value_dispatch(self):
        assert format_value(poly(S11, "x1")) == "x1"
        with pytest.raises(TypeError):
            format_value(42)


# ---------------------------------------------------------------------------
# Property-based round trips: for every value the formatter can emit, parsing
# the text (or the JSON document) must reproduce the value exactly.
# ---------------------------------------------------------------------------

from hypothesis import given, settings
from hypothesis import strategies as st

_fractions = st.fractions(min_value=-9, max_value=9, max_denominator=12)


@st.composite
def _signatures(draw):
    return Signature(draw(st.integers(1, 3)), draw(st.integers(0, 3)))


@st.composite
def _polys(draw, sig, max_terms=4):
    f = SuperPolynomial.zero(sig)
    for _ in range(draw(st.integers(0, max_terms))):
        evens = tuple(draw(st.integers(0, 3)) for _ in range(sig.p))
        odds = (
            draw(st.lists(st.integers(1, sig.q), unique=True, max_size=sig.q))
            if sig.q
            else []
        )
        f = f + SuperPolynomial.monomial(sig, evens, odds, draw(_fractions))
    return f


@st.composite
def _poly_cases(draw):
    sig = draw(_signatures())
    return sig, draw(_polys(sig))


@st.composite
def _vfield_cases(draw):
    sig = draw(_signatures())
    return sig, SuperVectorField(sig, [draw(_polys(sig, 2)) for _ in range(sig.n)])


@st.composite
def _symbol_cases(draw):
    sig = draw(_signatures())
    weight = draw(_fractions)
    degree = draw(st.integers(0, 3))
    s = SymbolField.zero(sig, weight, degree)
    for _ in range(draw(st.integers(0, 3))):
        n_odd = draw(st.integers(0, min(sig.q, degree)))
        odds = (
            sorted(
                draw(
                    st.lists(
                        st.integers(1, sig.q),
                        unique=True,
                        min_size=n_odd,
                        max_size=n_odd,
                    )
                )
            )
            if n_odd
            else []
        )
        evens = [0] * sig.p
        for _ in range(degree - n_odd):
            evens[draw(st.integers(0, sig.p - 1))] += 1
        s = s + SymbolField.monomial(sig, weight, evens, odds, draw(_polys(sig, 2)))
    return sig, weight, s


@st.composite
def _operator_cases(draw):
    sig = draw(_signatures())
    lam = draw(_fractions)
    mu = draw(_fractions)
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        evens = tuple(draw(st.integers(0, 2)) for _ in range(sig.p))
        mask = draw(st.integers(0, (1 << sig.q) - 1))
        terms[(evens, mask)] = draw(_polys(sig, 2))
    return sig, lam, mu, DiffOperator(sig, lam, mu, terms)


class TestRoundTripProperties:
    @settings(max_examples=60, deadline=None)
    @given(_poly_cases())
    def test_poly(self, case):
        sig, f = case
        assert parse("poly", format_poly(f), sig) == f
        assert value_from_json(value_to_json(f)) == f

    @settings(max_examples=60, deadline=None)
    @given(_vfield_cases())
    def test_vfield(self, case):
        sig, x = case
        assert parse("vfield", format_vfield(x), sig) == x
        assert value_from_json(value_to_json(x)) == x

    @settings(max_examples=60, deadline=None)
    @given(_symbol_cases())
    def test_symbol(self, case):
        sig, weight, s = case
        out = parse("symbol", format_symbol(s), sig, weight=weight)
        assert out == s or (out.is_zero() and s.is_zero())
        doc_out = value_from_json(value_to_json(s))
        assert doc_out == s or (doc_out.is_zero() and s.is_zero())

    @settings(max_examples=60, deadline=None)
    @given(_operator_cases())
    def test_operator(self, case):
        sig, lam, mu, d = case
        assert parse("operator", format_operator(d), sig, lam=lam, mu=mu) == d
        assert value_from_json(value_to_json(d)) == d
