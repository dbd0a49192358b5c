"""The compiled and pure-Python term kernels implement the same contract.

Every exported kernel function is compared pointwise on random inputs.  The
module is skipped when the compiled extension is not built; the rest of the
suite then exercises the pure backend directly.
"""

import random
from fractions import Fraction

import pytest

from superquant import _termops_py as pure

compiled = pytest.importorskip("superquant._termops")

P, Q = 3, 4


def rand_terms(rng, nterms=6):
    out = {}
    for _ in range(nterms):
        key = (tuple(rng.randint(0, 3) for _ in range(P)), rng.randrange(1 << Q))
        out[key] = Fraction(rng.randint(1, 9), rng.choice([1, 2, 3, 5])) * rng.choice(
            [1, -1]
        )
    return out


def test_backend_labels():
    assert pure.BACKEND == "python"
    assert compiled.BACKEND == "cython"


def test_odd_merge_sign_agrees_on_all_small_masks():
    for a in range(1 << 6):
        for b in range(1 << 6):
            assert compiled.odd_merge_sign(a, b) == pure.odd_merge_sign(a, b), (a, b)


def test_odd_below_agrees_on_all_small_masks():
    for mask in range(1 << 6):
        for pos in range(6):
            bit = 1 << pos
            assert compiled.odd_below(mask, bit) == pure.odd_below(mask, bit)


@pytest.mark.parametrize("seed", range(10))
def test_arithmetic_agrees(seed):
    rng = random.Random(seed)
    a = rand_terms(rng)
    b = rand_terms(rng)
    assert compiled.mul_terms(a, b) == pure.mul_terms(a, b)
    assert compiled.add_terms(a, b) == pure.add_terms(a, b)
    assert compiled.sub_terms(a, b) == pure.sub_terms(a, b)
    assert compiled.neg_terms(a) == pure.neg_terms(a)
    for c in (Fraction(0), Fraction(2, 3), Fraction(-5)):
        assert compiled.scale_terms(a, c) == pure.scale_terms(a, c)


@pytest.mark.parametrize("seed", range(10))
def test_derivatives_agree(seed):
    rng = random.Random(100 + seed)
    a = rand_terms(rng)
    for ix in range(P):
        assert compiled.partial_even_terms(a, ix) == pure.partial_even_terms(a, ix)
    for pos in range(Q):
        bit = 1 << pos
        assert compiled.partial_odd_terms(a, bit) == pure.partial_odd_terms(a, bit)


@pytest.mark.parametrize("seed", range(5))
def test_cancellation_paths_agree(seed):
    # products arranged to collide on keys so the zero-sum branch is hit
    rng = random.Random(200 + seed)
    a = rand_terms(rng, nterms=4)
    neg = pure.neg_terms(a)
    assert compiled.add_terms(a, neg) == {}
    assert pure.add_terms(a, neg) == {}
    assert compiled.sub_terms(a, a) == {}
    b = {key: c for key, c in a.items()}
    assert compiled.mul_terms(a, b) == pure.mul_terms(a, b)
