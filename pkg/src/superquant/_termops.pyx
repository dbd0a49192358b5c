# cython: language_level=3
"""Term-map kernels for Grassmann-polynomial arithmetic (compiled backend).

Same contract as ``_termops_py``: term maps are
``{(even_exponents, odd_mask): coefficient}`` dicts with exact-rational
coefficients and no stored zeros.  The win over the pure twin is in the loop
and bit-twiddling overhead; coefficient arithmetic stays exact Python objects.
"""

BACKEND = "cython"


cdef inline int _popcount(unsigned long long x):
    cdef int n = 0
    while x:
        x &= x - 1
        n += 1
    return n


cdef inline int _merge_sign(unsigned long long a, unsigned long long b):
    # caller guarantees a & b == 0
    cdef int inv = 0
    cdef unsigned long long low
    while b:
        low = b & (~b + 1)
        inv += _popcount(a >> _bitlen(low))
        b ^= low
    return -1 if inv & 1 else 1


cdef inline int _bitlen(unsigned long long x):
    cdef int n = 0
    while x:
        x >>= 1
        n += 1
    return n


def odd_merge_sign(a, b):
    """Sign of sorting the concatenation of ascending odd sets a, b; 0 on overlap."""
    cdef unsigned long long ua = a, ub = b
    if ua & ub:
        return 0
    return _merge_sign(ua, ub)


def odd_below(mask, bit):
    """Number of generators in mask strictly below the given single-bit position."""
    cdef unsigned long long um = mask, ubit = bit
    return _popcount(um & (ubit - 1))


def mul_terms(dict A, dict B):
    """Product of two term maps over the same signature."""
    cdef dict out = {}
    cdef unsigned long long ma, mb
    cdef int s
    cdef tuple ea, eb, key
    for ka, ca in A.items():
        ea = <tuple> (<tuple> ka)[0]
        ma = <unsigned long long> (<tuple> ka)[1]
        for kb, cb in B.items():
            mb = <unsigned long long> (<tuple> kb)[1]
            if ma & mb:
                continue
            eb = <tuple> (<tuple> kb)[0]
            s = _merge_sign(ma, mb)
            key = (tuple([x + y for x, y in zip(ea, eb)]), ma | mb)
            c = ca * cb if s > 0 else -(ca * cb)
            prev = out.get(key)
            if prev is None:
                out[key] = c
            else:
                tot = prev + c
                if tot:
                    out[key] = tot
                else:
                    del out[key]
    return out


def add_terms(dict A, dict B):
    cdef dict out = dict(A)
    for key, c in B.items():
        prev = out.get(key)
        if prev is None:
            out[key] = c
        else:
            tot = prev + c
            if tot:
                out[key] = tot
            else:
                del out[key]
    return out


def sub_terms(dict A, dict B):
    cdef dict out = dict(A)
    for key, c in B.items():
        prev = out.get(key)
        if prev is None:
            out[key] = -c
        else:
            tot = prev - c
            if tot:
                out[key] = tot
            else:
                del out[key]
    return out


def neg_terms(dict A):
    cdef dict out = {}
    for key, c in A.items():
        out[key] = -c
    return out


def scale_terms(dict A, c):
    cdef dict out = {}
    if not c:
        return out
    for key, v in A.items():
        out[key] = c * v
    return out


def partial_even_terms(dict A, int ix):
    """Left derivative along even coordinate at 0-based position ix."""
    cdef dict out = {}
    cdef tuple e
    for key, c in A.items():
        e = <tuple> (<tuple> key)[0]
        a = e[ix]
        if a:
            out[(e[:ix] + (a - 1,) + e[ix + 1 :], (<tuple> key)[1])] = a * c
    return out


def partial_odd_terms(dict A, bit):
    """Left derivative along the odd generator with the given single-bit mask."""
    cdef dict out = {}
    cdef unsigned long long ubit = bit, m
    for key, c in A.items():
        m = <unsigned long long> (<tuple> key)[1]
        if m & ubit:
            out[((<tuple> key)[0], m ^ ubit)] = (
                -c if _popcount(m & (ubit - 1)) & 1 else c
            )
    return out
