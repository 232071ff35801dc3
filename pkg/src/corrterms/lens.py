"""Correction terms of lens spaces, exactly.

L(p,q) is the lens space obtained by p/q surgery on the unknot; its Spin^c
structures are indexed by residues i mod p.  The correction term obeys the
recursion

    d(S^3) = 0,
    d(L(p,q), i) = -1/4 + (2i+1-p-q)^2 / (4pq) - d(L(q,r), j),

where r = p mod q and j = i mod q, so each step is one step of the Euclidean
algorithm and the recursion terminates at p = 1.  For q = 1 and q = 2 there
are closed forms,

    d(L(p,1), i) = -1/4 + (2i-p)^2 / (4p),
    d(L(p,2), i) = (2i-p-1)^2 / (8p) - (1+(-1)^i) / 4,

kept here as independent oracles for the recursion.

Conjugation of Spin^c structures acts on indices by i |-> p+q-1-i (mod p);
when p is odd it has exactly one fixed point, center(p, q).

Indices are canonicalized to [0, p) at module boundaries, while the formulas
themselves are valid on the larger window [0, p+q) that the recursion's
intermediate expressions live in; on the overlap the two readings agree
(d at i >= p equals d at i - p), which the tests check.
"""

from __future__ import annotations

import os
import threading
from collections import OrderedDict

from .numtheory import Rational, gcd, lcm, mod_reduce

__all__ = [
    "CACHE_ENV",
    "center",
    "conj",
    "d_lens",
    "d_lens_closed_q1",
    "d_lens_closed_q2",
    "d_lens_vector",
    "descent_chain",
    "scaled_vector",
]

# Environment variable capping the number of cached scaled vectors (0 disables
# the cache entirely; correctness never depends on it).
CACHE_ENV = "CORRTERMS_CACHE_MAX"
_DEFAULT_CACHE_CAP = 1024

_cache_lock = threading.Lock()
_vector_cache: OrderedDict = OrderedDict()


def _require_pair(p, q):
    if p < 1 or q < 1:
        raise ValueError("lens space parameters must be positive, got (%d, %d)" % (p, q))
    if gcd(p, q) != 1:
        raise ValueError("lens space parameters must be coprime, got (%d, %d)" % (p, q))


def _require_index(i, bound):
    if not 0 <= i < bound:
        raise ValueError("Spin^c index i=%d out of range [0, %d)" % (i, bound))


def d_lens(p, q, i):
    """d(L(p,q), i) by stateless Euclidean descent, O(log p) time.

    q may exceed p (it is reduced mod p on entry, together with i); the
    index may live in the extended window [0, p+q).
    """
    _require_pair(p, q)
    _require_index(i, p + q)
    if p == 1:
        return Rational(0)
    if q >= p:
        q, i = q % p, i % p
    total = Rational(0)
    sign = 1
    while p > 1:
        total += sign * (Rational((2 * i + 1 - p - q) ** 2, 4 * p * q) - Rational(1, 4))
        p, q, i, sign = q, p % q, i % q, -sign
    return total


def descent_chain(p, q):
    """The (p, q) pairs visited by d_lens, ending at p = 1 (instrumentation)."""
    _require_pair(p, q)
    if q >= p > 1:
        q = q % p
    chain = [(p, q)]
    while p > 1:
        p, q = q, p % q
        chain.append((p, q))
    return chain


def d_lens_closed_q1(p, i):
    """Closed form d(L(p,1), i) = -1/4 + (2i-p)^2/(4p), for i in [0, p+1)."""
    if p < 1:
        raise ValueError("p must be positive, got %d" % p)
    _require_index(i, p + 1)
    return Rational((2 * i - p) ** 2, 4 * p) - Rational(1, 4)


def d_lens_closed_q2(p, i):
    """Closed form d(L(p,2), i) = (2i-p-1)^2/(8p) - (1+(-1)^i)/4, p odd."""
    if p < 1 or p % 2 == 0:
        raise ValueError("q=2 closed form needs odd positive p, got %d" % p)
    _require_index(i, p + 2)
    return Rational((2 * i - p - 1) ** 2, 8 * p) - Rational(1 + (-1) ** i, 4)


def conj(p, q, i):
    """Conjugate Spin^c index: the representative of p+q-1-i in [0, p)."""
    _require_pair(p, q)
    _require_index(i, p + q)
    return mod_reduce(p + q - 1 - i, p)


def center(p, q):
    """The unique conjugation-fixed index of L(p,q) for odd p.

    Equals (p+q-1)/2 for even q and (q-1)/2 for odd q, reduced mod p.
    """
    if p % 2 == 0:
        raise ValueError("conjugation has a unique fixed point only for odd p, got p=%d" % p)
    _require_pair(p, q)
    if q % 2 == 0:
        return mod_reduce((p + q - 1) // 2, p)
    return mod_reduce((q - 1) // 2, p)


def _cache_cap():
    raw = os.environ.get(CACHE_ENV)
    if raw is None:
        return _DEFAULT_CACHE_CAP
    cap = int(raw)
    if cap < 0:
        raise ValueError("%s must be >= 0, got %d" % (CACHE_ENV, cap))
    return cap


def scaled_vector(p, q):
    """All of d(L(p,q), .) at once, as (nums, den) with d(L(p,q), i) = nums[i]/den.

    One bottom-up pass over the Euclidean chain costs O(p) integer operations
    in total, which is what makes scanning every Spin^c structure of a lens
    space cheap inside the search.  Results are LRU-cached (cap set by the
    CORRTERMS_CACHE_MAX environment variable); d_lens itself never touches
    the cache, and disabling the cache changes nothing but speed.
    """
    _require_pair(p, q)
    if q >= p > 1:
        q = q % p
    key = (p, q)
    with _cache_lock:
        if key in _vector_cache:
            _vector_cache.move_to_end(key)
            return _vector_cache[key]
    if p == 1:
        value = ((0,), 1)
    elif q == 1:
        nums = tuple((2 * i - p) ** 2 - p for i in range(p))
        value = _reduced(nums, 4 * p)
    else:
        r = p % q
        sub_nums, sub_den = scaled_vector(q, r)
        den = lcm(4 * p * q, sub_den)
        on_pq = den // (4 * p * q)
        on_sub = den // sub_den
        quarter = den // 4
        nums = tuple(
            on_pq * (2 * i + 1 - p - q) ** 2 - quarter - on_sub * sub_nums[i % q]
            for i in range(p)
        )
        value = _reduced(nums, den)
    cap = _cache_cap()
    if cap > 0:
        with _cache_lock:
            _vector_cache[key] = value
            _vector_cache.move_to_end(key)
            while len(_vector_cache) > cap:
                _vector_cache.popitem(last=False)
    return value


def _reduced(nums, den):
    g = den
    for v in nums:
        g = gcd(g, v)
        if g == 1:
            return nums, den
    return tuple(v // g for v in nums), den // g


def d_lens_vector(p, q):
    """[d(L(p,q), 0), ..., d(L(p,q), p-1)] as exact rationals."""
    nums, den = scaled_vector(p, q)
    return [Rational(n, den) for n in nums]
