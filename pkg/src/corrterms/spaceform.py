"""Trefoil Dehn fillings of tetrahedral and icosahedral type.

T(p/q) denotes the p/q Dehn filling of the right-handed trefoil exterior.
It is a spherical space form of tetrahedral or icosahedral type exactly when

    p = 6q + zeta * r,   zeta in {+1, -1},   r in {3, 5},   gcd(q, r) = 1,

and these (plus orientation reversals) are the only space form types a
half-integral surgery could produce, which is why the search downstream
enumerates them.  Note p is automatically odd and coprime to q.

Correction terms differ from those of the lens space with the same surgery
parameters by a shift of -2 on the first q Spin^c indices:

    d(T(p/q), i) = d(L(p,q), i) - 2 * chi(q, i),

with chi(q, .) the indicator function of [0, q).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .lens import d_lens, scaled_vector
from .numtheory import gcd

__all__ = ["TrefoilFilling", "chi", "d_trefoil", "enumerate_space_forms", "scaled_trefoil_vector"]


@dataclass(frozen=True)
class TrefoilFilling:
    """A filling slope p/q with p = 6q + zeta*r, r in {3,5}, gcd(q,r)=1."""

    p: int
    q: int
    zeta: int
    r: int

    @classmethod
    def from_pq(cls, p, q):
        if q < 1:
            raise ValueError("filling parameter q must be positive, got %d" % q)
        diff = p - 6 * q
        if abs(diff) not in (3, 5):
            raise ValueError("T(%d/%d) is not a tetrahedral or icosahedral space form" % (p, q))
        zeta = 1 if diff > 0 else -1
        r = abs(diff)
        if gcd(q, r) != 1:
            raise ValueError("T(%d/%d) needs gcd(q, %d) = 1" % (p, q, r))
        assert gcd(p, q) == 1
        return cls(p, q, zeta, r)


def enumerate_space_forms(p_min, p_max):
    """All TrefoilFilling slopes with p in [p_min, p_max], sorted by (p, q).

    A single p can admit two fillings (e.g. p = 9 gives q = 1 and q = 2);
    both are emitted and the caller decides what to do with them.
    """
    if not 1 <= p_min <= p_max:
        raise ValueError("need 1 <= p_min <= p_max, got [%d, %d]" % (p_min, p_max))
    forms = []
    for p in range(p_min, p_max + 1):
        for zeta in (1, -1):
            for r in (3, 5):
                q, rem = divmod(p - zeta * r, 6)
                if rem == 0 and q >= 1 and gcd(q, r) == 1:
                    forms.append(TrefoilFilling(p, q, zeta, r))
    forms.sort(key=lambda f: (f.p, f.q))
    return forms


def chi(q, i):
    """Indicator of the index window [0, q)."""
    return 1 if 0 <= i < q else 0


def d_trefoil(p, q, i):
    """d(T(p/q), i) for a canonical index i in [0, p)."""
    if not 0 <= i < p:
        raise ValueError("Spin^c index i=%d out of range [0, %d)" % (i, p))
    return d_lens(p, q, i) - 2 * chi(q, i)


@lru_cache(maxsize=8)
def scaled_trefoil_vector(p, q):
    """All of d(T(p/q), .) as (nums, den), sharing the lens-vector cache.

    The small fixed cache keeps the O(p) shift from being rebuilt for every
    multiplier the search tries against one filling.
    """
    nums, den = scaled_vector(p, q)
    shift = 2 * den
    return tuple(n - shift if i < q else n for i, n in enumerate(nums)), den
