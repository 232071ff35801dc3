"""Alexander polynomials of torus and cable knots and their torsion coefficients.

For a knot K with symmetrized Alexander polynomial Delta(t) = sum a_i t^i
(a_i = a_{-i}, Delta(1) = 1), the torsion coefficients are

    t_i = sum_{j >= 1} j * a_{i+j},

and conversely a_i = t_{i-1} - 2 t_i + t_{i+1} for i > 0, with a_0 pinned by
Delta(1) = 1.  When K admits an L-space surgery the sequence (t_0, ..., t_g)
is nonincreasing with steps 0 or -1 and ends at t_g = 0; validate_torsion
enforces exactly those constraints.

For such K, the d-invariants of a large p/q surgery (p/q >= 2g-1) are

    d(S^3_K(p/q), i) = d(L(p,q), i)
                       - 2 max{ t_floor(i/q), t_floor((p+q-1-i)/q) },

with the torsion sequence read as zero beyond its length.

The knot grammar used across the package (and the CLI) is `T(p,q)` for torus
knots and `[m,n;p,q]` for the (m,n) cable (winding number n) of T(p,q), with
cable Alexander polynomial Delta_{T(p,q)}(t^n) * Delta_{T(m,n)}(t).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache

from .lens import d_lens
from .numtheory import gcd

__all__ = [
    "AlexPoly",
    "CableKnot",
    "TorsionError",
    "TorusKnot",
    "alex_cable",
    "alex_from_torsion",
    "alex_poly",
    "alex_torus",
    "catalog",
    "d_surgery",
    "genus",
    "parse_knot",
    "torsion_from_alex",
    "validate_torsion",
]


class TorsionError(ValueError):
    """A sequence failed the torsion-coefficient constraints."""


@dataclass(frozen=True)
class AlexPoly:
    """Symmetrized Alexander polynomial, stored as (a_0, a_1, ..., a_g)."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs or any(not isinstance(c, int) for c in self.coeffs):
            raise ValueError("AlexPoly needs a nonempty tuple of integers")
        if len(self.coeffs) > 1 and self.coeffs[-1] == 0:
            raise ValueError("leading coefficient a_g must be nonzero")
        if self.eval_one() != 1:
            raise ValueError("Alexander polynomial must satisfy Delta(1) = 1")

    @property
    def degree(self):
        """Top degree g; equals the genus for L-space knots."""
        return len(self.coeffs) - 1

    def coeff(self, i):
        """a_i, with a_{-i} = a_i and zero beyond degree g."""
        i = abs(i)
        return self.coeffs[i] if i <= self.degree else 0

    def eval_one(self):
        return self.coeffs[0] + 2 * sum(self.coeffs[1:])

    def full_coeffs(self):
        """(a_{-g}, ..., a_0, ..., a_g) as a plain list."""
        return [self.coeff(i) for i in range(-self.degree, self.degree + 1)]

    def __str__(self):
        if self.degree == 0:
            return "1"
        terms = []
        for i in range(self.degree, -self.degree - 1, -1):
            c = self.coeff(i)
            if c == 0:
                continue
            sign = "-" if c < 0 else ("+" if terms else "")
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                power = "t" if i == 1 else "t^%d" % i
                body = power if mag == 1 else "%d*%s" % (mag, power)
            terms.append(sign + body if not terms else "%s %s" % (sign, body))
        return " ".join(terms)


@dataclass(frozen=True)
class TorusKnot:
    p: int
    q: int

    def __str__(self):
        return "T(%d,%d)" % (self.p, self.q)


@dataclass(frozen=True)
class CableKnot:
    """The (m,n) cable, winding number n, of a torus knot companion."""

    m: int
    n: int
    companion: TorusKnot

    def __str__(self):
        return "[%d,%d;%d,%d]" % (self.m, self.n, self.companion.p, self.companion.q)


def _poly_quotient(num, den):
    """Exact quotient of dense little-endian integer polynomials, den monic."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for j, dv in enumerate(den):
                num[k + j] -= c * dv
    if any(num):
        raise ValueError("polynomial division left a remainder")
    return out


def _from_full(full):
    """Build an AlexPoly from coefficients over [-g, g], checking symmetry."""
    n = len(full)
    if n % 2 == 0:
        raise ValueError("full coefficient list must have odd length")
    g = n // 2
    if full != full[::-1]:
        raise ValueError("Alexander coefficients must be symmetric")
    return AlexPoly(tuple(full[g:]))


def alex_torus(p, q):
    """Alexander polynomial of T(p,q): (t^{pq}-1)(t-1) / ((t^p-1)(t^q-1)).

    Computed by exact polynomial long division and symmetrized; the degree is
    (p-1)(q-1)/2, the genus of the torus knot.
    """
    if not (p > q >= 2):
        raise ValueError("torus knot needs p > q >= 2, got T(%d,%d)" % (p, q))
    if gcd(p, q) != 1:
        raise ValueError("torus knot needs gcd(p,q) = 1, got T(%d,%d)" % (p, q))
    num = [0] * (p * q + 2)
    num[0], num[1], num[p * q], num[p * q + 1] = 1, -1, -1, 1
    den = [0] * (p + q + 1)
    den[0], den[p], den[q], den[p + q] = 1, -1, -1, 1
    quo = _poly_quotient(num, den)
    poly = _from_full(quo)
    assert poly.degree == (p - 1) * (q - 1) // 2
    return poly


def alex_cable(m, n, companion):
    """Alexander polynomial of the (m,n) cable of a torus knot.

    Delta(t) = Delta_companion(t^n) * Delta_{T(m,n)}(t); the degree is
    n * g(companion) + (m-1)(n-1)/2.
    """
    if n < 2:
        raise ValueError("cable winding number must be >= 2, got n=%d" % n)
    if m < 2 or m == n or gcd(m, n) != 1:
        raise ValueError("cable needs coprime m, n >= 2, m != n, got (%d,%d)" % (m, n))
    comp = alex_torus(companion.p, companion.q)
    tors = alex_torus(max(m, n), min(m, n))
    stretched = [0] * (2 * n * comp.degree + 1)
    for j in range(-comp.degree, comp.degree + 1):
        stretched[n * (j + comp.degree)] = comp.coeff(j)
    factor = tors.full_coeffs()
    prod = [0] * (len(stretched) + len(factor) - 1)
    for i, u in enumerate(stretched):
        if u:
            for j, v in enumerate(factor):
                prod[i + j] += u * v
    poly = _from_full(prod)
    assert poly.degree == n * comp.degree + (m - 1) * (n - 1) // 2
    return poly


def torsion_from_alex(poly):
    """Torsion coefficients (t_0, ..., t_g) with t_i = sum_{j>=1} j*a_{i+j}."""
    g = poly.degree
    return tuple(
        sum(j * poly.coeff(i + j) for j in range(1, g - i + 1)) for i in range(g + 1)
    )


def validate_torsion(seq):
    """Check the L-space torsion constraints; return the sequence as a tuple.

    Requires t_s >= 0, steps t_s >= t_{s+1} >= t_s - 1, and a trailing 0.
    Raises TorsionError naming the first failing index.
    """
    t = tuple(seq)
    if not t:
        raise TorsionError("torsion sequence must be nonempty")
    for s, v in enumerate(t):
        if not isinstance(v, int):
            raise TorsionError("t_%d = %r is not an integer" % (s, v))
        if v < 0:
            raise TorsionError("t_%d = %d is negative" % (s, v))
    for s in range(len(t) - 1):
        if not t[s] >= t[s + 1] >= t[s] - 1:
            raise TorsionError(
                "step t_%d = %d -> t_%d = %d is not 0 or -1" % (s, t[s], s + 1, t[s + 1])
            )
    if t[-1] != 0:
        raise TorsionError("torsion sequence must end at 0, got t_%d = %d" % (len(t) - 1, t[-1]))
    return t


def alex_from_torsion(seq):
    """Reconstruct the Alexander polynomial from torsion coefficients.

    a_i = t_{i-1} - 2 t_i + t_{i+1} for i > 0 (zero-padded t), and a_0 is
    pinned by Delta(1) = 1; inverse of torsion_from_alex.
    """
    t = validate_torsion(seq)

    def tt(j):
        return t[j] if 0 <= j < len(t) else 0

    upper = [tt(i - 1) - 2 * tt(i) + tt(i + 1) for i in range(1, len(t) + 1)]
    while len(upper) > 1 and upper[-1] == 0:
        upper.pop()
    if upper[-1] == 0:
        return AlexPoly((1,))
    a0 = 1 - 2 * sum(upper)
    return AlexPoly(tuple([a0] + upper))


def d_surgery(tseq, p, q, i):
    """d(S^3_K(p/q), i) for an L-space knot with torsion coefficients tseq.

    Valid when the surgery is an L-space, i.e. p/q >= 2g(K) - 1.
    """
    if gcd(p, q) != 1 or p < 1 or q < 1:
        raise ValueError("surgery slope needs coprime positive p, q, got (%d, %d)" % (p, q))
    if not 0 <= i < p:
        raise ValueError("Spin^c index i=%d out of range [0, %d)" % (i, p))

    def tt(j):
        return tseq[j] if j < len(tseq) else 0

    return d_lens(p, q, i) - 2 * max(tt(i // q), tt((p + q - 1 - i) // q))


_KNOT_RE_TORUS = re.compile(r"^T\((\d+),(\d+)\)$")
_KNOT_RE_CABLE = re.compile(r"^\[(\d+),(\d+);(\d+),(\d+)\]$")


def parse_knot(text):
    """Parse `T(p,q)` or `[m,n;p,q]` (whitespace-insensitive ASCII)."""
    compact = re.sub(r"\s+", "", text)
    m = _KNOT_RE_TORUS.match(compact)
    if m:
        return TorusKnot(int(m.group(1)), int(m.group(2)))
    m = _KNOT_RE_CABLE.match(compact)
    if m:
        a, b, c, d = (int(m.group(k)) for k in range(1, 5))
        return CableKnot(a, b, TorusKnot(c, d))
    raise ValueError("cannot parse knot %r (expected T(p,q) or [m,n;p,q])" % text)


def alex_poly(knot):
    """Alexander polynomial of a TorusKnot or CableKnot."""
    if isinstance(knot, TorusKnot):
        return alex_torus(knot.p, knot.q)
    if isinstance(knot, CableKnot):
        return alex_cable(knot.m, knot.n, knot.companion)
    raise TypeError("expected TorusKnot or CableKnot, got %r" % (knot,))


def genus(knot):
    """Genus, read off as the Alexander polynomial degree."""
    return alex_poly(knot).degree


@cache
def catalog():
    """The knots that half-integral finite surgeries can realize.

    Returns a tuple of (knot, torsion sequence) pairs: the trefoil, T(5,2),
    and the six cables that occur, in slope order of their first occurrence.
    """
    knots = (
        TorusKnot(3, 2),
        TorusKnot(5, 2),
        CableKnot(11, 2, TorusKnot(3, 2)),
        CableKnot(13, 2, TorusKnot(3, 2)),
        CableKnot(19, 2, TorusKnot(5, 2)),
        CableKnot(21, 2, TorusKnot(5, 2)),
        CableKnot(17, 3, TorusKnot(3, 2)),
        CableKnot(19, 3, TorusKnot(3, 2)),
    )
    return tuple((k, validate_torsion(torsion_from_alex(alex_poly(k)))) for k in knots)
