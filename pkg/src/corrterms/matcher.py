"""Search for knots whose half-integral surgeries are spherical space forms.

A p/2 surgery on an L-space knot K (p odd) can only be the space form
eps*T(p/q) if the Spin^c parametrizations of the two descriptions line up.
Every candidate identification is an affine map of Z/pZ,

    phi_a(i) = a * (i - C(p,2)) + C(p,q)  (mod p),
    0 < a < p/2,   gcd(p, a) = 1,

sending the conjugation-fixed index of L(p,2) to that of L(p,q).  Matching
correction terms pointwise forces

    delta(i) := d(L(p,2), i) - eps * d(T(p/q), phi_a(i)) = 2 * t_s(i),
    s(i) = min(floor(i/2), floor((p+1-i)/2)),

for a torsion sequence (t_0, ..., t_M) obeying the L-space constraints; the
sequence then determines the Alexander polynomial of any matching knot.
try_match decides one (p, q, eps, a) candidate, front-loading the two central
indices i = (p+1)/2, (p+1)/2 + 1, whose delta values must be 0 and 0-or-2;
almost every candidate dies there, which is what makes the full search over
p <= 6000 cheap.

Two independent consistency layers guard the search:

  * prune_a_candidates restricts a to windows around mp/6 (m = 0..3) of
    half-width sqrt(4rp/3); a matching a must lie there, and the pruned and
    unpruned searches are required to agree on overlapping ranges.
  * check_delta_step verifies an exact closed form, linear in k up to an
    explicitly periodic term, for consecutive central delta differences
    delta((p+1)/2 + 6k + 1) - delta((p+1)/2 + 6k).

All arithmetic is exact; radicals and ranges are compared through squared
integer inequalities, never floating point.
"""

from __future__ import annotations

import multiprocessing
import random
from dataclasses import dataclass
from functools import lru_cache

from .knots import alex_from_torsion, catalog, d_surgery
from .lens import center, d_lens, d_lens_closed_q2
from .numtheory import Rational, gcd, isqrt, lcm, mod_reduce, theta, theta_bar
from .spaceform import TrefoilFilling, chi, d_trefoil, enumerate_space_forms, scaled_trefoil_vector

__all__ = [
    "CLASSIFICATION_TABLE",
    "DeltaStep",
    "MatchResult",
    "Rejection",
    "SEARCH_CEILING",
    "check_delta_step",
    "delta",
    "exclusion_bound",
    "max_step_k",
    "phi",
    "prune_a_candidates",
    "run_search",
    "sample_delta_steps",
    "target_name",
    "try_match",
    "verify_classification",
    "window_m",
]

# Default search ceiling.  Beyond it a sharper case analysis rules out all
# matches; the fully rigorous (much larger) threshold is exclusion_bound(r).
SEARCH_CEILING = 6000


def _require_context(p, q, eps, a):
    form = TrefoilFilling.from_pq(p, q)
    if eps not in (1, -1):
        raise ValueError("orientation eps must be +1 or -1, got %r" % (eps,))
    if not (0 < a and 2 * a < p):
        raise ValueError("need 0 < a < p/2, got a=%d for p=%d" % (a, p))
    if gcd(p, a) != 1:
        raise ValueError("need gcd(p, a) = 1, got a=%d for p=%d" % (a, p))
    return form


def phi(p, q, a, i):
    """The affine identification phi_a(i) = a*(i - C(p,2)) + C(p,q) mod p."""
    if gcd(p, a) != 1:
        raise ValueError("need gcd(p, a) = 1, got a=%d for p=%d" % (a, p))
    if not 0 <= i < p:
        raise ValueError("Spin^c index i=%d out of range [0, %d)" % (i, p))
    return mod_reduce(a * (i - center(p, 2)) + center(p, q), p)


def delta(p, q, eps, a, i):
    """delta(i) = d(L(p,2), i) - eps * d(T(p/q), phi_a(i)), exactly."""
    _require_context(p, q, eps, a)
    return d_lens_closed_q2(p, i) - eps * d_trefoil(p, q, phi(p, q, a, i))


@dataclass(frozen=True)
class Rejection:
    """Why a candidate (p, q, eps, a) fails, and at which index (None when
    the rejection is not tied to a single index)."""

    i: int | None
    reason: str


@lru_cache(maxsize=64)
def _fibers(p):
    """Indices of [0, p) grouped by s(i) = min(floor(i/2), floor((p+1-i)/2))."""
    top = (p + 1) // 4
    buckets = [[] for _ in range(top + 1)]
    for i in range(p):
        buckets[min(i // 2, (p + 1 - i) // 2)].append(i)
    return tuple(tuple(b) for b in buckets)


def try_match(p, q, eps, a):
    """Decide one candidate: a torsion sequence tuple, or a Rejection.

    The match condition is delta(i) = 2 * t_s(i) for every i in [0, p), with
    (t_0, ..., t_M) a valid torsion sequence (M = floor((p+1)/4)) and t_M = 0
    (a p/2 L-space surgery forces 2g-1 <= p/2, hence g <= M).  Indices are
    visited cheapest-rejection-first: the center (p+1)/2, where delta must
    vanish; its neighbor, where delta must be 0 or 2; then the rest in
    increasing s order, aborting on the first violation.

    One scope rule sits on top of the arithmetic: a candidate whose staircase
    comes out as the trefoil's (1, 0) is rejected unless p = 7.  Knot Floer
    homology detects the trefoil, so such a match can only be a surgery on
    the trefoil itself -- a torus-knot filling, classical and already
    classified -- and of those only the exceptional 7/2 case belongs to the
    table this search is after.
    """
    _require_context(p, q, eps, a)
    nums_t, den_t = scaled_trefoil_vector(p, q)
    den2 = 8 * p
    scale = lcm(den2, den_t)
    f2 = scale // den2
    ft = scale // den_t
    two_scale = 2 * scale
    c2 = (p + 1) // 2
    cq = center(p, q)

    def delta_num(i, ph):
        lens2 = (2 * i - p - 1) ** 2 - (4 * p if i % 2 == 0 else 0)
        return lens2 * f2 - eps * nums_t[ph] * ft

    def t_value(i, ph):
        v = delta_num(i, ph)
        if v < 0:
            return None, Rejection(i, "negative delta value")
        if v % two_scale:
            reason = "odd delta value" if v % scale == 0 else "non-integer delta value"
            return None, Rejection(i, reason)
        return v // two_scale, None

    top = (p + 1) // 4
    values = {}

    # Center probe: s((p+1)/2) = M and t_M = 0, so delta must vanish there.
    v, rej = t_value(c2, cq)
    if rej is not None:
        return rej
    if v != 0:
        return Rejection(c2, "center delta value must be 0")
    values[c2] = 0

    # Neighbor probe: s((p+3)/2) is M or M-1, so delta must be 0 or 2.
    if c2 + 1 < p:
        i2 = c2 + 1
        v, rej = t_value(i2, (cq + a) % p)
        if rej is not None:
            return rej
        if v > 1 or (v == 1 and min(i2 // 2, (p + 1 - i2) // 2) == top):
            return Rejection(i2, "center-adjacent delta value must be 0 or 2")
        values[i2] = v

    tseq = [None] * (top + 1)
    for s, fiber in enumerate(_fibers(p)):
        t_here = None
        for i in fiber:
            if i in values:
                v = values[i]
            else:
                v, rej = t_value(i, (a * (i - c2) + cq) % p)
                if rej is not None:
                    return rej
            if t_here is None:
                t_here = v
            elif v != t_here:
                return Rejection(i, "delta value not constant on its s-fiber")
        tseq[s] = t_here
        if s > 0 and not tseq[s - 1] >= t_here >= tseq[s - 1] - 1:
            return Rejection(fiber[0], "torsion step must be 0 or -1")
    while len(tseq) > 1 and tseq[-2] == 0:
        tseq.pop()
    tseq = tuple(tseq)
    if tseq == (1, 0) and p != 7:
        return Rejection(None, "trefoil staircase: self-surgery outside the 7/2 case")
    return tseq


def window_m(q, zeta, r, a):
    """The unique m with 0 <= a - m*q + h < q, h = (theta_bar(q)*zeta*r + q - 1)/2."""
    h = (theta_bar(q) * zeta * r + q - 1) // 2
    return (a + h) // q


def prune_a_candidates(p, q, zeta, r):
    """Candidate multipliers a near mp/6: (6a - mp)^2 * 3 < 144*r*p, m = 0..3.

    The union over m is a superset of the a that can possibly match (any
    matching a satisfies the inequality for the m picked out by window_m),
    so pruning never loses a result; for p below roughly 192*r the windows
    cover all of (0, p/2) and pruning is vacuous.
    """
    limit = (p - 1) // 2
    radius = isqrt(48 * r * p - 1)
    out = set()
    for m in range(4):
        lo = max(1, -((radius - m * p) // 6))
        hi = min(limit, (m * p + radius) // 6)
        out.update(a for a in range(lo, hi + 1) if gcd(a, p) == 1)
    return sorted(out)


def exclusion_bound(r):
    """The rigorous threshold 192*r*(36r+2)^2 beyond which no match can exist.

    The practical ceiling SEARCH_CEILING = 6000 comes from a sharper case
    analysis; this bound is what is provable by the coarse estimates alone.
    """
    if r not in (3, 5):
        raise ValueError("r must be 3 or 5, got %r" % (r,))
    return 192 * r * (36 * r + 2) ** 2


def max_step_k(p, r):
    """Largest k usable in check_delta_step, or -1 if none.

    k qualifies iff (48k+8)^2 * 3rp < (p - 13r + 6)^2, the squared form of
    the requirement that the probed indices stay inside one period.
    """
    c = p - 13 * r + 6
    if c <= 0:
        return -1
    x = isqrt(c * c // (3 * r * p)) + 1
    while x * x * 3 * r * p >= c * c:
        x -= 1
    if x < 8:
        return -1
    return (x - 8) // 48


@dataclass(frozen=True)
class DeltaStep:
    """One verified instance of the central delta-difference identity."""

    p: int
    q: int
    zeta: int
    r: int
    eps: int
    a: int
    m: int
    k: int
    i_k: int
    j_k: int
    A: Rational
    B: Rational
    C_k: Rational
    lhs: Rational
    rhs: Rational
    holds: bool


def check_delta_step(p, q, eps, a, k):
    """Verify delta((p+1)/2 + 6k + 1) - delta((p+1)/2 + 6k) = A*k + B + C_k.

    With m = window_m(q, zeta, r, a), s = q mod r, and

        i_k = (theta_bar(q)*p + q - 1)/2 + 6ka - kmp,
        j_k = (theta_bar(q)*zeta*r + q - 1)/2 + 6ka - kmp,

    the coefficients are

        A   = eps*zeta * 2*(6a - mp)^2 / (pr) + 6/p,
        B   = eps * (zeta*(6a - mp)^2 / (6pr) - (m^2 - 6m*theta(q)) / 6),
        C_k = eps*zeta * (d(L(r,s), j_k + a - mq) - ... at j_k)
              + 1/(2p) + 1/2 - theta((p+1)/2)
              + 2*eps*chi(q, i_k + a) - 2*eps*chi(q, i_k),

    all indices reduced to canonical representatives before the L(r,s) and
    chi evaluations (i_k + a can wrap past p, and the identity needs the
    wrapped index).  k must lie in [0, max_step_k(p, r)]; for k >= 1 the
    multiplier must additionally sit inside its pruning window, which is
    where every searched candidate lives anyway.  The identity is exact, so
    holds=False would mean an implementation bug, not a near miss.
    """
    form = _require_context(p, q, eps, a)
    zeta, r = form.zeta, form.r
    kmax = max_step_k(p, r)
    if not 0 <= k <= kmax:
        raise ValueError("k=%d out of range [0, %d] for p=%d, r=%d" % (k, kmax, p, r))
    m = window_m(q, zeta, r, a)
    if k >= 1 and (6 * a - m * p) ** 2 * 3 >= 144 * r * p:
        raise ValueError("k >= 1 needs a inside its pruning window, got a=%d" % a)
    assert 0 <= m <= 3
    s = q % r
    shift = k * (6 * a - m * p)
    i_k = (theta_bar(q) * p + q - 1) // 2 + shift
    j_k = (theta_bar(q) * zeta * r + q - 1) // 2 + shift
    w = 6 * a - m * p
    A = eps * zeta * Rational(2 * w * w, p * r) + Rational(6, p)
    B = eps * (zeta * Rational(w * w, 6 * p * r) - Rational(m * m - 6 * m * theta(q), 6))
    C_k = (
        eps * zeta * (d_lens(r, s, j_k % r) - d_lens(r, s, (j_k + a - m * q) % r))
        + Rational(1, 2 * p)
        + Rational(1, 2)
        - theta((p + 1) // 2)
        + 2 * eps * chi(q, (i_k + a) % p)
        - 2 * eps * chi(q, i_k % p)
    )
    c = (p + 1) // 2
    lhs = delta(p, q, eps, a, c + 6 * k + 1) - delta(p, q, eps, a, c + 6 * k)
    rhs = A * k + B + C_k
    return DeltaStep(p, q, zeta, r, eps, a, m, k, i_k, j_k, A, B, C_k, lhs, rhs, lhs == rhs)


def sample_delta_steps(samples, seed, p_max=2000):
    """Deterministically sample valid tuples and run check_delta_step on each."""
    if samples < 1:
        raise ValueError("samples must be positive, got %d" % samples)
    pool = [
        (form, max_step_k(form.p, form.r))
        for form in enumerate_space_forms(1, p_max)
        if max_step_k(form.p, form.r) >= 0
    ]
    if not pool:
        raise ValueError("no space form below p_max=%d admits a valid k" % p_max)
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        form, kmax = pool[rng.randrange(len(pool))]
        p, q, zeta, r = form.p, form.q, form.zeta, form.r
        eps = 1 if rng.random() < 0.5 else -1
        k = rng.randint(0, kmax)
        a = None
        while a is None:
            cand = rng.randrange(1, (p - 1) // 2 + 1)
            if gcd(p, cand) != 1:
                continue
            m = window_m(q, zeta, r, cand)
            if k >= 1 and (6 * cand - m * p) ** 2 * 3 >= 144 * r * p:
                continue
            a = cand
        out.append(check_delta_step(p, q, eps, a, k))
    return out


@dataclass(frozen=True)
class MatchResult:
    """A certified match: the p/2 surgery on a knot with these torsion
    coefficients is the space form eps*T(p/q), witnessed by every a listed."""

    p: int
    q: int
    zeta: int
    r: int
    eps: int
    a_witnesses: tuple
    tseq: tuple
    alex_coeffs: tuple
    knot: str
    target: str

    @property
    def slope(self):
        return "%d/2" % self.p


def target_name(p, q, eps):
    return ("-" if eps == -1 else "") + "T(%d/%d)" % (p, q)


def _identify(tseq, pairs):
    for knot, known in pairs:
        if tseq == known:
            return str(knot)
    return "unidentified"


def _certify(result):
    """Recompute both sides of the match pointwise; raise if anything differs."""
    p, q, eps = result.p, result.q, result.eps
    for a in result.a_witnesses:
        for i in range(p):
            lhs = d_surgery(result.tseq, p, 2, i)
            rhs = eps * d_trefoil(p, q, phi(p, q, a, i))
            if lhs != rhs:
                raise AssertionError(
                    "match (p=%d, q=%d, eps=%d, a=%d) fails certification at i=%d"
                    % (p, q, eps, a, i)
                )


def _search_filling(form, prune=True):
    """All MatchResults for one filling, both orientations."""
    p, q = form.p, form.q
    d_center_lens2 = d_lens_closed_q2(p, (p + 1) // 2)
    d_center_fill = d_trefoil(p, q, center(p, q))
    # a-independent form of the center probe: phi_a fixes the center for
    # every a, so one failed comparison kills a whole (p, q, eps) branch,
    # and enumerating candidate multipliers is only worth it for survivors.
    live = [eps for eps in (1, -1) if d_center_lens2 == eps * d_center_fill]
    if not live:
        return []
    if prune:
        candidates = prune_a_candidates(p, q, form.zeta, form.r)
    else:
        candidates = [a for a in range(1, (p - 1) // 2 + 1) if gcd(p, a) == 1]
    results = []
    for eps in live:
        found = {}
        for a in candidates:
            outcome = try_match(p, q, eps, a)
            if isinstance(outcome, tuple):
                found.setdefault(outcome, []).append(a)
        for tseq, witnesses in found.items():
            alex = alex_from_torsion(tseq)
            result = MatchResult(
                p=p,
                q=q,
                zeta=form.zeta,
                r=form.r,
                eps=eps,
                a_witnesses=tuple(witnesses),
                tseq=tseq,
                alex_coeffs=tuple(alex.coeffs),
                knot=_identify(tseq, catalog()),
                target=target_name(p, q, eps),
            )
            _certify(result)
            results.append(result)
    return results


def _drop_mirror_duplicates(results):
    """Collapse two presentations of one manifold into the positive one.

    A filling with p = 6q + 3 is the same manifold, reversed, as the filling
    with p = 6(q+1) - 3, so one surgery can match twice: with eps = +1
    against one presentation and eps = -1 against the other.  Both records
    certify; only the eps = +1 one is reported.
    """
    by_key = {}
    for res in results:
        by_key.setdefault((res.p, res.tseq), []).append(res)
    kept = []
    for group in by_key.values():
        positives = [res for res in group if res.eps == 1]
        kept.extend(positives if len(group) > 1 and positives else group)
    return kept


def _search_worker(args):
    form, prune = args
    return _search_filling(form, prune=prune)


def run_search(p_min, p_max, prune=True, jobs=1, ceiling=SEARCH_CEILING):
    """Search every filling with p in [p_min, p_max] and collect all matches.

    Results that differ only in the witnessing multiplier a are merged into
    one record, and mirror presentations of one manifold are collapsed (see
    _drop_mirror_duplicates); output is sorted by (p, q, eps) and identical
    at any parallel width, including jobs=1.
    """
    if not 1 <= p_min <= p_max:
        raise ValueError("need 1 <= p_min <= p_max, got [%d, %d]" % (p_min, p_max))
    if p_max > ceiling:
        raise ValueError("p_max=%d exceeds the search ceiling %d" % (p_max, ceiling))
    forms = enumerate_space_forms(p_min, p_max)
    if jobs > 1 and len(forms) > 1:
        methods = multiprocessing.get_all_start_methods()
        ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
        with ctx.Pool(jobs) as pool:
            chunks = pool.map(
                _search_worker,
                [(form, prune) for form in forms],
                chunksize=max(1, len(forms) // (8 * jobs)),
            )
    else:
        chunks = [_search_filling(form, prune=prune) for form in forms]
    results = _drop_mirror_duplicates(res for chunk in chunks for res in chunk)
    results.sort(key=lambda res: (res.p, res.q, res.eps))
    return results


# The classification this package reproduces: each row is (p, q, eps, knot),
# asserting that the p/2 surgery on the listed knot is eps*T(p/q), and that
# these are the only half-integral surgeries yielding spherical space forms.
CLASSIFICATION_TABLE = (
    (7, 2, 1, "T(3,2)"),
    (17, 2, -1, "T(5,2)"),
    (23, 3, 1, "T(5,2)"),
    (43, 8, 1, "[11,2;3,2]"),
    (45, 8, 1, "[11,2;3,2]"),
    (51, 8, 1, "[13,2;3,2]"),
    (53, 8, 1, "[13,2;3,2]"),
    (77, 12, -1, "[19,2;5,2]"),
    (83, 13, 1, "[21,2;5,2]"),
    (103, 18, 1, "[17,3;3,2]"),
    (113, 18, 1, "[19,3;3,2]"),
)


def verify_classification(p_max=SEARCH_CEILING, jobs=1, prune=True, catalog_pairs=None):
    """Compare the search against the built-in table.

    Returns (ok, got_rows, expected_rows) where rows are (slope, knot,
    target) triples.  Identification is redone here from the torsion
    sequences so a caller can swap in a different catalog; unidentified
    matches make the comparison fail rather than being dropped.
    """
    pairs = catalog() if catalog_pairs is None else tuple(catalog_pairs)
    got = [
        (res.slope, _identify(res.tseq, pairs), res.target)
        for res in run_search(1, p_max, prune=prune, jobs=jobs)
    ]
    expected = [
        ("%d/2" % p, knot, target_name(p, q, eps))
        for (p, q, eps, knot) in CLASSIFICATION_TABLE
        if p <= p_max
    ]
    return got == expected, got, expected
