"""The matching criterion, its pruning, and the search itself.

run_search over [1, 120] is computed once per module and reused; it covers
every row of the classification table, so most tests here are cheap checks
against that one result set.
"""

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corrterms.knots import d_surgery, validate_torsion
from corrterms.lens import center, conj, d_lens
from corrterms.matcher import (
    CLASSIFICATION_TABLE,
    Rejection,
    check_delta_step,
    delta,
    exclusion_bound,
    max_step_k,
    phi,
    prune_a_candidates,
    run_search,
    sample_delta_steps,
    target_name,
    try_match,
    verify_classification,
    window_m,
)
from corrterms.numtheory import Rational, gcd, isqrt, theta_bar
from corrterms.spaceform import d_trefoil, enumerate_space_forms

# p = 1 admits no multiplier at all, so property tests start at p = 3
FORMS = [form for form in enumerate_space_forms(3, 400)]


@pytest.fixture(scope="module")
def table_matches():
    return run_search(1, 120)


def multipliers(p):
    return [a for a in range(1, (p - 1) // 2 + 1) if gcd(p, a) == 1]


@given(st.data())
@settings(max_examples=60)
def test_phi_is_an_affine_bijection_fixing_the_center(data):
    form = data.draw(st.sampled_from(FORMS))
    p, q = form.p, form.q
    a = data.draw(st.sampled_from(multipliers(p)))
    image = [phi(p, q, a, i) for i in range(p)]
    assert sorted(image) == list(range(p))
    assert phi(p, q, a, (p + 1) // 2) == center(p, q)


@given(st.data())
@settings(max_examples=60)
def test_phi_of_complementary_multiplier_is_conjugate(data):
    form = data.draw(st.sampled_from(FORMS))
    p, q = form.p, form.q
    a = data.draw(st.sampled_from(multipliers(p)))
    i = data.draw(st.integers(min_value=0, max_value=p - 1))
    assert phi(p, q, p - a, i) == conj(p, q, phi(p, q, a, i))
    # so the two halves of the multiplier range probe the same d-values
    assert d_trefoil(p, q, phi(p, q, p - a, i)) == d_trefoil(p, q, phi(p, q, a, i))


@given(st.data())
@settings(max_examples=40)
def test_delta_orientation_flip_sums_to_lens_part(data):
    form = data.draw(st.sampled_from(FORMS))
    p, q = form.p, form.q
    a = data.draw(st.sampled_from(multipliers(p)))
    i = data.draw(st.integers(min_value=0, max_value=p - 1))
    total = delta(p, q, 1, a, i) + delta(p, q, -1, a, i)
    assert total == 2 * d_lens(p, 2, i)


@given(st.data())
@settings(max_examples=60)
def test_window_m_defining_inequality(data):
    form = data.draw(st.sampled_from(FORMS))
    q, zeta, r = form.q, form.zeta, form.r
    a = data.draw(st.sampled_from(multipliers(form.p)))
    m = window_m(q, zeta, r, a)
    h = (theta_bar(q) * zeta * r + q - 1) // 2
    assert 0 <= a - m * q + h < q


def test_search_reproduces_the_classification_table(table_matches):
    got = [(res.p, res.q, res.eps, res.knot) for res in table_matches]
    assert got == [(p, q, eps, knot) for (p, q, eps, knot) in CLASSIFICATION_TABLE]
    for res in table_matches:
        assert res.a_witnesses
        assert validate_torsion(res.tseq) == res.tseq
        assert res.target == target_name(res.p, res.q, res.eps)


def test_matches_satisfy_delta_equals_twice_torsion(table_matches):
    for res in table_matches:
        p, q, eps = res.p, res.q, res.eps
        for a in res.a_witnesses:
            for i in range(p):
                s = min(i // 2, (p + 1 - i) // 2)
                t_s = res.tseq[s] if s < len(res.tseq) else 0
                assert delta(p, q, eps, a, i) == 2 * t_s


def test_match_d_multisets_agree(table_matches):
    for res in table_matches:
        got = Counter(d_surgery(res.tseq, res.p, 2, i) for i in range(res.p))
        want = Counter(res.eps * d_trefoil(res.p, res.q, i) for i in range(res.p))
        assert got == want


def test_witnesses_survive_pruning(table_matches):
    for res in table_matches:
        pruned = prune_a_candidates(res.p, res.q, res.zeta, res.r)
        assert set(res.a_witnesses) <= set(pruned)


def test_pruned_set_is_small_and_coprime():
    for form in enumerate_space_forms(2000, 3000):
        pruned = prune_a_candidates(form.p, form.q, form.zeta, form.r)
        assert all(gcd(a, form.p) == 1 and 0 < 2 * a < form.p for a in pruned)
        # four windows of half-width sqrt(48 r p)/6 each
        assert len(pruned) <= 4 * (isqrt(48 * form.r * form.p) // 3 + 2)


def test_pruning_loses_nothing_at_moderate_p():
    for form in enumerate_space_forms(40, 120):
        pruned = set(prune_a_candidates(form.p, form.q, form.zeta, form.r))
        for eps in (1, -1):
            for a in multipliers(form.p):
                if isinstance(try_match(form.p, form.q, eps, a), tuple):
                    assert a in pruned


def test_trefoil_self_surgeries_are_scoped_out():
    # 9/2, 15/2 and 17/2 surgeries on the trefoil are genuine space forms,
    # but they are torus-knot surgeries; the search only reports the 7/2 one.
    for p, q, eps in [(9, 1, -1), (9, 2, 1), (15, 2, 1), (17, 2, 1)]:
        hits = [a for a in multipliers(p) if isinstance(try_match(p, q, eps, a), tuple)]
        assert hits == []
    rej = try_match(9, 2, 1, 1)
    assert isinstance(rej, Rejection)
    assert rej.i is None
    assert rej.reason == "trefoil staircase: self-surgery outside the 7/2 case"


def test_rejection_reasons_are_arithmetic_elsewhere():
    reasons = set()
    for a in multipliers(43):
        out = try_match(43, 8, 1, a)
        if isinstance(out, Rejection):
            reasons.add(out.reason)
    known = {
        "negative delta value",
        "odd delta value",
        "non-integer delta value",
        "delta value not constant on its s-fiber",
        "center delta value must be 0",
        "center-adjacent delta value must be 0 or 2",
        "torsion step must be 0 or -1",
    }
    assert reasons and reasons <= known


def test_try_match_validates_context():
    with pytest.raises(ValueError):
        try_match(13, 2, 1, 1)  # 13/2 is not a trefoil filling
    with pytest.raises(ValueError):
        try_match(43, 8, 2, 1)  # eps out of range
    with pytest.raises(ValueError):
        try_match(43, 8, 1, 22)  # a past p/2
    with pytest.raises(ValueError):
        try_match(45, 8, 1, 5)  # gcd(45, 5) > 1


def test_check_delta_step_pinned_cases():
    # folding case: i_0 + a wraps past p
    step = check_delta_step(963, 160, 1, 403, 0)
    assert step.holds and step.i_k + step.a >= step.p
    # vanishing linear coefficient: eps*zeta = -1 and 6a - mp = 3
    step = check_delta_step(963, 160, -1, 161, 0)
    assert step.holds and step.A == 0 and step.m == 1
    # k = 1 needs p past 30000; both orientations
    assert max_step_k(30003, 3) == 1
    assert check_delta_step(30003, 5000, 1, 2, 1).holds
    assert check_delta_step(30003, 5000, -1, 7, 1).holds


def test_check_delta_step_rejects_bad_k():
    with pytest.raises(ValueError):
        check_delta_step(7, 2, 1, 1, 0)  # max_step_k(7, 5) = -1
    with pytest.raises(ValueError):
        check_delta_step(963, 160, 1, 403, max_step_k(963, 3) + 1)
    with pytest.raises(ValueError):
        check_delta_step(30003, 5000, 1, 400, 1)  # a outside its window


def test_max_step_k_inequality_is_sharp():
    for p, r in [(963, 3), (6000, 3), (30003, 3), (2995, 5)]:
        k = max_step_k(p, r)
        c = p - 13 * r + 6
        if k >= 0:
            assert (48 * k + 8) ** 2 * 3 * r * p < c * c
        assert (48 * (k + 1) + 8) ** 2 * 3 * r * p >= c * c
    assert max_step_k(7, 5) == -1


def test_exclusion_bound_values():
    assert exclusion_bound(3) == 6969600
    assert exclusion_bound(5) == 31799040
    with pytest.raises(ValueError):
        exclusion_bound(4)


def test_sample_delta_steps_deterministic():
    first = sample_delta_steps(50, seed=7, p_max=1500)
    second = sample_delta_steps(50, seed=7, p_max=1500)
    assert first == second
    assert len(first) == 50
    assert all(step.holds for step in first)
    assert all(step.lhs == step.A * step.k + step.B + step.C_k for step in first)
    assert first != sample_delta_steps(50, seed=8, p_max=1500)


def test_vanishing_a_happens_only_one_way():
    # A = 0 forces r = 3, eps*zeta = -1 and |6a - mp| = 3; such multipliers
    # are too rare to hit by sampling, so check constructed ones directly.
    for p, q, a in [(963, 160, 161), (1023, 170, 170)]:
        step = check_delta_step(p, q, -1, a, 0)
        assert step.holds and step.A == 0
        assert step.r == 3 and abs(6 * a - step.m * p) == 3
        flipped = check_delta_step(p, q, 1, a, 0)
        assert flipped.holds and flipped.A == Rational(12, p)
    for step in sample_delta_steps(400, seed=3, p_max=1500):
        if step.A == 0:
            assert step.r == 3
            assert step.eps * step.zeta == -1
            assert abs(6 * step.a - step.m * step.p) == 3


def test_run_search_is_parallel_safe(table_matches):
    assert run_search(1, 120, jobs=2) == table_matches


def test_run_search_validates_range():
    with pytest.raises(ValueError):
        run_search(10, 9)
    with pytest.raises(ValueError):
        run_search(0, 10)
    with pytest.raises(ValueError):
        run_search(1, 6001)


def test_verify_classification_small_prefix():
    ok, got, expected = verify_classification(p_max=50)
    assert ok
    assert [row[0] for row in got] == ["7/2", "17/2", "23/2", "43/2", "45/2"]
    assert got == expected


def test_verify_classification_flags_bad_catalog():
    ok, got, expected = verify_classification(p_max=30, catalog_pairs=[])
    assert not ok
    assert all(knot == "unidentified" for (_, knot, _) in got)
