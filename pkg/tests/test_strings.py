import math

import numpy as np
import pytest
from scipy.special import polygamma

from fractal_strings import (AnalyticString, ExplicitString, RunLengthString,
                             make_a_string, make_cantor, make_interval,
                             make_profile, make_derived, power_log,
                             string_from_json, string_to_json)
from fractal_strings.errors import ConstructionError


def test_explicit_sorts_and_counts():
    s = ExplicitString([0.1, 0.5, 0.25])
    assert [s.length(j) for j in (1, 2, 3)] == [0.5, 0.25, 0.1]
    assert s.count() == 3
    assert s.total_length() == pytest.approx(0.85)


def test_counting_function_is_strict():
    s = ExplicitString([0.5, 0.25, 0.25, 0.1])
    assert s.J(0.25) == 1          # only 0.5 is strictly larger
    assert s.J(0.2499999) == 3
    assert s.multiplicity_at(0.25) == 2
    assert s.multiplicity_at(0.3) == 0


def test_explicit_tail_and_head_sums():
    vals = [2.0 ** -k for k in range(1, 21)]
    s = ExplicitString(vals)
    # strict comparison: the length equal to the threshold stays in the tail
    assert s.tail_sum_beyond(2.0 ** -6) == pytest.approx(sum(vals[5:]), rel=1e-15)
    assert s.head_sum(5) == pytest.approx(sum(vals[:5]), rel=1e-15)


def test_runlength_agrees_with_flat_expansion():
    blocks = [(0.5, 1), (0.2, 3), (0.05, 7)]
    rl = RunLengthString(blocks)
    flat = ExplicitString([0.5] + [0.2] * 3 + [0.05] * 7)
    for eps in (0.6, 0.5, 0.3, 0.2, 0.1, 0.05, 0.01):
        assert rl.J(eps) == flat.J(eps)
        assert rl.tail_sum_beyond(eps) == pytest.approx(flat.tail_sum_beyond(eps), rel=1e-14)
        assert rl.multiplicity_at(eps) == flat.multiplicity_at(eps)
    for n in (1, 4, 9, 11):
        assert rl.head_sum(n) == pytest.approx(flat.head_sum(n), rel=1e-14)
        assert rl.length(n) == flat.length(n)


def test_runlength_rejects_bad_blocks():
    with pytest.raises(ConstructionError):
        RunLengthString([(0.2, 1), (0.5, 1)])  # not decreasing
    with pytest.raises(ConstructionError):
        RunLengthString([(0.5, 0)])
    with pytest.raises(ConstructionError):
        RunLengthString([])


def test_cantor_block_structure():
    c = make_cantor(depth=10)
    # lengths 3^-n with multiplicity 2^(n-1); J(eps) = 2^n - 1 below 3^-n
    assert c.length(1) == pytest.approx(1 / 3)
    # the threshold length itself is not counted (strict inequality)
    assert c.J(3.0 ** -4) == 2 ** 3 - 1
    assert c.J(3.0 ** -4 * 0.999) == 2 ** 4 - 1
    assert c.multiplicity_at(3.0 ** -5) == 2 ** 4
    # tail beyond J(3^-4) starts at the 3^-4 block itself
    assert c.tail_sum_beyond(3.0 ** -4) == pytest.approx(
        (2 / 3) ** 3 - (2 / 3) ** 10, rel=1e-12)


def test_cantor_total_length_near_one():
    assert make_cantor().total_length() == pytest.approx(1.0, abs=1e-15)


def test_cantor_deep_multiplicities_do_not_overflow():
    c = make_cantor(depth=96)
    assert c.count() == 2 ** 96 - 1
    assert c.J(1e-10) == 2 ** 20 - 1  # 3^-20 > 1e-10 > 3^-21


def test_a_string_lengths_and_tail():
    s = make_a_string(1.0)
    for j in (1, 2, 10, 1000):
        assert s.length(j) == pytest.approx(1 / j - 1 / (j + 1), rel=1e-14)
    assert s.total_length() == pytest.approx(1.0, rel=1e-14)
    # tail telescopes: sum_{j>m} l_j = (m+1)^-a; J is strict so the length
    # at the threshold is part of the tail
    eps = s.length(100)
    assert s.tail_sum_beyond(eps) == pytest.approx(1 / 100, rel=1e-13)


def test_a_string_counting_vs_bruteforce():
    s = make_a_string(0.5)
    for eps in (1e-3, 1e-5, 3.33e-7):
        J = s.J(eps)
        assert s.length(J) > eps >= s.length(J + 1)


def test_a_string_small_a_no_cancellation():
    s = make_a_string(0.01)
    l = s.length(10 ** 9)
    expected = 0.01 * float(10 ** 9) ** -1.01  # leading asymptotics
    assert l == pytest.approx(expected, rel=1e-3)
    assert l > 0


def test_interval_is_single_length():
    s = make_interval(0.7)
    assert s.count() == 1
    assert s.J(0.5) == 1 and s.J(0.7) == 0
    assert s.tail_sum_beyond(0.8) == pytest.approx(0.7)


def test_profile_matches_g_exactly():
    d = make_derived(power_log(0.5, [1.0]), 0.5)
    p = make_profile(2.0, d)
    for j in (20, 200, 2000):
        assert p.length(j) == pytest.approx(2.0 * d.g(float(j)), rel=1e-14)


def test_profile_clamped_prefix_is_non_increasing():
    d = make_derived(power_log(0.5, [1.0]), 0.5)
    p = make_profile(1.0, d)
    lengths = [p.length(j) for j in range(1, 50)]
    assert all(a >= b for a, b in zip(lengths, lengths[1:]))


def test_profile_counting_consistency():
    d = make_derived(power_log(0.3, [1.0]), 0.7)
    p = make_profile(1.0, d)
    for eps in (1e-4, 1e-7, 1e-10):
        J = p.J(eps)
        assert p.length(J) > eps >= p.length(J + 1)


def test_analytic_tail_matches_polygamma():
    s = AnalyticString(
        length_fn=lambda j: np.asarray(j, dtype=float) ** -2.0,
        inv_hint=lambda eps: eps ** -0.5)
    # Euler-Maclaurin closure vs the exact trigamma tail
    for m in (10, 313, 5000):
        exact = float(polygamma(1, m + 1))
        assert s.tail_sum_beyond_index(m) == pytest.approx(exact, rel=1e-11)


def test_truncate_produces_explicit_prefix():
    s = make_a_string(1.0)
    t = s.truncate(100)
    assert t.count() == 100
    assert t.length(100) == s.length(100)
    assert t.total_length() == pytest.approx(s.head_sum(100), rel=1e-13)
    rl = make_cantor(depth=8).truncate(10)
    assert rl.count() == 10
    assert rl.length(10) == 3.0 ** -4


def test_string_json_roundtrip():
    for spec in (string_to_json("cantor", depth=12),
                 string_to_json("a_string", a=2.0),
                 string_to_json("interval", length=0.5),
                 string_to_json("explicit", lengths=[0.5, 0.25, 0.125]),
                 string_to_json("profile", L=1.0,
                                gauge={"form": "powerlog", "rho": 0.5,
                                       "log_exponents": [], "domain_upper": 1.0})):
        s = string_from_json(spec)
        assert s.length(1) > 0
        assert s.total_length() > 0


def test_string_json_rejects_unknown_kind():
    with pytest.raises(ValueError):
        string_from_json({"kind": "penrose"})
