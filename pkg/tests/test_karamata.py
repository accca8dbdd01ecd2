import math

import numpy as np
import pytest

from fractal_strings import (ScaleGrid, classify_ratio, extract_representation,
                             karamata_direct, power_log, rv_defect, tail_sum_rv)

T_GRID = np.array([0.1, 0.25, 0.5, 0.75, 1.0])


def test_rv_defect_zero_for_pure_power():
    d = rv_defect(lambda y: np.asarray(y, dtype=float) ** 0.5, 0.5,
                  T_GRID, np.geomspace(1e-10, 0.1, 6))
    assert np.max(d) < 1e-14


def test_rv_defect_shrinks_for_log_gauge():
    g = power_log(0.5, [1.0])
    ys = np.geomspace(1e-30, 0.05, 8)  # increasing; defect largest at the top
    d = rv_defect(g, 0.5, T_GRID, ys)
    assert d[0] < d[-1]
    assert d[0] < 0.02


def test_rv_defect_large_for_wrong_index():
    d = rv_defect(lambda y: np.asarray(y, dtype=float) ** 0.5, 0.9,
                  T_GRID, np.geomspace(1e-10, 0.1, 6))
    assert np.min(d) > 0.1


def test_rv_defect_rejects_empty_grid():
    with pytest.raises(ValueError):
        rv_defect(lambda y: y, 0.5, np.array([]), np.array([0.1]))


@pytest.mark.parametrize("l, name", [
    (lambda y: np.ones_like(np.asarray(y, dtype=float)), "const"),
    (lambda y: np.log(1 / np.asarray(y, dtype=float)), "log"),
    (lambda y: np.log(1 / np.asarray(y, dtype=float)) ** 2, "log2"),
])
def test_representation_reconstructs_slowly_varying(l, name):
    ys = np.geomspace(1e-8, 0.05, 20)
    rep = extract_representation(l, 0.05, ys)
    assert rep.max_relative_residual <= 1e-8


def test_representation_eps_tends_to_zero():
    ys = np.geomspace(1e-12, 0.05, 15)
    rep = extract_representation(
        lambda y: np.log(1 / np.asarray(y, dtype=float)), 0.05, ys)
    # eps(u) = 1/ln(1/u) for l = ln(1/y); shrinks toward the origin
    assert abs(rep.eps_values[0]) < abs(rep.eps_values[-1])
    assert abs(rep.eps_values[0]) < 0.05


def test_representation_uses_supplied_derivative():
    ys = np.geomspace(1e-6, 0.05, 10)
    rep = extract_representation(
        lambda y: np.log(1 / np.asarray(y, dtype=float)), 0.05, ys,
        dl=lambda y: -1.0 / y)
    assert rep.max_relative_residual <= 1e-10


def test_karamata_direct_half_pure_power():
    # f = u^1.5: x^(sigma+1) f(x) / int_X^x u^sigma f = sigma + rho + 1
    f = lambda u: np.asarray(u, dtype=float) ** 1.5
    r = karamata_direct(f, rho=1.5, sigma=0.0, x=50.0, X=1e-8)
    assert r == pytest.approx(2.5, abs=1e-8)


def test_karamata_tail_half_pure_power():
    f = lambda u: np.asarray(u, dtype=float) ** -3.0
    r = karamata_direct(f, rho=-3.0, sigma=0.0, x=50.0, X=None)
    assert r == pytest.approx(2.0, abs=1e-8)


def test_karamata_tail_rejected_when_divergent():
    f = lambda u: np.asarray(u, dtype=float) ** 1.5
    with pytest.raises(ValueError):
        karamata_direct(f, rho=1.5, sigma=0.0, x=50.0, X=1.0, half="tail")


def test_tail_sum_against_closed_form():
    # sum_{j>=k} j^-2 vs psi'(k); both compared to the -k g(k)/(rho+1) rule
    from scipy.special import polygamma
    total, predicted = tail_sum_rv(
        lambda j: np.asarray(j, dtype=float) ** -2.0, -2.0, 500)
    assert total == pytest.approx(float(polygamma(1, 500)), rel=1e-10)
    assert total / predicted == pytest.approx(1.0, abs=2e-3)


def test_tail_sum_ratio_tightens_with_k():
    g = lambda j: np.asarray(j, dtype=float) ** -2.0
    r1 = np.divide(*tail_sum_rv(g, -2.0, 100))
    r2 = np.divide(*tail_sum_rv(g, -2.0, 10 ** 4))
    assert abs(r2 - 1.0) < abs(r1 - 1.0)
    assert abs(r2 - 1.0) < 1e-3


def test_tail_sum_rejects_slow_decay():
    with pytest.raises(ValueError):
        tail_sum_rv(lambda j: 1.0 / np.asarray(j, dtype=float), -1.0, 100)


def test_tail_sum_rejects_index_mismatch():
    with pytest.raises(ValueError):
        tail_sum_rv(lambda j: np.asarray(j, dtype=float) ** -4.0, -2.0, 100)


def test_classify_ratio_equivalent():
    grid = ScaleGrid.geometric(10.0, 2.0, 12)
    v = classify_ratio(lambda x: x * (1 + 1.0 / x), lambda x: x, grid)
    assert v.classification == "equivalent"
    assert v.liminf_estimate <= v.limsup_estimate


def test_classify_ratio_similar_constant_offset():
    grid = ScaleGrid.geometric(10.0, 2.0, 12)
    v = classify_ratio(lambda x: 3.0 * x, lambda x: x, grid)
    assert v.classification == "similar"
    assert v.limsup_estimate == pytest.approx(3.0)


def test_classify_ratio_neither_for_vanishing():
    grid = ScaleGrid.geometric(10.0, 2.0, 12)
    v = classify_ratio(lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                       lambda x: x, grid)
    assert v.classification == "neither"


def test_classify_ratio_accepts_scalar_callables():
    grid = ScaleGrid.geometric(10.0, 2.0, 12)
    v = classify_ratio(lambda x: float(x) * 2.0, lambda x: float(x), grid)
    assert v.classification == "similar"


def test_classify_ratio_validates_inputs():
    grid = ScaleGrid.geometric(10.0, 2.0, 12)
    with pytest.raises(ValueError):
        classify_ratio(lambda x: x, lambda x: -np.asarray(x, dtype=float), grid)


def test_ratio_verdict_json():
    grid = ScaleGrid.geometric(10.0, 2.0, 12)
    out = classify_ratio(lambda x: x, lambda x: x, grid).to_json()
    assert out["classification"] == "equivalent"
    assert len(out["grid"]) == 12
