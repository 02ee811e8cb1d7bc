import math

import numpy as np
import pytest

from hotelling_equicorr.ellipse import iso_power_residual
from hotelling_equicorr.equicorr import EquicorrModel, ShiftAlternative, inverse_coefficients
from hotelling_equicorr.exceptions import InvalidInput
from hotelling_equicorr.simulate import (SimConfig, config_seed, expected_t2_over_k,
                                         figure3_curve, replication_rng, run_simulation,
                                         sample_equicorr_mvn, sample_size, simulate_values,
                                         table1_shifts)

REFERENCE = {
    0.3: [(-0.84, 0.35), (-0.63, 0.61), (-0.42, 0.79), (-0.21, 0.92), (0.00, 1.00),
          (0.21, 1.04), (0.42, 1.04), (0.63, 0.99), (0.84, 0.85), (1.05, 0.35)],
    0.9: [(-1.83, -1.05), (-1.38, -0.44), (-0.92, 0.09), (-0.46, 0.57), (0.00, 1.00),
          (0.46, 1.39), (0.92, 1.74), (1.38, 2.04), (1.83, 2.25), (2.29, 2.09)],
}


def central_mean(n, nx, ny):
    # E[F(d1, d2)] = d2 / (d2 - 2) pushed back through the F transform
    total = nx + ny
    d2 = total - n - 1
    k = nx * ny / total
    return n * (total - 2) / d2 * d2 / (d2 - 2) / k


@pytest.mark.parametrize("rho", [0.0, 0.5, 0.9])
def test_sampler_law(rho):
    count = 100_000
    x = sample_equicorr_mvn(EquicorrModel(2, rho), np.array([1.0, -2.0]), count,
                            replication_rng(123, 0))
    assert x.shape == (count, 2)
    se = 3 / math.sqrt(count)
    assert abs(x[:, 0].mean() - 1.0) <= se
    assert abs(x[:, 1].mean() + 2.0) <= se
    assert np.all(np.abs(x.var(axis=0, ddof=1) - 1.0) <= 0.02)
    r = np.corrcoef(x.T)[0, 1]
    assert abs(r - rho) <= 0.01


def test_sampler_validation():
    with pytest.raises(InvalidInput):
        sample_equicorr_mvn(EquicorrModel(3, 0.2), np.zeros(2), 5, replication_rng(0, 0))


def test_config_validation():
    model = EquicorrModel(3, 0.5)
    with pytest.raises(InvalidInput):
        SimConfig(model, (1.0, 0.0), 5, 5)
    with pytest.raises(InvalidInput):
        SimConfig(model, ShiftAlternative(1), 1, 5)
    with pytest.raises(InvalidInput):
        SimConfig(EquicorrModel(6, 0.5), ShiftAlternative(1), 3, 3)
    cfg = SimConfig(model, ShiftAlternative(2, 0.5), 5, 5)
    assert cfg.delta == (0.5, 0.5, 0.0)


def test_replications_depend_only_on_seed_and_index():
    base = SimConfig(EquicorrModel(3, 0.4), ShiftAlternative(1), 6, 7, reps=600, seed=9)
    longer = SimConfig(EquicorrModel(3, 0.4), ShiftAlternative(1), 6, 7, reps=900, seed=9)
    a = simulate_values(base)
    b = simulate_values(longer)
    np.testing.assert_array_equal(a, b[:600])


def test_worker_count_does_not_change_result():
    cfg = SimConfig(EquicorrModel(4, 0.7), ShiftAlternative(2), 8, 8, reps=800, seed=77)
    assert run_simulation(cfg, workers=1) == run_simulation(cfg, workers=3)


def test_null_mean_matches_central_f():
    cfg = SimConfig(EquicorrModel(3, 0.5), (0.0, 0.0, 0.0), 8, 9, reps=20_000, seed=5)
    s = run_simulation(cfg)
    expected = central_mean(3, 8, 9)
    assert expected_t2_over_k(cfg.model, cfg.delta, 8, 9) == pytest.approx(expected, rel=1e-14)
    assert abs(s.mean_t2_over_k - expected) <= 4 * math.sqrt(s.variance_of_mean)
    assert s.reps_used == 20_000 and s.variance_of_mean >= 0


def test_expected_examples():
    model = EquicorrModel(2, 0.3)
    alpha = inverse_coefficients(model).alpha
    assert expected_t2_over_k(model, (1.0, 0.0), 5, 5) == pytest.approx(
        8 * (2 + 2.5 * alpha) / 12.5, rel=1e-14)
    assert expected_t2_over_k(model, (1.0, 0.0), 5, 5) == pytest.approx(3.038, abs=1e-3)
    assert expected_t2_over_k(model, (1.0, 0.0), 20, 20) == pytest.approx(1.410, abs=1e-3)
    sigma = np.array([[2.0, 0.3], [0.3, 1.0]])
    assert expected_t2_over_k(sigma, (0.0, 0.0), 6, 6) == pytest.approx(central_mean(2, 6, 6))


def test_expected_requires_finite_mean():
    with pytest.raises(InvalidInput):
        expected_t2_over_k(EquicorrModel(3, 0.2), (1.0, 0.0, 0.0), 3, 3)


def test_sample_size_rounding():
    assert [sample_size(n, 1.4) for n in (10, 15, 25)] == [14, 21, 35]
    assert [sample_size(n, 2.4) for n in (10, 15, 25)] == [24, 36, 60]
    assert sample_size(5, 1.5) == 8


def test_config_seeds_distinct():
    seeds = {config_seed(20100315, i, j) for i in range(5) for j in range(5)}
    assert len(seeds) == 25


def test_independent_curve_is_linear():
    pts = figure3_curve(5, 0.0, 2.4, reps=800, seed=1)
    for p in pts:
        assert p.t_star_squared == p.m
        assert abs(p.mean_t2_over_k - p.expected_t2_over_k) <= 4 * math.sqrt(p.variance_of_mean)
    slopes = np.diff([p.expected_t2_over_k for p in pts])
    np.testing.assert_allclose(slopes, slopes[0], rtol=1e-12)


@pytest.mark.parametrize("rho", [0.3, 0.9])
def test_table1_shifts_on_curve_near_reference(rho):
    shifts = table1_shifts(rho)
    assert [a1 for a1, _ in shifts][:-1] == [a for a, _ in REFERENCE[rho]][:-1]
    for (a1, a2), (p1, p2) in zip(shifts, REFERENCE[rho]):
        assert abs(iso_power_residual(rho, (a1, a2))) <= 1e-12
        assert abs(a1 - p1) <= 0.005
        assert abs(a2 - p2) <= 0.04
