"""
Tests for the eigensolver, the normal-form predictions and the convergence studies.
"""
import random
from fractions import Fraction

import numpy as np
import pytest
from loguru import logger

from src.config.config import Config
from src.errors import ConfigError, WrongSign
from src.normal_form.birkhoff import forward_jet
from src.normal_form.functional import weyl_to_functional
from src.normal_form.models import FunctionalNormalForm, PotentialJet
from src.spectra.eigensolver import EigensolverConfig, check_localization, solve_eigenvalues, solve_many
from src.spectra.prediction import (hbar2_coefficient, jet_potential, matrix_perturbation_oracle,
                                    perturbation_oracle, predict_eigenvalues)
from src.spectra.study import (LITERATURE_KAPPA, computed_kappa, convergence_study, expected_order,
                               fit_slope, kappa_arbitration)


def harmonic(x):
    return 0.5 * x ** 2


def test_harmonic_levels_within_reported_bound():
    result = solve_eigenvalues(harmonic, EigensolverConfig(hbar=0.1, levels=4))
    exact = 0.1 * (np.arange(4) + 0.5)
    assert result.eigenvalues.shape == (4,)
    assert np.all(np.abs(result.eigenvalues - exact) <= result.error_bounds)
    assert result.max_error <= 1e-9


def test_window_selects_levels_by_energy():
    result = solve_eigenvalues(harmonic, EigensolverConfig(hbar=0.1, window=(0.12, 0.48)))
    np.testing.assert_allclose(result.eigenvalues, [0.15, 0.25, 0.35, 0.45], atol=1e-9)
    assert result.first_index == 1


def test_batch_is_sorted_by_decreasing_hbar():
    configs = [EigensolverConfig(hbar=h, levels=2) for h in (0.05, 0.1)]
    results = solve_many(harmonic, configs)
    assert [r.hbar for r in results] == [0.1, 0.05]


def test_solver_config_validation():
    with pytest.raises(ConfigError):
        EigensolverConfig(hbar=0)
    with pytest.raises(ConfigError):
        EigensolverConfig(hbar=0.1, window=(1.0, 0.5))
    with pytest.raises(ConfigError):
        check_localization(harmonic, EigensolverConfig(hbar=0.1, half_width=0.5), 0.35)


def test_perturbation_oracles():
    assert perturbation_oracle(Fraction(1), Fraction(0), 0) == Fraction(-11, 8)
    assert perturbation_oracle(Fraction(0), Fraction(1), 1) == Fraction(15, 4)
    for a, b, n in [(1, 0, 0), (0, 1, 1), (0.3, -0.7, 2), (-1.5, 2.0, 4)]:
        assert matrix_perturbation_oracle(a, b, n) == pytest.approx(float(perturbation_oracle(a, b, n)),
                                                                   rel=1e-12, abs=1e-12)


def test_hbar2_coefficient_matches_perturbation_theory():
    rng = random.Random(6)
    for _ in range(10):
        a, b = Fraction(rng.randint(-8, 8), rng.randint(1, 4)), Fraction(rng.randint(-8, 8), rng.randint(1, 4))
        fnf = weyl_to_functional(forward_jet(PotentialJet(coeffs=(a, b)), 4)[0])
        for n in range(6):
            assert hbar2_coefficient(fnf, n) == perturbation_oracle(a, b, n)


def test_predictions():
    fnf = FunctionalNormalForm(coeffs={(0, 2): Fraction(1, 2), (1, 0): Fraction(-1, 4)}, max_degree=4)
    predictions = predict_eigenvalues(fnf, 1.0, 0.1, 2)
    expected = [1.0 + 0.1 * (n + 0.5) + 0.5 * (0.1 * (n + 0.5)) ** 2 - 0.25 * 0.01 for n in range(3)]
    assert predictions == pytest.approx(expected, rel=1e-12)
    assert len(predict_eigenvalues(FunctionalNormalForm(), 0.0, 0.1, 0)) == 1


def test_predictions_need_a_well():
    fnf = FunctionalNormalForm(sign=-1)
    with pytest.raises(WrongSign):
        predict_eigenvalues(fnf, 0.0, 0.1, 3)
    with pytest.raises(WrongSign):
        hbar2_coefficient(fnf, 0)
    with pytest.raises(WrongSign):
        convergence_study(PotentialJet(sign=-1, coeffs=(Fraction(1),)), [0.1], 4)


def test_jet_potential():
    V = jet_potential(PotentialJet(e0=Fraction(1, 2), coeffs=(Fraction(1), Fraction(-1))))
    x = np.array([-1.0, 0.0, 2.0])
    np.testing.assert_allclose(V(x), 0.5 + 0.5 * x ** 2 + x ** 3 - x ** 4)


def test_fit_slope_recovers_power_law():
    hbars = [0.08, 0.04, 0.02, 0.01]
    slope, r2 = fit_slope(hbars, [3.0 * h ** 3 for h in hbars])
    assert slope == pytest.approx(3.0)
    assert r2 == pytest.approx(1.0)
    assert expected_order(4) == 3.0


def test_convergence_study_reaches_expected_order():
    jet = PotentialJet(coeffs=(Fraction(1, 10),))
    report = convergence_study(jet, [0.08, 0.04, 0.02, 0.01], 4, levels=4)
    logger.info(f"\n{report.to_table()}")
    assert report.passed
    assert len(report.records) == 16
    for fit in report.fits:
        assert fit.slope is None or fit.slope >= 2.7
    assert list(report.to_frame().columns) == ["hbar", "level", "eigenvalue", "prediction", "residual",
                                               "error_bound"]


def test_convergence_study_rejects_bad_ladders():
    jet = PotentialJet(coeffs=(Fraction(1, 10),))
    with pytest.raises(ConfigError):
        convergence_study(jet, [0.01, 0.02], 4)
    with pytest.raises(ConfigError):
        convergence_study(PotentialJet(), [0.1], 4, levels=4, half_width=0.5)


def test_kappa_arbitration_selects_computed_value():
    assert computed_kappa() == Fraction(1, 2)
    assert LITERATURE_KAPPA == 1
    arbitration = kappa_arbitration(levels=4, config=Config())
    logger.info(f"kappa arbitration: {arbitration.to_dict()}")
    assert arbitration.selected == "computed"
    assert arbitration.margin >= 0.7
    assert [fit.level for fit in arbitration.computed.fits] == [0, 1, 2, 3]
    for good, bad in zip(arbitration.computed.fits, arbitration.alternative.fits):
        assert good.slope >= expected_order(4) - Config().slope_slack
        assert good.slope > bad.slope


def extrapolated_hbar2(V, hbars, level=0):
    """Linear extrapolation to hbar = 0 of (lambda_n - hbar (n + 1/2)) / hbar^2."""
    configs = [EigensolverConfig(hbar=h, levels=level + 1) for h in hbars]
    ratios = [(float(r.eigenvalues[level]) - r.hbar * (level + 0.5)) / r.hbar ** 2
              for r in solve_many(V, configs)]
    slope, intercept = np.polyfit(hbars, ratios, 1)
    return intercept


@pytest.mark.parametrize("a, b", [(0.0, 0.1), (0.2, 0.2), (-0.2, 0.2), (-0.1, 0.2)])
def test_ground_state_matches_perturbation_oracle(a, b):
    def V(x):
        return 0.5 * x ** 2 + a * x ** 3 + b * x ** 4

    coefficient = extrapolated_hbar2(V, [0.02, 0.01, 0.005])
    oracle = float(perturbation_oracle(a, b, 0))
    logger.info(f"a={a}, b={b}: extrapolated {coefficient:.6f}, oracle {oracle:.6f}")
    assert coefficient == pytest.approx(oracle, rel=1e-2)


def test_quartic_ground_state_at_moderate_hbar():
    def V(x):
        return 0.5 * x ** 2 + 0.1 * x ** 4

    hbar = 0.05
    result = solve_eigenvalues(V, EigensolverConfig(hbar=hbar, levels=1))
    leading = hbar / 2 + 0.075 * hbar ** 2
    assert abs(float(result.eigenvalues[0]) - leading) < 0.5 * hbar ** 3


def test_zoll_levels_share_one_hbar2_shift():
    def V(x):
        return 0.5 * x ** 2 - 0.5 * x ** 3 + 0.625 * x ** 4

    fnf = weyl_to_functional(forward_jet(PotentialJet(coeffs=(Fraction(-1, 2), Fraction(5, 8))), 4)[0])
    assert [hbar2_coefficient(fnf, n) for n in range(4)] == [Fraction(1, 8)] * 4
    shifts = [extrapolated_hbar2(V, [0.02, 0.01, 0.005], level=n) for n in range(3)]
    logger.info(f"Zoll hbar^2 shifts: {shifts}")
    assert shifts == pytest.approx([0.125] * 3, rel=2e-2)
