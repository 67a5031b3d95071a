"""
Convergence studies: computed eigenvalues against normal-form predictions
across a ladder of hbar values, with fitted log-log convergence slopes.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

from src.config.config import Config
from src.errors import ConfigError, WrongSign
from src.normal_form.birkhoff import forward_jet
from src.normal_form.functional import weyl_to_functional
from src.normal_form.models import NormalFormSeries, PotentialJet
from src.spectra.eigensolver import EigenResult, EigensolverConfig, solve_many
from src.spectra.prediction import jet_potential, predict_eigenvalues

# b_{1,0} = LITERATURE_KAPPA * a_3^2 is the closed form found in the literature;
# the forward engine gives 1/2.
LITERATURE_KAPPA = Fraction(1)


@dataclass
class LevelFit:
    """Log-log fit of residual against hbar for one level."""

    level: int
    slope: Optional[float]
    r2: Optional[float]
    points: int
    expected: float
    passed: bool

    @property
    def floor_dominated(self) -> bool:
        return self.slope is None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "slope": self.slope,
            "r2": self.r2,
            "points": self.points,
            "expected": self.expected,
            "passed": self.passed,
            "floor_dominated": self.floor_dominated,
        }


@dataclass
class SpectralReport:
    """Per-hbar, per-level eigenvalues, predictions and residuals with fitted slopes."""

    degree: int
    records: List[Dict[str, float]] = field(default_factory=list)
    fits: List[LevelFit] = field(default_factory=list)
    jet: Optional[PotentialJet] = None

    @property
    def passed(self) -> bool:
        return all(fit.passed for fit in self.fits)

    def slope(self, level: int) -> Optional[float]:
        for fit in self.fits:
            if fit.level == level:
                return fit.slope
        raise KeyError(level)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.records, columns=["hbar", "level", "eigenvalue", "prediction",
                                                   "residual", "error_bound"])

    def to_table(self) -> str:
        """Aligned plain-text table, floats with 17 significant digits."""
        table = self.to_frame().to_string(index=False, float_format=lambda v: f"{v:.17g}")
        fits = pd.DataFrame([f.to_dict() for f in self.fits]).to_string(
            index=False, float_format=lambda v: f"{v:.17g}")
        return f"{table}\n\n{fits}\n"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "degree": self.degree,
            "jet": self.jet.to_dict() if self.jet else None,
            "passed": self.passed,
            "records": self.records,
            "fits": [f.to_dict() for f in self.fits],
        }


def expected_order(degree: int) -> float:
    """Residual order in hbar for a degree-D truncation: (D + 2) / 2."""
    return (degree + 2) / 2


def compute_spectra(jet: PotentialJet, hbar_list: Sequence[float], levels: int,
                    config: Optional[Config] = None, **solver_overrides) -> List[EigenResult]:
    """Solve for the lowest ``levels`` eigenvalues at every hbar concurrently."""
    config = config or Config()
    configs = [EigensolverConfig.from_config(config, h, levels=levels, **solver_overrides) for h in hbar_list]
    return solve_many(jet_potential(jet), configs)


def fit_slope(hbars: Sequence[float], residuals: Sequence[float]):
    """Least-squares slope of log(residual) against log(hbar), with R^2."""
    X = np.log(np.asarray(hbars, dtype=float)).reshape(-1, 1)
    y = np.log(np.asarray(residuals, dtype=float))
    model = LinearRegression().fit(X, y)
    r2 = float(r2_score(y, model.predict(X))) if len(y) > 2 else 1.0
    return float(model.coef_[0]), r2


def build_report(jet: PotentialJet, nf: NormalFormSeries, results: Sequence[EigenResult], degree: int,
                 config: Optional[Config] = None) -> SpectralReport:
    """Compare precomputed spectra with the predictions of ``nf``."""
    config = config or Config()
    fnf = weyl_to_functional(nf)
    report = SpectralReport(degree=degree, jet=jet)
    per_level: Dict[int, List[tuple]] = {}
    for result in sorted(results, key=lambda r: -r.hbar):
        levels = len(result.eigenvalues)
        predictions = predict_eigenvalues(fnf, float(nf.e0), result.hbar, levels - 1)
        for n in range(levels):
            residual = abs(float(result.eigenvalues[n]) - predictions[n])
            bound = float(result.error_bounds[n])
            report.records.append({
                "hbar": float(result.hbar), "level": n, "eigenvalue": float(result.eigenvalues[n]),
                "prediction": predictions[n], "residual": residual, "error_bound": bound,
            })
            per_level.setdefault(n, []).append((result.hbar, residual, bound))

    order = expected_order(degree)
    for n, rows in sorted(per_level.items()):
        usable = [(h, r) for h, r, bound in rows if r >= config.floor_factor * bound]
        if len(usable) < 2:
            report.fits.append(LevelFit(n, None, None, len(usable), order, True))
            continue
        slope, r2 = fit_slope(*zip(*usable))
        passed = slope >= order - config.slope_slack
        if not passed:
            logger.warning(f"Level {n}: slope {slope:.3f} below expected {order}")
        report.fits.append(LevelFit(n, slope, r2, len(usable), order, passed))
    return report


def convergence_study(jet: PotentialJet, hbar_list: Sequence[float], degree: int, levels: int = 4,
                      config: Optional[Config] = None, **solver_overrides) -> SpectralReport:
    """Residuals of normal-form predictions truncated at ``degree`` against the eigensolver.

    Raises:
        WrongSign: For a hyperbolic jet
        ConfigError: Propagated from the solver
    """
    if jet.sign != 1:
        raise WrongSign("convergence studies need the bottom of a well")
    if list(hbar_list) != sorted(hbar_list, reverse=True) or len(set(hbar_list)) != len(hbar_list):
        raise ConfigError(f"hbar values must be strictly decreasing: {list(hbar_list)}")
    nf, _ = forward_jet(jet, degree)
    results = compute_spectra(jet, hbar_list, levels, config, **solver_overrides)
    report = build_report(jet, nf, results, degree, config)
    logger.info(f"Convergence study at degree {degree}: passed={report.passed}")
    return report


@dataclass
class KappaArbitration:
    """Slopes obtained with the computed b_{1,0} and with the literature value."""

    computed_kappa: Fraction
    literature_kappa: Fraction
    computed: SpectralReport
    alternative: SpectralReport
    margin: Optional[float]
    selected: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "computed_kappa": str(self.computed_kappa),
            "literature_kappa": str(self.literature_kappa),
            "margin": self.margin,
            "selected": self.selected,
            "computed": [f.to_dict() for f in self.computed.fits],
            "alternative": [f.to_dict() for f in self.alternative.fits],
        }


def computed_kappa() -> Fraction:
    """b_{1,0} of Omega_+ + x^3 from the forward engine."""
    nf, _ = forward_jet(PotentialJet(sign=1, coeffs=(Fraction(1),)), 4)
    return nf.get(1, 0)


def kappa_arbitration(a3: Fraction = Fraction(1, 10), hbar_list: Sequence[float] = (0.08, 0.04, 0.02, 0.01),
                      levels: int = 4, config: Optional[Config] = None, half_width: float = 2.5
                      ) -> KappaArbitration:
    """Decide between the two candidate values of b_{1,0}/a_3^2 numerically.

    Both predictions share the degree-4 normal form except for b_{1,0}; the one
    that matches the spectrum converges one order faster. The margin is read on
    the ground state, where the rival term is cleanest. Every other level must
    agree on the direction and the winner must reach its theoretical order there.
    """
    config = config or Config()
    jet = PotentialJet(sign=1, coeffs=(Fraction(a3),))
    kappa = computed_kappa()
    nf, _ = forward_jet(jet, 4)
    coeffs = dict(nf.coeffs)
    coeffs[(1, 0)] = LITERATURE_KAPPA * jet.coefficient(3) ** 2
    alternative_nf = NormalFormSeries(sign=nf.sign, e0=nf.e0, coeffs=coeffs, max_degree=nf.max_degree)

    results = compute_spectra(jet, hbar_list, levels, config, half_width=half_width)
    computed = build_report(jet, nf, results, 4, config)
    alternative = build_report(jet, alternative_nf, results, 4, config)

    pairs = [(good, bad) for good, bad in zip(computed.fits, alternative.fits)
             if good.slope is not None and bad.slope is not None]
    margin = pairs[0][0].slope - pairs[0][1].slope if pairs and pairs[0][0].level == 0 else None
    threshold = 1 - config.slope_slack
    if margin is None:
        selected = "undecided"
    elif margin >= threshold and all(good.passed and good.slope > bad.slope for good, bad in pairs):
        selected = "computed"
    elif margin <= -threshold and all(bad.passed and bad.slope > good.slope for good, bad in pairs):
        selected = "literature"
    else:
        selected = "undecided"
    logger.info(f"kappa arbitration: computed={kappa}, literature={LITERATURE_KAPPA}, margin={margin}, selected={selected}")
    return KappaArbitration(kappa, LITERATURE_KAPPA, computed, alternative, margin, selected)
