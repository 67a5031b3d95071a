"""
Density-of-states probes at critical levels of the potential: a logarithmic
singularity above a nondegenerate maximum and a step at a nondegenerate minimum.
"""
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

from src.config.config import Config
from src.dos.base_probe import CriticalLevelProbe, DosSample, level_density
from src.dos.classical import Potential, curvature_from_log, log_coefficient
from src.errors import FitError, WindowError


def smoothed_dos(sample: DosSample, f_grid: Sequence[float], f_values: Sequence[float]) -> float:
    """D_hbar(f) = sum_n f(lambda_n) for a test function given by samples.

    Raises:
        WindowError: If f is nonzero outside the sampled window
    """
    f_grid = np.asarray(f_grid, dtype=float)
    f_values = np.asarray(f_values, dtype=float)
    support = f_grid[f_values != 0]
    if support.size and (support[0] < sample.window[0] or support[-1] > sample.window[1]):
        raise WindowError(f"test function support [{support[0]}, {support[-1]}] leaves window {sample.window}")
    return float(np.interp(sample.eigenvalues, f_grid, f_values, left=0.0, right=0.0).sum())


def _aic(y: np.ndarray, fitted: np.ndarray, params: int) -> float:
    rss = max(float(np.sum((y - fitted) ** 2)), np.finfo(float).tiny)
    return len(y) * np.log(rss / len(y)) + 2 * params


def _log_design(t: np.ndarray) -> np.ndarray:
    return np.column_stack([-np.log(t), t, t ** 2])


def _poly_design(t: np.ndarray) -> np.ndarray:
    return np.column_stack([t, t ** 2, t ** 3])


def fit_log_model(energies: np.ndarray, values: np.ndarray, critical_energy: float,
                  config: Optional[Config] = None) -> Dict[str, float]:
    """Fit c |log(E - E0)| + quadratic background and compare with a cubic polynomial.

    Raises:
        FitError: If the log model is rejected
    """
    config = config or Config()
    t = np.asarray(energies, dtype=float) - critical_energy
    y = np.asarray(values, dtype=float)
    if t.size < 8 or np.any(t <= 0):
        raise FitError("log model needs at least 8 energies strictly above the critical level")

    log_model = LinearRegression().fit(_log_design(t), y)
    log_fitted = log_model.predict(_log_design(t))
    poly_model = LinearRegression().fit(_poly_design(t), y)
    poly_fitted = poly_model.predict(_poly_design(t))

    c = float(log_model.coef_[0])
    r2 = float(r2_score(y, log_fitted))
    aic_gain = _aic(y, poly_fitted, 4) - _aic(y, log_fitted, 4)
    log_share = abs(c) * float(np.std(np.log(t))) / max(float(np.mean(np.abs(y))), np.finfo(float).tiny)
    result = {"c": c, "r2": r2, "aic_gain": float(aic_gain), "log_share": log_share}

    if log_share < config.min_log_share:
        raise FitError(f"no logarithmic component (share {log_share:.2e})")
    if r2 < config.min_r2:
        raise FitError(f"log model R^2 {r2:.4f} below {config.min_r2}")
    if aic_gain < config.aic_margin:
        raise FitError(f"log model not preferred over a polynomial (AIC gain {aic_gain:.2f})")
    return result


def fit_jump(energies: np.ndarray, values: np.ndarray, level: float, gap: float) -> Tuple[float, float, float]:
    """Linear fits on both sides of ``level`` (excluding a band of half width ``gap``).

    Returns:
        (left value at level, right value at level, jump)
    """
    energies = np.asarray(energies, dtype=float)
    values = np.asarray(values, dtype=float)
    left = energies <= level - gap
    right = energies >= level + gap
    if left.sum() < 2 or right.sum() < 2:
        raise FitError(f"not enough energies on both sides of {level}")
    at = np.array([[level]])
    below = float(LinearRegression().fit(energies[left, None], values[left]).predict(at)[0])
    above = float(LinearRegression().fit(energies[right, None], values[right]).predict(at)[0])
    return below, above, above - below


class LogSingularityProbe(CriticalLevelProbe):
    """Logarithmic divergence of the level density just above a local maximum of V."""

    def __init__(self, potential: Potential, critical_energy: float, curvature: float,
                 window: Tuple[float, float], name: str = "dos_max", **kwargs):
        """Initialize the probe.

        Args:
            potential: Vectorized V(x)
            critical_energy: V at the maximum
            curvature: V''(0) at the maximum (negative)
            window: Energy window containing the critical level
        """
        super().__init__(name, potential, critical_energy, window, **kwargs)
        self.curvature = float(curvature)

    def fit(self, sample: DosSample) -> Dict[str, Any]:
        energies = self.energy_grid()
        energies = energies[energies >= self.critical_energy + 4 * sample.width]
        quantum = fit_log_model(energies, level_density(sample, energies), self.critical_energy, self.config)
        classical = fit_log_model(energies, self.classical_density(energies), self.critical_energy, self.config)
        analytic = log_coefficient(self.curvature)
        relative = abs(quantum["c"] - classical["c"]) / abs(classical["c"])
        logger.info(f"{self.name} hbar={sample.hbar}: c={quantum['c']:.5f}, classical={classical['c']:.5f}, "
                    f"analytic={analytic:.5f}")
        return {
            "hbar": sample.hbar,
            "c": quantum["c"],
            "c_classical": classical["c"],
            "c_analytic": analytic,
            "relative_error": relative,
            "curvature": curvature_from_log(quantum["c"]),
            "r2": quantum["r2"],
            "aic_gain": quantum["aic_gain"],
        }


class HeavisideJumpProbe(CriticalLevelProbe):
    """Step of the level density at a local minimum of V.

    The step is compared with the classical period 2 pi / omega of small
    oscillations, omega = sqrt(V'') at the minimum.
    """

    def __init__(self, potential: Potential, critical_energy: float, window: Tuple[float, float],
                 curvature: float = 1.0, name: str = "dos_min", **kwargs):
        if curvature <= 0:
            raise ValueError(f"curvature at a minimum must be positive, got {curvature}")
        super().__init__(name, potential, critical_energy, window, **kwargs)
        self.curvature = float(curvature)
        self.period = 2 * np.pi / np.sqrt(self.curvature)

    def fit(self, sample: DosSample) -> Dict[str, Any]:
        energies = self.energy_grid()
        below, above, jump = fit_jump(energies, level_density(sample, energies), self.critical_energy,
                                      4 * sample.width)
        ratio = jump / self.period
        detected = abs(ratio) > self.config.jump_threshold
        logger.info(f"{self.name} hbar={sample.hbar}: jump ratio {ratio:.5f} (detected={detected})")
        return {
            "hbar": sample.hbar,
            "below": below,
            "above": above,
            "jump": jump,
            "period": self.period,
            "ratio": ratio,
            "jump_detected": bool(detected),
        }


def log_singularity_fit(V: Potential, critical_energy: float, curvature: float, hbar_list: Sequence[float],
                        window: Tuple[float, float], **kwargs):
    """Fitted log coefficients for every hbar."""
    return LogSingularityProbe(V, critical_energy, curvature, window, **kwargs).run(hbar_list)


def heaviside_jump_fit(V: Potential, critical_energy: float, hbar_list: Sequence[float],
                       window: Tuple[float, float], curvature: float = 1.0, **kwargs):
    """Fitted jump ratios (jump over the small-oscillation period) for every hbar."""
    return HeavisideJumpProbe(V, critical_energy, window, curvature, **kwargs).run(hbar_list)
