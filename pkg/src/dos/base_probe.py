"""
Base probe class with the functionality shared by the critical-level probes.
"""
import asyncio
import json
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from src.config.config import Config
from src.dos.classical import Potential, classical_density_curve
from src.errors import ConfigError, WindowError
from src.spectra.eigensolver import EigensolverConfig, solve_eigenvalues

# padding of the eigenvalue window, in kernel widths
WINDOW_PADDING = 5.0


@dataclass
class DosSample:
    """Eigenvalues of one hbar over a padded energy window."""

    hbar: float
    eigenvalues: np.ndarray
    window: Tuple[float, float]
    width: float
    error_bounds: np.ndarray = field(default=None, repr=False)

    @property
    def computed_window(self) -> Tuple[float, float]:
        pad = WINDOW_PADDING * self.width
        return self.window[0] - pad, self.window[1] + pad

    def to_dict(self) -> Dict[str, Any]:
        return {
            "hbar": self.hbar,
            "window": list(self.window),
            "width": self.width,
            "levels": int(len(self.eigenvalues)),
        }


def level_density(sample: DosSample, energies: np.ndarray) -> np.ndarray:
    """(2 pi hbar) times the Gaussian-smoothed level density."""
    energies = np.asarray(energies, dtype=float)
    w = sample.width
    diff = energies[:, None] - np.asarray(sample.eigenvalues)[None, :]
    kernel = np.exp(-0.5 * (diff / w) ** 2) / (np.sqrt(2 * np.pi) * w)
    return 2 * np.pi * sample.hbar * kernel.sum(axis=1)


class CriticalLevelProbe(ABC):
    """Samples the spectrum around a critical level of V and fits its density."""

    def __init__(self, name: str, potential: Potential, critical_energy: float,
                 window: Tuple[float, float], half_width: float = None,
                 config: Optional[Config] = None, output_dir: Optional[str] = None):
        """Initialize the probe.

        Args:
            name: Used for output file names
            potential: Vectorized V(x)
            critical_energy: The critical value E0
            window: Energy window [E_lo, E_hi]
            half_width: Box half width; defaults to the configured one
            config: Numeric defaults
            output_dir: Directory for reports and density files
        """
        self.name = name
        self.potential = potential
        self.critical_energy = float(critical_energy)
        self.window = (float(window[0]), float(window[1]))
        self.config = config or Config()
        self.half_width = half_width or self.config.half_width
        self.output_dir = Path(output_dir) if output_dir else self.config.output_dir
        self.output_file = self.output_dir / f"{name}.json"
        logger.info(f"Initialized {name} probe at E0={self.critical_energy} on window {self.window}")

    def width(self, hbar: float) -> float:
        return self.config.width_factor * np.sqrt(hbar)

    def sample(self, hbar: float) -> DosSample:
        """Eigenvalues on the padded window.

        Raises:
            WindowError: If the spectrum cannot be resolved over the window
        """
        w = self.width(hbar)
        pad = WINDOW_PADDING * w
        cfg = EigensolverConfig.from_config(
            self.config, hbar,
            half_width=self.half_width,
            grid_points=self.config.dos_points,
            tolerance=self.config.dos_tolerance,
            window=(self.window[0] - pad, self.window[1] + pad),
        )
        try:
            result = solve_eigenvalues(self.potential, cfg)
        except ConfigError as e:
            raise WindowError(f"{self.name}: spectrum not resolved on {self.window} at hbar={hbar}: {e}") from e
        logger.info(f"{self.name}: {len(result.eigenvalues)} levels at hbar={hbar}")
        return DosSample(hbar, result.eigenvalues, self.window, w, result.error_bounds)

    async def sample_many(self, hbar_list: Sequence[float]) -> List[DosSample]:
        """Sample every hbar concurrently, sorted by decreasing hbar."""
        samples = await asyncio.gather(*(asyncio.to_thread(self.sample, h) for h in hbar_list))
        return sorted(samples, key=lambda s: -s.hbar)

    def energy_grid(self) -> np.ndarray:
        return np.linspace(self.window[0], self.window[1], self.config.energy_samples)

    def density(self, sample: DosSample, energies: Optional[np.ndarray] = None) -> np.ndarray:
        return level_density(sample, self.energy_grid() if energies is None else energies)

    def classical_density(self, energies: np.ndarray) -> np.ndarray:
        return classical_density_curve(self.potential, energies, self.half_width)

    def save_results(self, results: List[Dict]):
        """Save fit reports to the probe's JSON file."""
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            with open(self.output_file, "w", encoding="utf-8") as f:
                json.dump(results, f, ensure_ascii=False, indent=2, sort_keys=True)
            logger.info(f"Saved {len(results)} results to {self.output_file}")
        except OSError as e:
            logger.error(f"Error saving results: {e}")

    def save_density(self, sample: DosSample) -> Path:
        """Write a two-column (E, density) data file for one hbar."""
        energies = self.energy_grid()
        path = self.output_dir / f"{self.name}_hbar{sample.hbar:g}.dat"
        self.output_dir.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, np.column_stack([energies, self.density(sample, energies)]),
                   header="E density", fmt="%.17g")
        return path

    @abstractmethod
    def fit(self, sample: DosSample) -> Dict[str, Any]:
        """Fit the leading singular structure of one sample.

        Raises:
            FitError: If the model is rejected
        """

    def run(self, hbar_list: Sequence[float], save: bool = False) -> List[Dict[str, Any]]:
        """Sample, fit and optionally save every hbar."""
        samples = asyncio.run(self.sample_many(hbar_list))
        results = []
        for sample in samples:
            report = self.fit(sample)
            report["sample"] = sample.to_dict()
            if save:
                report["data_file"] = str(self.save_density(sample))
            results.append(report)
        if save:
            self.save_results(results)
        return results
