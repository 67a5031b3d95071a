"""
Dirichlet finite-difference eigensolver for -hbar^2/2 d^2/dx^2 + V(x) on [-L, L].

Each solve runs three nested grids (spacing h, h/2, h/4), combines them with two
levels of Richardson extrapolation and reports the extrapolated eigenvalues with
a self-estimated error bound. The base grid is refined until the bound meets the
requested tolerance.
"""
import asyncio
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.integrate import trapezoid
from scipy.linalg import eigh_tridiagonal

from src.config.config import Config
from src.errors import ConfigError

Potential = Callable[[np.ndarray], np.ndarray]

# samples used for the turning-point and tunnelling checks
_CHECK_SAMPLES = 20001


@dataclass
class EigensolverConfig:
    """Box, grid and accuracy settings for one value of hbar.

    Either ``levels`` (the lowest K eigenvalues) or ``window`` (every eigenvalue
    in an energy interval) selects the spectrum.
    """

    hbar: float
    levels: int = 6
    half_width: float = 2.5
    grid_points: int = 4000
    max_points: int = 64000
    tolerance: float = 1e-9
    window: Optional[Tuple[float, float]] = None
    min_tunnel_action: float = 12.0
    check_turning_points: bool = True

    def __post_init__(self):
        """Validate the numeric ranges."""
        if self.hbar <= 0:
            raise ConfigError(f"hbar must be positive, got {self.hbar}")
        if self.half_width <= 0:
            raise ConfigError(f"half width must be positive, got {self.half_width}")
        if self.grid_points < 16 or self.max_points < self.grid_points:
            raise ConfigError(f"bad grid sizes {self.grid_points}/{self.max_points}")
        if self.window is None and self.levels < 1:
            raise ConfigError("at least one level must be requested")
        if self.window is not None and not self.window[0] < self.window[1]:
            raise ConfigError(f"empty energy window {self.window}")

    @classmethod
    def from_config(cls, config: Config, hbar: float, **overrides) -> "EigensolverConfig":
        """Defaults from the global Config, with keyword overrides."""
        values = dict(
            hbar=hbar,
            half_width=config.half_width,
            grid_points=config.grid_points,
            max_points=config.max_grid_points,
            tolerance=config.solver_tolerance,
            min_tunnel_action=config.min_tunnel_action,
        )
        values.update(overrides)
        return cls(**values)


@dataclass
class EigenResult:
    """Extrapolated eigenvalues with their error bounds."""

    hbar: float
    eigenvalues: np.ndarray
    error_bounds: np.ndarray
    grid_points: int
    first_index: int = 0
    refinements: int = 0
    raw: np.ndarray = field(default=None, repr=False)

    @property
    def max_error(self) -> float:
        return float(np.max(self.error_bounds)) if len(self.error_bounds) else 0.0

    def to_dict(self):
        return {
            "hbar": float(self.hbar),
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "error_bounds": [float(v) for v in self.error_bounds],
            "grid_points": int(self.grid_points),
            "first_index": int(self.first_index),
        }


def _grid(half_width: float, points: int) -> Tuple[np.ndarray, float]:
    x = np.linspace(-half_width, half_width, points + 2)[1:-1]
    return x, 2.0 * half_width / (points + 1)


def _tridiagonal(V: Potential, hbar: float, half_width: float, points: int):
    x, h = _grid(half_width, points)
    kinetic = hbar * hbar / (h * h)
    diag = kinetic + np.asarray(V(x), dtype=np.float64)
    off = np.full(points - 1, -0.5 * kinetic)
    return diag, off, kinetic


def _index_range(V: Potential, cfg: EigensolverConfig, points: int) -> Tuple[int, int]:
    if cfg.window is None:
        return 0, cfg.levels - 1
    diag, off, _ = _tridiagonal(V, cfg.hbar, cfg.half_width, points)
    floor = float(np.min(diag - 2 * abs(off[0]))) - 1.0
    below = eigh_tridiagonal(diag, off, eigvals_only=True, select="v", select_range=(floor, cfg.window[1]))
    first = int(np.searchsorted(below, cfg.window[0]))
    return first, len(below) - 1


def _eigenvalues(V: Potential, cfg: EigensolverConfig, points: int, first: int, last: int) -> Tuple[np.ndarray, float]:
    diag, off, kinetic = _tridiagonal(V, cfg.hbar, cfg.half_width, points)
    values = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(first, last))
    scale = 2.0 * kinetic + float(np.max(np.abs(diag - kinetic)))
    return values, scale


def _richardson(V: Potential, cfg: EigensolverConfig, points: int, first: int, last: int):
    e1, _ = _eigenvalues(V, cfg, points, first, last)
    e2, _ = _eigenvalues(V, cfg, 2 * points + 1, first, last)
    e4, scale = _eigenvalues(V, cfg, 4 * points + 3, first, last)
    r1 = (4.0 * e2 - e1) / 3.0
    r2 = (4.0 * e4 - e2) / 3.0
    values = (16.0 * r2 - r1) / 15.0
    roundoff = 8.0 * np.finfo(np.float64).eps * scale
    bounds = np.abs(r2 - r1) / 15.0 + roundoff
    return values, bounds, e4


def check_localization(V: Potential, cfg: EigensolverConfig, energy: float):
    """Require the classically allowed set at ``energy`` to stay away from the walls.

    The tunnelling action from each outer turning point to the wall must be at
    least ``cfg.min_tunnel_action``.

    Raises:
        ConfigError: If the allowed region reaches a wall or the barrier is too thin
    """
    x = np.linspace(-cfg.half_width, cfg.half_width, _CHECK_SAMPLES)
    excess = np.asarray(V(x), dtype=np.float64) - energy
    allowed = np.flatnonzero(excess <= 0)
    if allowed.size == 0:
        return
    if allowed[0] == 0 or allowed[-1] == x.size - 1:
        raise ConfigError(f"energy {energy:.6g} is classically allowed at the box wall (L = {cfg.half_width})")
    momentum = np.sqrt(np.clip(2.0 * excess, 0.0, None))
    left = trapezoid(momentum[:allowed[0] + 1], x[:allowed[0] + 1]) / cfg.hbar
    right = trapezoid(momentum[allowed[-1]:], x[allowed[-1]:]) / cfg.hbar
    if min(left, right) < cfg.min_tunnel_action:
        raise ConfigError(
            f"tunnelling action {min(left, right):.3g} below {cfg.min_tunnel_action} at energy {energy:.6g}; "
            f"enlarge the box"
        )


def solve_eigenvalues(V: Potential, cfg: EigensolverConfig) -> EigenResult:
    """Lowest ``cfg.levels`` eigenvalues, or all eigenvalues in ``cfg.window``.

    Raises:
        ConfigError: If the localization check fails or the error bound cannot be
            brought below the tolerance within ``cfg.max_points``
    """
    points = cfg.grid_points
    refinements = 0
    while True:
        first, last = _index_range(V, cfg, points)
        if last < first:
            logger.warning(f"No eigenvalues in window {cfg.window} at hbar={cfg.hbar}")
            empty = np.zeros(0)
            return EigenResult(cfg.hbar, empty, empty, points, first, refinements, empty)
        values, bounds, raw = _richardson(V, cfg, points, first, last)
        if float(np.max(bounds)) <= cfg.tolerance:
            break
        if 2 * points + 1 > cfg.max_points:
            raise ConfigError(
                f"error bound {float(np.max(bounds)):.3g} above tolerance {cfg.tolerance:g} "
                f"with {points} base points at hbar={cfg.hbar}"
            )
        logger.warning(f"Refining grid at hbar={cfg.hbar}: {points} -> {2 * points + 1} points")
        points = 2 * points + 1
        refinements += 1

    if cfg.window is not None:
        keep = (values >= cfg.window[0]) & (values <= cfg.window[1])
        first += int(np.argmax(keep)) if keep.any() else 0
        values, bounds, raw = values[keep], bounds[keep], raw[keep]
    if cfg.check_turning_points and values.size:
        check_localization(V, cfg, float(values[-1]))
    logger.debug(f"hbar={cfg.hbar}: {values.size} eigenvalues, max bound {float(np.max(bounds)) if values.size else 0:.2e}")
    return EigenResult(cfg.hbar, values, bounds, points, first, refinements, raw)


async def solve_batch(V: Potential, configs: Sequence[EigensolverConfig]) -> List[EigenResult]:
    """Solve every configuration concurrently; results sorted by decreasing hbar."""
    results = await asyncio.gather(*(asyncio.to_thread(solve_eigenvalues, V, cfg) for cfg in configs))
    return sorted(results, key=lambda r: -r.hbar)


def solve_many(V: Potential, configs: Sequence[EigensolverConfig]) -> List[EigenResult]:
    """Blocking wrapper around ``solve_batch``."""
    return asyncio.run(solve_batch(V, configs))
