"""
Density-of-states probes at critical levels of the potential.
"""
from src.dos.base_probe import CriticalLevelProbe, DosSample, level_density
from src.dos.classical import classical_density, classical_period, phase_space_integral, turning_points
from src.dos.probes import (HeavisideJumpProbe, LogSingularityProbe, fit_jump, fit_log_model,
                            heaviside_jump_fit, log_singularity_fit, smoothed_dos)

__all__ = [
    "CriticalLevelProbe", "DosSample", "level_density",
    "classical_density", "classical_period", "phase_space_integral", "turning_points",
    "HeavisideJumpProbe", "LogSingularityProbe", "fit_jump", "fit_log_model",
    "heaviside_jump_fit", "log_singularity_fit", "smoothed_dos",
]
