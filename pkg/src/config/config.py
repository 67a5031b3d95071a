"""
Global configuration for the QBNF engine.

Values are read from the environment (a ``.env`` file is honoured) so that
numeric defaults can be tuned without touching code.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent.parent
LOG_DIR = Path(os.getenv("QBNF_LOG_DIR", BASE_DIR / "logs"))
OUTPUT_DIR = Path(os.getenv("QBNF_OUTPUT_DIR", BASE_DIR / "output"))

DEFAULT_MAX_DEGREE = int(os.getenv("QBNF_MAX_DEGREE", "10"))
MIN_MAX_DEGREE = 4
MAX_MAX_DEGREE = 16


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(f"QBNF_{name}", default))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(f"QBNF_{name}", default))


class Config:
    """Numeric defaults shared by the solver, the studies and the probes."""

    def __init__(self):
        """Load every setting from the environment, falling back to defaults."""
        self.output_dir = OUTPUT_DIR
        self.log_dir = LOG_DIR
        self.log_level = os.getenv("QBNF_LOG_LEVEL", "INFO")
        self.max_degree = DEFAULT_MAX_DEGREE

        # Eigensolver
        self.grid_points = _env_int("GRID_POINTS", 4000)
        self.max_grid_points = _env_int("MAX_GRID_POINTS", 64000)
        self.half_width = _env_float("HALF_WIDTH", 2.5)
        self.solver_tolerance = _env_float("SOLVER_TOLERANCE", 1e-9)
        self.min_tunnel_action = _env_float("MIN_TUNNEL_ACTION", 12.0)

        # Convergence study
        self.floor_factor = _env_float("FLOOR_FACTOR", 10.0)
        self.slope_slack = _env_float("SLOPE_SLACK", 0.3)

        # Density of states
        self.width_factor = _env_float("WIDTH_FACTOR", 0.1)
        self.dos_points = _env_int("DOS_POINTS", 8000)
        self.dos_tolerance = _env_float("DOS_TOLERANCE", 1e-5)
        self.energy_samples = _env_int("ENERGY_SAMPLES", 400)
        self.min_r2 = _env_float("MIN_R2", 0.95)
        self.aic_margin = _env_float("AIC_MARGIN", 10.0)
        self.min_log_share = _env_float("MIN_LOG_SHARE", 1e-3)
        self.jump_threshold = _env_float("JUMP_THRESHOLD", 0.1)
