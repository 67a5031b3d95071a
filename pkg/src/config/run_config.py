"""
Validated settings for a single command-line run.
"""
from dataclasses import dataclass, field
from typing import List, Optional

from src.config.config import DEFAULT_MAX_DEGREE, MAX_MAX_DEGREE, MIN_MAX_DEGREE
from src.errors import ConfigError


def check_degree(name: str, value: int):
    """Raise ConfigError unless ``value`` is an even truncation degree in range."""
    if value % 2 or not MIN_MAX_DEGREE <= value <= MAX_MAX_DEGREE:
        raise ConfigError(f"{name} must be even and in [{MIN_MAX_DEGREE}, {MAX_MAX_DEGREE}], got {value}")


@dataclass
class RunConfig:
    """Represents one CLI invocation."""

    subcommand: str
    input_path: Optional[str] = None
    inline_json: Optional[str] = None
    max_degree: int = DEFAULT_MAX_DEGREE
    hbar_list: List[float] = field(default_factory=list)
    output_path: Optional[str] = None
    seed: int = 0
    prediction_degree: Optional[int] = None

    def __post_init__(self):
        """Check the degree ranges and the hbar ladder."""
        check_degree("max_degree", self.max_degree)
        if self.prediction_degree is not None:
            check_degree("prediction degree", self.prediction_degree)
        if any(h <= 0 for h in self.hbar_list):
            raise ConfigError(f"hbar values must be positive: {self.hbar_list}")
        if any(b >= a for a, b in zip(self.hbar_list, self.hbar_list[1:])):
            raise ConfigError(f"hbar values must be strictly decreasing: {self.hbar_list}")
