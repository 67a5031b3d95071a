"""
Configuration package initialization file.
"""
from .config import Config
from .run_config import RunConfig

__all__ = ['Config', 'RunConfig']
