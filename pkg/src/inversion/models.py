"""
Data models for the inversion stages.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from src.algebra.rational import format_rational
from src.errors import EngineInconsistency
from src.normal_form.models import PotentialJet


@dataclass(frozen=True)
class ProbeAffineModel:
    """Affine dependence of (b_{0,N}, b_{1,N-2}) on the two new jet coefficients of stage N.

    For N = 2 the variables are (a_3^2, a_4); for N >= 3 they are
    (a_{2N-1}, a_{2N}) with a_3 fixed by the prefix. ``slopes`` is the 2x2
    matrix [[db0/du, db0/dv], [db2/du, db2/dv]].
    """

    stage: int
    sign: int
    a3: Fraction
    known_0: Fraction
    known_2: Fraction
    slopes: Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]

    def __post_init__(self):
        """An engine that produces a vanishing beta or delta is broken."""
        if not self.beta:
            raise EngineInconsistency(f"stage {self.stage}: beta vanishes")
        if not self.slopes[1][0]:
            raise EngineInconsistency(f"stage {self.stage}: delta vanishes")

    @property
    def beta(self) -> Fraction:
        return self.slopes[0][1]

    @property
    def gamma(self) -> Optional[Fraction]:
        if self.stage == 2:
            return self.slopes[0][0]
        return self.slopes[0][0] / self.a3 if self.a3 else None

    @property
    def delta(self) -> Optional[Fraction]:
        if self.stage == 2:
            return self.slopes[1][0]
        return self.slopes[1][0] / self.a3 if self.a3 else None

    @property
    def determinant(self) -> Fraction:
        (p, q), (r, s) = self.slopes
        return p * s - q * r

    def evaluate(self, u: Fraction, v: Fraction) -> Tuple[Fraction, Fraction]:
        """Predicted (b_{0,N}, b_{1,N-2}) at the stage variables (u, v)."""
        (p, q), (r, s) = self.slopes
        return self.known_0 + p * u + q * v, self.known_2 + r * u + s * v

    def to_dict(self) -> Dict[str, Any]:
        gamma, delta = self.gamma, self.delta
        return {
            "stage": self.stage,
            "beta": format_rational(self.beta),
            "gamma": None if gamma is None else format_rational(gamma),
            "delta": None if delta is None else format_rational(delta),
            "known_0": format_rational(self.known_0),
            "known_2": format_rational(self.known_2),
        }


@dataclass
class InversionResult:
    """A recovered jet together with the fitted stage models."""

    jet: PotentialJet
    stages: List[ProbeAffineModel] = field(default_factory=list)
    exact: bool = True

    def to_dict(self) -> Dict[str, Any]:
        data = self.jet.to_dict()
        data["provenance"] = {
            "exact": self.exact,
            "stages": [stage.to_dict() for stage in self.stages],
        }
        return data
