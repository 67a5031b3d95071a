"""
Data models for potential jets, normal forms and generators.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple

from src.algebra.rational import RationalLike, as_rational, format_rational
from src.algebra.weyl import WeylPoly, check_w_plus
from src.errors import ParseError

Key = Tuple[int, int]


def parse_sign(value: Any) -> int:
    """Accept ``"+"``/``"-"`` or ``1``/``-1``; JSON booleans are rejected."""
    if isinstance(value, bool):
        raise ParseError(f"sign must be '+' or '-', got {value!r}")
    if value in ("+", 1, "+1", "1"):
        return 1
    if value in ("-", -1, "-1"):
        return -1
    raise ParseError(f"sign must be '+' or '-', got {value!r}")


def format_sign(sign: int) -> str:
    return "+" if sign > 0 else "-"


def _parse_rational(value: Any, where: str) -> Fraction:
    try:
        return as_rational(value)
    except TypeError as e:
        raise ParseError(f"{where}: {e}") from e


@dataclass(frozen=True)
class PotentialJet:
    """Taylor jet E0 + sigma x^2/2 + sum_{n>=3} a_n x^n of a potential at a critical point.

    ``coeffs[0]`` is a_3. The quadratic coefficient is never stored.
    """

    sign: int = 1
    e0: Fraction = Fraction(0)
    coeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        """Normalize the scalar types."""
        if self.sign not in (1, -1):
            raise ParseError(f"sign must be +1 or -1, got {self.sign}")
        object.__setattr__(self, "e0", as_rational(self.e0))
        object.__setattr__(self, "coeffs", tuple(as_rational(c) for c in self.coeffs))

    @classmethod
    def from_coefficients(cls, coeffs: Mapping[int, RationalLike], sign: int = 1,
                          e0: RationalLike = 0, order: Optional[int] = None) -> "PotentialJet":
        """Build a jet from ``{n: a_n}`` with n >= 3; missing orders are zero."""
        if any(n < 3 for n in coeffs):
            raise ParseError("jet coefficients start at x^3")
        top = max(coeffs, default=2) if order is None else order
        return cls(sign=sign, e0=as_rational(e0),
                   coeffs=tuple(as_rational(coeffs.get(n, 0)) for n in range(3, top + 1)))

    @property
    def order(self) -> int:
        """Truncation order M of the jet (at least 3)."""
        return max(3, 2 + len(self.coeffs))

    def coefficient(self, n: int) -> Fraction:
        """a_n, zero beyond the stored jet."""
        if n == 2:
            return Fraction(self.sign, 2)
        if n < 2:
            return Fraction(0)
        index = n - 3
        return self.coeffs[index] if index < len(self.coeffs) else Fraction(0)

    def with_coefficients(self, updates: Mapping[int, RationalLike]) -> "PotentialJet":
        """Copy with some a_n replaced, extending the jet if needed."""
        top = max([self.order, *updates.keys()])
        values = {n: self.coefficient(n) for n in range(3, top + 1)}
        values.update({n: as_rational(v) for n, v in updates.items()})
        return PotentialJet.from_coefficients(values, sign=self.sign, e0=self.e0, order=top)

    def truncated(self, order: int) -> "PotentialJet":
        """Keep a_3..a_order."""
        return PotentialJet(sign=self.sign, e0=self.e0, coeffs=self.coeffs[:max(0, order - 2)])

    def to_dict(self) -> Dict[str, Any]:
        """JSON form ``{"sign", "E0", "a"}``; ``a`` starts at a_3."""
        return {
            "sign": format_sign(self.sign),
            "E0": format_rational(self.e0),
            "a": [format_rational(c) for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PotentialJet":
        """Parse the JSON form, failing with ParseError on bad fields."""
        if not isinstance(data, Mapping):
            raise ParseError("jet must be a JSON object")
        raw = data.get("a", [])
        if not isinstance(raw, list):
            raise ParseError("jet field 'a' must be a list")
        return cls(
            sign=parse_sign(data.get("sign", "+")),
            e0=_parse_rational(data.get("E0", "0"), "E0"),
            coeffs=tuple(_parse_rational(v, f"a[{i}]") for i, v in enumerate(raw)),
        )


@dataclass(frozen=True)
class _CoefficientSeries:
    sign: int = 1
    e0: Fraction = Fraction(0)
    coeffs: Mapping[Key, Fraction] = field(default_factory=dict)
    max_degree: int = 10

    _field_name = "b"

    def __post_init__(self):
        clean: Dict[Key, Fraction] = {}
        for (j, k), value in self.coeffs.items():
            if 2 * j + k < 2:
                raise ParseError(f"entry ({j}, {k}) is not a normal-form coefficient (needs 2j + k >= 2)")
            if 4 * j + 2 * k > self.max_degree:
                raise ParseError(f"entry ({j}, {k}) exceeds max_degree {self.max_degree}")
            value = as_rational(value)
            if value:
                clean[(j, k)] = value
        object.__setattr__(self, "coeffs", dict(sorted(clean.items(), key=lambda kv: (4 * kv[0][0] + 2 * kv[0][1], kv[0]))))
        object.__setattr__(self, "e0", as_rational(self.e0))

    def get(self, j: int, k: int) -> Fraction:
        return self.coeffs.get((j, k), Fraction(0))

    def keys(self) -> Iterable[Key]:
        """Every admissible (j, k) for this truncation, present or not."""
        return [(j, k) for j in range(self.max_degree // 4 + 1)
                for k in range((self.max_degree - 4 * j) // 2 + 1) if 2 * j + k >= 2]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sign": format_sign(self.sign),
            "E0": format_rational(self.e0),
            "max_degree": self.max_degree,
            self._field_name: [{"j": j, "k": k, "coeff": format_rational(v)} for (j, k), v in self.coeffs.items()],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]):
        if not isinstance(data, Mapping):
            raise ParseError("normal form must be a JSON object")
        try:
            entries = {(int(e["j"]), int(e["k"])): _parse_rational(e["coeff"], f"({e['j']}, {e['k']})")
                       for e in data.get(cls._field_name, [])}
            max_degree = int(data.get("max_degree", 10))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"malformed normal-form entry: {e}") from e
        return cls(sign=parse_sign(data.get("sign", "+")),
                   e0=_parse_rational(data.get("E0", "0"), "E0"),
                   coeffs=entries, max_degree=max_degree)


@dataclass(frozen=True)
class NormalFormSeries(_CoefficientSeries):
    """B = Omega + sum b_{j,k} hbar^(2j) Omega^k as a Weyl symbol.

    The leading Omega term is implicit.
    """

    def classical_part(self) -> Dict[int, Fraction]:
        """The classical normal form {k: b_{0,k}}."""
        return {k: v for (j, k), v in self.coeffs.items() if j == 0}

    def to_symbol(self) -> WeylPoly:
        """Expand B as a polynomial in x, xi, hbar (pointwise powers of Omega)."""
        omega = WeylPoly.omega(self.sign)
        symbol = omega
        for (j, k), value in self.coeffs.items():
            symbol = symbol + (WeylPoly.hbar() ** (2 * j) * omega ** k).scale(value)
        return symbol


@dataclass(frozen=True)
class FunctionalNormalForm(_CoefficientSeries):
    """Operator-power form sum b^_{j,k} hbar^(2j) Omega^k, Omega^k the k-th operator power."""

    _field_name = "b_hat"


@dataclass(frozen=True)
class Generator:
    """Accumulated generator S = S_3 + ... + S_D of the conjugation."""

    S: WeylPoly = field(default_factory=WeylPoly.zero)

    def __post_init__(self):
        check_w_plus(self.S)

    def to_dict(self) -> Dict[str, Any]:
        return {"S": self.S.to_records()}
