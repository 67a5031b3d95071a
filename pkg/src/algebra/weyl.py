"""
Sparse exact polynomials in the graded generators x, xi and hbar, with the
Moyal brackets, the star product and the real adjoint series.

The grading is deg(x^l xi^m hbar^n) = l + m + 2n. All truncation is by this
graded degree. Coefficients are Fractions; no complex arithmetic is used: the
adjoint series (i/hbar)[S, H]* is expanded directly as a real series.
"""
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, perm
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Tuple, Union

from src.algebra.rational import RationalLike, as_rational, format_rational
from src.errors import NonRealResult, NotInWPlus


class Monomial(NamedTuple):
    """Exponents of x^l xi^m hbar^n."""

    l: int
    m: int
    n: int

    @property
    def degree(self) -> int:
        """Graded degree l + m + 2n."""
        return self.l + self.m + 2 * self.n

    @property
    def spatial_degree(self) -> int:
        """Degree in (x, xi) alone."""
        return self.l + self.m


def _canonical_key(mono: Monomial) -> Tuple[int, int, int, int]:
    return (mono.degree, mono.n, -mono.l, mono.m)


class WeylPoly:
    """Immutable sparse polynomial in x, xi, hbar with rational coefficients.

    Zero coefficients are never stored. Iteration and serialization follow the
    canonical order (graded degree, hbar power, descending x power).
    """

    __slots__ = ("_terms", "_sorted")

    def __init__(self, terms: Optional[Mapping] = None):
        """Create a polynomial from a mapping of exponent triples to coefficients.

        Args:
            terms: Mapping ``(l, m, n) -> coefficient``; coefficients may be
                ints, Fractions or ``"p/q"`` strings
        """
        clean: Dict[Monomial, Fraction] = {}
        for key, value in (terms or {}).items():
            mono = Monomial(*key)
            if min(mono) < 0:
                raise ValueError(f"negative exponent in {key}")
            coeff = as_rational(value)
            if coeff:
                clean[mono] = clean.get(mono, Fraction(0)) + coeff
        self._terms = {k: v for k, v in clean.items() if v}
        self._sorted = None

    @classmethod
    def _from_dict(cls, terms: Dict[Monomial, Fraction]) -> "WeylPoly":
        poly = cls.__new__(cls)
        poly._terms = {k: v for k, v in terms.items() if v}
        poly._sorted = None
        return poly

    # Constructors

    @classmethod
    def zero(cls) -> "WeylPoly":
        return cls._from_dict({})

    @classmethod
    def constant(cls, value: RationalLike) -> "WeylPoly":
        return cls._from_dict({Monomial(0, 0, 0): as_rational(value)})

    @classmethod
    def monomial(cls, l: int, m: int, n: int = 0, coeff: RationalLike = 1) -> "WeylPoly":
        return cls({(l, m, n): coeff})

    @classmethod
    def x(cls) -> "WeylPoly":
        return cls.monomial(1, 0)

    @classmethod
    def xi(cls) -> "WeylPoly":
        return cls.monomial(0, 1)

    @classmethod
    def hbar(cls) -> "WeylPoly":
        return cls.monomial(0, 0, 1)

    @classmethod
    def omega(cls, sign: int) -> "WeylPoly":
        """Omega_sigma = (xi^2 + sigma x^2) / 2."""
        if sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {sign}")
        return cls._from_dict({Monomial(0, 2, 0): Fraction(1, 2), Monomial(2, 0, 0): Fraction(sign, 2)})

    # Access

    def items(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in canonical order."""
        if self._sorted is None:
            self._sorted = sorted(self._terms.items(), key=lambda kv: _canonical_key(kv[0]))
        return self._sorted

    def coefficient(self, l: int, m: int, n: int = 0) -> Fraction:
        return self._terms.get(Monomial(l, m, n), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __contains__(self, key) -> bool:
        return Monomial(*key) in self._terms

    @property
    def min_degree(self) -> Optional[int]:
        return min((m.degree for m in self._terms), default=None)

    @property
    def max_degree(self) -> Optional[int]:
        return max((m.degree for m in self._terms), default=None)

    def homogeneous_part(self, degree: int) -> "WeylPoly":
        """Terms of graded degree exactly ``degree``."""
        return WeylPoly._from_dict({k: v for k, v in self._terms.items() if k.degree == degree})

    def truncate(self, max_degree: Optional[int]) -> "WeylPoly":
        """Drop every term of graded degree above ``max_degree``."""
        if max_degree is None:
            return self
        return WeylPoly._from_dict({k: v for k, v in self._terms.items() if k.degree <= max_degree})

    def hbar_components(self) -> Dict[int, "WeylPoly"]:
        """Split into hbar-free polynomials: ``{n: P_n}`` with self = sum hbar^n P_n."""
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for mono, coeff in self._terms.items():
            parts.setdefault(mono.n, {})[Monomial(mono.l, mono.m, 0)] = coeff
        return {n: WeylPoly._from_dict(t) for n, t in sorted(parts.items())}

    def spatial_degrees(self) -> List[int]:
        return sorted({m.spatial_degree for m in self._terms})

    def is_real(self) -> bool:
        """Only even powers of hbar."""
        return all(m.n % 2 == 0 for m in self._terms)

    def in_w_plus(self) -> bool:
        """Even hbar powers and graded degree >= 3 throughout."""
        return all(m.n % 2 == 0 and m.degree >= 3 for m in self._terms)

    # Arithmetic

    def __add__(self, other) -> "WeylPoly":
        other = _lift(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, Fraction(0)) + v
        return WeylPoly._from_dict(terms)

    __radd__ = __add__

    def __neg__(self) -> "WeylPoly":
        return WeylPoly._from_dict({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "WeylPoly":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "WeylPoly":
        return _lift(other) - self

    def scale(self, factor: RationalLike) -> "WeylPoly":
        factor = as_rational(factor)
        if not factor:
            return WeylPoly.zero()
        return WeylPoly._from_dict({k: v * factor for k, v in self._terms.items()})

    def __mul__(self, other) -> "WeylPoly":
        """Pointwise (commutative) product; use ``star_product`` for the Moyal product."""
        if not isinstance(other, WeylPoly):
            return self.scale(other)
        terms: Dict[Monomial, Fraction] = {}
        for (l1, m1, n1), c1 in self._terms.items():
            for (l2, m2, n2), c2 in other._terms.items():
                key = Monomial(l1 + l2, m1 + m2, n1 + n2)
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return WeylPoly._from_dict(terms)

    def __rmul__(self, other) -> "WeylPoly":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "WeylPoly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = WeylPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = WeylPoly.constant(other) if other else WeylPoly.zero()
        if not isinstance(other, WeylPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # Serialization

    def to_records(self) -> List[Dict[str, Union[int, str]]]:
        """Canonically ordered list of ``{l, m, n, coeff}`` records."""
        return [{"l": k.l, "m": k.m, "n": k.n, "coeff": format_rational(v)} for k, v in self.items()]

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "WeylPoly":
        terms: Dict[Tuple[int, int, int], Fraction] = {}
        for rec in records:
            key = (int(rec["l"]), int(rec["m"]), int(rec.get("n", 0)))
            terms[key] = terms.get(key, Fraction(0)) + as_rational(rec["coeff"])
        return cls(terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.items():
            factors = [name if power == 1 else f"{name}^{power}"
                       for name, power in (("x", mono.l), ("xi", mono.m), ("hbar", mono.n)) if power]
            magnitude = abs(coeff)
            if factors:
                body = "*".join(factors) if magnitude == 1 else f"{format_rational(magnitude)}*" + "*".join(factors)
            else:
                body = format_rational(magnitude)
            parts.append(("- " if coeff < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"WeylPoly({self})"


def _lift(value) -> WeylPoly:
    if isinstance(value, WeylPoly):
        return value
    return WeylPoly.constant(value)


@lru_cache(maxsize=None)
def bracket_coefficient(l1: int, m1: int, l2: int, m2: int, j: int) -> int:
    """Integer coefficient of {x^l1 xi^m1, x^l2 xi^m2}_j.

    Every term of the sum lands on the same monomial x^(l1+l2-j) xi^(m1+m2-j).
    """
    total = 0
    for p in range(j + 1):
        q = j - p
        if p > l1 or q > m1 or q > l2 or p > m2:
            continue
        term = comb(j, p) * perm(l1, p) * perm(m1, q) * perm(l2, q) * perm(m2, p)
        total += -term if p % 2 else term
    return total


@lru_cache(maxsize=None)
def _ad_weight(j: int) -> Fraction:
    # (1/(2j+1)!) (-1/4)^j
    return Fraction((-1) ** j, factorial(2 * j + 1) * 4 ** j)


@lru_cache(maxsize=None)
def _star_weight(j: int) -> Fraction:
    # Magnitude of (1/j!) (hbar/2i)^j; the phase is (-i)^j
    return Fraction(1, factorial(j) * 2 ** j)


def check_w_plus(S: WeylPoly):
    """Raise NotInWPlus unless S has even hbar powers and graded degree >= 3."""
    for mono, _ in S.items():
        if mono.n % 2 or mono.degree < 3:
            raise NotInWPlus(f"generator term x^{mono.l} xi^{mono.m} hbar^{mono.n} is not in W+")


def bracket_j(a: WeylPoly, b: WeylPoly, j: int, max_degree: Optional[int] = None) -> WeylPoly:
    """{a, b}_j = sum_p C(j,p) (-1)^p (d_x^p d_xi^(j-p) a)(d_x^(j-p) d_xi^p b).

    Args:
        a: Left symbol
        b: Right symbol
        j: Bracket order (j = 1 is the Poisson bracket a_xi b_x - a_x b_xi)
        max_degree: Optional graded-degree truncation of the result

    Returns:
        The bracket as a WeylPoly
    """
    if j < 0:
        raise ValueError("bracket order must be non-negative")
    out: Dict[Monomial, Fraction] = {}
    for (l1, m1, n1), c1 in a.items():
        if l1 + m1 < j:
            continue
        for (l2, m2, n2), c2 in b.items():
            if l2 + m2 < j:
                continue
            key = Monomial(l1 + l2 - j, m1 + m2 - j, n1 + n2)
            if max_degree is not None and key.degree > max_degree:
                continue
            k = bracket_coefficient(l1, m1, l2, m2, j)
            if k:
                out[key] = out.get(key, Fraction(0)) + c1 * c2 * k
    return WeylPoly._from_dict(out)


def star_product(a: WeylPoly, b: WeylPoly, max_degree: int) -> WeylPoly:
    """Moyal product a * b = sum_j (1/j!) (hbar/2i)^j {a,b}_j, truncated at ``max_degree``.

    Only valid for pairs whose odd-order terms cancel (for instance functions
    of Omega); the result is then a real-coefficient polynomial.

    Raises:
        NonRealResult: If a net imaginary contribution survives
    """
    real: Dict[Monomial, Fraction] = {}
    imag: Dict[Monomial, Fraction] = {}
    for (l1, m1, n1), c1 in a.items():
        d1 = l1 + m1 + 2 * n1
        for (l2, m2, n2), c2 in b.items():
            if d1 + l2 + m2 + 2 * n2 > max_degree:
                continue
            prod = c1 * c2
            for j in range(min(l1 + m1, l2 + m2) + 1):
                k = bracket_coefficient(l1, m1, l2, m2, j)
                if not k:
                    continue
                key = Monomial(l1 + l2 - j, m1 + m2 - j, n1 + n2 + j)
                value = prod * k * _star_weight(j)
                if j % 2 == 0:
                    sign = -1 if (j // 2) % 2 else 1
                    real[key] = real.get(key, Fraction(0)) + sign * value
                else:
                    # (-i)^j = -i (-1)^((j-1)/2)
                    sign = 1 if ((j - 1) // 2) % 2 else -1
                    imag[key] = imag.get(key, Fraction(0)) + sign * value
    leftover = WeylPoly._from_dict(imag)
    if leftover:
        raise NonRealResult(f"star product has imaginary part i*({leftover})")
    return WeylPoly._from_dict(real)


def _ad_series_unchecked(S: WeylPoly, H: WeylPoly, max_degree: Optional[int]) -> WeylPoly:
    out: Dict[Monomial, Fraction] = {}
    h_items = sorted(H.items(), key=lambda kv: kv[0].degree)
    for (l1, m1, n1), c1 in S.items():
        d1 = l1 + m1 + 2 * n1
        s1 = l1 + m1
        for (l2, m2, n2), c2 in h_items:
            if max_degree is not None and d1 + l2 + m2 + 2 * n2 - 2 > max_degree:
                break
            top = min(s1, l2 + m2)
            if top < 1:
                continue
            prod = c1 * c2
            j = 0
            while 2 * j + 1 <= top:
                order = 2 * j + 1
                k = bracket_coefficient(l1, m1, l2, m2, order)
                if k:
                    key = Monomial(l1 + l2 - order, m1 + m2 - order, n1 + n2 + 2 * j)
                    out[key] = out.get(key, Fraction(0)) + prod * k * _ad_weight(j)
                j += 1
    return WeylPoly._from_dict(out)


def ad_series(S: WeylPoly, H: WeylPoly, max_degree: Optional[int] = None) -> WeylPoly:
    """(i/hbar)[S, H]* = sum_j (1/(2j+1)!) (-1/4)^j hbar^(2j) {S, H}_(2j+1).

    Raises:
        NotInWPlus: If S is not in W+
    """
    check_w_plus(S)
    return _ad_series_unchecked(S, H, max_degree)


def exp_ad(S: WeylPoly, H: WeylPoly, max_degree: int) -> WeylPoly:
    """exp((i/hbar) ad S) H = sum_k (1/k!) ad_S^k H, truncated at ``max_degree``.

    The k-th iterate has graded degree >= k + 2, so the loop stops once every
    term is beyond the truncation.
    """
    check_w_plus(S)
    result = H.truncate(max_degree)
    term = result
    k = 1
    while term:
        term = _ad_series_unchecked(S, term, max_degree).scale(Fraction(1, k))
        result = result + term
        k += 1
    return result
