"""
Recover a potential jet from its normal form by probing the forward map.

Stage N fixes (a_{2N-1}, a_{2N}) from (b_{0,N}, b_{1,N-2}). The dependence is
affine once the lower coefficients are known, so three forward evaluations
determine it and a fourth validates it.
"""
from fractions import Fraction
from typing import List, NamedTuple, Tuple

from loguru import logger

from src.algebra.rational import RationalLike, as_rational, rational_sqrt
from src.algebra.weyl import WeylPoly, bracket_j
from src.errors import DegenerateA3, EngineInconsistency, NegativeDiscriminant, SingularStage, ZeroScale
from src.inversion.models import InversionResult, ProbeAffineModel
from src.normal_form.birkhoff import forward_jet
from src.normal_form.homological import sigma_poly
from src.normal_form.models import NormalFormSeries, PotentialJet

PROBES = ((0, 0), (1, 0), (0, 1))
CHECK_PROBE = (1, 1)


class QuarticRecovery(NamedTuple):
    a3: Fraction
    a4: Fraction
    exact: bool


def _stage_values(prefix: PotentialJet, N: int, u: Fraction, v: Fraction) -> Tuple[Fraction, Fraction]:
    if N == 2:
        # u stands for a_3^2; every probe value used here is a perfect square
        a3, _ = rational_sqrt(u)
        jet = PotentialJet.from_coefficients({3: a3, 4: v}, sign=prefix.sign, order=4)
    else:
        jet = prefix.truncated(2 * N - 2).with_coefficients({2 * N - 1: u, 2 * N: v})
    nf, _ = forward_jet(jet, 2 * N)
    return nf.get(0, N), nf.get(1, N - 2)


def fit_stage(prefix: PotentialJet, N: int, sign: int = None) -> ProbeAffineModel:
    """Fit the affine stage model by exact probing.

    Args:
        prefix: Jet through a_{2N-2} (ignored beyond that)
        N: Stage, N >= 2
        sign: Optional override of the prefix sign

    Raises:
        DegenerateA3: If N >= 3 and the prefix has a_3 = 0
        EngineInconsistency: If the check probe (1, 1) is not reproduced
    """
    if N < 2:
        raise ValueError(f"stage must be >= 2, got {N}")
    if sign is not None and sign != prefix.sign:
        prefix = PotentialJet(sign=sign, e0=prefix.e0, coeffs=prefix.coeffs)
    a3 = prefix.coefficient(3)
    if N >= 3 and not a3:
        raise DegenerateA3(f"stage {N} needs a_3 != 0")

    values = [_stage_values(prefix, N, Fraction(u), Fraction(v)) for u, v in PROBES]
    (k0, k2), (u0, u2), (v0, v2) = values
    model = ProbeAffineModel(
        stage=N, sign=prefix.sign, a3=a3, known_0=k0, known_2=k2,
        slopes=((u0 - k0, v0 - k0), (u2 - k2, v2 - k2)),
    )
    check = _stage_values(prefix, N, Fraction(CHECK_PROBE[0]), Fraction(CHECK_PROBE[1]))
    if check != model.evaluate(*map(Fraction, CHECK_PROBE)):
        raise EngineInconsistency(f"stage {N} is not affine: probe (1, 1) gave {check}")
    logger.debug(f"Stage {N}: beta={model.beta}, gamma={model.gamma}, delta={model.delta}")
    return model


def _solve_stage(model: ProbeAffineModel, b0: Fraction, b2: Fraction) -> Tuple[Fraction, Fraction]:
    det = model.determinant
    if not det:
        raise SingularStage(f"stage {model.stage} has a singular 2x2 system")
    (p, q), (r, s) = model.slopes
    y0, y2 = b0 - model.known_0, b2 - model.known_2
    return (s * y0 - q * y2) / det, (p * y2 - r * y0) / det


def recover_a3_a4(b02: RationalLike, b10: RationalLike, sign_choice: int = 1,
                  sign: int = 1) -> QuarticRecovery:
    """Recover (a_3, a_4) from (b_{0,2}, b_{1,0}).

    The stage-2 model is fitted on the implemented forward map; for sigma = +1
    this amounts to a_3 = +-sqrt(2 b_{1,0}) and a_4 = (2/3) b_{0,2} + 5 b_{1,0}.

    Raises:
        NegativeDiscriminant: If the recovered a_3^2 is negative
    """
    model = fit_stage(PotentialJet(sign=sign), 2)
    square, a4 = _solve_stage(model, as_rational(b02), as_rational(b10))
    if square < 0:
        raise NegativeDiscriminant(f"b_(1,0) = {b10} gives a_3^2 = {square} < 0")
    root, exact = rational_sqrt(square)
    if not exact:
        logger.warning(f"a_3^2 = {square} is not a rational square; using a certified approximation")
    return QuarticRecovery(root if sign_choice > 0 else -root, a4, exact)


def invert_with_provenance(nf: NormalFormSeries, sign_choice: int = 1) -> InversionResult:
    """Recover the jet through a_{2 floor(D/2)} with the fitted stage models.

    Raises:
        DegenerateA3: If the recovered a_3 vanishes
        SingularStage: If a stage system is singular
    """
    first = fit_stage(PotentialJet(sign=nf.sign), 2)
    square, a4 = _solve_stage(first, nf.get(0, 2), nf.get(1, 0))
    if square < 0:
        raise NegativeDiscriminant(f"b_(1,0) = {nf.get(1, 0)} gives a_3^2 = {square} < 0")
    if not square:
        raise DegenerateA3("recovered a_3 vanishes; higher coefficients are undetermined")
    root, exact = rational_sqrt(square)
    a3 = root if sign_choice > 0 else -root
    jet = PotentialJet.from_coefficients({3: a3, 4: a4}, sign=nf.sign, e0=nf.e0, order=4)
    stages: List[ProbeAffineModel] = [first]

    for N in range(3, nf.max_degree // 2 + 1):
        model = fit_stage(jet, N)
        odd, even = _solve_stage(model, nf.get(0, N), nf.get(1, N - 2))
        jet = jet.with_coefficients({2 * N - 1: odd, 2 * N: even})
        stages.append(model)

    logger.info(f"Recovered jet through order {jet.order} (exact={exact})")
    return InversionResult(jet=jet, stages=stages, exact=exact)


def invert_qbnf(nf: NormalFormSeries, sign_choice: int = 1) -> PotentialJet:
    """The jet whose normal form is ``nf``, with a_3 of sign ``sign_choice``."""
    return invert_with_provenance(nf, sign_choice).jet


def scale_jet(jet: PotentialJet, t: RationalLike) -> PotentialJet:
    """a_n -> t^(n-2) a_n for n >= 3.

    Raises:
        ZeroScale: If t = 0
    """
    t = as_rational(t)
    if not t:
        raise ZeroScale("scaling factor must be nonzero")
    return PotentialJet(sign=jet.sign, e0=jet.e0,
                        coeffs=tuple(c * t ** (n + 1) for n, c in enumerate(jet.coeffs)))


def reflect_jet(jet: PotentialJet) -> PotentialJet:
    """The jet of V(-x)."""
    return scale_jet(jet, -1)


def delta_pathway_coefficient(N: int) -> Fraction:
    """x^(2N-4) coefficient of -(1/48)({Sigma_3, x^(2N-1)}_3 + {Sigma_(2N-1), x^3}_3) for sigma = +1."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    source = bracket_j(sigma_poly(2, 1), WeylPoly.monomial(2 * N - 1, 0), 3) \
        + bracket_j(sigma_poly(N, 1), WeylPoly.monomial(3, 0), 3)
    return -source.coefficient(2 * N - 4, 0) / 48


def expected_delta_pathway(N: int) -> Fraction:
    """(N - 1)(2N^2 - 4N + 3) / 3."""
    return Fraction((N - 1) * (2 * N * N - 4 * N + 3), 3)
