"""
Exception hierarchy for the QBNF engine.

Every error carries the exit code the command-line front end reports for it.
"""


class QbnfError(Exception):
    """Base class for all engine errors."""

    exit_code = 5


# 2: parse / configuration

class ParseError(QbnfError):
    """Malformed JSON or field values in an input document."""

    exit_code = 2


class ConfigError(QbnfError):
    """Invalid run or solver configuration."""

    exit_code = 2


# 3: degenerate mathematical input

class NotHomogeneous(QbnfError):
    """A homological right-hand side mixes degrees or contains hbar."""

    exit_code = 3


class BadQuadraticPart(QbnfError):
    """The degree <= 2 part of a Hamiltonian is not exactly Omega_sigma."""

    exit_code = 3


class NonRealInput(QbnfError):
    """A symbol carries odd powers of hbar."""

    exit_code = 3


class NotInWPlus(QbnfError):
    """A generator has odd hbar powers or terms of graded degree < 3."""

    exit_code = 3


class NotAFunctionOfOmega(QbnfError):
    """A symbol expected to be a polynomial in Omega and hbar^2 is not."""

    exit_code = 3


class ZeroScale(QbnfError):
    """Scaling factor t = 0."""

    exit_code = 3


class WrongSign(QbnfError):
    """Operation only defined at the bottom of a well (sigma = +1)."""

    exit_code = 3


class DegenerateA3(QbnfError):
    """The recovered cubic coefficient vanishes; higher inversion is undetermined."""

    exit_code = 3


class NegativeDiscriminant(QbnfError):
    """b_{1,0} has the wrong sign for a real cubic coefficient."""

    exit_code = 3


# 4: verification failure

class VerificationFailed(QbnfError):
    """A numerical study missed its expected bound."""

    exit_code = 4


class FitError(QbnfError):
    """A density-of-states model was rejected."""

    exit_code = 4


class WindowError(QbnfError):
    """The computed spectrum does not cover the requested energy window."""

    exit_code = 4


# 5: internal inconsistency

class NonRealResult(QbnfError):
    """Odd-order Moyal terms did not cancel."""

    exit_code = 5


class EngineInconsistency(QbnfError):
    """The forward map violated a structural property it must have."""

    exit_code = 5


class SingularStage(QbnfError):
    """An inversion stage produced a singular 2x2 system."""

    exit_code = 5
