"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the command line can
translate any library failure without a lookup table of its own.
"""

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_SINGULAR = 3
EXIT_INFEASIBLE = 4
EXIT_INTERNAL = 5


class QuadEmbedError(Exception):
    """Base class for all library errors."""

    exit_code = EXIT_INTERNAL


# -- input / parsing ---------------------------------------------------------

class ParseError(QuadEmbedError):
    exit_code = EXIT_PARSE


class DimensionMismatch(QuadEmbedError, ValueError):
    exit_code = EXIT_PARSE


class UnknownParameter(QuadEmbedError, KeyError):
    exit_code = EXIT_PARSE

    def __str__(self):
        return Exception.__str__(self)


# -- verification / structure failures --------------------------------------

class VerificationError(QuadEmbedError):
    exit_code = EXIT_VERIFY


class DegenerateInput(VerificationError, ValueError):
    pass


class NotInvariantPair(VerificationError):
    pass


class NotEigenpair(VerificationError):
    pass


class NotMinimal(VerificationError):
    pass


class RealEigenvalue(VerificationError, ValueError):
    pass


class SelfPaired(VerificationError, ValueError):
    pass


class PairingViolation(VerificationError):
    pass


class SelfPairedAimedMismatch(PairingViolation):
    pass


class BadFreeBlock(VerificationError):
    pass


class StructureViolation(VerificationError):
    pass


class NotGyroscopic(StructureViolation):
    pass


class UnsupportedClass(VerificationError):
    pass


# -- singularity / conditioning ----------------------------------------------

class SingularityError(QuadEmbedError):
    exit_code = EXIT_SINGULAR


class SingularSystem(SingularityError):
    pass


class SpectraOverlap(SingularityError):
    pass


class NearSingularGram(SingularityError):
    pass


class RankDeficient(SingularityError):
    pass


class IsotropicBreakdown(SingularityError):
    pass


class SingularR(SingularityError):
    def __init__(self, msg="R is numerically singular; try find_nonsingular_P "
                 "to obtain a P with nonsingular R"):
        super().__init__(msg)


class SingularP(SingularityError):
    pass


class SingularSolution(SingularityError):
    pass


class SingularLambda(SingularityError):
    pass


class SingularK(SingularityError):
    pass


class SingularM(SingularityError):
    pass


class SingularInnerMatrix(SingularityError):
    pass


class DegenerateEigenvalues(SingularityError):
    pass


# -- infeasible free parameters ----------------------------------------------

class InfeasibleParameters(QuadEmbedError):
    exit_code = EXIT_INFEASIBLE


class ParamRetry(InfeasibleParameters):
    pass


class NoFeasibleParams(InfeasibleParameters):
    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, QuadEmbedError):
        return exc.exit_code
    return EXIT_INTERNAL
