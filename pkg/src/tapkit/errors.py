"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` and an optional
``details`` dict so the CLI can emit a JSON error record.
"""


class TapkitError(Exception):
    code = "error"
    exit_code = 3

    def __init__(self, message="", **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def record(self):
        return {"error": self.code, "message": self.message, "details": _jsonable(self.details)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, float, str, bool)) or obj is None:
        return obj
    return str(obj)


class InvalidInput(TapkitError):
    """Base class for errors caused by bad user input (CLI exit code 2)."""
    code = "invalid_input"
    exit_code = 2


class NonCyclicAbelianization(InvalidInput):
    code = "non_cyclic_abelianization"


class UnknownGenerator(InvalidInput):
    code = "unknown_generator"


class DeficiencyMismatch(InvalidInput):
    code = "deficiency_mismatch"


class SpecInvariantViolation(InvalidInput):
    code = "spec_invariant_violation"


class NotCoprime(InvalidInput):
    code = "not_coprime"


class NotCase2(InvalidInput):
    code = "not_case2"


class UnsupportedFamily(InvalidInput):
    code = "unsupported_family"


class IndexOutOfRange(InvalidInput):
    code = "index_out_of_range"


class NonSquare(InvalidInput):
    code = "non_square"


class NotSL2(InvalidInput):
    code = "not_sl2"


class RelatorViolation(InvalidInput):
    code = "relator_violation"


class DivisionByZero(TapkitError, ZeroDivisionError):
    code = "division_by_zero"


class NonInvertibleResidue(DivisionByZero):
    code = "non_invertible_residue"


class InexactDivision(TapkitError):
    code = "inexact_division"


class ZeroPolynomial(TapkitError):
    code = "zero_polynomial"


class AllDenominatorsZero(TapkitError):
    code = "all_denominators_zero"


class NoNonabelianRoot(TapkitError):
    code = "no_nonabelian_root"


class DidNotConverge(TapkitError):
    code = "did_not_converge"


class Mismatch(TapkitError):
    code = "mismatch"
    exit_code = 1
