"""Family-specific closed forms, each checkable against the generic engine."""
from .case2 import (alex_closed_form, block_sequences, case2_blocks, coeffs_case2,
                    lambda_factor, recursion_case2)
from .case3 import (Case3Blocks, case3_blocks, case3_polynomial, cofactor_coefficients,
                    trace_coefficients)
from .two_bridge import (degree_window, leading_coeff_two_bridge, n_sequence,
                         recursion_two_bridge, two_bridge_blocks, windows_respected)

# Alternate names for the two block helpers.
appendixA_blocks = two_bridge_blocks
appendixB_blocks = case2_blocks


def closed_form(spec, rep, tol=None):
    """Dispatch to the closed form for the spec's family."""
    from ..builders import Case2Spec, Case3Spec, TwoBridgeSpec
    if isinstance(spec, TwoBridgeSpec):
        return recursion_two_bridge(spec, rep, tol=tol)
    if isinstance(spec, Case2Spec):
        return recursion_case2(spec, rep, tol=tol)
    if isinstance(spec, Case3Spec):
        return case3_polynomial(spec, rep, tol=tol)
    from ..errors import UnsupportedFamily
    raise UnsupportedFamily(f"no closed form for {type(spec).__name__}")


__all__ = [
    "alex_closed_form", "appendixA_blocks", "appendixB_blocks", "block_sequences",
    "case2_blocks", "Case3Blocks", "case3_blocks", "case3_polynomial", "closed_form",
    "coeffs_case2", "cofactor_coefficients", "degree_window", "lambda_factor",
    "leading_coeff_two_bridge", "n_sequence", "recursion_case2", "recursion_two_bridge",
    "trace_coefficients", "two_bridge_blocks", "windows_respected",
]
