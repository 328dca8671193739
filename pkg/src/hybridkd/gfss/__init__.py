from .field import PrimeField, field_arith, is_prime, next_prime
from .lincode import (
    AccessReport,
    CodeError,
    LinearCode,
    lc_deal,
    lc_minimal_access,
    lc_recover,
    lc_recovery_vector,
    lc_validate,
)
from .shamir import (
    KeyStreamExhausted,
    SchemeError,
    ThresholdScheme,
    element_from_bits,
    shamir_deal,
    shamir_leakage_check,
    shamir_pad,
    shamir_recover,
    shamir_unpad,
)

# the worked F_5 example: 2 x 5 generator, 3 x 5 parity check
F5_EXAMPLE = LinearCode.from_lists(
    5,
    [[1, 0, 0, 0, 4], [0, 1, 1, 2, 3]],
    [[0, 2, 3, 0, 0], [2, 2, 4, 4, 2], [3, 3, 0, 4, 3]],
)

__all__ = [
    "5",
    "AccessReport",
    "CodeError",
    "F5_EXAMPLE",
    "KeyStreamExhausted",
    "LinearCode",
    "PrimeField",
    "SchemeError",
    "ThresholdScheme",
    "element_from_bits",
    "field_arith",
    "is_prime",
    "lc_deal",
    "lc_minimal_access",
    "lc_recover",
    "lc_recovery_vector",
    "lc_validate",
    "next_prime",
    "shamir_deal",
    "shamir_leakage_check",
    "shamir_pad",
    "shamir_recover",
    "shamir_unpad",
]
