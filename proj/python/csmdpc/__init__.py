from ._csmdpc import (
    CodeMode,
    NotInvertibleError,
    ParameterSet,
    ParseError,
    binomial,
    custom_params,
    decrypt,
    decrypt_error,
    encrypt,
    encrypt_random,
    estimate_theta0,
    find_preset,
    keygen,
    measure_dfr,
    presets,
    public_key_from_private,
    rank,
    ring_invert,
    ring_mul,
    unrank,
)

__all__ = [
    "CodeMode",
    "NotInvertibleError",
    "ParameterSet",
    "ParseError",
    "binomial",
    "custom_params",
    "decrypt",
    "decrypt_error",
    "encrypt",
    "encrypt_random",
    "estimate_theta0",
    "find_preset",
    "keygen",
    "measure_dfr",
    "presets",
    "public_key_from_private",
    "rank",
    "ring_invert",
    "ring_mul",
    "unrank",
]
