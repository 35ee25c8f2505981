"""Exact Koopman (linear) representations of modular exponentiation.

Diffie-Hellman and RSA maps are treated as the orbit of
``x -> m*x mod p``; companion matrices reproduce those orbits exactly and
their spectra give back secret exponents.
"""

__version__ = "0.1.0"

from .dynsys import (  # noqa: E402
    CryptoInstance,
    Scheme,
    Trajectory,
    dh_instance,
    encrypt,
    period_length,
    rsa_instance,
    rsa_keygen,
    simulate,
)
from .edmd import (  # noqa: E402
    HankelData,
    build_hankel,
    edmd_fit,
    edmd_fit_float,
    minimal_dimension,
    willems_check,
)
from .errors import (  # noqa: E402
    DomainError,
    InfeasibleDimensionError,
    InsufficientSpectrumError,
    InversionError,
    KoopcryptError,
    RankDeficientError,
    RecoveryError,
)
from .exact import rank_exact, solve_exact  # noqa: E402
from .lifting import (  # noqa: E402
    UnitCircleLift,
    ValueListLift,
    invert_unit_circle,
    invert_value_list,
    lift_unit_circle,
    lift_value_list,
)
from .lincomp import (  # noqa: E402
    Lfsr,
    ReducedModel,
    berlekamp_massey,
    compare_complexity,
    fit_reduced,
    linear_complexity,
)
from .numtheory import (  # noqa: E402
    carmichael,
    euler_criterion,
    euler_totient,
    generalized_euler,
    is_prime,
    is_primitive_root,
    mod_inverse,
    mod_pow,
    multiplicative_order,
    primitive_roots,
)
from .report import ExperimentReport  # noqa: E402
from .spectral import (  # noqa: E402
    CompanionSystem,
    DimensionCheck,
    EigenSystem,
    Parity,
    RecoveryResult,
    check_dimension,
    dh_companion,
    dh_companion_padded,
    eigensystem,
    parity_test,
    recover_exponent,
    recover_rsa_key,
    rsa_companion,
    transform_coordinates,
)
