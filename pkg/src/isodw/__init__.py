"""Supersymmetric one-parameter families of double-well potentials.

Build a seed, tabulate its family context, then query family members,
zero modes and their localization::

    from isodw import quartic_seed, build_context, critical_gamma
    ctx = build_context(quartic_seed(0.0))
    critical_gamma(ctx)        # about -6.99
"""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    CovarianceCheck,
    LocalizationReport,
    alr_classify,
    critical_gamma,
    gamma_star,
    localization,
    shift_covariance,
    zm_extrema,
)
from .errors import (  # noqa: E402
    Degenerate,
    DomainTooSmall,
    IsoDWError,
    NoCrossing,
    NonConvergence,
    NonFinite,
    OnePeak,
    Overflow,
    PoleAtTurningPoint,
    SingularGamma,
    Unsupported,
)
from .family import (  # noqa: E402
    FamilyContext,
    ZeroModeProfile,
    build_context,
    darboux_deformation,
    phi_general,
    potential_member,
    regular_gamma_range,
    residual_schrodinger,
    zero_mode,
)
from .grid import QuadSettings, SampledFunction, cumulative, fd_second, find_extrema, find_roots, integrate  # noqa: E402,E501
from .seeds import QuarticSeed, RazavySeed, RiccatiSeed, eval_bundle, quartic_seed, razavy_seed  # noqa: E402,E501
from .spectra import EigenResult, SpectralProblem, eigen_lowest, isospectral_report  # noqa: E402
