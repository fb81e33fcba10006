"""BB84 security under a depolarizing channel with sequential intercept-resend attacks."""

from .core import (
    AttackChain,
    ChannelNoise,
    SecurityAssessment,
    added_error,
    assess,
    binary_entropy,
    bob_agreement,
    eve_agreement,
    eve_agreement_bruteforce,
    flip_probability,
    lost_information,
    mutual_information,
    noiseless_bob_agreement,
    noiseless_bob_agreement_bruteforce,
)
from .analysis import (
    ALL_SECURED,
    ALL_UNSECURED,
    QRule,
    critical_noise_no_attack,
    critical_omega,
    lost_info_curve,
    phase_boundary_2d,
    phase_surface_3d,
    qber_at,
    qber_curve,
    security_margin,
)
from .tables import SweepTable

__version__ = "0.1.0"
