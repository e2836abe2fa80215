"""Pilot design and active pilot-contamination attacks in multi-cell massive MIMO."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateInputError,
    DomainError,
    FeasibilityError,
    PilotAttackError,
    UnsupportedConfigurationError,
)
from .pilot_design import (  # noqa: E402
    PilotBook,
    allocate_power,
    canonicalize_first_pilot,
    correlation,
    design_pilots,
    effective_bandwidth,
    frame_residual,
    gamma_from_bandwidth,
    gwbe_sequences,
    scale_to_boundary,
)
from .load_region import (  # noqa: E402
    LoadRegionBound,
    RegionSurface,
    check_user_load,
    check_user_load_with_attacker,
    region_surface,
)
from .channel import (  # noqa: E402
    ChannelRealization,
    NetworkConfig,
    channel_hardening_check,
    generate_realization,
    generate_uplink_noise,
)
from .attack import AttackerConfig, alpha, alpha_all, attacker_sequences, effective_downlink_noise_var  # noqa: E402
from .link_sim import (  # noqa: E402
    MIN_REALIZATIONS,
    MonteCarloResult,
    SinrReport,
    delta,
    delta_all,
    ls_estimate,
    monte_carlo_sinr,
    mrt_precoder,
    pilot_matrix,
    sinr_asymptotic,
    sinr_asymptotic_all,
    sinr_closed_form,
    sinr_closed_form_all,
    sinr_monte_carlo,
    sinr_report,
    uplink_observation,
)
from .scenario import Scenario, design_network, load_scenario  # noqa: E402
