"""Secrecy outage probability of pinching-antenna downlinks.

Closed-form distributions, exact and Chebyshev-quadrature outage
evaluators, high-power asymptotics, constant lower bounds, and a
seeded, partition-invariant Monte Carlo simulator, plus a sweep CLI
that emits CSV.
"""

from .distributions import (
    PiecewiseDensity,
    cdf_offset_sq,
    cdf_offset_sq_quadrature,
    cdf_snr_bob,
    cdf_x_offset_sq,
    make_offset_sq_cdf,
    make_offset_sq_pdf,
    make_snr_bob_cdf,
    make_snr_eve_pdf,
    pdf_offset_sq,
    pdf_snr_eve,
    pdf_snr_eve_via_offset,
    pdf_x_offset_sq,
    pdf_y_offset_sq,
)
from .montecarlo import (
    McConfig,
    McResult,
    sample_offset_sq,
    sample_snr_eve,
    simulate_lower_bound_event,
    simulate_sop_fpa,
    simulate_sop_pas,
)
from .sop import (
    LOWER_BOUND_FPA,
    LOWER_BOUND_PAS,
    AccuracyError,
    Method,
    SopEstimate,
    sop_asymptotic,
    sop_chebyshev,
    sop_exact,
    sop_lower_bound_fpa,
    sop_lower_bound_pas,
)
from .sweep import Axis, SweepResult, SweepSpec, dump_distribution, run_sweep
from .system import (
    Position,
    SystemConfig,
    channel_coefficient,
    dbm_to_watts,
    snr_bob_pinching,
    snr_eve_pinching,
    snr_fpa,
    watts_to_dbm,
    waveguide_phase,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "Axis",
    "LOWER_BOUND_FPA",
    "LOWER_BOUND_PAS",
    "McConfig",
    "McResult",
    "Method",
    "PiecewiseDensity",
    "Position",
    "SopEstimate",
    "SweepResult",
    "SweepSpec",
    "SystemConfig",
    "cdf_offset_sq",
    "cdf_offset_sq_quadrature",
    "cdf_snr_bob",
    "cdf_x_offset_sq",
    "channel_coefficient",
    "dbm_to_watts",
    "dump_distribution",
    "make_offset_sq_cdf",
    "make_offset_sq_pdf",
    "make_snr_bob_cdf",
    "make_snr_eve_pdf",
    "pdf_offset_sq",
    "pdf_snr_eve",
    "pdf_snr_eve_via_offset",
    "pdf_x_offset_sq",
    "pdf_y_offset_sq",
    "run_sweep",
    "sample_offset_sq",
    "sample_snr_eve",
    "simulate_lower_bound_event",
    "simulate_sop_fpa",
    "simulate_sop_pas",
    "snr_bob_pinching",
    "snr_eve_pinching",
    "snr_fpa",
    "sop_asymptotic",
    "sop_chebyshev",
    "sop_exact",
    "sop_lower_bound_fpa",
    "sop_lower_bound_pas",
    "watts_to_dbm",
    "waveguide_phase",
    "__version__",
]
