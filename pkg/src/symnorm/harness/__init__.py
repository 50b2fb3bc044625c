"""Verification campaigns and report rendering."""

from .campaigns import (
    DEFAULT_SPECS,
    CampaignResult,
    birkhoff_campaign,
    comb_campaign,
    geiss_campaign,
    growth_campaign,
    herz_campaign,
    integrals_campaign,
    ks_campaign,
    main_campaign,
    prop21_campaign,
    tails_campaign,
    witness_table,
)
from .checks import (
    LOWER_CONSTANT,
    MainInstance,
    birkhoff_check,
    growth_factor,
    herz_sweep,
    induced_doubly_stochastic,
    kk_average,
    kk_check,
    ks_average,
    ks_bounds,
    tail_constant,
    tails_check,
    trend_bounded,
    verify_comb,
    verify_geiss,
    verify_ks,
    verify_main,
    verify_prop21,
)
from .reports import VerificationReport

__all__ = [
    "DEFAULT_SPECS",
    "LOWER_CONSTANT",
    "CampaignResult",
    "MainInstance",
    "VerificationReport",
    "birkhoff_campaign",
    "birkhoff_check",
    "comb_campaign",
    "geiss_campaign",
    "growth_campaign",
    "growth_factor",
    "herz_campaign",
    "herz_sweep",
    "induced_doubly_stochastic",
    "integrals_campaign",
    "kk_average",
    "kk_check",
    "ks_average",
    "ks_bounds",
    "ks_campaign",
    "main_campaign",
    "prop21_campaign",
    "tail_constant",
    "tails_campaign",
    "tails_check",
    "trend_bounded",
    "verify_comb",
    "verify_geiss",
    "verify_ks",
    "verify_main",
    "verify_prop21",
    "witness_table",
]
