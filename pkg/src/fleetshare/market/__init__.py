"""Discount-factor populations, full-market-share offers and equilibrium verdicts."""

from fleetshare.market.mixed import check_rule, mixed_market_analysis
from fleetshare.market.models import (
    DiscountProfile,
    DriverAttitude,
    EquilibriumVerdict,
    MarketOffer,
    MixedAnalysis,
    Mode,
    NestedVerdict,
    OfferVerdict,
    PreprocessResult,
    UtilityPair,
    VerdictKind,
)
from fleetshare.market.offers import (
    full_market_offer,
    necessary_condition,
    preprocess_small_gamma,
    tailored_offer_two_routes,
)
from fleetshare.market.stages import (
    ComponentState,
    MimicHDV,
    StackelbergMix,
    Stage,
    StageKind,
    StageRecord,
    StageTrace,
    TailoredOffer,
    dynamic_stages,
)
from fleetshare.market.utilities import general_utility_pair, hdv_disutility, market_share

__all__ = [
    "ComponentState",
    "DiscountProfile",
    "DriverAttitude",
    "EquilibriumVerdict",
    "MarketOffer",
    "MimicHDV",
    "MixedAnalysis",
    "Mode",
    "NestedVerdict",
    "OfferVerdict",
    "PreprocessResult",
    "StackelbergMix",
    "Stage",
    "StageKind",
    "StageRecord",
    "StageTrace",
    "TailoredOffer",
    "UtilityPair",
    "VerdictKind",
    "check_rule",
    "dynamic_stages",
    "full_market_offer",
    "general_utility_pair",
    "hdv_disutility",
    "market_share",
    "mixed_market_analysis",
    "necessary_condition",
    "preprocess_small_gamma",
    "tailored_offer_two_routes",
]
