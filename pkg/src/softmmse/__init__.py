"""Linear and widely linear MMSE estimation with component-wise
conditionally unbiased variants, per-bit LLR computation from the
estimates, and a seeded Monte Carlo simulator that cross-checks the
banks against each other.
"""

__version__ = "0.1.0"

from .constellations import (
    BitSets,
    Constellation,
    bit_sets,
    by_name,
    hard_decide,
    load_constellation,
    make_16qam,
    make_8qam_rect,
    make_qpsk,
)
from .errors import (
    BadSpecError,
    DegenerateComponentError,
    DimensionMismatchError,
    NotHPDError,
    SingularMatrixError,
    SoftMmseError,
)
from .linalg import (
    block2x2,
    det2,
    hermitian,
    inv2,
    is_hermitian,
    load_matrix,
    save_matrix,
    solve_hpd,
    swap_blocks,
)
from .linear import LinearEstimatorBank, bmse, conditional_stats, cwcu_lmmse, lmmse
from .llr import (
    GeneralLaw,
    LLR_CLAMP,
    ProperLaw,
    augmented,
    build_law_linear,
    build_law_widely,
    llr_equality_report,
    llr_general,
    llr_proper,
)
from .model import (
    AugmentedModel,
    ComponentView,
    LinearModel,
    augment,
    build_model,
    component_view,
)
from .simulate import (
    ChannelSpec,
    GeneratorSpec,
    RunReport,
    SimConfig,
    TrialReport,
    gen_channel,
    gen_generator,
    histogram_estimates,
    load_config,
    noise_sigma2,
    propriety_ratio,
    random_linear_model,
    run_trials,
    write_csv_tables,
    write_report_json,
)
from .widely import (
    WidelyEstimatorBank,
    bmse_widely,
    cwcu_wlmmse,
    estimate,
    widely_conditional_stats,
    wlmmse,
)

__all__ = [
    "__version__",
    # errors
    "SoftMmseError",
    "DimensionMismatchError",
    "NotHPDError",
    "SingularMatrixError",
    "DegenerateComponentError",
    "BadSpecError",
    # linalg
    "hermitian",
    "is_hermitian",
    "solve_hpd",
    "det2",
    "inv2",
    "block2x2",
    "swap_blocks",
    "save_matrix",
    "load_matrix",
    # constellations
    "Constellation",
    "BitSets",
    "make_qpsk",
    "make_16qam",
    "make_8qam_rect",
    "by_name",
    "bit_sets",
    "hard_decide",
    "load_constellation",
    # model
    "LinearModel",
    "AugmentedModel",
    "ComponentView",
    "build_model",
    "augment",
    "component_view",
    # estimators
    "LinearEstimatorBank",
    "lmmse",
    "cwcu_lmmse",
    "conditional_stats",
    "bmse",
    "WidelyEstimatorBank",
    "wlmmse",
    "cwcu_wlmmse",
    "widely_conditional_stats",
    "estimate",
    "bmse_widely",
    # llr
    "ProperLaw",
    "GeneralLaw",
    "LLR_CLAMP",
    "augmented",
    "llr_proper",
    "llr_general",
    "build_law_linear",
    "build_law_widely",
    "llr_equality_report",
    # simulation
    "ChannelSpec",
    "GeneratorSpec",
    "SimConfig",
    "TrialReport",
    "RunReport",
    "gen_channel",
    "gen_generator",
    "noise_sigma2",
    "propriety_ratio",
    "random_linear_model",
    "run_trials",
    "histogram_estimates",
    "load_config",
    "write_report_json",
    "write_csv_tables",
]
