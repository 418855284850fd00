"""maxdens: density estimation for the sample maximum of m future draws."""

__version__ = "0.1.0"

from .errors import (
    AllReplicatesFailed,
    FisherSingular,
    FitDiverged,
    InsufficientBlocks,
    MaxdensError,
    NonDivisibleBlock,
    SchemaError,
)
from .kernels import EPANECHNIKOV, GAUSSIAN, KernelSpec, get_kernel, kernel_for_tail
from .tailmodels import (
    Burr,
    Frechet,
    GevParams,
    Pareto,
    ReversedBurr,
    StudentT,
    TailClass,
    TailModel,
    Weibull,
    gev_cdf,
    gev_pdf,
    norming_constants,
    parse_family,
    smd_pdf,
    smd_quantile,
)
from .estimators import (
    BlockMaxima,
    EstimatorFit,
    GevFit,
    block_maxima,
    fit_gev_mle,
    ne1_density,
    ne2_density,
    pe_density,
    rescale_gev,
)
from .bandwidth import (
    BandwidthSelection,
    al_cdf,
    cv_cdf,
    oracle_ne1,
    oracle_ne2,
    robust_sigma,
    sj_density,
    ucv_density,
)
from .asymptotics import (
    PAPER_ROWS,
    RateExponents,
    RateRegime,
    eta_tilde,
    evaluation_point,
    format_fraction,
    gev_fisher_information,
    lambda_n,
    mn_kn,
    ne1_bias_var,
    ne2_bias_var,
    paper_diffs,
    pe_asymptotic_sd,
    rate_exponents,
    tau_tilde,
    zeta_tilde,
)
from .simulation import (
    ExperimentPlan,
    MiseCell,
    ne1_oracle_pointwise_mse,
    run_cell,
    run_plan,
    scaled_ise,
)
