"""Information-estimation identities for the Poisson channel.

Library layers:

* :mod:`poischan.loss` -- the estimation loss and its mean decomposition.
* :mod:`poischan.priors` -- finite atomic priors and information measures.
* :mod:`poischan.scalar_channel` -- exact series engine for Y ~ Poisson(gamma X).
* :mod:`poischan.quadrature` -- deterministic 1-D integration.
* :mod:`poischan.ct_models` -- closed forms for constant (DC) signals.
* :mod:`poischan.pp_sim` -- point-process Monte Carlo with exact filters.
* :mod:`poischan.verify` -- the identity-check catalog.
* :mod:`poischan.cli` -- command-line surface.
"""

from .errors import (
    ConsistencyError,
    IntegralDivergenceError,
    NumericalError,
    QuadratureConvergenceError,
    SeriesConvergenceError,
    TranscriptionError,
)
from .loss import loss, loss0, min_mean_loss
from .priors import DiscretePrior, JointPrior, entropy, kl_divergence, moments, transform
from .quadrature import QuadResult, integrate, integrate_semi_infinite
from .scalar_channel import (
    SeriesPolicy,
    cond_output_entropy,
    mle,
    mmle,
    mutual_information,
    output_kl,
    output_pmf,
    pair_merge_kl,
    posterior_mean,
    vec_mle,
    vec_output_kl,
)
from .ct_models import (
    DcModel,
    binary_dc_cmle_closed,
    binary_dc_g,
    ct_cmle,
    ct_mle,
    halfdc_cmle_closed,
    halfdc_f,
    special_dilog,
    special_gudermannian,
)
from .pp_sim import (
    McEstimate,
    PiecewiseSignalModel,
    PointProcessPath,
    coarsen,
    mc_estimate,
    posterior_mean_at,
    sample_path,
)
from .verify import CheckReport, full_suite, run_check  # noqa: E402

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "IntegralDivergenceError",
    "NumericalError",
    "QuadratureConvergenceError",
    "SeriesConvergenceError",
    "TranscriptionError",
    "loss",
    "loss0",
    "min_mean_loss",
    "DiscretePrior",
    "JointPrior",
    "entropy",
    "kl_divergence",
    "moments",
    "transform",
    "QuadResult",
    "integrate",
    "integrate_semi_infinite",
    "SeriesPolicy",
    "cond_output_entropy",
    "mle",
    "mmle",
    "mutual_information",
    "output_kl",
    "output_pmf",
    "pair_merge_kl",
    "posterior_mean",
    "vec_mle",
    "vec_output_kl",
    "DcModel",
    "binary_dc_cmle_closed",
    "binary_dc_g",
    "ct_cmle",
    "ct_mle",
    "halfdc_cmle_closed",
    "halfdc_f",
    "special_dilog",
    "special_gudermannian",
    "McEstimate",
    "PiecewiseSignalModel",
    "PointProcessPath",
    "coarsen",
    "mc_estimate",
    "posterior_mean_at",
    "sample_path",
    "CheckReport",
    "full_suite",
    "run_check",
    "__version__",
]
