"""Fourth-order Schwarzian-Newton root finding, with complete inversion
solvers for the gamma and beta distribution quantiles and the incomplete
elliptic integral of the second kind."""

from .beta import (
    BetaQuantileQuery,
    BetaVariable,
    beta_b,
    beta_omega,
    beta_omega_logit,
    beta_plan,
    beta_xm,
    invert_beta,
)
from .core import (
    DegenerateStepError,
    DerivativeVanishedError,
    FunctionProblem,
    Interval,
    IterationRecord,
    Method,
    OsculatingModel,
    PoleError,
    Problem,
    ProblemEvaluation,
    Safeguard,
    SnmError,
    SolveOptions,
    SolveReport,
    StepUndefinedError,
    StopReason,
    gatan,
    gtan,
    halley_step,
    newton_step,
    osculating_eval,
    osculating_fit,
    osculating_root,
    schwarzian_omega,
    snm_step,
    solve,
    tan_problem,
)
from .elliptic import (
    EllipticProblem,
    EllipticQuery,
    ellip_omega,
    ellip_start_high,
    ellip_start_low,
    ellip_xc,
    ellip_xe,
    invert_ellip_e,
)
from .gamma import (
    GammaQuantileQuery,
    GammaVariable,
    gamma_b,
    gamma_omega,
    gamma_omega_log,
    gamma_problem,
    gamma_start,
    invert_gamma,
)
from .special import (
    carlson_rd,
    carlson_rf,
    ellip_e_complete,
    ellip_e_inc,
    gamma_density,
    integrate_adaptive,
    ln_beta,
    ln_gamma,
    reg_beta,
    reg_gamma_p,
    reg_gamma_q,
)

__version__ = "0.1.0"

__all__ = [
    "BetaQuantileQuery",
    "BetaVariable",
    "DegenerateStepError",
    "DerivativeVanishedError",
    "EllipticProblem",
    "EllipticQuery",
    "FunctionProblem",
    "GammaQuantileQuery",
    "GammaVariable",
    "Interval",
    "IterationRecord",
    "Method",
    "OsculatingModel",
    "PoleError",
    "Problem",
    "ProblemEvaluation",
    "Safeguard",
    "SnmError",
    "SolveOptions",
    "SolveReport",
    "StepUndefinedError",
    "StopReason",
    "beta_b",
    "beta_omega",
    "beta_omega_logit",
    "beta_plan",
    "beta_xm",
    "carlson_rd",
    "carlson_rf",
    "ellip_e_complete",
    "ellip_e_inc",
    "ellip_omega",
    "ellip_start_high",
    "ellip_start_low",
    "ellip_xc",
    "ellip_xe",
    "gamma_b",
    "gamma_density",
    "gamma_omega",
    "gamma_omega_log",
    "gamma_problem",
    "gamma_start",
    "gatan",
    "gtan",
    "halley_step",
    "integrate_adaptive",
    "invert_beta",
    "invert_ellip_e",
    "invert_gamma",
    "ln_beta",
    "ln_gamma",
    "newton_step",
    "osculating_eval",
    "osculating_fit",
    "osculating_root",
    "reg_beta",
    "reg_gamma_p",
    "reg_gamma_q",
    "schwarzian_omega",
    "snm_step",
    "solve",
    "tan_problem",
]
