"""Symmetric tensor eigenpairs, SS-HOPM and rank-one perturbation bounds."""

from .models import NoiseGenSpec, build_tvca2, gen_sparse_noise, make_rank_one, planted_model, sample_sphere
from .sshopm import (
    DegenerateStepError,
    EigenPair,
    SshopmConfig,
    SshopmTrace,
    classify_stability,
    sshopm_solve,
    sshopm_step,
)
from .tensor import (
    BudgetExceededError,
    DimensionError,
    RankOnePlusNoise,
    SymTensorDense,
    SymTensorSparse,
    beta_estimate,
    beta_hat,
    contract,
    densify,
    gradient,
    hessian,
    rayleigh,
    sparsify,
)

__version__ = "0.1.0"
