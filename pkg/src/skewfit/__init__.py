"""Bayesian fitting and comparison of two skew-normal model families.

The package implements posterior simulation for the geometric skew normal
(a geometric-stopped sum of iid normals) and the Azzalini skew normal, a
mean-field variational alternative for the geometric model, and a small
analysis layer (posterior predictive simulation, Kolmogorov-Smirnov
distances, kernel-density MAP summaries) used to compare the two families
on a common dataset.  A command line front end lives in ``skewfit.cli``.
"""

from .analysis import (
    FitReport,
    build_report,
    credible_interval,
    kde_curve,
    ks_distance,
    map_estimate,
    pearson_second_skewness,
    pearson_skewness,
    posterior_predictive,
    report_predictive_sample,
)
from .asn_gibbs import AsnPriorSpec
from .asn_gibbs import run_chain as fit_asn_mcmc
from .chain import GEOMETRIC_PROPOSAL, RANDOM_WALK, ChainConfig, PosteriorChain
from .datasets import (
    Dataset,
    load_dataset,
    load_frontier,
    load_guinea_pigs,
    write_dataset,
)
from .distributions import (
    AsnParams,
    GsnParams,
    asn_logpdf,
    asn_sample,
    gsn_logpdf,
    gsn_sample,
)
from .errors import DataError, NumericalError, SkewfitError
from .gsn_mcmc import GsnPriorSpec
from .gsn_mcmc import run_chain as fit_gsn_mcmc
from .gsn_vi import VariationalState, run_cavi, vi_posterior_predictive

__version__ = "0.1.0"

__all__ = [
    "AsnParams",
    "AsnPriorSpec",
    "ChainConfig",
    "DataError",
    "Dataset",
    "FitReport",
    "GEOMETRIC_PROPOSAL",
    "GsnParams",
    "GsnPriorSpec",
    "NumericalError",
    "PosteriorChain",
    "RANDOM_WALK",
    "SkewfitError",
    "VariationalState",
    "__version__",
    "asn_logpdf",
    "asn_sample",
    "build_report",
    "credible_interval",
    "fit_asn_mcmc",
    "fit_gsn_mcmc",
    "gsn_logpdf",
    "gsn_sample",
    "kde_curve",
    "ks_distance",
    "load_dataset",
    "load_frontier",
    "load_guinea_pigs",
    "map_estimate",
    "pearson_second_skewness",
    "pearson_skewness",
    "posterior_predictive",
    "report_predictive_sample",
    "run_cavi",
    "vi_posterior_predictive",
    "write_dataset",
]
