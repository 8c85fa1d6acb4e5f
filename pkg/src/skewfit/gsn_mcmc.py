"""Hybrid Gibbs / Metropolis-Hastings sampler for the geometric skew normal.

Model: X_i = sum of N_i iid Normal(mu, sigma^2) terms, N_i ~ Geometric(p) on
{1, 2, ...}.  Priors: (mu, sigma^2) normal-inverse-gamma (mean v0, precision
factor n0, shape alpha, rate beta) and p ~ Beta(a, b).

Conditional on the latent counts the parameter draws are exact conjugate
updates; the counts themselves move by one of two Metropolis kernels per
sweep: an independence proposal from a freshly randomized geometric, or a
+-1 random walk reflected at 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import GEOMETRIC_PROPOSAL, ChainConfig, PosteriorChain
from .distributions import beta as beta_sample
from .distributions import geometric as geometric_sample
from .distributions import normal_inverse_gamma
from .errors import NumericalError

_SIGMA2_FLOOR = 1e-300
_PROB_EPS = 1e-15


@dataclass(frozen=True)
class GsnPriorSpec:
    """Hyperparameters: normal-inverse-gamma (v0, n0, alpha, beta) on
    (mu, sigma^2) and Beta(a, b) on p."""

    v0: float = 0.0
    n0: float = 0.001
    alpha: float = 2.001
    beta: float = 1.001
    a: float = 1.0
    b: float = 1.0

    def __post_init__(self):
        for name in ("n0", "alpha", "beta", "a", "b"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")


@dataclass
class GsnState:
    """Current sampler state: parameters plus one latent count per datum."""

    mu: float
    sigma2: float
    p: float
    latent_counts: np.ndarray

    def __post_init__(self):
        self.latent_counts = np.asarray(self.latent_counts, dtype=np.int64)
        if self.sigma2 <= 0.0:
            raise ValueError("sigma2 must be positive")
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must lie in (0, 1)")
        if np.any(self.latent_counts < 1):
            raise ValueError("latent counts must be >= 1")


def latent_log_target(n, x, mu, sigma2, p):
    """Unnormalized log conditional of a latent count:
    -(x - n mu)^2 / (2 n sigma^2) + (n - 1) ln(1 - p) - 0.5 ln n."""
    nf = np.asarray(n, dtype=float)
    return (
        -((x - nf * mu) ** 2) / (2.0 * nf * sigma2)
        + (nf - 1.0) * math.log1p(-p)
        - 0.5 * np.log(nf)
    )


def _accept(log_ratio, rng):
    u = rng.random(np.shape(log_ratio))
    with np.errstate(divide="ignore"):
        return np.log(u) < log_ratio


def update_latents_geometric(state: GsnState, data, rng):
    """Independence-proposal sweep: one geometric proposal distribution with
    a fresh uniform rate is shared by the whole sweep.  Returns the new
    counts and the number of accepted moves."""
    p_prop = min(max(rng.random(), _PROB_EPS), 1.0 - _PROB_EPS)
    old = state.latent_counts
    prop = geometric_sample(p_prop, rng, size=old.shape)
    # proposal pmf q(n) = p_prop (1-p_prop)^(n-1); the p_prop factors cancel
    log_ratio = (
        latent_log_target(prop, data, state.mu, state.sigma2, state.p)
        - latent_log_target(old, data, state.mu, state.sigma2, state.p)
        + (old - prop) * math.log1p(-p_prop)
    )
    take = _accept(log_ratio, rng)
    return np.where(take, prop, old), int(take.sum())


def update_latents_random_walk(state: GsnState, data, rng):
    """Reflected +-1 random-walk sweep: a proposed move from 1 down is
    reflected back to 1 (a self-move, always accepted).  Returns the new
    counts and the number of accepted moves."""
    old = state.latent_counts
    step = rng.integers(0, 2, size=old.shape) * 2 - 1
    prop = np.maximum(old + step, 1)
    log_ratio = latent_log_target(
        prop, data, state.mu, state.sigma2, state.p
    ) - latent_log_target(old, data, state.mu, state.sigma2, state.p)
    take = _accept(log_ratio, rng)
    return np.where(take, prop, old), int(take.sum())


_LATENT_KERNELS = {
    GEOMETRIC_PROPOSAL: update_latents_geometric,
    "random_walk": update_latents_random_walk,
}


def update_p(latent_counts, prior: GsnPriorSpec, rng) -> float:
    """Exact conditional draw p ~ Beta(m + a, sum(n_i) - m + b)."""
    m = latent_counts.size
    total = int(latent_counts.sum())
    return float(beta_sample(m + prior.a, total - m + prior.b, rng))


def posterior_nig_params(latent_counts, data, prior: GsnPriorSpec):
    """Conditional normal-inverse-gamma parameters (mu*, n*, alpha*, beta*)
    for (mu, sigma^2) given the latent counts."""
    counts = np.asarray(latent_counts, dtype=float)
    m = counts.size
    total = counts.sum()
    n_star = total + prior.n0
    mu_star = (prior.n0 * prior.v0 + data.sum()) / n_star
    alpha_star = prior.alpha + 0.5 * m
    quad = np.sum((data - counts * mu_star) ** 2 / counts)
    beta_star = prior.beta + 0.5 * (prior.n0 * (mu_star - prior.v0) ** 2 + quad)
    return mu_star, n_star, alpha_star, beta_star


def update_mu_sigma(latent_counts, data, prior: GsnPriorSpec, rng):
    """Exact conditional draw of (mu, sigma^2): sigma^2 inverse gamma, then
    mu normal with variance sigma^2 / n*."""
    mu_star, n_star, alpha_star, beta_star = posterior_nig_params(
        latent_counts, data, prior
    )
    mu, sigma2 = normal_inverse_gamma(mu_star, n_star, alpha_star, beta_star, rng)
    return float(mu), float(sigma2)


def initial_state(data) -> GsnState:
    """Deterministic in-support starting point: p = 1/2, moment-scaled
    (mu, sigma^2), all counts at 1."""
    p0 = 0.5
    mu0 = float(np.mean(data)) * p0
    var = float(np.var(data, ddof=1))
    sigma20 = max(var * p0, 1e-12)
    return GsnState(mu0, sigma20, p0, np.ones(len(data), dtype=np.int64))


def run_chain(data, prior: GsnPriorSpec, config: ChainConfig) -> PosteriorChain:
    """Run the hybrid sampler and return retained (mu, sigma2, p) draws.

    The latent kernel is chosen by config.latent_update.  Deterministic for
    a fixed config; raises NumericalError if the scale collapses."""
    data = np.asarray(data, dtype=float)
    if data.ndim != 1 or data.size < 2:
        raise ValueError("data must be a 1-D vector with at least 2 values")
    if not np.all(np.isfinite(data)):
        raise ValueError("data must be finite")
    kernel = _LATENT_KERNELS[config.latent_update]
    rng = np.random.default_rng(config.seed)
    state = initial_state(data)
    m = data.size

    kept = []
    accepted = 0
    for t in range(config.iterations):
        state.latent_counts, acc = kernel(state, data, rng)
        accepted += acc
        state.mu, state.sigma2 = update_mu_sigma(
            state.latent_counts, data, prior, rng
        )
        if state.sigma2 < _SIGMA2_FLOOR:
            raise NumericalError("sigma2 collapsed below 1e-300")
        state.p = min(max(update_p(state.latent_counts, prior, rng), _PROB_EPS),
                      1.0 - _PROB_EPS)
        if t >= config.burn_in and (t - config.burn_in) % config.thin == 0:
            kept.append((state.mu, state.sigma2, state.p))

    return PosteriorChain(
        param_names=("mu", "sigma2", "p"),
        draws=np.asarray(kept),
        acceptance_rate=accepted / (m * config.iterations),
        config=config,
    )
