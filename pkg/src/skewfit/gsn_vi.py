"""Coordinate-ascent variational inference for the geometric skew normal model.

Mean-field family q(N) q(p) q(mu, sigma^2): the latent factor is a product of
per-observation pmfs on adaptively truncated supports, q(p) is Beta(a*, b*),
and q(mu, sigma^2) is normal inverse gamma (mu*, n*, alpha*, beta*).  Each
coordinate update is the exact maximizer of the evidence lower bound given
the other factors, so the ELBO trace is nondecreasing up to truncation error.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .distributions import DEFAULT_SERIES, SeriesControl, beta as beta_sample, \
    normal_inverse_gamma
from .errors import NumericalError
from .gsn_mcmc import GsnPriorSpec
from .specfun import digamma, log_beta, log_gamma

__all__ = [
    "VariationalState",
    "update_q_latent",
    "update_q_p",
    "update_q_mu_sigma",
    "compute_elbo",
    "run_cavi",
    "vi_posterior_predictive",
]

# weights this far below the per-observation max are treated as numerically
# absent when choosing the truncation point
_WEIGHT_FLOOR = 1e-15
_K_START = 64


@dataclass
class VariationalState:
    """Factor parameters, per-observation latent weights, and the ELBO trace.

    latent_weights[i] is the pmf of the i-th latent count over 1..K_i.
    e_n and e_ninv hold E[n_i] and E[1/n_i] under those weights.  seed is
    recorded for the predictive sampler only; CAVI itself is deterministic.
    """

    a_star: float
    b_star: float
    mu_star: float
    n_star: float
    alpha_star: float
    beta_star: float
    latent_weights: list = field(default_factory=list)
    e_n: np.ndarray = field(default_factory=lambda: np.empty(0))
    e_ninv: np.ndarray = field(default_factory=lambda: np.empty(0))
    elbo_trace: np.ndarray = field(default_factory=lambda: np.empty(0))
    converged: bool = False
    n_iter: int = 0
    seed: int = 0
    tol: float = 1e-6
    max_iter: int = 500

    def __post_init__(self):
        for name in ("a_star", "b_star", "n_star", "alpha_star", "beta_star"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite")
        if not np.isfinite(self.mu_star):
            raise ValueError("mu_star must be finite")


def _latent_coefficients(state: VariationalState):
    """Linear and reciprocal coefficients of the latent log-weights
    log w(n) = -log(n)/2 + A n + B x^2 / n + const."""
    a_lin = (
        digamma(state.b_star)
        - digamma(state.a_star + state.b_star)
        - 0.5 / state.n_star
        - state.mu_star**2 * state.alpha_star / (2.0 * state.beta_star)
    )
    b_rec = -state.alpha_star / (2.0 * state.beta_star)
    return float(a_lin), float(b_rec)


def _weights_for(x2: float, a_lin: float, b_rec: float,
                 ctl: SeriesControl) -> np.ndarray:
    """Normalized latent pmf for one observation, support grown until the
    cut point is negligible: last weight below _WEIGHT_FLOOR of the max and
    the geometric tail bound below ctl.epsilon of the retained mass."""
    k = _K_START
    ratio = math.exp(a_lin)  # tail decay bound: w(n+1)/w(n) <= e^A
    while True:
        n = np.arange(1.0, k + 1.0)
        logits = -0.5 * np.log(n) + a_lin * n + b_rec * x2 / n
        top = logits.max()
        if not np.isfinite(top):
            raise NumericalError("latent weights degenerate: all terms underflow")
        w = np.exp(logits - top)
        total = w.sum()
        tail = w[-1] * ratio / (1.0 - ratio) if ratio < 1.0 else np.inf
        if (w[-1] < _WEIGHT_FLOOR and tail < ctl.epsilon * total) or k >= ctl.k_max:
            if k >= ctl.k_max and not (w[-1] < _WEIGHT_FLOOR
                                       and tail < ctl.epsilon * total):
                warnings.warn(
                    "latent truncation cap reached before the tail was "
                    "negligible", RuntimeWarning)
            return w / total
        k = min(2 * k, ctl.k_max)


def update_q_latent(state: VariationalState, data,
                    ctl: SeriesControl = DEFAULT_SERIES):
    """Optimal latent factor given the current parameter factors.

    Returns (weights, e_n, e_ninv): per-observation pmfs over 1..K_i and the
    expectations of n_i and 1/n_i taken under them.
    """
    data = np.asarray(data, dtype=float)
    a_lin, b_rec = _latent_coefficients(state)
    weights = []
    e_n = np.empty(data.size)
    e_ninv = np.empty(data.size)
    for i, x in enumerate(data):
        w = _weights_for(x * x, a_lin, b_rec, ctl)
        n = np.arange(1.0, w.size + 1.0)
        weights.append(w)
        e_n[i] = float(w @ n)
        e_ninv[i] = float(w @ (1.0 / n))
    return weights, e_n, e_ninv


def update_q_p(e_n, prior: GsnPriorSpec):
    """Optimal Beta factor for p: the exact conditional with latent counts
    replaced by their variational expectations."""
    e_n = np.asarray(e_n, dtype=float)
    m = e_n.size
    return m + prior.a, float(e_n.sum()) - m + prior.b


def update_q_mu_sigma(e_n, e_ninv, data, prior: GsnPriorSpec):
    """Optimal normal-inverse-gamma factor for (mu, sigma^2).

    Mirrors the exact conditional of the Gibbs sampler with sufficient
    statistics replaced by variational expectations: when every latent pmf
    is a point mass the two coincide.
    """
    data = np.asarray(data, dtype=float)
    e_n = np.asarray(e_n, dtype=float)
    e_ninv = np.asarray(e_ninv, dtype=float)
    m = data.size
    n_star = prior.n0 + float(e_n.sum())
    mu_star = (prior.n0 * prior.v0 + float(data.sum())) / n_star
    alpha_star = prior.alpha + 0.5 * m
    quad = float(np.sum(data**2 * e_ninv + mu_star**2 * e_n
                        - 2.0 * data * mu_star))
    beta_star = prior.beta + 0.5 * (prior.n0 * (mu_star - prior.v0) ** 2 + quad)
    return mu_star, n_star, alpha_star, beta_star


def compute_elbo(state: VariationalState, data, prior: GsnPriorSpec) -> float:
    """Evidence lower bound under the current factors.

    E[log joint] minus E[log q], with latent expectations taken over the
    truncated weight vectors.
    """
    data = np.asarray(data, dtype=float)
    m = data.size
    a_s, b_s = state.a_star, state.b_star
    mu_s, n_s = state.mu_star, state.n_star
    al_s, be_s = state.alpha_star, state.beta_star

    e_inv_s2 = al_s / be_s
    e_log_s2 = math.log(be_s) - float(digamma(al_s))
    e_log_p = float(digamma(a_s) - digamma(a_s + b_s))
    e_log_1mp = float(digamma(b_s) - digamma(a_s + b_s))

    e_log_n = 0.0
    entropy_n = 0.0
    for w in state.latent_weights:
        n = np.arange(1.0, w.size + 1.0)
        e_log_n += float(w @ np.log(n))
        pos = w > 0.0
        entropy_n -= float(w[pos] @ np.log(w[pos]))
    sum_e_n = float(state.e_n.sum())

    # E[(x_i - n_i mu)^2 / (n_i sigma^2)] summed over observations
    quad = float(
        np.sum(data**2 * state.e_ninv) * e_inv_s2
        - 2.0 * float(data.sum()) * mu_s * e_inv_s2
        + sum_e_n * (1.0 / n_s + mu_s**2 * e_inv_s2)
    )
    like = (-0.5 * m * math.log(2.0 * math.pi) - 0.5 * e_log_n
            - 0.5 * m * e_log_s2 - 0.5 * quad)

    latent_prior = m * e_log_p + (sum_e_n - m) * e_log_1mp

    p_prior = (-float(log_beta(prior.a, prior.b))
               + (prior.a - 1.0) * e_log_p + (prior.b - 1.0) * e_log_1mp)

    nig_prior = (
        0.5 * math.log(prior.n0 / (2.0 * math.pi))
        + prior.alpha * math.log(prior.beta) - float(log_gamma(prior.alpha))
        - (prior.alpha + 1.5) * e_log_s2 - prior.beta * e_inv_s2
        - 0.5 * prior.n0 * (1.0 / n_s + (mu_s - prior.v0) ** 2 * e_inv_s2)
    )

    q_p = (-float(log_beta(a_s, b_s))
           + (a_s - 1.0) * float(digamma(a_s))
           + (b_s - 1.0) * float(digamma(b_s))
           - (a_s + b_s - 2.0) * float(digamma(a_s + b_s)))

    q_nig = (0.5 * math.log(n_s / (2.0 * math.pi))
             + al_s * math.log(be_s) - float(log_gamma(al_s))
             - (al_s + 1.5) * e_log_s2 - al_s - 0.5)

    return like + latent_prior + p_prior + nig_prior + entropy_n - q_p - q_nig


def run_cavi(data, prior: GsnPriorSpec, tol: float = 1e-6,
             max_iter: int = 500, seed: int = 0,
             ctl: SeriesControl = DEFAULT_SERIES) -> VariationalState:
    """Run CAVI to an ELBO increment of at most tol.

    Sweep order: latent factor, then q(p), then q(mu, sigma^2), then one
    ELBO evaluation.  Deterministic given the data; the seed is stored for
    the predictive sampler.  converged stays False if max_iter is reached
    while the ELBO is still moving by more than tol.
    """
    data = np.asarray(data, dtype=float)
    if data.ndim != 1 or data.size < 2:
        raise ValueError("data must be a 1-D vector with at least 2 values")
    if not np.all(np.isfinite(data)):
        raise ValueError("data must be finite")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    m = data.size
    state = VariationalState(
        a_star=prior.a + m,
        b_star=prior.b + m,
        mu_star=float(data.mean()) / 2.0,
        n_star=prior.n0 + m,
        alpha_star=prior.alpha + 1.0 + 0.5 * m,
        beta_star=prior.beta + 0.5 * m * float(np.var(data, ddof=1)),
        seed=int(seed),
        tol=float(tol),
        max_iter=int(max_iter),
    )
    trace = []
    previous = -math.inf
    converged = False
    for _ in range(max_iter):
        weights, e_n, e_ninv = update_q_latent(state, data, ctl)
        state.latent_weights = weights
        state.e_n, state.e_ninv = e_n, e_ninv
        state.a_star, state.b_star = update_q_p(e_n, prior)
        (state.mu_star, state.n_star,
         state.alpha_star, state.beta_star) = update_q_mu_sigma(
            e_n, e_ninv, data, prior)
        elbo = compute_elbo(state, data, prior)
        trace.append(elbo)
        if not elbo - previous > tol:
            converged = True
            break
        previous = elbo
    state.elbo_trace = np.asarray(trace)
    state.converged = converged
    state.n_iter = len(trace)
    return state


def vi_posterior_predictive(state: VariationalState, n_draws: int, rng):
    """Predictive draws: parameters from the variational factors, then one
    observation each through the hierarchical sampler."""
    if n_draws < 1:
        raise ValueError("n_draws must be at least 1")
    mu, sigma2 = normal_inverse_gamma(
        state.mu_star, state.n_star, state.alpha_star, state.beta_star,
        rng, size=n_draws)
    p = beta_sample(state.a_star, state.b_star, rng, size=n_draws)
    counts = rng.geometric(p)
    return counts * mu + np.sqrt(counts * sigma2) * rng.standard_normal(n_draws)
