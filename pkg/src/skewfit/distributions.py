"""Densities, samplers, and latent-count expectations for the two model
families.

The geometric skew normal (GSN) is the law of a geometric-stopped sum of iid
normals: N ~ Geometric(p) on {1, 2, ...} and X | N ~ Normal(N mu, N sigma^2),
giving the marginal density

    f(x) = sum_k  p (1-p)^(k-1) * phi((x - k mu) / (sqrt(k) sigma)) / (sqrt(k) sigma).

The infinite sum is truncated adaptively; ``SeriesControl`` governs the
truncation.  The Azzalini skew normal (ASN) has density
2/omega * phi(z) * Phi(alpha z), z = (x - xi)/omega.

All log-densities are evaluated with log-sum-exp and the dedicated
log-normal-cdf so they stay finite far into the tails.  Samplers take an
explicit ``numpy.random.Generator``; nothing here touches global RNG state.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .specfun import HALF_LOG_2PI, log_std_normal_cdf

_LOGPDF_CHUNK = 8192


@dataclass(frozen=True)
class GsnParams:
    """Geometric skew normal parameters (mu, sigma, p); sigma is the
    component standard deviation and p in (0, 1] the geometric rate."""

    mu: float
    sigma: float
    p: float

    def __post_init__(self):
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be positive and finite")
        if not (0.0 < self.p <= 1.0):
            raise ValueError("p must lie in (0, 1]")
        if not math.isfinite(self.mu):
            raise ValueError("mu must be finite")


@dataclass(frozen=True)
class AsnParams:
    """Azzalini skew normal parameters (xi, omega, alpha); omega is the
    scale and alpha the shape."""

    xi: float
    omega: float
    alpha: float

    def __post_init__(self):
        if not (self.omega > 0.0 and math.isfinite(self.omega)):
            raise ValueError("omega must be positive and finite")
        if not (math.isfinite(self.xi) and math.isfinite(self.alpha)):
            raise ValueError("xi and alpha must be finite")


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the geometric series: stop once the omitted
    geometric weight drops below ``epsilon``, never exceeding ``k_max``."""

    epsilon: float = 1e-12
    k_max: int = 100_000

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        if self.k_max < 1:
            raise ValueError("k_max must be at least 1")


DEFAULT_SERIES = SeriesControl()


def series_truncation(p: float, ctl: SeriesControl = DEFAULT_SERIES) -> int:
    """Number of series terms K so the omitted geometric mass (1-p)^K is at
    most ctl.epsilon, floored at 50 terms and capped at ctl.k_max."""
    if not (0.0 < p <= 1.0):
        raise ValueError("p must lie in (0, 1]")
    if p == 1.0:
        return 1
    k = max(50, math.ceil(math.log(ctl.epsilon) / math.log1p(-p)))
    if k > ctl.k_max:
        warnings.warn(
            "series truncation capped at k_max=%d (requested %d); omitted "
            "geometric mass may exceed epsilon" % (ctl.k_max, k),
            RuntimeWarning,
            stacklevel=2,
        )
        return ctl.k_max
    return k


def _logsumexp(a, axis=None):
    amax = np.max(a, axis=axis, keepdims=True)
    amax = np.where(np.isfinite(amax), amax, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(a - amax), axis=axis)) + np.squeeze(amax, axis=axis)
    return out


def _gsn_log_terms(x, params, k):
    """Log of the k-th series term of the GSN density at each x; shape
    (len(x), len(k))."""
    x = x[:, None]
    kf = k[None, :].astype(float)
    log_weight = math.log(params.p) + (kf - 1.0) * math.log1p(-params.p)
    var = kf * params.sigma**2
    return (
        log_weight
        - HALF_LOG_2PI
        - 0.5 * np.log(var)
        - (x - kf * params.mu) ** 2 / (2.0 * var)
    )


def gsn_logpdf(x, params: GsnParams, ctl: SeriesControl = DEFAULT_SERIES):
    """Log-density of the geometric skew normal at x (scalar or array).

    Truncated series of normal components combined by log-sum-exp; exact
    normal log-density when p = 1.  Returns -inf where every term
    underflows.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    xs = np.atleast_1d(arr).astype(float)
    if params.p == 1.0:
        z = (xs - params.mu) / params.sigma
        out = -HALF_LOG_2PI - math.log(params.sigma) - 0.5 * z * z
    else:
        k = np.arange(1, series_truncation(params.p, ctl) + 1)
        parts = []
        for lo in range(0, xs.size, _LOGPDF_CHUNK):
            chunk = xs[lo : lo + _LOGPDF_CHUNK]
            parts.append(_logsumexp(_gsn_log_terms(chunk, params, k), axis=1))
        out = np.concatenate(parts)
    return float(out[0]) if scalar else out.reshape(arr.shape)


def gsn_sample(params: GsnParams, n: int, rng, return_latents: bool = False):
    """Draw n GSN variates; optionally also return the latent counts."""
    if n < 1:
        raise ValueError("n must be at least 1")
    counts = rng.geometric(params.p, size=n)
    x = rng.normal(counts * params.mu, np.sqrt(counts) * params.sigma)
    if return_latents:
        return x, counts
    return x


def _gsn_expect(x, params, ctl, power):
    """Ratio E[N^power | X=x] of truncated series (power in {1, -1})."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    xs = np.atleast_1d(arr).astype(float)
    if params.p == 1.0:
        out = np.ones_like(xs)
        return float(out[0]) if scalar else out.reshape(arr.shape)
    k = np.arange(1, series_truncation(params.p, ctl) + 1)
    kf = k.astype(float)
    # common factor p(1-p)^(k-1) e^{-(x-k mu)^2/(2 k sigma^2)}; the density
    # weight has an extra k^{-1/2}, the numerator multiplies by k^power
    base = (
        (kf - 1.0) * math.log1p(-params.p)
        - (xs[:, None] - kf * params.mu) ** 2 / (2.0 * kf * params.sigma**2)
        - 0.5 * np.log(kf)
    )
    denom = _logsumexp(base, axis=1)
    if np.any(np.isneginf(denom)):
        raise NumericalError(
            "latent-count series underflowed entirely; x is implausibly far "
            "from the support of the current parameters"
        )
    numer = _logsumexp(base + power * np.log(kf), axis=1)
    out = np.exp(numer - denom)
    return float(out[0]) if scalar else out.reshape(arr.shape)


def gsn_expect_N(x, params: GsnParams, ctl: SeriesControl = DEFAULT_SERIES):
    """Posterior expectation of the latent count N given an observation."""
    return _gsn_expect(x, params, ctl, 1)


def gsn_expect_Ninv(x, params: GsnParams, ctl: SeriesControl = DEFAULT_SERIES):
    """Posterior expectation of 1/N given an observation."""
    return _gsn_expect(x, params, ctl, -1)


def asn_delta(alpha: float) -> float:
    """delta = alpha / sqrt(1 + alpha^2), evaluated without overflow."""
    if abs(alpha) <= 1.0:
        return alpha / math.sqrt(1.0 + alpha * alpha)
    return math.copysign(1.0 / math.sqrt(1.0 + alpha**-2), alpha)


def asn_logpdf(x, params: AsnParams):
    """Log-density of the Azzalini skew normal at x (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    z = (np.atleast_1d(arr) - params.xi) / params.omega
    out = (
        math.log(2.0)
        - math.log(params.omega)
        - HALF_LOG_2PI
        - 0.5 * z * z
        + log_std_normal_cdf(params.alpha * z)
    )
    return float(out[0]) if scalar else out.reshape(arr.shape)


def asn_sample(params: AsnParams, n: int, rng):
    """Draw n ASN variates via the half-normal stochastic representation."""
    if n < 1:
        raise ValueError("n must be at least 1")
    d = asn_delta(params.alpha)
    z0 = np.abs(rng.standard_normal(n))
    z1 = rng.standard_normal(n)
    return params.xi + params.omega * (d * z0 + math.sqrt(max(1.0 - d * d, 0.0)) * z1)


# ---------------------------------------------------------------------------
# auxiliary samplers: thin validated wrappers so every conditional update in
# the samplers draws through one audited code path


def geometric(p: float, rng, size=None):
    """Geometric draws on {1, 2, ...} (number of trials to first success)."""
    if not (0.0 < np.min(p) and np.max(p) <= 1.0):
        raise ValueError("p must lie in (0, 1]")
    return rng.geometric(p, size=size)


def beta(a: float, b: float, rng, size=None):
    if not (np.min(a) > 0.0 and np.min(b) > 0.0):
        raise ValueError("beta requires a > 0 and b > 0")
    return rng.beta(a, b, size=size)


def gamma(shape: float, rate: float, rng, size=None):
    if not (np.min(shape) > 0.0 and np.min(rate) > 0.0):
        raise ValueError("gamma requires shape > 0 and rate > 0")
    return rng.gamma(shape, 1.0 / rate, size=size)


def inverse_gamma(shape: float, rate: float, rng, size=None):
    """Inverse gamma with density proportional to x^-(shape+1) e^(-rate/x)."""
    if not (np.min(shape) > 0.0 and np.min(rate) > 0.0):
        raise ValueError("inverse_gamma requires shape > 0 and rate > 0")
    return np.asarray(rate) / rng.gamma(shape, 1.0, size=size)


def lognormal(mu: float, sigma2: float, rng, size=None):
    if not np.min(sigma2) > 0.0:
        raise ValueError("lognormal requires sigma2 > 0")
    return rng.lognormal(mu, np.sqrt(sigma2), size=size)


def normal_inverse_gamma(v0: float, n0: float, shape: float, rate: float, rng, size=None):
    """Joint draw (mu, sigma2): sigma2 ~ InvGamma(shape, rate), then
    mu | sigma2 ~ Normal(v0, sigma2 / n0)."""
    if not np.min(n0) > 0.0:
        raise ValueError("normal_inverse_gamma requires n0 > 0")
    sigma2 = inverse_gamma(shape, rate, rng, size=size)
    mu = rng.normal(v0, np.sqrt(sigma2 / n0))
    return mu, sigma2


_TN_TAIL_SWITCH = 4.0


def truncated_normal_below(tau, mean, var, rng, size=None):
    """Draws from Normal(mean, var) conditioned on the result being >= tau.

    Broadcasts over array mean/var.  Moderate truncation uses exact
    inverse-cdf sampling through the upper tail; extreme truncation
    (standardized bound above 4) uses the shifted-exponential rejection
    sampler, whose acceptance rate tends to one as the bound grows.
    """
    from .specfun import std_normal_cdf, std_normal_quantile

    mean = np.asarray(mean, dtype=float)
    var = np.asarray(var, dtype=float)
    if not np.all(var > 0.0):
        raise ValueError("truncated_normal_below requires var > 0")
    if size is None:
        shape = np.broadcast_shapes(mean.shape, var.shape)
    else:
        shape = (size,) if np.isscalar(size) else tuple(size)
    sd = np.broadcast_to(np.sqrt(var), shape)
    m = np.broadcast_to(mean, shape)
    bound = (tau - m) / sd

    z = np.empty(shape, dtype=float)
    easy = bound <= _TN_TAIL_SWITCH
    if easy.any():
        q = std_normal_cdf(-bound[easy])
        u = rng.random(int(easy.sum()))
        v = np.maximum(u * q, 1e-320)
        z[easy] = -std_normal_quantile(v)
    hard = ~easy
    if hard.any():
        b = bound[hard]
        lam = 0.5 * (b + np.sqrt(b * b + 4.0))
        draws = np.empty(b.shape, dtype=float)
        todo = np.ones(b.shape, dtype=bool)
        while todo.any():
            k = int(todo.sum())
            cand = b[todo] + rng.exponential(1.0, size=k) / lam[todo]
            ok = np.log(rng.random(k)) <= -0.5 * (cand - lam[todo]) ** 2
            idx = np.flatnonzero(todo)[ok]
            draws[idx] = cand[ok]
            todo[idx] = False
        z[hard] = draws
    return m + sd * z
