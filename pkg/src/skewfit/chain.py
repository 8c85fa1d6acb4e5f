"""Shared MCMC plumbing: run configuration and the immutable container of
retained posterior draws."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GEOMETRIC_PROPOSAL = "geometric"
RANDOM_WALK = "random_walk"
LATENT_UPDATES = (GEOMETRIC_PROPOSAL, RANDOM_WALK)


@dataclass(frozen=True)
class ChainConfig:
    """Sampler run settings.

    ``latent_update`` selects the within-Gibbs move for the latent counts of
    the geometric model ("geometric" independence proposals or the
    "random_walk" +-1 kernel); the Azzalini sampler ignores it.
    """

    iterations: int = 20_000
    burn_in: int = 5_000
    thin: int = 5
    seed: int = 0
    latent_update: str = RANDOM_WALK

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be positive")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("burn_in must satisfy 0 <= burn_in < iterations")
        if self.thin < 1:
            raise ValueError("thin must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.latent_update not in LATENT_UPDATES:
            raise ValueError(
                "latent_update must be one of %s" % (LATENT_UPDATES,)
            )


@dataclass(frozen=True)
class PosteriorChain:
    """Retained (post burn-in, thinned) posterior draws, one row per draw.

    ``acceptance_rate`` is the across-run acceptance fraction of the chain's
    Metropolis-Hastings component (latent counts for the geometric model,
    the shape parameter for the Azzalini model)."""

    param_names: tuple
    draws: np.ndarray
    acceptance_rate: float
    config: ChainConfig = field(repr=False)

    def __post_init__(self):
        draws = np.asarray(self.draws, dtype=float)
        if draws.ndim != 2 or draws.shape[1] != len(self.param_names):
            raise ValueError("draws must be 2-D with one column per parameter")
        if draws.shape[0] == 0:
            raise ValueError("chain holds no retained draws")
        draws.setflags(write=False)
        object.__setattr__(self, "draws", draws)
        object.__setattr__(self, "param_names", tuple(self.param_names))

    def __len__(self):
        return self.draws.shape[0]

    def param(self, name: str) -> np.ndarray:
        """Column of retained draws for one named parameter."""
        try:
            j = self.param_names.index(name)
        except ValueError:
            raise KeyError(name) from None
        return self.draws[:, j]


def retained_size(config: ChainConfig) -> int:
    """Number of draws kept after burn-in and thinning."""
    return (config.iterations - config.burn_in + config.thin - 1) // config.thin
