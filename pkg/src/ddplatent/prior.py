"""Forward simulation of the anchored count hierarchy and its MC checks.

A draw consists of an anchor probability vector, one latent count vector per
series (multinomial given the anchor), and one probability vector per series
drawn from a Dirichlet whose parameters add the base masses to the counts of
the series' forward neighbours.
"""

from dataclasses import dataclass

import numpy as np

from .measures import check_simplex, gamma_dirichlet


@dataclass
class PriorDraw:
    anchor: np.ndarray    # (K,)
    counts: np.ndarray    # (T, K) int64, row t sums to c_t
    measures: np.ndarray  # (T, K), rows on the simplex


def _validated(params, base, structure):
    base = check_simplex(base)
    if np.any(base <= 0):
        raise ValueError("base masses must be strictly positive")
    if params.T != structure.T:
        raise ValueError("params cover %d series but structure has %d"
                         % (params.T, structure.T))
    return base


def sample_prior(params, base, structure, rng):
    """One joint draw of (anchor, counts, measures)."""
    base = _validated(params, base, structure)
    K = base.size
    a0 = params.c0 * base
    anchor = gamma_dirichlet(a0, rng)
    counts = np.empty((structure.T, K), dtype=np.int64)
    for t in range(structure.T):
        counts[t] = rng.multinomial(int(params.c[t]), anchor)
    alpha = a0[None, :] + structure.forward_matrix() @ counts
    measures = gamma_dirichlet(alpha, rng)
    return PriorDraw(anchor=anchor, counts=counts, measures=measures)


def sample_prior_batch(params, base, structure, n, rng):
    """n joint draws at once; returns (anchor, counts, measures) with a
    leading replicate axis.  Distributionally identical to n sample_prior
    calls, just vectorized."""
    base = _validated(params, base, structure)
    n = int(n)
    K = base.size
    T = structure.T
    a0 = params.c0 * base
    anchor = gamma_dirichlet(np.broadcast_to(a0, (n, K)), rng)
    counts = np.empty((n, T, K), dtype=np.int64)
    for t in range(T):
        counts[:, t, :] = rng.multinomial(int(params.c[t]), anchor)
    fwd = structure.forward_matrix()
    alpha = a0[None, None, :] + np.einsum("tj,njk->ntk", fwd, counts)
    measures = gamma_dirichlet(alpha, rng)
    return anchor, counts, measures


def marginal_moments(base_mass, c0):
    """Mean and variance of one series' mass on a bin under the prior.

    Marginally each series' measure is a Dirichlet process with precision c0
    and the given base, so the bin mass is Beta(c0 * b, c0 * (1 - b)).
    """
    if not (0.0 < base_mass < 1.0):
        raise ValueError("base mass must lie strictly inside (0, 1)")
    if c0 <= 0 or not np.isfinite(c0):
        raise ValueError("c0 must be positive and finite")
    return base_mass, base_mass * (1.0 - base_mass) / (c0 + 1.0)


def pearson_with_se(x, y):
    """Sample correlation and its influence-function standard error.

    The SE comes from the asymptotic variance of the correlation's influence
    function, which is robust to non-normal marginals.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    zx = (x - x.mean()) / x.std()
    zy = (y - y.mean()) / y.std()
    r = float(np.mean(zx * zy))
    psi = zx * zy - 0.5 * r * (zx * zx + zy * zy)
    return r, float(psi.std() / np.sqrt(n))


def mc_correlation(params, base, structure, t, t2, bin_index, n_draws, rng,
                   bin_index2=None):
    """Monte Carlo correlation of two series' masses with a standard error.

    Correlates series t's mass on bin_index with series t2's mass on
    bin_index2 (same bin when omitted) across independent prior draws.
    """
    n_draws = int(n_draws)
    if n_draws < 1000:
        raise ValueError("need at least 1000 replicates, got %d" % n_draws)
    if bin_index2 is None:
        bin_index2 = bin_index
    _, _, measures = sample_prior_batch(params, base, structure, n_draws, rng)
    x = measures[:, t - 1, bin_index - 1]
    y = measures[:, t2 - 1, bin_index2 - 1]
    return pearson_with_se(x, y)
