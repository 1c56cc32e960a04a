"""Shared test utilities: independent oracles and MC error estimates."""

import numpy as np
from scipy.stats import dirichlet as sp_dirichlet
from scipy.stats import multinomial as sp_multinomial


def conditional_count_masses(candidates, series, state, params, structure, base):
    """Exact conditional masses of one series' count vector, via the full
    three-level joint density (scipy building blocks), normalized over the
    given candidates.  Kept deliberately independent of the package's own
    conditional-density code path.
    """
    base = np.asarray(base, dtype=float)
    fwd = np.zeros((structure.T, structure.T))
    for t, s in structure.forward.items():
        for j in s:
            fwd[t - 1, j - 1] = 1.0

    def joint_log(candidate):
        counts = state.counts.copy()
        counts[series - 1] = candidate
        lp = sp_dirichlet.logpdf(state.anchor, params.c0 * base)
        for t in range(structure.T):
            lp += sp_multinomial.logpmf(counts[t], counts[t].sum(), state.anchor)
        alpha = params.c0 * base + fwd @ counts
        for t in range(structure.T):
            lp += sp_dirichlet.logpdf(state.measures[t], alpha[t])
        return lp

    logs = np.asarray([joint_log(np.asarray(c, dtype=np.int64)) for c in candidates])
    w = np.exp(logs - logs.max())
    return w / w.sum()


def mean_se(x):
    """Mean of iid replicates with its Monte Carlo standard error."""
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / np.sqrt(x.size))


def var_se(x):
    """Sample variance with a moment-based standard error (no normality)."""
    x = np.asarray(x, dtype=float)
    sq = (x - x.mean()) ** 2
    return float(sq.mean()), float(sq.std(ddof=1) / np.sqrt(x.size))


def batch_means_se(x, n_batches=50):
    """Standard error of the mean of an autocorrelated sequence."""
    x = np.asarray(x, dtype=float)
    usable = (x.size // n_batches) * n_batches
    batches = x[:usable].reshape(n_batches, -1).mean(axis=1)
    return float(batches.std(ddof=1) / np.sqrt(n_batches))


def within(x, target, se, factor=3.0):
    return abs(x - target) <= factor * se
