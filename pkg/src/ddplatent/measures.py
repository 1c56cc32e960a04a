"""Finite-dimensional random-measure samplers and seeded random streams.

All samplers take an explicit numpy Generator.  Probability vectors are plain
1-D float arrays summing to one; count vectors are 1-D int64 arrays with a
fixed total.
"""

from dataclasses import dataclass

import numpy as np

SIMPLEX_TOL = 1e-10


def make_rng(seed=None):
    """Seeded random stream; identical seeds give identical draw sequences."""
    return np.random.default_rng(seed)


def split_rng(rng, n):
    """n independent child streams, deterministic given the parent's state."""
    return rng.spawn(n)


def check_simplex(probs, tol=SIMPLEX_TOL):
    probs = np.asarray(probs, dtype=float)
    if probs.ndim != 1 or probs.size == 0:
        raise ValueError("probability vector must be 1-D and nonempty")
    if np.any(probs < 0) or not np.all(np.isfinite(probs)):
        raise ValueError("probabilities must be finite and nonnegative")
    if abs(probs.sum() - 1.0) > tol:
        raise ValueError("probabilities sum to %r, not 1" % probs.sum())
    return probs


def gamma_dirichlet(alpha, rng):
    """Normalized-gamma Dirichlet draws along the last axis.

    alpha may have any shape; entries must be positive.  Rows whose gamma
    draws all underflow to zero (possible for very small shapes) are redrawn,
    so the output rows always sum to one.
    """
    alpha = np.asarray(alpha, dtype=float)
    g = rng.gamma(alpha)
    s = g.sum(axis=-1)
    while np.any(s == 0.0):
        bad = s == 0.0
        full = np.broadcast_to(alpha, g.shape)
        g[bad] = rng.gamma(full[bad])
        s = g.sum(axis=-1)
    return g / s[..., None]


def sample_dirichlet(alpha, rng):
    """One Dirichlet draw with parameter vector alpha (all entries > 0)."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or alpha.size == 0:
        raise ValueError("alpha must be a nonempty 1-D vector")
    if np.any(alpha <= 0) or not np.all(np.isfinite(alpha)):
        raise ValueError("all Dirichlet parameters must be positive and finite")
    return gamma_dirichlet(alpha, rng)


def sample_multinomial(total, probs, rng):
    """Counts of `total` independent draws from a probability vector."""
    probs = check_simplex(probs)
    total = int(total)
    if total < 0:
        raise ValueError("total must be nonnegative")
    return rng.multinomial(total, probs / probs.sum()).astype(np.int64)


def sample_dirichlet_multinomial(total, c0, base, rng):
    """Counts whose underlying probability vector is Dirichlet(c0 * base).

    Sampled directly through the sequential beta-binomial decomposition, so
    the probability vector is never instantiated.
    """
    base = check_simplex(base)
    if c0 <= 0 or not np.isfinite(c0):
        raise ValueError("c0 must be positive and finite")
    total = int(total)
    if total < 0:
        raise ValueError("total must be nonnegative")
    a = c0 * base
    K = a.size
    counts = np.zeros(K, dtype=np.int64)
    # tail[k] = a[k] + ... + a[K-1]
    tail = np.cumsum(a[::-1])[::-1]
    remaining = total
    for k in range(K - 1):
        if remaining == 0:
            break
        p = rng.beta(a[k], tail[k + 1])
        counts[k] = rng.binomial(remaining, p)
        remaining -= counts[k]
    counts[K - 1] = remaining
    return counts


@dataclass
class StickBreakingDraw:
    """Truncated stick-breaking draw: weights, atom locations, leftover mass."""

    weights: np.ndarray
    atoms: np.ndarray
    residual: float


def sample_stick_breaking(c0, base_cdf_inverse, truncation, rng):
    """Truncated stick-breaking representation of a Dirichlet process.

    Break fractions are iid Beta(1, c0); atoms come from the base measure via
    its inverse CDF.  weights.sum() + residual == 1 up to rounding.
    """
    if c0 <= 0 or not np.isfinite(c0):
        raise ValueError("c0 must be positive and finite")
    J = int(truncation)
    if J < 1:
        raise ValueError("truncation level must be at least 1")
    v = rng.beta(1.0, c0, size=J)
    leftover = np.cumprod(1.0 - v)
    weights = v * np.concatenate(([1.0], leftover[:-1]))
    atoms = np.asarray(base_cdf_inverse(rng.random(J)), dtype=float)
    return StickBreakingDraw(weights=weights, atoms=atoms, residual=float(leftover[-1]))
