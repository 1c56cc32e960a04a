"""Finite partitions of the real line and base-measure masses on them."""

import numpy as np
from scipy.special import ndtr, ndtri


class Partition:
    """Ordered edges b_0 < b_1 < ... < b_K defining K left-open bins.

    Bin k (1-based) covers (b_{k-1}, b_k].  For binning and mass assignment
    the first bin absorbs everything at or below b_1 and the last bin
    everything above b_{K-1}, so every real value maps to exactly one bin.
    """

    def __init__(self, edges):
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or edges.size < 3:
            raise ValueError("a partition needs at least 3 edges (K >= 2 bins)")
        if not np.all(np.isfinite(edges)):
            raise ValueError("partition edges must be finite")
        if not np.all(np.diff(edges) > 0):
            raise ValueError("partition edges must be strictly increasing")
        self.edges = edges
        self.K = edges.size - 1

    def __repr__(self):
        return "Partition(K=%d, range=(%g, %g))" % (self.K, self.edges[0], self.edges[-1])

    @property
    def widths(self):
        return np.diff(self.edges)


def build_partition(x_min, x_max, K):
    """Equal-width partition of [x_min, x_max] into K bins."""
    if not (np.isfinite(x_min) and np.isfinite(x_max)):
        raise ValueError("partition bounds must be finite")
    if x_min >= x_max:
        raise ValueError("x_min must be strictly below x_max, got [%r, %r]" % (x_min, x_max))
    K = int(K)
    if K < 2:
        raise ValueError("K must be at least 2, got %d" % K)
    return Partition(np.linspace(x_min, x_max, K + 1))


def locate_bin(x, partition):
    """1-based index of the bin containing x, with tails absorbed.

    Returns 1 for x <= b_1, K for x > b_{K-1}, otherwise the unique k with
    b_{k-1} < x <= b_k.
    """
    if not np.isfinite(x):
        raise ValueError("cannot bin non-finite value %r" % x)
    return int(np.searchsorted(partition.edges[1:-1], x, side="left")) + 1


def bin_indices(values, partition):
    """Vectorized locate_bin: array of 1-based bin indices."""
    values = np.asarray(values, dtype=float)
    if values.size and not np.all(np.isfinite(values)):
        raise ValueError("cannot bin non-finite values")
    return np.searchsorted(partition.edges[1:-1], values, side="left").astype(np.int64) + 1


def default_base_params(data):
    """Midrange location and range/7 scale from the data."""
    data = np.asarray(data, dtype=float)
    if data.size < 2:
        raise ValueError("need at least 2 observations to set base parameters")
    lo, hi = data.min(), data.max()
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ValueError("data must be finite")
    if lo == hi:
        raise ValueError("constant data: base-measure scale would be degenerate")
    return (lo + hi) / 2.0, (hi - lo) / 7.0


def masses_from_cdf(cdf, partition):
    """Bin masses from an arbitrary CDF, tails folded into the extreme bins.

    The mass below b_1 goes to bin 1 and the mass above b_{K-1} to bin K, so
    the result is a proper probability vector even when the CDF has support
    outside the partition range.
    """
    c = np.asarray([cdf(b) for b in partition.edges], dtype=float)
    m = np.diff(c)
    m[0] = c[1]
    m[-1] = 1.0 - c[-2]
    if np.any(m <= 0):
        raise ValueError("base measure puts zero mass on some bin; "
                         "widen the scale or coarsen the partition")
    return m / m.sum()


def base_masses(mu0, sigma0, partition):
    """Normal(mu0, sigma0) masses per bin, tails folded, renormalized."""
    if not (np.isfinite(mu0) and np.isfinite(sigma0)):
        raise ValueError("base parameters must be finite")
    if sigma0 <= 0:
        raise ValueError("sigma0 must be positive, got %r" % sigma0)
    return masses_from_cdf(lambda x: ndtr((x - mu0) / sigma0), partition)


class BaseMeasure:
    """Normal centring measure evaluated on a partition."""

    def __init__(self, mu0, sigma0, partition):
        self.mu0 = float(mu0)
        self.sigma0 = float(sigma0)
        self.partition = partition
        self.masses = base_masses(mu0, sigma0, partition)

    @classmethod
    def from_data(cls, data, partition):
        mu0, sigma0 = default_base_params(data)
        return cls(mu0, sigma0, partition)

    def quantile(self, u):
        """Inverse CDF, for atom simulation."""
        return self.mu0 + self.sigma0 * ndtri(u)
