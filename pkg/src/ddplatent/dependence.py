"""Neighbour structures over series indices and closed-form correlations.

Series indices are 1-based.  Each series t has a forward neighbour set that
must contain t itself; the reverse set of t collects the series whose forward
sets contain t.  The correlation between any two series' random measures is
available in closed form from the precision parameters and these sets.
"""

import math

import numpy as np


class NeighborStructure:
    """Forward neighbour sets over 1..T plus the derived reverse sets."""

    def __init__(self, sets):
        sets = [frozenset(int(i) for i in s) for s in sets]
        T = len(sets)
        if T < 1:
            raise ValueError("need at least one series")
        for t, s in enumerate(sets, start=1):
            if t not in s:
                raise ValueError("series %d must belong to its own neighbour set" % t)
            for j in s:
                if not 1 <= j <= T:
                    raise ValueError("neighbour %d of series %d outside 1..%d" % (j, t, T))
        self.T = T
        self.forward = {t: sets[t - 1] for t in range(1, T + 1)}
        self.reverse = {
            t: frozenset(j for j in range(1, T + 1) if t in sets[j - 1])
            for t in range(1, T + 1)
        }

    def __repr__(self):
        return "NeighborStructure(T=%d)" % self.T

    def forward_matrix(self):
        """(T, T) 0/1 matrix with row t marking the forward set of t+1."""
        M = np.zeros((self.T, self.T))
        for t, s in self.forward.items():
            for j in s:
                M[t - 1, j - 1] = 1.0
        return M

    def reverse_csr(self):
        """Reverse sets as 0-based flat/pointer arrays (for tight loops)."""
        flat, ptr = [], [0]
        for t in range(1, self.T + 1):
            flat.extend(sorted(j - 1 for j in self.reverse[t]))
            ptr.append(len(flat))
        return np.asarray(flat, dtype=np.int64), np.asarray(ptr, dtype=np.int64)


def moving_average(T, q):
    """Order-q one-directional dependence: each series sees its q predecessors."""
    T = int(T)
    q = int(q)
    if q < 0:
        raise ValueError("order q must be nonnegative, got %d" % q)
    return NeighborStructure([range(max(1, t - q), t + 1) for t in range(1, T + 1)])


def spatial(T, adjacency):
    """Each series sees itself plus its graph neighbours (undirected edges)."""
    T = int(T)
    sets = [{t} for t in range(1, T + 1)]
    for edge in adjacency:
        i, j = (int(v) for v in edge)
        if not (1 <= i <= T and 1 <= j <= T):
            raise ValueError("edge (%d, %d) references series outside 1..%d" % (i, j, T))
        sets[i - 1].add(j)
        sets[j - 1].add(i)
    return NeighborStructure(sets)


def circular(T, q=1):
    """Wrap-around order-q dependence, closing the chain into a cycle."""
    T = int(T)
    q = int(q)
    if q < 0:
        raise ValueError("order q must be nonnegative, got %d" % q)
    sets = []
    for t in range(1, T + 1):
        sets.append({(t - d - 1) % T + 1 for d in range(min(q, T - 1) + 1)})
    return NeighborStructure(sets)


def custom(sets):
    """Structure from explicit neighbour sets (mapping keyed 1..T or sequence)."""
    if hasattr(sets, "keys"):
        T = len(sets)
        try:
            sets = [sets[t] for t in range(1, T + 1)]
        except KeyError as e:
            raise ValueError("custom sets must be keyed contiguously from 1") from e
    return NeighborStructure(sets)


class PrecisionParams:
    """Anchor precision c0 > 0 and per-series integer coupling counts c_t >= 0.

    c_t = 0 turns series t's latent counts off (identically zero).
    """

    def __init__(self, c0, c):
        c0 = float(c0)
        if not np.isfinite(c0) or c0 <= 0:
            raise ValueError("c0 must be positive and finite, got %r" % c0)
        c = np.asarray(c)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("c must be a nonempty 1-D vector")
        if not np.all(np.isfinite(np.asarray(c, dtype=float))):
            raise ValueError("coupling counts must be finite")
        if np.any(np.asarray(c, dtype=float) != np.round(np.asarray(c, dtype=float))):
            raise ValueError("coupling counts must be integers")
        c = np.asarray(np.round(np.asarray(c, dtype=float)), dtype=np.int64)
        if np.any(c < 0):
            raise ValueError("coupling counts must be nonnegative")
        self.c0 = c0
        self.c = c

    @classmethod
    def constant(cls, c0, c, T):
        """Same coupling count for every series (the stationary case)."""
        return cls(c0, np.full(int(T), int(c), dtype=np.int64))

    @property
    def T(self):
        return self.c.size

    def neighbor_total(self, structure, t):
        """Sum of coupling counts over the forward set of t."""
        return int(sum(self.c[j - 1] for j in structure.forward[t]))


def corr_same_bin(t, t2, params, structure):
    """Correlation of two series' masses on one common bin.

    Closed form in the coupling counts: shared counts in the forward-set
    intersection plus the anchor contribution, over the two precisions.
    """
    if t == t2:
        raise ValueError("correlation of a series with itself is 1 by definition")
    f_t, f_t2 = structure.forward[t], structure.forward[t2]
    shared = sum(int(params.c[j - 1]) for j in f_t & f_t2)
    s_t = params.neighbor_total(structure, t)
    s_t2 = params.neighbor_total(structure, t2)
    return (params.c0 * shared + s_t * s_t2) / ((params.c0 + s_t) * (params.c0 + s_t2))


def corr_cross_bins(t, t2, mass_i, mass_k, params, structure):
    """Correlation of two series' masses on disjoint bins (always <= 0)."""
    for m in (mass_i, mass_k):
        if not (0.0 < m < 1.0):
            raise ValueError("bin masses must lie strictly inside (0, 1)")
    if mass_i + mass_k > 1.0:
        raise ValueError("disjoint bin masses cannot exceed 1 in total")
    factor = math.sqrt(mass_i * mass_k / ((1.0 - mass_i) * (1.0 - mass_k)))
    return -factor * corr_same_bin(t, t2, params, structure)


def corr_stationary(t, t2, c, c0, structure):
    """Same-bin correlation when every coupling count equals c.

    Depends on the structure only through neighbour-set sizes, so the field
    of measures is strictly stationary under shift-invariant sets.
    """
    r_t = len(structure.forward[t])
    r_t2 = len(structure.forward[t2])
    r_both = len(structure.forward[t] & structure.forward[t2])
    num = r_both * c0 * c + r_t * r_t2 * c * c
    den = (c0 + r_t * c) * (c0 + r_t2 * c)
    return num / den
