"""Posterior predictive tools, urn-based sequence simulation, and the
LPML / L-measure model-selection statistics."""

import warnings

import numpy as np

from .gibbs import measure_alpha
from .measures import check_simplex, gamma_dirichlet


def predictive_mean(counts, data, t, params, structure, base):
    """Posterior predictive distribution of series t given counts and data.

    A weighted average of the base masses, the forward neighbours' latent
    counts and the series' own data counts, with weights c0, the coupling
    counts and the sample size.  Shares its parameter construction with the
    conjugate measure update, so chain averages of the two agree exactly.
    """
    base = np.asarray(base, dtype=float)
    alpha = measure_alpha(counts, data.bin_counts, params.c0 * base,
                          structure.forward_matrix())[t - 1]
    return alpha / alpha.sum()


class Urn:
    """Sequential predictive sampler for one series.

    The urn starts with the latent balls of the series' forward neighbours
    (bin indices, shared across series with overlapping neighbourhoods) and
    adds each drawn ball back, so successive draws follow the posterior
    predictive with the latent counts fixed at the ball counts.
    """

    def __init__(self, t, latent_bins, params, structure, base):
        self.t = t
        self.base = check_simplex(base)
        self.c0 = params.c0
        K = self.base.size
        start = []
        for j in sorted(structure.forward[t]):
            balls = np.asarray(latent_bins[j], dtype=np.int64)
            if balls.size != params.c[j - 1]:
                raise ValueError("series %d supplies %d latent balls, expected %d"
                                 % (j, balls.size, params.c[j - 1]))
            start.append(balls)
        start = np.concatenate(start) if start else np.empty(0, dtype=np.int64)
        if start.size and (start.min() < 1 or start.max() > K):
            raise ValueError("latent ball bins must lie in 1..%d" % K)
        self.start_counts = np.bincount(start - 1, minlength=K) if start.size \
            else np.zeros(K, dtype=np.int64)
        self.drawn = []

    @property
    def n_drawn(self):
        return len(self.drawn)

    def mixture_probs(self):
        """Current predictive distribution over bins."""
        K = self.base.size
        drawn_counts = (np.bincount(np.asarray(self.drawn, dtype=np.int64) - 1,
                                    minlength=K)
                        if self.drawn else np.zeros(K, dtype=np.int64))
        w = self.c0 * self.base + self.start_counts + drawn_counts
        return w / w.sum()


def urn_next(urn, rng):
    """Draw one ball (a 1-based bin index) and put it back in the urn."""
    probs = urn.mixture_probs()
    ball = int(rng.choice(probs.size, p=probs)) + 1
    urn.drawn.append(ball)
    return ball


def simulate_sequences(params, structure, base, n_per_series, rng):
    """Partially exchangeable sequences over all series, as bin indices.

    The anchor is drawn once, the latent balls once per series from it, and
    each series then extends its own urn; series with overlapping forward
    sets share latent balls, which is what couples their sequences.
    """
    base = check_simplex(base)
    K = base.size
    T = structure.T
    n_per_series = np.broadcast_to(np.asarray(n_per_series, dtype=np.int64), (T,))
    anchor = gamma_dirichlet(params.c0 * base, rng)
    latent = {}
    for j in range(1, T + 1):
        c_j = int(params.c[j - 1])
        latent[j] = (rng.choice(K, size=c_j, p=anchor) + 1 if c_j else
                     np.empty(0, dtype=np.int64))
    sequences = []
    for t in range(1, T + 1):
        urn = Urn(t, latent, params, structure, base)
        sequences.append(np.asarray([urn_next(urn, rng)
                                     for _ in range(n_per_series[t - 1])],
                                    dtype=np.int64))
    return sequences


def uniform_within_bins(bins, partition, rng):
    """Raw values for 1-based bin indices, uniform inside each bin."""
    bins = np.asarray(bins, dtype=np.int64)
    lo = partition.edges[bins - 1]
    hi = partition.edges[bins]
    return lo + (hi - lo) * rng.random(bins.shape)


# -- model-selection statistics ----------------------------------------------

def lpml(chain, data, partition):
    """Pseudo marginal likelihood from per-observation predictive ordinates.

    Each stored draw's density at an observation is its bin mass divided by
    the bin width; the conditional predictive ordinate is the harmonic mean
    of those densities over the chain.  Returns the log-scored average, the
    average of the raw ordinates, and the per-series ordinate arrays.
    """
    if chain.n_stored == 0:
        raise ValueError("chain holds no stored draws")
    if data.value_bins is None:
        raise ValueError("raw observations are required for density evaluation")
    widths = partition.widths
    L = chain.n_stored
    cpo = []
    log_terms = []
    raw_terms = []
    n_flagged = 0
    for t in range(data.T):
        vb = data.value_bins[t]
        if vb.size == 0:
            cpo.append(np.empty(0))
            continue
        dens = chain.measures[:, t, vb - 1] / widths[vb - 1]
        n_flagged += int(np.count_nonzero((dens == 0.0).any(axis=0)))
        with np.errstate(divide="ignore"):
            harm = L / (1.0 / dens).sum(axis=0)
            log_harm = np.log(harm)
        cpo.append(harm)
        log_terms.append(log_harm.mean())
        raw_terms.append(harm.mean())
    if n_flagged:
        warnings.warn("%d observations had zero predictive density in some draw; "
                      "their ordinates are reported as 0" % n_flagged)
    if not log_terms:
        raise ValueError("no series carries observations")
    return float(np.mean(log_terms)), float(np.mean(raw_terms)), cpo


def lmeasure_parts(chain, data):
    """Average posterior variance and average squared bias of the bin masses.

    The bias is against each series' empirical bin frequencies; series
    without observations are excluded from both averages.
    """
    if chain.n_stored == 0:
        raise ValueError("chain holds no stored draws")
    occupied = data.sizes > 0
    if not occupied.any():
        raise ValueError("no series carries observations")
    post_mean = chain.measures[:, occupied, :].mean(axis=0)
    post_var = chain.measures[:, occupied, :].var(axis=0)
    empirical = data.bin_counts[occupied] / data.sizes[occupied, None]
    return float(post_var.mean()), float(((post_mean - empirical) ** 2).mean())


def lmeasure(chain, data, nu=0.5):
    """Predictive-quality score: posterior variance plus nu-weighted bias."""
    if not 0.0 <= nu <= 1.0:
        raise ValueError("nu must lie in [0, 1], got %r" % nu)
    var_part, bias_part = lmeasure_parts(chain, data)
    return var_part + nu * bias_part


# -- posterior summaries -----------------------------------------------------

class FitSummary:
    """Per-bin posterior summaries plus the model-selection statistics."""

    def __init__(self, measure_mean, measure_var, anchor_mean, anchor_var,
                 lpml_log, lpml_paper, lmea, nu):
        self.measure_mean = measure_mean
        self.measure_var = measure_var
        self.measure_cdf = np.cumsum(measure_mean, axis=1)
        self.anchor_mean = anchor_mean
        self.anchor_var = anchor_var
        self.anchor_cdf = np.cumsum(anchor_mean)
        self.lpml_log = lpml_log
        self.lpml_paper = lpml_paper
        self.lmea = lmea
        self.nu = nu


def summarize(chain, data, partition, nu=0.5):
    """Posterior means/variances, mean CDFs and selection statistics."""
    if chain.n_stored == 0:
        raise ValueError("chain holds no stored draws")
    lpml_log, lpml_paper, _ = lpml(chain, data, partition)
    return FitSummary(
        measure_mean=chain.measures.mean(axis=0),
        measure_var=chain.measures.var(axis=0),
        anchor_mean=chain.anchor.mean(axis=0),
        anchor_var=chain.anchor.var(axis=0),
        lpml_log=lpml_log,
        lpml_paper=lpml_paper,
        lmea=lmeasure(chain, data, nu),
        nu=nu,
    )


def _fmt(x):
    """Shortest round-trip decimal form, stable across runs."""
    return repr(float(x))


def write_summary_csv(summary, partition, path):
    """Long-format per-bin table; anchor rows use series index 0."""
    edges = partition.edges
    with open(path, "w") as fh:
        fh.write("t,k,bin_left,bin_right,mean,var,cdf\n")
        for k in range(partition.K):
            fh.write("0,%d,%s,%s,%s,%s,%s\n"
                     % (k + 1, _fmt(edges[k]), _fmt(edges[k + 1]),
                        _fmt(summary.anchor_mean[k]), _fmt(summary.anchor_var[k]),
                        _fmt(summary.anchor_cdf[k])))
        T = summary.measure_mean.shape[0]
        for t in range(T):
            for k in range(partition.K):
                fh.write("%d,%d,%s,%s,%s,%s,%s\n"
                         % (t + 1, k + 1, _fmt(edges[k]), _fmt(edges[k + 1]),
                            _fmt(summary.measure_mean[t, k]),
                            _fmt(summary.measure_var[t, k]),
                            _fmt(summary.measure_cdf[t, k])))
