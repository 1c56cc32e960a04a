"""Metropolis-within-Gibbs posterior sampler for the anchored count model.

The posterior factorises into three blocks swept in a fixed order:

* per-series measures: conjugate Dirichlet, parameters = base masses scaled
  by c0, plus the forward-neighbour latent counts, plus the data bin counts;
* latent counts: the conditional mass of one series' count vector couples all
  series whose forward sets contain it, so counts move by one-at-a-time unit
  transfers under the fixed-total constraint, accepted by Metropolis (a
  fixed-pair scan against the last bin composed with a random-pair scan);
* anchor: conjugate Dirichlet, parameters = scaled base plus all counts.

For a unit transfer the log-density difference telescopes into plain logs of
current quantities, which keeps the scan cheap; the scan itself is compiled
with numba.
"""

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit
from scipy.special import gammaln, logsumexp

from .measures import check_simplex, gamma_dirichlet, make_rng, \
    sample_dirichlet_multinomial
from .partition import bin_indices


class ChainNumericError(RuntimeError):
    """Non-finite values produced mid-chain; carries the offending state."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class ObservedData:
    """Per-series samples reduced to bin counts on a fixed partition.

    Raw values are kept when available (they are needed for predictive
    density evaluation); the sampler itself only sees the bin counts.
    """

    def __init__(self, bin_counts, values=None, value_bins=None):
        h = np.asarray(bin_counts, dtype=np.int64)
        if h.ndim != 2:
            raise ValueError("bin counts must be a (series, bins) matrix")
        if np.any(h < 0):
            raise ValueError("bin counts must be nonnegative")
        self.bin_counts = h
        self.sizes = h.sum(axis=1)
        self.values = values
        self.value_bins = value_bins

    @classmethod
    def from_values(cls, series, partition):
        series = [np.asarray(v, dtype=float).ravel() for v in series]
        vb = [bin_indices(v, partition) for v in series]
        h = np.zeros((len(series), partition.K), dtype=np.int64)
        for t, b in enumerate(vb):
            if b.size:
                h[t] = np.bincount(b - 1, minlength=partition.K)
        return cls(h, values=series, value_bins=vb)

    @classmethod
    def from_bin_counts(cls, bin_counts):
        return cls(bin_counts)

    @property
    def T(self):
        return self.bin_counts.shape[0]

    @property
    def K(self):
        return self.bin_counts.shape[1]


@dataclass
class GibbsConfig:
    iterations: int = 100_000
    burn_in: int = 5_000
    thin: int = 25
    mh_moves_per_sweep: int = 1
    seed: int | None = None

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("need at least one iteration")
        if not 0 <= self.burn_in < self.iterations:
            raise ValueError("burn-in must lie in [0, iterations)")
        if self.thin < 1:
            raise ValueError("thinning must be at least 1")
        if self.mh_moves_per_sweep < 1:
            raise ValueError("need at least one MH move per sweep")

    @property
    def n_stored(self):
        return (self.iterations - self.burn_in) // self.thin


@dataclass
class ChainState:
    measures: np.ndarray  # (T, K)
    counts: np.ndarray    # (T, K) int64
    anchor: np.ndarray    # (K,)

    def copy(self):
        return ChainState(self.measures.copy(), self.counts.copy(), self.anchor.copy())


@dataclass
class ChainSamples:
    """Thinned post-burn-in draws plus MH acceptance diagnostics."""

    measures: np.ndarray         # (L, T, K)
    counts: np.ndarray           # (L, T, K) int64
    anchor: np.ndarray           # (L, K)
    iteration: np.ndarray        # (L,) sweep number of each stored draw
    accepted: np.ndarray         # (T,) accepted unit transfers
    proposed: np.ndarray         # (T,) proposed unit transfers
    config: GibbsConfig

    @property
    def n_stored(self):
        return self.measures.shape[0]

    def acceptance_rates(self):
        """Per-series acceptance rate; NaN for series without moves."""
        with np.errstate(invalid="ignore"):
            return np.where(self.proposed > 0, self.accepted / self.proposed, np.nan)

    def thinned(self, step):
        """Every step-th stored draw (diagnostic convenience)."""
        return replace(self, measures=self.measures[::step],
                       counts=self.counts[::step], anchor=self.anchor[::step],
                       iteration=self.iteration[::step])


def measure_alpha(counts, data_counts, base_alpha, forward_matrix):
    """Dirichlet parameters of all series' measures given counts and data.

    This is the single code path for both the conjugate measure update and
    the posterior predictive mean.
    """
    return base_alpha[None, :] + forward_matrix @ counts + data_counts


@njit(cache=True)
def _attempt_transfer(row, gain, neigh_sums, rev_flat, lo, hi, src, dst, u):
    """Metropolis unit transfer src -> dst for one series; 1 if accepted.

    Mutates row and the affected neigh_sums columns in place.  For a unit
    move the log-density difference telescopes into logs of current values;
    -inf gains and NaN differences reject naturally.
    """
    if row[src] == 0:
        return 0
    delta = gain[dst] - gain[src] \
        - math.log(row[dst] + 1.0) + math.log(row[src] * 1.0)
    for idx in range(lo, hi):
        j = rev_flat[idx]
        delta += math.log(neigh_sums[j, src] - 1.0) - math.log(neigh_sums[j, dst])
    if delta >= 0.0 or u < math.exp(delta):
        row[src] -= 1
        row[dst] += 1
        for idx in range(lo, hi):
            j = rev_flat[idx]
            neigh_sums[j, src] -= 1.0
            neigh_sums[j, dst] += 1.0
        return 1
    return 0


@njit(cache=True)
def _unit_transfer_scan(counts, log_measures, log_anchor, neigh_sums,
                        rev_flat, rev_ptr, totals, moves, shuffle, uniforms,
                        accepts):
    """One scan of unit-transfer Metropolis moves over all series.

    For each active series and each bin k below the last, a unit moves
    between bin k and the last bin (direction chosen by a fair coin), and is
    accepted by the Metropolis rule on the conditional count mass.  With
    shuffle set, a second pass per cell transfers a unit between bin k and a
    uniformly drawn partner bin; the fixed-pair scan alone immobilises the
    counts whenever the last bin carries negligible mass.  counts and
    neigh_sums are updated in place; neigh_sums[j, k] holds the scaled base
    mass plus the forward-neighbour counts of series j in bin k.  Returns
    the number of uniforms consumed.
    """
    T, K = counts.shape
    last = K - 1
    pos = 0
    for t in range(T):
        if totals[t] == 0:
            continue
        lo = rev_ptr[t]
        hi = rev_ptr[t + 1]
        # log-weight of placing one more unit of series t in bin k,
        # from the anchor and every influenced series' measure
        gain = np.empty(K)
        for k in range(K):
            g = log_anchor[k]
            for idx in range(lo, hi):
                g += log_measures[rev_flat[idx], k]
            gain[k] = g
        row = counts[t]
        for _ in range(moves):
            for k in range(last):
                into_k = uniforms[pos] < 0.5
                u = uniforms[pos + 1]
                pos += 2
                if into_k:
                    accepts[t] += _attempt_transfer(row, gain, neigh_sums,
                                                    rev_flat, lo, hi, last, k, u)
                else:
                    accepts[t] += _attempt_transfer(row, gain, neigh_sums,
                                                    rev_flat, lo, hi, k, last, u)
            if shuffle:
                for k in range(last):
                    partner = int(uniforms[pos] * (K - 1))
                    if partner >= k:
                        partner += 1
                    into_k = uniforms[pos + 1] < 0.5
                    u = uniforms[pos + 2]
                    pos += 3
                    if into_k:
                        accepts[t] += _attempt_transfer(row, gain, neigh_sums,
                                                        rev_flat, lo, hi,
                                                        partner, k, u)
                    else:
                        accepts[t] += _attempt_transfer(row, gain, neigh_sums,
                                                        rev_flat, lo, hi,
                                                        k, partner, u)
    return pos


class GibbsModel:
    """Data, base masses, precisions and structure bundled with the updates."""

    def __init__(self, data, params, structure, base):
        base = check_simplex(base, tol=1e-8)
        if np.any(base <= 0):
            raise ValueError("base masses must be strictly positive everywhere")
        if data.K != base.size:
            raise ValueError("data has %d bins but base has %d" % (data.K, base.size))
        if not (data.T == params.T == structure.T):
            raise ValueError("series counts disagree: data %d, params %d, structure %d"
                             % (data.T, params.T, structure.T))
        self.data = data
        self.params = params
        self.structure = structure
        self.base = base
        self.base_alpha = params.c0 * base
        self.forward_matrix = structure.forward_matrix()
        self._rev_flat, self._rev_ptr = structure.reverse_csr()
        self.totals = params.c.copy()

    @property
    def T(self):
        return self.data.T

    @property
    def K(self):
        return self.data.K

    # -- conditional updates -------------------------------------------------

    def measure_alpha(self, counts):
        return measure_alpha(counts, self.data.bin_counts, self.base_alpha,
                             self.forward_matrix)

    def anchor_alpha(self, counts):
        return self.base_alpha + counts.sum(axis=0)

    def update_measures(self, state, rng):
        state.measures = gamma_dirichlet(self.measure_alpha(state.counts), rng)

    def update_anchor(self, state, rng):
        state.anchor = gamma_dirichlet(self.anchor_alpha(state.counts), rng)

    def count_log_density(self, candidate, t, state):
        """Unnormalised log conditional mass of series t's count vector.

        Conditions on the current measures and anchor only; the data do not
        enter.  The candidate must sum to the series' coupling count.
        """
        n = np.asarray(candidate, dtype=np.int64)
        if n.ndim != 1 or n.size != self.K:
            raise ValueError("candidate must have one entry per bin")
        if np.any(n < 0):
            raise ValueError("candidate counts must be nonnegative")
        if n.sum() != self.totals[t - 1]:
            raise ValueError("candidate sums to %d, series %d requires %d"
                             % (n.sum(), t, self.totals[t - 1]))
        rev = sorted(self.structure.reverse[t])
        with np.errstate(divide="ignore"):
            log_m = np.log(state.measures)
            log_a = np.log(state.anchor)
        occ = n > 0
        val = 0.0
        if np.any(occ):
            gain = log_a[occ].copy()
            for j in rev:
                gain += log_m[j - 1, occ]
            val += float(np.sum(n[occ] * gain))
        val -= float(gammaln(n + 1.0).sum())
        for j in rev:
            others = np.zeros(self.K)
            for l in self.structure.forward[j]:
                if l != t:
                    others += state.counts[l - 1]
            val -= float(gammaln(self.base_alpha + others + n).sum())
        return val

    def _neighbor_sums(self, counts):
        return self.base_alpha[None, :] + self.forward_matrix @ counts

    def _scan_counts(self, state, rng, moves, totals, shuffle):
        with np.errstate(divide="ignore"):
            log_m = np.log(state.measures)
            log_a = np.log(state.anchor)
        neigh = self._neighbor_sums(state.counts)
        per_cell = 5 if shuffle else 2
        n_uniform = per_cell * moves * (self.K - 1) * int(np.count_nonzero(totals))
        uniforms = rng.random(n_uniform)
        accepts = np.zeros(self.T, dtype=np.int64)
        used = _unit_transfer_scan(state.counts, log_m, log_a, neigh,
                                   self._rev_flat, self._rev_ptr,
                                   np.asarray(totals, dtype=np.int64),
                                   moves, shuffle, uniforms, accepts)
        if used != n_uniform:
            raise AssertionError("uniform stream misaligned: %d != %d" % (used, n_uniform))
        return accepts

    def update_counts(self, state, t, rng, moves=1):
        """Fixed-pair MH scan for one series: each bin below the last trades
        one unit with the last bin.  Mutates state.counts, returns the
        accepted count."""
        if self.totals[t - 1] == 0:
            return 0
        only_t = np.zeros(self.T, dtype=np.int64)
        only_t[t - 1] = self.totals[t - 1]
        return int(self._scan_counts(state, rng, moves, only_t, False)[t - 1])

    def sweep(self, state, rng, moves=1):
        """One full systematic scan; returns per-series accepted moves.

        The count phase composes the fixed-pair scan with a random-pair scan
        (both leave the count conditional invariant); the second is what
        keeps the counts mobile on fine partitions.
        """
        self.update_measures(state, rng)
        accepts = self._scan_counts(state, rng, moves, self.totals, True)
        self.update_anchor(state, rng)
        if not (np.isfinite(state.measures).all() and np.isfinite(state.anchor).all()):
            raise ChainNumericError("non-finite state after sweep", state.copy())
        return accepts

    def initial_state(self, rng):
        """Counts from their prior marginal, then measures and anchor from
        their conditionals, so the chain starts inside the prior's support."""
        counts = np.stack([
            sample_dirichlet_multinomial(int(c_t), self.params.c0, self.base, rng)
            for c_t in self.totals
        ])
        state = ChainState(measures=np.empty((self.T, self.K)), counts=counts,
                           anchor=np.empty(self.K))
        self.update_measures(state, rng)
        self.update_anchor(state, rng)
        return state

    def proposals_per_sweep(self, moves=1):
        # one fixed-pair and one random-pair proposal per cell and move
        return 2 * moves * (self.K - 1) * (self.totals > 0).astype(np.int64)


def run_gibbs(data, params, structure, base, config, rng=None):
    """Run the sampler and return thinned post-burn-in draws."""
    model = GibbsModel(data, params, structure, base)
    if rng is None:
        rng = make_rng(config.seed)
    state = model.initial_state(rng)
    L = config.n_stored
    stored_measures = np.empty((L, model.T, model.K))
    stored_counts = np.empty((L, model.T, model.K), dtype=np.int64)
    stored_anchor = np.empty((L, model.K))
    stored_iter = np.empty(L, dtype=np.int64)
    accepted = np.zeros(model.T, dtype=np.int64)
    per_sweep = model.proposals_per_sweep(config.mh_moves_per_sweep)
    pos = 0
    try:
        for it in range(1, config.iterations + 1):
            accepted += model.sweep(state, rng, config.mh_moves_per_sweep)
            if it > config.burn_in and (it - config.burn_in) % config.thin == 0:
                stored_measures[pos] = state.measures
                stored_counts[pos] = state.counts
                stored_anchor[pos] = state.anchor
                stored_iter[pos] = it
                pos += 1
    except ChainNumericError as e:
        e.partial = ChainSamples(measures=stored_measures[:pos],
                                 counts=stored_counts[:pos],
                                 anchor=stored_anchor[:pos],
                                 iteration=stored_iter[:pos],
                                 accepted=accepted, proposed=per_sweep * it,
                                 config=config)
        raise
    return ChainSamples(measures=stored_measures, counts=stored_counts,
                        anchor=stored_anchor, iteration=stored_iter,
                        accepted=accepted,
                        proposed=per_sweep * config.iterations,
                        config=config)


# -- exact enumeration for tiny instances ------------------------------------

@dataclass
class ExactPosterior:
    mean: np.ndarray      # (T, K) posterior means of the series' bin masses
    var: np.ndarray       # (T, K) posterior variances
    log_marginal: float   # exact log marginal likelihood of the binned data
    n_configs: int


def _compositions(total, parts):
    """All nonnegative integer vectors of the given length summing to total."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _log_multivariate_beta(v):
    return float(gammaln(v).sum() - gammaln(v.sum()))


def exact_posterior_small(data, params, structure, base, max_configs=100_000):
    """Exact posterior moments by enumerating every joint count configuration.

    For each configuration the counts' joint prior mass and the data marginal
    are available in closed form (both are Dirichlet integrals), so the
    posterior over configurations, and with it every measure moment, is exact
    up to floating point.  Refuses instances with too many configurations.
    """
    base = check_simplex(base, tol=1e-8)
    T, K = data.T, data.K
    sizes = [math.comb(int(c) + K - 1, K - 1) for c in params.c]
    total = math.prod(sizes)
    if total > max_configs:
        raise ValueError("state space has %d configurations, above the %d limit"
                         % (total, max_configs))
    a0 = params.c0 * base
    fwd = structure.forward_matrix()
    h = data.bin_counts.astype(float)
    m = data.sizes.astype(float)
    log_b_a0 = _log_multivariate_beta(a0)
    per_series = [list(_compositions(int(c), K)) for c in params.c]

    def config_terms(cfg):
        n = np.asarray(cfg, dtype=float)
        logw = _log_multivariate_beta(a0 + n.sum(axis=0)) - log_b_a0
        logw += float(gammaln(params.c + 1.0).sum() - gammaln(n + 1.0).sum())
        alpha = a0[None, :] + fwd @ n
        logw += sum(_log_multivariate_beta(alpha[t] + h[t])
                    - _log_multivariate_beta(alpha[t]) for t in range(T))
        post = alpha + h
        tot = post.sum(axis=1, keepdims=True)
        mean = post / tot
        var = mean * (1.0 - mean) / (tot + 1.0)
        return logw, mean, var

    logws = np.empty(total)
    for i, cfg in enumerate(itertools.product(*per_series)):
        logws[i] = config_terms(cfg)[0]
    log_marginal = float(logsumexp(logws))
    weights = np.exp(logws - log_marginal)
    mean_acc = np.zeros((T, K))
    second_acc = np.zeros((T, K))
    for i, cfg in enumerate(itertools.product(*per_series)):
        _, mean, var = config_terms(cfg)
        mean_acc += weights[i] * mean
        second_acc += weights[i] * (var + mean * mean)
    return ExactPosterior(mean=mean_acc, var=second_acc - mean_acc ** 2,
                          log_marginal=log_marginal, n_configs=total)
