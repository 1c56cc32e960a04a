"""Dependent Dirichlet processes coupled through shared latent counts.

Every series carries a random probability measure that is marginally a
Dirichlet process; dependence between series comes from latent multinomial
count processes drawn against a common anchor measure and shared through
configurable neighbour sets (temporal, spatial, circular, or custom).  The
package covers prior simulation, closed-form dependence calculators,
Metropolis-within-Gibbs posterior inference on a finite partition, urn-based
predictive simulation, and LPML / L-measure model comparison.
"""

from .dependence import (NeighborStructure, PrecisionParams, circular,
                         corr_cross_bins, corr_same_bin, corr_stationary,
                         custom, moving_average, spatial)
from .gibbs import (ChainNumericError, ChainSamples, ChainState, GibbsConfig,
                    GibbsModel, ObservedData, exact_posterior_small, run_gibbs)
from .inference import (FitSummary, Urn, lmeasure, lpml, predictive_mean,
                        simulate_sequences, summarize, uniform_within_bins,
                        urn_next, write_summary_csv)
from .measures import (StickBreakingDraw, make_rng, sample_dirichlet,
                       sample_dirichlet_multinomial, sample_multinomial,
                       sample_stick_breaking, split_rng)
from .partition import (BaseMeasure, Partition, base_masses, bin_indices,
                        build_partition, default_base_params, locate_bin,
                        masses_from_cdf)
from .prior import (PriorDraw, marginal_moments, mc_correlation, sample_prior,
                    sample_prior_batch)

__version__ = "0.1.0"
