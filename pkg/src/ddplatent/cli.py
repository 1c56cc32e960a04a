"""Batch command-line front end: fit, grid, simulate, and check.

Configuration comes from a flat JSON file plus overriding flags; every run is
driven by a single seed so outputs are byte-identical across reruns.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np
from joblib import Parallel, delayed

from .dependence import PrecisionParams, circular, corr_cross_bins, \
    corr_same_bin, custom, moving_average, spatial
from .gibbs import ChainNumericError, GibbsConfig, ObservedData, \
    exact_posterior_small, run_gibbs
from .inference import lmeasure, lpml, simulate_sequences, summarize, \
    uniform_within_bins, write_summary_csv, _fmt
from .measures import make_rng
from .partition import base_masses, build_partition
from .prior import marginal_moments, mc_correlation, sample_prior_batch

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class ConfigError(ValueError):
    """Bad configuration (unknown key, wrong type, inconsistent values)."""


class DataError(ValueError):
    """Unreadable or malformed input data."""


@dataclass
class RunConfig:
    data: str | None = None
    format: str = "long"            # long | wide
    out: str = "."
    seed: int = 0
    structure: str = "ma"           # ma | spatial | circular | custom
    q: int = 1
    adjacency: list | None = None   # spatial: [[i, j], ...]
    sets: list | None = None        # custom: [[...], [...], ...]
    t: int | None = None            # series count (simulate; optional check on fit)
    c0: float = 0.1
    c: int | float | list = 5       # scalar (constant across series) or per-series list
    k: int = 50
    mu0: float | None = None        # None: midrange of the data
    sigma0: float | None = None     # None: data range / 7
    x_min: float | None = None      # explicit partition bounds (required to simulate)
    x_max: float | None = None
    iterations: int = 100_000
    burn_in: int = 5_000
    thin: int = 25
    mh_moves: int = 1
    nu: float = 0.5
    q_list: list | None = None      # grid
    c_list: list | None = None
    mode: str = "prior"             # simulate: prior | sequences
    n_draws: int = 1000             # simulate prior replicates
    n_per_t: int = 30               # simulate sequence length
    dump_chain: bool = False
    jobs: int = 1


_INT_KEYS = {"seed", "q", "t", "k", "iterations", "burn_in", "thin", "mh_moves",
             "n_draws", "n_per_t", "jobs"}
_FLOAT_KEYS = {"c0", "mu0", "sigma0", "x_min", "x_max", "nu"}
_OPTIONAL = {"data", "adjacency", "sets", "t", "mu0", "sigma0", "x_min", "x_max",
             "q_list", "c_list"}


def _coerce(key, value):
    if value is None:
        if key in _OPTIONAL:
            return None
        raise ConfigError("config key %r must not be null" % key)
    try:
        if key in _INT_KEYS:
            if float(value) != int(value):
                raise ValueError
            return int(value)
        if key in _FLOAT_KEYS:
            return float(value)
    except (TypeError, ValueError):
        raise ConfigError("config key %r has invalid value %r" % (key, value)) from None
    if key == "dump_chain":
        if not isinstance(value, bool):
            raise ConfigError("config key 'dump_chain' must be a boolean")
        return value
    return value


def load_config(path=None, overrides=None):
    """RunConfig from an optional flat JSON file plus CLI overrides."""
    known = {f.name for f in fields(RunConfig)}
    merged = {}
    if path is not None:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except OSError as e:
            raise ConfigError("cannot read config file %s: %s" % (path, e)) from e
        except json.JSONDecodeError as e:
            raise ConfigError("config file %s is not valid JSON: %s" % (path, e)) from e
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a flat JSON object")
        for key, value in raw.items():
            if key not in known:
                raise ConfigError("unknown config key %r" % key)
            merged[key] = _coerce(key, value)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in known:
            raise ConfigError("unknown config key %r" % key)
        merged[key] = _coerce(key, value)
    if "seed" not in merged and os.environ.get("DDP_SEED"):
        merged["seed"] = _coerce("seed", os.environ["DDP_SEED"])
    config = RunConfig(**merged)
    validate_config(config)
    return config


def validate_config(config):
    if config.format not in ("long", "wide"):
        raise ConfigError("format must be 'long' or 'wide', got %r" % config.format)
    if config.structure not in ("ma", "spatial", "circular", "custom"):
        raise ConfigError("unknown structure kind %r" % config.structure)
    if config.mode not in ("prior", "sequences"):
        raise ConfigError("simulate mode must be 'prior' or 'sequences'")
    if config.c0 <= 0 or not np.isfinite(config.c0):
        raise ConfigError("c0 must be positive and finite")
    if not 0.0 <= config.nu <= 1.0:
        raise ConfigError("nu must lie in [0, 1]")
    if config.k < 2:
        raise ConfigError("k must be at least 2")
    if config.q < 0:
        raise ConfigError("q must be nonnegative")
    if (config.x_min is None) != (config.x_max is None):
        raise ConfigError("x_min and x_max must be given together")
    if config.x_min is not None and config.x_min >= config.x_max:
        raise ConfigError("x_min must be strictly below x_max")
    if config.jobs < 1:
        raise ConfigError("jobs must be at least 1")
    try:
        GibbsConfig(iterations=config.iterations, burn_in=config.burn_in,
                    thin=config.thin, mh_moves_per_sweep=config.mh_moves,
                    seed=config.seed)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def config_echo(config):
    """JSON-ready flat mapping that reparses to an equivalent RunConfig."""
    return asdict(config)


# -- data ingestion -----------------------------------------------------------

@dataclass
class Dataset:
    series: list  # per-series float arrays, index 0 is series 1

    @property
    def T(self):
        return len(self.series)

    @property
    def sizes(self):
        return np.asarray([len(s) for s in self.series], dtype=np.int64)

    def all_values(self):
        present = [s for s in self.series if len(s)]
        return np.concatenate(present)


def ingest(path, format="long"):
    """Dataset from a long (t,value with header) or wide (row per series) CSV."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as e:
        raise DataError("cannot read data file %s: %s" % (path, e)) from e
    if format == "long":
        series_map = {}
        if not lines:
            raise DataError("data file %s is empty" % path)
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DataError("line %d of %s: expected 't,value', got %r"
                                % (lineno, path, line))
            try:
                t = int(parts[0])
                value = float(parts[1])
            except ValueError:
                raise DataError("line %d of %s: non-numeric entry in %r"
                                % (lineno, path, line)) from None
            if t < 1:
                raise DataError("line %d of %s: series index must be >= 1" % (lineno, path))
            if not np.isfinite(value):
                raise DataError("line %d of %s: non-finite value" % (lineno, path))
            series_map.setdefault(t, []).append(value)
        if not series_map:
            raise DataError("data file %s holds no observations" % path)
        T = max(series_map)
        series = [np.asarray(series_map.get(t, []), dtype=float)
                  for t in range(1, T + 1)]
    elif format == "wide":
        series = []
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                series.append(np.empty(0))
                continue
            try:
                row = np.asarray([float(v) for v in line.split(",") if v.strip() != ""])
            except ValueError:
                raise DataError("line %d of %s: non-numeric entry in %r"
                                % (lineno, path, line)) from None
            if row.size and not np.all(np.isfinite(row)):
                raise DataError("line %d of %s: non-finite value" % (lineno, path))
            series.append(row)
        while series and series[-1].size == 0:
            series.pop()
        if not series or not any(s.size for s in series):
            raise DataError("data file %s holds no observations" % path)
    else:
        raise ConfigError("unknown data format %r" % format)
    return Dataset(series=series)


# -- assembling model pieces from a config ------------------------------------

def build_structure(config, T):
    if config.structure == "ma":
        return moving_average(T, config.q)
    if config.structure == "circular":
        return circular(T, config.q)
    if config.structure == "spatial":
        if config.adjacency is None:
            raise ConfigError("spatial structure requires an 'adjacency' edge list")
        try:
            return spatial(T, config.adjacency)
        except ValueError as e:
            raise ConfigError(str(e)) from e
    if config.sets is None:
        raise ConfigError("custom structure requires explicit 'sets'")
    try:
        return custom(config.sets)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def build_params(config, T):
    c = config.c
    try:
        if np.isscalar(c):
            return PrecisionParams.constant(config.c0, int(c), T)
        params = PrecisionParams(config.c0, c)
    except (TypeError, ValueError) as e:
        raise ConfigError("invalid coupling counts: %s" % e) from e
    if params.T != T:
        raise ConfigError("c lists %d series but the run has %d" % (params.T, T))
    return params


def build_base(config, values=None):
    """Partition and base masses; bounds and scale fall back to the data."""
    if config.x_min is not None:
        lo, hi = config.x_min, config.x_max
    elif values is not None and values.size:
        lo, hi = float(values.min()), float(values.max())
    else:
        raise ConfigError("partition bounds are required when no data is given")
    if lo >= hi:
        raise DataError("degenerate value range [%r, %r]" % (lo, hi))
    partition = build_partition(lo, hi, config.k)
    if config.mu0 is not None and config.sigma0 is not None:
        mu0, sigma0 = config.mu0, config.sigma0
    elif config.mu0 is None and config.sigma0 is None:
        mu0, sigma0 = (lo + hi) / 2.0, (hi - lo) / 7.0
    else:
        raise ConfigError("mu0 and sigma0 must be overridden together")
    if sigma0 <= 0:
        raise ConfigError("sigma0 must be positive")
    return partition, base_masses(mu0, sigma0, partition), mu0, sigma0


def _series_count(config, dataset=None):
    if dataset is not None:
        if config.t is not None and config.t != dataset.T:
            raise ConfigError("config says %d series but data has %d"
                              % (config.t, dataset.T))
        return dataset.T
    if config.structure == "custom" and config.sets is not None:
        return len(config.sets)
    if config.t is None:
        raise ConfigError("series count 't' is required without data")
    return config.t


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_chain_csv(chain, path):
    """One row per stored draw: iteration then flattened state, series-major."""
    L, T, K = chain.measures.shape
    cols = ["iteration"]
    cols += ["measure_%d_%d" % (t + 1, k + 1) for t in range(T) for k in range(K)]
    cols += ["count_%d_%d" % (t + 1, k + 1) for t in range(T) for k in range(K)]
    cols += ["anchor_%d" % (k + 1) for k in range(K)]
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(L):
            row = [str(int(chain.iteration[i]))]
            row += [_fmt(v) for v in chain.measures[i].ravel()]
            row += [str(int(v)) for v in chain.counts[i].ravel()]
            row += [_fmt(v) for v in chain.anchor[i]]
            fh.write(",".join(row) + "\n")


# -- commands ------------------------------------------------------------------

def _fit_pieces(config):
    if config.data is None:
        raise ConfigError("fitting requires a data file")
    dataset = ingest(config.data, config.format)
    T = _series_count(config, dataset)
    values = dataset.all_values()
    partition, base, _, _ = build_base(config, values)
    structure = build_structure(config, T)
    params = build_params(config, T)
    data = ObservedData.from_values(dataset.series, partition)
    return data, params, structure, base, partition


def _acceptance_list(chain):
    rates = chain.acceptance_rates()
    return [None if np.isnan(r) else float(r) for r in rates]


def cmd_fit(config):
    data, params, structure, base, partition = _fit_pieces(config)
    gibbs_config = GibbsConfig(iterations=config.iterations, burn_in=config.burn_in,
                               thin=config.thin, mh_moves_per_sweep=config.mh_moves,
                               seed=config.seed)
    os.makedirs(config.out, exist_ok=True)
    try:
        chain = run_gibbs(data, params, structure, base, gibbs_config)
    except ChainNumericError as e:
        partial = getattr(e, "partial", None)
        if partial is not None and partial.n_stored:
            write_chain_csv(partial, os.path.join(config.out, "chain.csv"))
        raise
    summary = summarize(chain, data, partition, nu=config.nu)
    write_summary_csv(summary, partition, os.path.join(config.out, "summary.csv"))
    stats = {
        "lpml_log": summary.lpml_log,
        "lpml_paper": summary.lpml_paper,
        "lmea": summary.lmea,
        "nu": summary.nu,
        "acceptance_rates": _acceptance_list(chain),
        "config": config_echo(config),
    }
    _write_json(os.path.join(config.out, "stats.json"), stats)
    if config.dump_chain:
        write_chain_csv(chain, os.path.join(config.out, "chain.csv"))
    print("lpml_log   %.6f" % summary.lpml_log)
    print("lpml_paper %.6f" % summary.lpml_paper)
    print("lmea(nu=%g) %.6g" % (summary.nu, summary.lmea))
    print("acceptance rates:",
          " ".join("-" if r is None else "%.3f" % r for r in stats["acceptance_rates"]))
    return summary


def _grid_cell(data, structure_q, c_value, config, base, partition, T, child_seed):
    try:
        structure = moving_average(T, structure_q)
        params = PrecisionParams.constant(config.c0, c_value, T)
        gibbs_config = GibbsConfig(iterations=config.iterations,
                                   burn_in=config.burn_in, thin=config.thin,
                                   mh_moves_per_sweep=config.mh_moves,
                                   seed=config.seed)
        rng = np.random.default_rng(child_seed)
        chain = run_gibbs(data, params, structure, base, gibbs_config, rng=rng)
        lpml_log, lpml_paper, _ = lpml(chain, data, partition)
        lmea = lmeasure(chain, data, config.nu)
        return {"q": structure_q, "c": c_value, "lpml_log": lpml_log,
                "lpml_paper": lpml_paper, "lmea": lmea, "error": ""}
    except Exception as e:  # keep other cells running
        return {"q": structure_q, "c": c_value, "lpml_log": None,
                "lpml_paper": None, "lmea": None,
                "error": "%s: %s" % (type(e).__name__, e)}


def cmd_grid(config):
    if config.structure != "ma":
        raise ConfigError("grid search runs over the moving-average structure only")
    if not config.q_list or not config.c_list:
        raise ConfigError("grid search requires q_list and c_list")
    q_list = [int(q) for q in config.q_list]
    c_list = [int(c) for c in config.c_list]
    data, _, _, base, partition = _fit_pieces(config)
    T = data.T
    cells = [(q, c) for c in sorted(c_list) for q in sorted(q_list)]
    children = np.random.SeedSequence(config.seed).spawn(len(cells))
    runner = Parallel(n_jobs=config.jobs) if config.jobs > 1 else None
    if runner is not None:
        rows = runner(delayed(_grid_cell)(data, q, c, config, base, partition, T, ss)
                      for (q, c), ss in zip(cells, children))
    else:
        rows = [_grid_cell(data, q, c, config, base, partition, T, ss)
                for (q, c), ss in zip(cells, children)]
    os.makedirs(config.out, exist_ok=True)
    path = os.path.join(config.out, "grid.csv")
    with open(path, "w") as fh:
        fh.write("q,c,lpml_log,lpml_paper,lmea,error\n")
        for row in rows:
            fh.write("%d,%d,%s,%s,%s,%s\n"
                     % (row["q"], row["c"],
                        "" if row["lpml_log"] is None else _fmt(row["lpml_log"]),
                        "" if row["lpml_paper"] is None else _fmt(row["lpml_paper"]),
                        "" if row["lmea"] is None else _fmt(row["lmea"]),
                        row["error"].replace(",", ";")))
    ok = [r for r in rows if not r["error"]]
    if ok:
        best = max(ok, key=lambda r: r["lpml_log"])
        print("best cell by lpml_log: q=%d c=%d (lpml_log=%.6f)"
              % (best["q"], best["c"], best["lpml_log"]))
    for row in rows:
        if row["error"]:
            print("cell q=%d c=%d failed: %s" % (row["q"], row["c"], row["error"]))
    return rows


def cmd_simulate(config):
    if config.x_min is None or config.x_max is None:
        raise ConfigError("simulate requires explicit x_min and x_max")
    T = _series_count(config)
    partition, base, _, _ = build_base(config)
    structure = build_structure(config, T)
    params = build_params(config, T)
    rng = make_rng(config.seed)
    os.makedirs(config.out, exist_ok=True)
    if config.mode == "prior":
        anchor, counts, measures = sample_prior_batch(params, base, structure,
                                                      config.n_draws, rng)
        path = os.path.join(config.out, "prior_draws.csv")
        K = partition.K
        cols = ["draw"]
        cols += ["measure_%d_%d" % (t + 1, k + 1) for t in range(T) for k in range(K)]
        cols += ["count_%d_%d" % (t + 1, k + 1) for t in range(T) for k in range(K)]
        cols += ["anchor_%d" % (k + 1) for k in range(K)]
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for i in range(config.n_draws):
                row = [str(i + 1)]
                row += [_fmt(v) for v in measures[i].ravel()]
                row += [str(int(v)) for v in counts[i].ravel()]
                row += [_fmt(v) for v in anchor[i]]
                fh.write(",".join(row) + "\n")
        print("wrote %d prior draws to %s" % (config.n_draws, path))
        return path
    sequences = simulate_sequences(params, structure, base, config.n_per_t, rng)
    path = os.path.join(config.out, "sequences.csv")
    with open(path, "w") as fh:
        fh.write("t,value\n")
        for t, bins in enumerate(sequences, start=1):
            values = uniform_within_bins(bins, partition, rng)
            for v in values:
                fh.write("%d,%s\n" % (t, _fmt(v)))
    print("wrote sequences for %d series to %s" % (T, path))
    return path


def cmd_check(config):
    """Analytic-versus-Monte-Carlo diagnostics; nonzero exit on failure."""
    dataset = ingest(config.data, config.format) if config.data else None
    T = _series_count(config, dataset)
    values = dataset.all_values() if dataset else None
    partition, base, _, _ = build_base(config, values)
    structure = build_structure(config, T)
    params = build_params(config, T)
    rng = make_rng(config.seed)
    results = []

    def record(name, ok, detail):
        results.append(ok)
        print("%s %s: %s" % ("PASS" if ok else "FAIL", name, detail))

    k_mid = partition.K // 2 + 1
    mean_ref, var_ref = marginal_moments(base[k_mid - 1], params.c0)
    _, _, measures = sample_prior_batch(params, base, structure, 20_000, rng)
    x = measures[:, 0, k_mid - 1]
    se_mean = x.std() / np.sqrt(x.size)
    record("marginal mean", abs(x.mean() - mean_ref) <= 3 * se_mean,
           "analytic %.5f mc %.5f (se %.2g)" % (mean_ref, x.mean(), se_mean))
    sq = (x - x.mean()) ** 2
    se_var = sq.std() / np.sqrt(x.size)
    record("marginal variance", abs(sq.mean() - var_ref) <= 3 * se_var,
           "analytic %.5f mc %.5f (se %.2g)" % (var_ref, sq.mean(), se_var))

    if T >= 2:
        t_pair = (1, 2)
        analytic = corr_same_bin(*t_pair, params, structure)
        est, se = mc_correlation(params, base, structure, *t_pair, k_mid, 50_000, rng)
        if np.all(params.c == 0):
            record("independence", abs(est) <= 3 * se,
                   "couplings all zero, mc corr %.4f (se %.2g)" % (est, se))
        else:
            record("same-bin correlation", abs(est - analytic) <= 3 * se,
                   "analytic %.4f mc %.4f (se %.2g)" % (analytic, est, se))
            k2 = 1 if k_mid != 1 else 2
            cross = corr_cross_bins(*t_pair, base[k_mid - 1], base[k2 - 1],
                                    params, structure)
            est2, se2 = mc_correlation(params, base, structure, *t_pair, k_mid,
                                       50_000, rng, bin_index2=k2)
            record("cross-bin correlation", abs(est2 - cross) <= 3 * se2,
                   "analytic %.4f mc %.4f (se %.2g)" % (cross, est2, se2))

    if dataset is not None:
        data = ObservedData.from_values(dataset.series, partition)
        try:
            exact = exact_posterior_small(data, params, structure, base,
                                          max_configs=20_000)
        except ValueError as e:
            print("SKIP enumeration check: %s" % e)
        else:
            gibbs_config = GibbsConfig(iterations=config.iterations,
                                       burn_in=config.burn_in, thin=config.thin,
                                       mh_moves_per_sweep=config.mh_moves,
                                       seed=config.seed)
            chain = run_gibbs(data, params, structure, base, gibbs_config, rng=rng)
            delta = float(np.abs(chain.measures.mean(axis=0) - exact.mean).max())
            record("sampler vs enumeration", delta < 0.01,
                   "max |mean difference| %.4g over %d configurations"
                   % (delta, exact.n_configs))

    return EXIT_OK if all(results) else EXIT_CHECK_FAILED


# -- argument parsing ----------------------------------------------------------

def _parser():
    parser = argparse.ArgumentParser(
        prog="ddplatent",
        description="Dependent Dirichlet processes coupled by latent counts: "
                    "fit, grid search, simulation, verification.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("fit", "posterior fit on a dataset"),
                            ("grid", "fit a grid of (q, c) cells"),
                            ("simulate", "prior or sequence simulation"),
                            ("check", "analytic vs Monte Carlo diagnostics")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="flat JSON config file")
        p.add_argument("--data", help="input CSV path")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)
        p.add_argument("--iterations", type=int)
        p.add_argument("--burn-in", dest="burn_in", type=int)
        p.add_argument("--thin", type=int)
        p.add_argument("--k", type=int, help="number of bins")
        p.add_argument("--c0", type=float)
        p.add_argument("--c", help="coupling count, scalar or comma-separated per series")
        p.add_argument("--q", type=int, help="dependence order")
        p.add_argument("--nu", type=float)
        p.add_argument("--format", choices=("long", "wide"))
        p.add_argument("--structure", choices=("ma", "spatial", "circular", "custom"))
        p.add_argument("--t", type=int, help="series count (simulate)")
        p.add_argument("--mu0", type=float)
        p.add_argument("--sigma0", type=float)
        p.add_argument("--x-min", dest="x_min", type=float)
        p.add_argument("--x-max", dest="x_max", type=float)
        p.add_argument("--jobs", type=int)
        if name == "grid":
            p.add_argument("--q-list", dest="q_list",
                           help="comma-separated dependence orders")
            p.add_argument("--c-list", dest="c_list",
                           help="comma-separated coupling counts")
        if name == "simulate":
            p.add_argument("--mode", choices=("prior", "sequences"))
            p.add_argument("--n-draws", dest="n_draws", type=int)
            p.add_argument("--n-per-t", dest="n_per_t", type=int)
        if name == "fit":
            p.add_argument("--dump-chain", dest="dump_chain", action="store_true",
                           default=None)
    return parser


def _parse_list(text):
    return [int(v) for v in str(text).split(",") if v.strip() != ""]


def main(argv=None):
    args = vars(_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None)
    if args.get("c") is not None:
        text = str(args["c"])
        args["c"] = _parse_list(text) if "," in text else int(text)
    for key in ("q_list", "c_list"):
        if args.get(key) is not None:
            args[key] = _parse_list(args[key])
    try:
        config = load_config(config_path, args)
        if command == "fit":
            cmd_fit(config)
            return EXIT_OK
        if command == "grid":
            cmd_grid(config)
            return EXIT_OK
        if command == "simulate":
            cmd_simulate(config)
            return EXIT_OK
        return cmd_check(config)
    except ConfigError as e:
        print("config error: %s" % e, file=sys.stderr)
        return EXIT_CONFIG
    except DataError as e:
        print("data error: %s" % e, file=sys.stderr)
        return EXIT_DATA
    except ChainNumericError as e:
        print("numeric failure: %s" % e, file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
