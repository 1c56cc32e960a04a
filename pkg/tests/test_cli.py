import json

import numpy as np
import pytest
from scipy.stats import norm

from ddplatent.cli import (ConfigError, DataError, RunConfig,
                           cmd_check, cmd_fit, cmd_grid, cmd_simulate,
                           config_echo, ingest, load_config, main)
from ddplatent.gibbs import ChainNumericError
from ddplatent.measures import make_rng


def write_long(path, rows):
    with open(path, "w") as fh:
        fh.write("t,value\n")
        for t, v in rows:
            fh.write("%s,%s\n" % (t, v))
    return str(path)


def synthetic_long(path, seed=0, T=3, m=6):
    rng = make_rng(seed)
    rows = []
    for t in range(1, T + 1):
        for v in rng.normal(10 + 0.3 * t, 1.0, size=m):
            rows.append((t, repr(float(v))))
    return write_long(path, rows)


# -- ingestion ----------------------------------------------------------------

def test_ingest_long(tmp_path):
    path = write_long(tmp_path / "d.csv", [(1, 1.0), (1, 2.0), (2, 3.0)])
    ds = ingest(path, "long")
    assert ds.T == 2
    np.testing.assert_array_equal(ds.sizes, [2, 1])
    assert ds.all_values().min() == 1.0 and ds.all_values().max() == 3.0


def test_ingest_long_gap_means_empty_series(tmp_path):
    path = write_long(tmp_path / "d.csv", [(1, 1.0), (3, 2.0)])
    ds = ingest(path, "long")
    assert ds.T == 3
    np.testing.assert_array_equal(ds.sizes, [1, 0, 1])


def test_ingest_long_error_contracts(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("t,value\n1,abc\n")
    with pytest.raises(DataError, match="line 2"):
        ingest(str(path), "long")
    path.write_text("t,value\n1,1.0\n2\n")
    with pytest.raises(DataError, match="line 3"):
        ingest(str(path), "long")
    path.write_text("")
    with pytest.raises(DataError, match="empty"):
        ingest(str(path), "long")
    path.write_text("t,value\n0,1.0\n")
    with pytest.raises(DataError, match="series index"):
        ingest(str(path), "long")
    with pytest.raises(DataError):
        ingest(str(tmp_path / "missing.csv"), "long")


def test_ingest_wide(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("4.0,5.0\n1.0\n")
    ds = ingest(str(path), "wide")
    assert ds.T == 2
    np.testing.assert_array_equal(ds.sizes, [2, 1])
    path.write_text("4.0,nope\n")
    with pytest.raises(DataError, match="line 1"):
        ingest(str(path), "wide")


def test_ingest_wide_ragged_with_empty_row(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("1.0,2.0,3.0\n\n5.0\n")
    ds = ingest(str(path), "wide")
    np.testing.assert_array_equal(ds.sizes, [3, 0, 1])


# -- configuration ------------------------------------------------------------

def test_config_defaults_match_reference_settings():
    config = RunConfig()
    assert (config.c0, config.k) == (0.1, 50)
    assert (config.iterations, config.burn_in, config.thin) == (100_000, 5_000, 25)


def test_load_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"c0": 1.0, "bogus": 3}))
    with pytest.raises(ConfigError, match="bogus"):
        load_config(str(path))


def test_load_config_flag_overrides_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"c0": 1.0, "k": 10}))
    config = load_config(str(path), {"k": 20, "data": None})
    assert config.k == 20 and config.c0 == 1.0


def test_load_config_env_seed_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("DDP_SEED", "777")
    assert load_config(None, {}).seed == 777
    # explicit settings win over the environment
    assert load_config(None, {"seed": 5}).seed == 5


def test_load_config_validates_values(tmp_path):
    with pytest.raises(ConfigError):
        load_config(None, {"c0": -1.0})
    with pytest.raises(ConfigError):
        load_config(None, {"nu": 2.0})
    with pytest.raises(ConfigError):
        load_config(None, {"k": 1})
    with pytest.raises(ConfigError):
        load_config(None, {"x_min": 0.0})  # missing x_max
    with pytest.raises(ConfigError):
        load_config(None, {"burn_in": 10, "iterations": 10})
    with pytest.raises(ConfigError):
        load_config(None, {"structure": "weird"})
    with pytest.raises(ConfigError):
        load_config(None, {"iterations": 2.5})


def test_config_echo_round_trip(tmp_path):
    config = load_config(None, {"c0": 0.7, "c": [1, 2], "k": 8, "q": 2})
    echo = config_echo(config)
    path = tmp_path / "echo.json"
    path.write_text(json.dumps(echo))
    again = load_config(str(path))
    assert config_echo(again) == echo


# -- fit ----------------------------------------------------------------------

def fast_fit_config(data_path, out, **extra):
    overrides = {"data": data_path, "out": str(out), "k": 6, "c0": 0.5,
                 "c": 1, "q": 1, "iterations": 600, "burn_in": 100,
                 "thin": 5, "seed": 42}
    overrides.update(extra)
    return load_config(None, overrides)


def test_cmd_fit_writes_outputs(tmp_path):
    data_path = synthetic_long(tmp_path / "d.csv")
    config = fast_fit_config(data_path, tmp_path / "out")
    summary = cmd_fit(config)
    assert (tmp_path / "out" / "summary.csv").exists()
    stats = json.loads((tmp_path / "out" / "stats.json").read_text())
    assert set(stats) == {"lpml_log", "lpml_paper", "lmea", "nu",
                          "acceptance_rates", "config"}
    assert np.isfinite(stats["lpml_log"])
    assert stats["config"]["k"] == 6
    # monotone mean CDFs
    assert np.all(np.diff(summary.measure_cdf, axis=1) >= -1e-12)
    # config echo reparses to an equivalent config
    echo_path = tmp_path / "echo.json"
    echo_path.write_text(json.dumps(stats["config"]))
    assert config_echo(load_config(str(echo_path))) == stats["config"]


def test_cmd_fit_byte_identical_reruns(tmp_path):
    data_path = synthetic_long(tmp_path / "d.csv")
    config = fast_fit_config(data_path, tmp_path / "out")
    first = {}
    cmd_fit(config)
    for name in ("summary.csv", "stats.json"):
        first[name] = (tmp_path / "out" / name).read_bytes()
    cmd_fit(config)
    for name in ("summary.csv", "stats.json"):
        assert (tmp_path / "out" / name).read_bytes() == first[name], name


def test_cmd_fit_chain_dump(tmp_path):
    data_path = synthetic_long(tmp_path / "d.csv")
    config = fast_fit_config(data_path, tmp_path / "out", dump_chain=True)
    cmd_fit(config)
    lines = (tmp_path / "out" / "chain.csv").read_text().splitlines()
    assert len(lines) == 1 + (600 - 100) // 5
    header = lines[0].split(",")
    assert header[0] == "iteration"
    assert header[1] == "measure_1_1"   # series-major, then bin


def test_cmd_fit_requires_data():
    with pytest.raises(ConfigError):
        cmd_fit(load_config(None, {"iterations": 10, "burn_in": 1}))


# -- grid ---------------------------------------------------------------------

def test_cmd_grid_rows_and_determinism(tmp_path):
    data_path = synthetic_long(tmp_path / "d.csv", T=4, m=8)
    overrides = {"data": data_path, "out": str(tmp_path / "g1"), "k": 6,
                 "c0": 0.5, "q_list": [1, 2], "c_list": [1, 2],
                 "iterations": 400, "burn_in": 100, "thin": 4, "seed": 3}
    rows1 = cmd_grid(load_config(None, overrides))
    assert len(rows1) == 4
    assert all(not r["error"] and np.isfinite(r["lpml_log"]) for r in rows1)
    overrides["out"] = str(tmp_path / "g2")
    rows2 = cmd_grid(load_config(None, overrides))
    assert (tmp_path / "g1" / "grid.csv").read_bytes() == \
        (tmp_path / "g2" / "grid.csv").read_bytes()
    # sorted by (c, q)
    header, *lines = (tmp_path / "g1" / "grid.csv").read_text().splitlines()
    assert header == "q,c,lpml_log,lpml_paper,lmea,error"
    got = [tuple(map(int, line.split(",")[:2])) for line in lines]
    assert got == [(1, 1), (2, 1), (1, 2), (2, 2)]


def test_cmd_grid_isolates_cell_failures(tmp_path, monkeypatch):
    import ddplatent.cli as cli_mod
    real = cli_mod.run_gibbs

    def flaky(data, params, structure, base, cfg, rng=None):
        if params.c[0] == 2:
            raise RuntimeError("synthetic cell failure")
        return real(data, params, structure, base, cfg, rng=rng)

    monkeypatch.setattr(cli_mod, "run_gibbs", flaky)
    data_path = synthetic_long(tmp_path / "d.csv", T=3, m=5)
    overrides = {"data": data_path, "out": str(tmp_path / "g"), "k": 5,
                 "c0": 0.5, "q_list": [1], "c_list": [1, 2],
                 "iterations": 300, "burn_in": 50, "thin": 5, "seed": 1}
    rows = cmd_grid(load_config(None, overrides))
    by_c = {r["c"]: r for r in rows}
    assert by_c[1]["error"] == "" and np.isfinite(by_c[1]["lpml_log"])
    assert "synthetic cell failure" in by_c[2]["error"]
    assert by_c[2]["lpml_log"] is None


def test_cmd_grid_requires_ma_and_lists(tmp_path):
    data_path = synthetic_long(tmp_path / "d.csv")
    with pytest.raises(ConfigError):
        cmd_grid(load_config(None, {"data": data_path, "structure": "circular",
                                    "q_list": [1], "c_list": [1]}))
    with pytest.raises(ConfigError):
        cmd_grid(load_config(None, {"data": data_path}))


# -- simulate -----------------------------------------------------------------

def test_cmd_simulate_requires_bounds():
    with pytest.raises(ConfigError, match="x_min"):
        cmd_simulate(load_config(None, {"t": 2, "mode": "prior"}))


def test_cmd_simulate_prior_outputs(tmp_path):
    overrides = {"t": 2, "mode": "prior", "x_min": 0.0, "x_max": 1.0, "k": 4,
                 "c0": 2.0, "c": 0, "n_draws": 400, "seed": 8,
                 "out": str(tmp_path)}
    path = cmd_simulate(load_config(None, overrides))
    lines = open(path).read().splitlines()
    assert len(lines) == 401
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    # with zero couplings the measure means track the base masses
    j = header.index("measure_1_1")
    masses = data[:, j:j + 4]
    from ddplatent.partition import base_masses, build_partition
    base = base_masses(0.5, 1.0 / 7.0, build_partition(0, 1, 4))
    se = masses.std(axis=0) / np.sqrt(len(masses))
    assert np.all(np.abs(masses.mean(axis=0) - base) <= 3 * se + 1e-12)


def test_cmd_simulate_sequences_counts_and_prior_dominance(tmp_path):
    # huge anchor precision: the observations behave like iid base draws
    overrides = {"t": 2, "mode": "sequences", "x_min": 0.0, "x_max": 7.0,
                 "k": 60, "c0": 1e6, "c": 0, "n_per_t": 2500, "seed": 9,
                 "out": str(tmp_path)}
    path = cmd_simulate(load_config(None, overrides))
    lines = open(path).read().splitlines()
    assert lines[0] == "t,value"
    assert len(lines) == 1 + 2 * 2500
    values = np.array([float(line.split(",")[1]) for line in lines[1:]])
    grid = np.sort(values)
    ks = np.max(np.abs(norm.cdf(grid, 3.5, 1.0) -
                       np.arange(1, len(grid) + 1) / len(grid)))
    assert ks < 0.05, ks


def test_cmd_simulate_sequences_reingestable(tmp_path):
    overrides = {"t": 3, "mode": "sequences", "x_min": 0.0, "x_max": 1.0,
                 "k": 5, "c0": 1.0, "c": 2, "n_per_t": 4, "seed": 2,
                 "out": str(tmp_path)}
    path = cmd_simulate(load_config(None, overrides))
    ds = ingest(path, "long")
    assert ds.T == 3
    np.testing.assert_array_equal(ds.sizes, [4, 4, 4])


# -- check --------------------------------------------------------------------

def test_cmd_check_passes_on_sound_config(tmp_path, capsys):
    data_path = write_long(tmp_path / "d.csv",
                           [(1, 0.2), (1, 0.8), (2, 0.4), (2, 0.6)])
    overrides = {"data": data_path, "k": 2, "c0": 1.0, "c": 1, "q": 1,
                 "iterations": 30_000, "burn_in": 2_000, "thin": 1, "seed": 4}
    code = cmd_check(load_config(None, overrides))
    out = capsys.readouterr().out
    assert code == 0, out
    assert "PASS same-bin correlation" in out
    assert "PASS sampler vs enumeration" in out


def test_cmd_check_reports_independence(tmp_path, capsys):
    overrides = {"t": 3, "x_min": 0.0, "x_max": 1.0, "k": 3, "c0": 1.0,
                 "c": 0, "q": 1, "seed": 6}
    code = cmd_check(load_config(None, overrides))
    out = capsys.readouterr().out
    assert code == 0, out
    assert "PASS independence" in out


# -- entry point and exit codes ------------------------------------------------

def test_main_exit_codes(tmp_path, monkeypatch):
    good = synthetic_long(tmp_path / "d.csv")
    out = str(tmp_path / "out")
    assert main(["fit", "--data", good, "--out", out, "--k", "5", "--c0", "0.5",
                 "--c", "1", "--iterations", "200", "--burn-in", "50",
                 "--thin", "2", "--seed", "1"]) == 0

    # config failure
    assert main(["fit", "--data", good, "--k", "1"]) == 2

    # data failure
    bad = tmp_path / "bad.csv"
    bad.write_text("t,value\n1,oops\n")
    assert main(["fit", "--data", str(bad), "--iterations", "10",
                 "--burn-in", "1"]) == 3

    # numeric failure
    import ddplatent.cli as cli_mod

    def boom(*args, **kwargs):
        raise ChainNumericError("injected")

    monkeypatch.setattr(cli_mod, "run_gibbs", boom)
    assert main(["fit", "--data", good, "--out", out, "--iterations", "100",
                 "--burn-in", "10"]) == 4


def test_main_c_flag_accepts_vector(tmp_path):
    data_path = synthetic_long(tmp_path / "d.csv", T=3)
    out = str(tmp_path / "out")
    assert main(["fit", "--data", data_path, "--out", out, "--k", "5",
                 "--c0", "0.5", "--c", "1,0,2", "--iterations", "200",
                 "--burn-in", "20", "--thin", "2", "--seed", "3"]) == 0
    stats = json.loads((tmp_path / "out" / "stats.json").read_text())
    assert stats["config"]["c"] == [1, 0, 2]
