import json

import jsonschema
import numpy as np
import pytest

from ftsa import serialize as io
from ftsa.basis import make_fourier_basis, make_grid, reconstruct
from ftsa.cli import RunConfig, main
from ftsa.regression import LinearFilter
from ftsa.simulate import NoiseSpec, gaussian_white_noise

SMALL = ["--d", "5", "--n", "101"]


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def sim(tmp_path):
    out = tmp_path / "sim"
    assert run("simulate", "--out", out, "--N", 400, "--m", 1, *SMALL) == 0
    return out


def test_simulate_white(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"kind": "white", "N": 100, "d": 5, "n": 101}))
    assert run("simulate", "--config", cfg, "--out", tmp_path / "w") == 0
    vals, pts = io.read_curves_csv(tmp_path / "w" / "X.csv")
    assert vals.shape == (100, 101)
    assert not (tmp_path / "w" / "Y.csv").exists()
    meta = io.read_json(tmp_path / "w" / "metadata.json")
    jsonschema.validate(meta, io.METADATA_SCHEMA)
    assert meta["rows"] == {"X": 100}


def test_simulate_deterministic(tmp_path):
    for name in ("a", "b"):
        assert run("simulate", "--out", tmp_path / name, "--N", 50, "--seed", 7, *SMALL) == 0
    for f in ("X.csv", "Y.csv", "truth.json", "metadata.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    assert run("simulate", "--out", tmp_path / "c", "--N", 50, "--seed", 8, *SMALL) == 0
    assert (tmp_path / "a" / "X.csv").read_bytes() != (tmp_path / "c" / "X.csv").read_bytes()


def test_simulate_filtered_alignment(sim):
    meta = io.read_json(sim / "metadata.json")
    assert meta["rows"] == {"X": 400, "Y": 400}
    truth = io.filter_from_json(io.read_json(sim / "truth.json"))
    assert truth.support == (0, 1)


def test_simulate_far1_and_bad_spec(tmp_path):
    assert run("simulate", "--out", tmp_path / "f", "--N", 50, *SMALL) == 0
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"kind": "far1", "ar_scale": 1.5, "d": 3, "n": 51}))
    assert run("simulate", "--config", cfg, "--out", tmp_path / "g") == 1
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run("simulate", "--config", cfg, "--out", tmp_path / "g") == 1


def test_project(sim, tmp_path):
    assert run("project", "--input", sim / "X.csv", "--out", tmp_path / "c.csv", *SMALL) == 0
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == "e1,e2,e3,e4,e5" and len(lines) == 401


def test_estimate_linear_identity_model(tmp_path):
    N, d = 2000, 5
    basis = make_fourier_basis(d, make_grid(101))
    noise = NoiseSpec(d, tuple(0.1 / np.arange(1, d + 1) ** 2), seed=2)
    X = gaussian_white_noise(NoiseSpec(d, seed=1), N)
    Y = X + gaussian_white_noise(noise, N)
    data = tmp_path / "data"
    io.write_curves_csv(data / "X.csv", reconstruct(X, basis), basis.grid)
    io.write_curves_csv(data / "Y.csv", reconstruct(Y, basis), basis.grid)
    assert run("estimate", "--data", data, "--out", tmp_path / "est", "--mode", "linear", "--K", d, *SMALL) == 0
    filt = io.read_json(tmp_path / "est" / "filter.json")
    jsonschema.validate(filt, io.FILTER_SCHEMA)
    fit = io.read_json(tmp_path / "est" / "regression.json")
    jsonschema.validate(fit, io.FIT_SCHEMA)
    assert fit["residual_variance"] == pytest.approx(noise.lam.sum(), rel=0.1)
    summary = (tmp_path / "est" / "summary.csv").read_text().splitlines()
    assert summary[0] == "quantity,index,value"
    assert any(line.startswith("K_used,,5") for line in summary)

    # identity truth: eval error is small
    truth = tmp_path / "truth.json"
    io.write_json(truth, io.filter_to_json(LinearFilter({0: np.eye(d)})))
    assert run("eval", "--fit", tmp_path / "est" / "filter.json", "--truth", truth, "--data", data,
               "--out", tmp_path / "ev", *SMALL) == 0
    report = io.read_json(tmp_path / "ev" / "eval.json")
    # rms error is sqrt(sum(noise) * sum(1 / lam_X) / N_train) ~ 0.07
    assert report["total_hs_error"] < 0.25
    assert report["prediction_mse"] == pytest.approx(noise.lam.sum(), rel=0.2)


def test_estimate_modes_share_support(sim, tmp_path):
    supports = []
    for mode in ("lagged-time", "lagged-spectral"):
        out = tmp_path / mode
        assert run("estimate", "--data", sim, "--out", out, "--mode", mode, *SMALL) == 0
        obj = io.read_json(out / "filter.json")
        jsonschema.validate(obj, io.FILTER_SCHEMA)
        supports.append(obj["support"])
    assert supports[0] == supports[1] == [0, 1]


def test_missing_input(tmp_path, capsys):
    assert run("estimate", "--data", tmp_path / "nowhere", "--out", tmp_path / "o", *SMALL) == 2
    assert str(tmp_path / "nowhere" / "X.csv") in capsys.readouterr().err
    assert run("estimate", "--config", tmp_path / "none.json", "--data", tmp_path, "--out", tmp_path) == 2


def test_eval_exact_and_zero(sim, tmp_path):
    truth = sim / "truth.json"
    assert run("eval", "--fit", truth, "--truth", truth, "--data", sim, "--out", tmp_path / "same", *SMALL) == 0
    report = io.read_json(tmp_path / "same" / "eval.json")
    jsonschema.validate(report, io.EVAL_SCHEMA)
    assert report["total_hs_error"] == 0
    assert all(v == 0 for v in report["per_lag_hs_error"].values())

    T = io.filter_from_json(io.read_json(truth))
    zero = tmp_path / "zero.json"
    io.write_json(zero, io.filter_to_json(LinearFilter({k: np.zeros((5, 5)) for k in T.lags})))
    assert run("eval", "--fit", zero, "--truth", truth, "--data", sim, "--out", tmp_path / "z", *SMALL) == 0
    report = io.read_json(tmp_path / "z" / "eval.json")
    expected = np.sqrt(sum(np.linalg.norm(T[k]) ** 2 for k in T.lags))
    assert report["total_hs_error"] == pytest.approx(expected, rel=1e-12)
    rows = (tmp_path / "z" / "response.csv").read_text().splitlines()
    assert rows[0] == "index,theta,hs_response_estimate,hs_response_truth" and len(rows) == 65


def test_eval_dimension_mismatch(sim, tmp_path):
    bad = tmp_path / "bad.json"
    io.write_json(bad, io.filter_to_json(LinearFilter({0: np.eye(3)})))
    assert run("eval", "--fit", bad, "--truth", sim / "truth.json", "--data", sim, "--out", tmp_path / "e", *SMALL) == 1


def test_sweep(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"d": 3, "n": 51, "sweep_sizes": [100, 400], "sweep_seeds": 3, "K": 3}))
    assert run("sweep", "--config", cfg, "--out", tmp_path / "sw") == 0
    rows = (tmp_path / "sw" / "sweep.csv").read_text().splitlines()
    assert rows[0] == "N,median_error,mean_error,min_error,max_error" and len(rows) == 3
    assert len((tmp_path / "sw" / "sweep_runs.csv").read_text().splitlines()) == 7


def test_config_support_parsing(tmp_path):
    cfg = RunConfig.load(None, {"support": (-1, 2), "mode": "lagged-spectral"})
    assert cfg.fit_support == (-1, 2)
    assert RunConfig(mode="lagged-time", m=3).fit_support == (0, 3)
    with pytest.raises(ValueError):
        RunConfig(mode="quadratic")
    with pytest.raises(SystemExit):
        main(["estimate", "--support", "1-2", "--data", ".", "--out", "."])
