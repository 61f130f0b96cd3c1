"""Command-line driver: simulate, project, estimate, eval, sweep.

Every command takes ``--config`` (a flat JSON object of :class:`RunConfig`
fields) plus flag overrides, and is deterministic given the config.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import serialize as io
from .basis import make_fourier_basis, make_grid, project, reconstruct
from .regression import (
    DEFAULT_TAU,
    LinearFilter,
    filter_distance,
    fit_lagged_timedomain,
    fit_linear,
    predict,
)
from .simulate import (
    RNG_ALGORITHM,
    NoiseSpec,
    ProcessSpec,
    default_eigenvalues,
    random_operator,
    simulate,
)
from .spectral import WINDOWS, FrequencyGrid, fit_lagged_spectral, response_of_filter

MODES = ("linear", "lagged-time", "lagged-spectral")
EXIT_ERROR = 1
EXIT_MISSING_INPUT = 2


class MissingInputError(FileNotFoundError):
    pass


@dataclass
class RunConfig:
    # basis
    d: int = 15
    n: int = 1001
    # process
    kind: str = "filtered"
    N: int = 1000
    noise_scale: float = 1.0
    output_noise_scale: float = 0.1
    ar_scale: float = 0.0
    filter_hs: float = 1.0
    true_support: tuple[int, int] | None = None
    seed: int = 0
    # estimation
    mode: str = "lagged-spectral"
    m: int = 1
    K: int | None = None
    tau: float = DEFAULT_TAU
    bandwidth: int | None = None
    frequencies: int | None = None
    window: str = "bartlett"
    support: tuple[int, int] | None = None
    holdout: float = 0.2
    # sweep
    sweep_sizes: tuple[int, ...] = (250, 1000, 4000)
    sweep_seeds: int = 20

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.window not in WINDOWS:
            raise ValueError(f"unknown window {self.window!r}, expected one of {WINDOWS}")
        if not 0 <= self.holdout < 1:
            raise ValueError("holdout fraction must lie in [0, 1)")
        for name in ("true_support", "support"):
            val = getattr(self, name)
            if val is not None:
                setattr(self, name, tuple(int(v) for v in val))
        self.sweep_sizes = tuple(int(v) for v in self.sweep_sizes)

    @property
    def fit_support(self) -> tuple[int, int]:
        if self.mode == "linear":
            return (0, 0)
        if self.mode == "lagged-time":
            return (0, self.m)
        return self.support or (0, self.m)

    @property
    def sim_support(self) -> tuple[int, int]:
        return self.true_support or (0, self.m)

    @classmethod
    def load(cls, path: str | None, overrides: dict) -> RunConfig:
        data = {}
        if path is not None:
            if not Path(path).is_file():
                raise MissingInputError(f"config file not found: {path}")
            data = io.read_json(path)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


def _parse_support(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"support must look like k_min:k_max, got {text!r}")


# --- simulation --------------------------------------------------------------


def true_filter(cfg: RunConfig, d: int | None = None) -> LinearFilter:
    d = cfg.d if d is None else d
    rng = np.random.default_rng([cfg.seed, 2])
    lo, hi = cfg.sim_support
    return LinearFilter({k: random_operator(d, rng, cfg.filter_hs) for k in range(lo, hi + 1)})


def process_spec(cfg: RunConfig, N: int | None = None, seed: int | None = None) -> ProcessSpec:
    seed = cfg.seed if seed is None else seed
    N = cfg.N if N is None else N
    noise = NoiseSpec(cfg.d, tuple(default_eigenvalues(cfg.d, cfg.noise_scale)), seed)
    psi = cfg.ar_scale * np.eye(cfg.d) if (cfg.kind == "far1" or cfg.ar_scale) else None
    if cfg.kind != "filtered":
        return ProcessSpec(cfg.kind, noise, N, ar_operator=psi)
    lo, hi = cfg.sim_support
    out_noise = None
    if cfg.output_noise_scale > 0:
        out_noise = NoiseSpec(cfg.d, tuple(default_eigenvalues(cfg.d, cfg.output_noise_scale)), seed + 1)
    # extra input rows so the trimmed pair has exactly N rows
    extra = max(hi, 0) - min(lo, 0)
    return ProcessSpec(
        "filtered", noise, N + extra, filter=true_filter(cfg), ar_operator=psi, output_noise=out_noise
    )


def cmd_simulate(cfg: RunConfig, out: Path) -> None:
    spec = process_spec(cfg)
    X, Y = simulate(spec)
    basis = make_fourier_basis(cfg.d, make_grid(cfg.n))
    io.write_curves_csv(out / "X.csv", reconstruct(X, basis), basis.grid)
    rows = {"X": int(X.shape[0])}
    if Y is not None:
        io.write_curves_csv(out / "Y.csv", reconstruct(Y, basis), basis.grid)
        io.write_json(out / "truth.json", io.filter_to_json(spec.filter))
        rows["Y"] = int(Y.shape[0])
    meta = {
        "seed": cfg.seed,
        "spec_hash": spec.digest(),
        "rng": RNG_ALGORITHM,
        "kind": cfg.kind,
        "rows": rows,
        "d": cfg.d,
        "n": cfg.n,
        "config": _jsonable(asdict(cfg)),
    }
    io.write_json(out / "metadata.json", meta)


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=list))


# --- projection / estimation ------------------------------------------------


def _need(path: Path) -> Path:
    if not path.is_file():
        raise MissingInputError(f"input file not found: {path}")
    return path


def load_coeffs(path: Path, d: int) -> np.ndarray:
    values, points = io.read_curves_csv(_need(path))
    grid = make_grid(points.size)
    if np.max(np.abs(grid.points - points)) > 1e-12:
        raise ValueError(f"{path}: header is not a uniform grid on [0, 1]")
    return project(values, make_fourier_basis(d, grid))


def cmd_project(cfg: RunConfig, inp: Path, out: Path) -> None:
    io.write_coeffs_csv(out, load_coeffs(inp, cfg.d))


def _train_size(N: int, holdout: float) -> int:
    return N - int(np.floor(holdout * N))


def estimate(cfg: RunConfig, X: np.ndarray, Y: np.ndarray):
    """Fit the configured estimator; returns ``(filter, regression fit or None)``."""
    if cfg.mode == "linear":
        fit = fit_linear(X, Y, cfg.K, cfg.tau)
        return fit.as_filter(), fit
    if cfg.mode == "lagged-time":
        return fit_lagged_timedomain(X, Y, cfg.m, cfg.K, cfg.tau), None
    filt = fit_lagged_spectral(
        X, Y, cfg.fit_support, cfg.bandwidth, cfg.frequencies, cfg.K, cfg.tau, window=cfg.window
    )
    return filt, None


def cmd_estimate(cfg: RunConfig, data: Path, out: Path) -> None:
    X = load_coeffs(data / "X.csv", cfg.d)
    Y = load_coeffs(data / "Y.csv", cfg.d)
    if X.shape != Y.shape:
        raise ValueError(f"X and Y have different shapes {X.shape} vs {Y.shape}")
    n_train = _train_size(X.shape[0], cfg.holdout)
    filt, fit = estimate(cfg, X[:n_train], Y[:n_train])
    Yhat, t = predict(filt, X[:n_train])
    resid_var = float(np.mean(np.sum((Y[t.start : t.stop] - Yhat) ** 2, axis=1)))
    filt.info = {**filt.info, "mode": cfg.mode, "train_rows": n_train, "residual_variance": resid_var}
    io.write_json(out / "filter.json", io.filter_to_json(filt))
    if fit is not None:
        io.write_json(out / "regression.json", io.fit_to_json(fit))
    K_used = filt.info.get("K_used")
    rows = [["mode", "", cfg.mode], ["train_rows", "", n_train], ["residual_variance", "", resid_var]]
    if isinstance(K_used, list):
        rows += [["K_used", j, int(k)] for j, k in enumerate(K_used)]
    elif K_used is not None:
        rows.append(["K_used", "", int(K_used)])
    rows += [["hs_norm", k, v] for k, v in filt.hs_norms().items()]
    io.write_table_csv(out / "summary.csv", ["quantity", "index", "value"], rows)


# --- evaluation --------------------------------------------------------------


def cmd_eval(cfg: RunConfig, fit_path: Path, truth_path: Path, data: Path, out: Path) -> None:
    est = io.filter_from_json(io.read_json(_need(fit_path)))
    truth = io.filter_from_json(io.read_json(_need(truth_path)))
    per_lag, total = filter_distance(est, truth)

    X = load_coeffs(data / "X.csv", cfg.d)
    Y = load_coeffs(data / "Y.csv", cfg.d)
    if est.shape is not None and est.shape[1] != X.shape[1]:
        raise ValueError(f"filter acts on dimension {est.shape[1]}, data have d={X.shape[1]}")
    n_train = _train_size(X.shape[0], cfg.holdout)
    Yhat, t = predict(est, X)
    keep = np.arange(t.start, t.stop) >= n_train
    mse = None
    if keep.any():
        err = Y[t.start : t.stop][keep] - Yhat[keep]
        mse = float(np.mean(np.sum(err**2, axis=1)))

    report = {
        "per_lag_hs_error": {str(k): v for k, v in per_lag.items()},
        "total_hs_error": total,
        "prediction_mse": mse,
        "holdout": {"start": n_train, "stop": int(X.shape[0]), "evaluated": int(keep.sum())},
    }
    io.write_json(out / "eval.json", report)
    hs_est, hs_true = est.hs_norms(), truth.hs_norms()
    io.write_table_csv(
        out / "lag_errors.csv",
        ["lag", "hs_error", "hs_estimate", "hs_truth"],
        [[k, v, hs_est.get(k, 0.0), hs_true.get(k, 0.0)] for k, v in per_lag.items()],
    )
    grid = FrequencyGrid(64)
    shape = est.shape or truth.shape
    r_est = response_of_filter(est, grid, shape).values
    r_true = response_of_filter(truth, grid, shape).values
    io.write_table_csv(
        out / "response.csv",
        ["index", "theta", "hs_response_estimate", "hs_response_truth"],
        [
            [j, float(th), float(np.linalg.norm(r_est[j])), float(np.linalg.norm(r_true[j]))]
            for j, th in enumerate(grid.thetas)
        ],
    )


# --- sweep -------------------------------------------------------------------


def sweep_errors(cfg: RunConfig) -> dict[int, list[float]]:
    """Total HS estimation error for each sample size and replication seed."""
    truth = true_filter(cfg)
    results = {}
    for N in cfg.sweep_sizes:
        errs = []
        for r in range(cfg.sweep_seeds):
            spec = process_spec(cfg, N=N, seed=cfg.seed + 1000 * r)
            spec.filter = truth
            X, Y = simulate(spec)
            filt, _ = estimate(cfg, X, Y)
            errs.append(filter_distance(filt, truth)[1])
        results[N] = errs
    return results


def cmd_sweep(cfg: RunConfig, out: Path) -> None:
    if cfg.kind != "filtered":
        raise ValueError("sweep needs a filtered process")
    results = sweep_errors(cfg)
    io.write_table_csv(
        out / "sweep_runs.csv",
        ["N", "replication", "total_hs_error"],
        [[N, r, e] for N, errs in results.items() for r, e in enumerate(errs)],
    )
    io.write_table_csv(
        out / "sweep.csv",
        ["N", "median_error", "mean_error", "min_error", "max_error"],
        [
            [N, float(np.median(e)), float(np.mean(e)), float(np.min(e)), float(np.max(e))]
            for N, e in results.items()
        ],
    )


# --- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of RunConfig fields")
    common.add_argument("--d", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--N", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--K", type=int)
    common.add_argument("--tau", type=float)
    common.add_argument("--bandwidth", type=int)
    common.add_argument("--frequencies", type=int)
    common.add_argument("--window", choices=WINDOWS)
    common.add_argument("--support", type=_parse_support)
    common.add_argument("--seed", type=int)
    common.add_argument("--mode", choices=MODES)

    p = argparse.ArgumentParser(prog="ftsa", description="Functional time series estimation toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="simulate a series to curve CSVs")
    s.add_argument("--out", type=Path, required=True, help="output directory")

    s = sub.add_parser("project", parents=[common], help="project curve CSV onto the basis")
    s.add_argument("--input", type=Path, required=True)
    s.add_argument("--out", type=Path, required=True, help="coefficient CSV to write")

    s = sub.add_parser("estimate", parents=[common], help="fit a linear or lagged model")
    s.add_argument("--data", type=Path, required=True, help="directory with X.csv and Y.csv")
    s.add_argument("--out", type=Path, required=True)

    s = sub.add_parser("eval", parents=[common], help="compare a fitted filter with the truth")
    s.add_argument("--fit", type=Path, required=True, help="filter.json from estimate")
    s.add_argument("--truth", type=Path, required=True, help="truth.json from simulate")
    s.add_argument("--data", type=Path, required=True)
    s.add_argument("--out", type=Path, required=True)

    s = sub.add_parser("sweep", parents=[common], help="Monte-Carlo error over sample sizes")
    s.add_argument("--out", type=Path, required=True)
    return p


_OVERRIDES = ("d", "n", "N", "m", "K", "tau", "bandwidth", "frequencies", "window", "support", "seed", "mode")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args.config, {k: getattr(args, k) for k in _OVERRIDES})
        if args.command == "simulate":
            cmd_simulate(cfg, args.out)
        elif args.command == "project":
            cmd_project(cfg, args.input, args.out)
        elif args.command == "estimate":
            cmd_estimate(cfg, args.data, args.out)
        elif args.command == "eval":
            cmd_eval(cfg, args.fit, args.truth, args.data, args.out)
        elif args.command == "sweep":
            cmd_sweep(cfg, args.out)
    except MissingInputError as exc:
        print(f"ftsa {args.command}: {exc}", file=sys.stderr)
        return EXIT_MISSING_INPUT
    except (ValueError, ArithmeticError, TypeError) as exc:
        print(f"ftsa {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
