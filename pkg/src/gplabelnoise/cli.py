"""Batch command-line front-end.

Five subcommands: ``gen`` writes synthetic datasets, ``fit`` learns a noise
model and writes a JSON report, ``detect`` thresholds fitted variances into
noisy-label flags (fitting in-line or reusing a fit report), ``benchmark``
sweeps a noise-rate x noise-level grid into a CSV table, and
``compare-optimizers`` dumps the multiplicative and projected-gradient
traces side by side for plotting.

Settings resolve as flags > config file > documented defaults; the config
file is flat ``key=value`` with ``#`` comments, keys named after the long
flags, and unknown keys rejected. ``GPLABELNOISE_SEED`` supplies the default
seed when no flag or config entry does. Every command is deterministic given
its resolved settings: reruns produce byte-identical output files.

Exit codes: 0 success, 1 usage/config, 2 I/O or parse, 3 numerical failure,
4 fit hit max-iters without converging.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .data import (
    Dataset,
    LabelTruth,
    NoiseInjectionSpec,
    gen_example1,
    gen_gp,
    gen_heteroscedastic,
    inject_noise,
    read_dataset,
    write_dataset,
)
from .detect import cv_mae, flag_noisy, precision_at_recall, r2_noise, roc_auc
from .errors import (
    ConfigError,
    EmptyDatasetError,
    GplnError,
    InvalidInputError,
    NumericalError,
    ParseError,
    UndefinedMetricError,
)
from .kernel import KernelParams, heuristic_params
from .noiseopt import (
    JointOptConfig,
    MultUpdateConfig,
    PgdConfig,
    joint_optimize,
    optimize_sigma,
    optimize_sigma_uniform,
    projected_gradient_baseline,
)

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_NUMERICAL = 3
EXIT_NOT_CONVERGED = 4

_SEED_ENV = "GPLABELNOISE_SEED"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; route them through the config-error
    # path instead so the documented exit-code table holds
    def error(self, message):
        raise ConfigError(message)


def _parse_bool(text: str) -> bool:
    if text in ("true", "1"):
        return True
    if text in ("false", "0"):
        return False
    raise ConfigError(f"expected true/false/1/0, got {text!r}")


def _parse_float_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not values:
        raise ConfigError("expected at least one value in the list")
    return values


@dataclass(frozen=True)
class _Opt:
    """One resolvable setting: flag spelling, conversion, documented default."""

    flag: str
    type: object
    default: object
    help: str
    is_flag: bool = False

    @property
    def key(self) -> str:
        return self.flag.lstrip("-")

    @property
    def dest(self) -> str:
        return self.key.replace("-", "_")


_SEED_OPT = _Opt("--seed", int, None, f"global seed (default: ${_SEED_ENV} or 0)")

_FIT_OPTS = [
    _Opt("--data", str, None, "dataset CSV to fit"),
    _Opt("--out", str, "report.json", "report path"),
    _Opt("--mode", str, "full", "noise model: full (per-label) or basic (shared)"),
    _Opt("--joint", None, False, "also optimize kernel parameters (restarted descent)", is_flag=True),
    _Opt("--lambda", float, 0.0, "penalty weight on ||sigma||_p^p"),
    _Opt("--p", float, 1.0, "penalty exponent (>= 1)"),
    _Opt("--max-iters", int, 10000, "iteration cap for the noise optimizer"),
    _Opt("--tol-sigma", float, 1e-8, "relative sigma-change stopping tolerance"),
    _Opt("--tol-nll", float, 1e-10, "NLL-decrease stopping tolerance"),
    _Opt("--sigma-init", float, None, "initial noise variance (default: 0.1 * var(y))"),
    _Opt("--signal-variance", float, None, "kernel signal variance (default: var(y))"),
    _Opt("--length-scale", float, None, "kernel length scale (default: median pairwise distance)"),
    _Opt("--outer-rounds", int, 3, "joint mode: block-coordinate rounds"),
    _Opt("--restarts", int, 4, "joint mode: random restarts"),
    _SEED_OPT,
]

_DETECT_OPTS = _FIT_OPTS + [
    _Opt("--report", str, None, "reuse a fit report instead of fitting"),
    _Opt("--threshold", float, None, "flagging threshold (default: median + 3*MAD)"),
    _Opt("--recall-levels", _parse_float_list, [0.7, 0.95], "recall levels for precision"),
]

_GEN_OPTS = [
    _Opt("--example1", None, False, "24-point benchmark with 10 corrupted labels", is_flag=True),
    _Opt("--hetero", str, None, "heteroscedastic family: goldberg or le"),
    _Opt("--grid", None, False, "GP draw plus rate/level noise injection", is_flag=True),
    _Opt("--n", int, 30, "sample count (hetero/grid)"),
    _Opt("--d", int, 1, "input dimension (grid)"),
    _Opt("--n-corrupt", int, 6, "corrupted count (hetero)"),
    _Opt("--rate", float, 0.1, "fraction of labels to corrupt (grid)"),
    _Opt("--level", float, 0.5, "corruption std as a ratio of std(y) (grid)"),
    _Opt("--base-noise", float, 0.0, "iid base noise std (grid)"),
    _Opt("--gp-signal-variance", float, 1.0, "generating kernel signal variance (grid)"),
    _Opt("--gp-length-scale", float, 0.3, "generating kernel length scale (grid)"),
    _Opt("--out", str, "dataset.csv", "output CSV path"),
    _SEED_OPT,
]

_BENCHMARK_OPTS = [
    _Opt("--data", str, None, "pristine base dataset CSV"),
    _Opt("--gp-n", int, None, "generate the base from a GP draw with this many points"),
    _Opt("--gp-d", int, 1, "input dimension for the generated base"),
    _Opt("--gp-signal-variance", float, 1.0, "generating kernel signal variance"),
    _Opt("--gp-length-scale", float, 0.3, "generating kernel length scale"),
    _Opt("--base-noise", float, 0.0, "iid base noise std for the generated base"),
    _Opt("--rates", _parse_float_list, [0.1, 0.3], "noise rates to sweep"),
    _Opt("--levels", _parse_float_list, [0.5, 1.0], "noise levels to sweep"),
    _Opt("--recall-levels", _parse_float_list, [0.7, 0.95], "recall levels for precision"),
    _Opt("--folds", int, 5, "cross-validation folds"),
    _Opt("--joint", None, False, "fit kernel parameters per cell instead of the heuristic", is_flag=True),
    _Opt("--max-iters", int, 10000, "iteration cap for the noise optimizer"),
    _Opt("--out", str, "benchmark.csv", "output CSV path"),
    _SEED_OPT,
]

_COMPARE_OPTS = [
    _Opt("--data", str, None, "dataset CSV"),
    _Opt("--signal-variance", float, None, "kernel signal variance (default: var(y))"),
    _Opt("--length-scale", float, None, "kernel length scale (default: median pairwise distance)"),
    _Opt("--max-iters", int, 5000, "iteration cap for both optimizers"),
    _Opt("--out", str, "optimizers.csv", "output CSV path"),
]

_COMMAND_OPTS = {
    "gen": _GEN_OPTS,
    "fit": _FIT_OPTS,
    "detect": _DETECT_OPTS,
    "benchmark": _BENCHMARK_OPTS,
    "compare-optimizers": _COMPARE_OPTS,
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="gplabelnoise", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"gplabelnoise {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, opts in _COMMAND_OPTS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="flat key=value settings file")
        for o in opts:
            if o.is_flag:
                p.add_argument(o.flag, dest=o.dest, action="store_true", default=None, help=o.help)
            else:
                p.add_argument(o.flag, dest=o.dest, type=str, default=None, help=o.help)
    return parser


def _read_config_file(path: str, known: dict[str, _Opt]) -> dict[str, str]:
    with open(path, "r") as fh:
        lines = fh.read().splitlines()
    values: dict[str, str] = {}
    for line_no, raw in enumerate(lines, 1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        key, sep, value = text.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{line_no}: expected key=value, got {raw!r}")
        key = key.strip()
        if key not in known:
            raise ConfigError(f"{path}:{line_no}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _convert(opt: _Opt, text: str):
    if opt.is_flag:
        return _parse_bool(text)
    try:
        return opt.type(text)
    except ValueError:
        raise ConfigError(f"invalid value {text!r} for --{opt.key}") from None


def _resolve(args: argparse.Namespace, opts: list[_Opt]) -> tuple[dict, set]:
    """Apply the flags > config file > defaults precedence.

    Returns the resolved settings plus the set of keys the user supplied
    explicitly (either way), which conflict checks care about.
    """
    known = {o.key: o for o in opts}
    file_values = _read_config_file(args.config, known) if args.config else {}
    resolved: dict[str, object] = {}
    provided: set[str] = set()
    for o in opts:
        raw = getattr(args, o.dest)
        if raw is not None:
            resolved[o.dest] = raw if o.is_flag else _convert(o, raw)
            provided.add(o.dest)
        elif o.key in file_values:
            resolved[o.dest] = _convert(o, file_values[o.key])
            provided.add(o.dest)
        else:
            resolved[o.dest] = o.default
    if "seed" in resolved and resolved["seed"] is None:
        env = os.environ.get(_SEED_ENV)
        try:
            resolved["seed"] = int(env) if env is not None else 0
        except ValueError:
            raise ConfigError(f"${_SEED_ENV} must be an integer, got {env!r}") from None
    return resolved, provided


def _write_text(path: str, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_report(path: str, doc: dict) -> None:
    _write_text(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _float_cell(value) -> str:
    return "NA" if value is None else repr(float(value))


# ---------------------------------------------------------------------------
# fitting plumbing shared by fit / detect / benchmark


def _mult_config(cfg: dict) -> MultUpdateConfig:
    return MultUpdateConfig(
        max_iters=cfg.get("max_iters", 10000),
        tol_sigma=cfg.get("tol_sigma", 1e-8),
        tol_nll=cfg.get("tol_nll", 1e-10),
        sigma_init=cfg.get("sigma_init"),
        penalty_lambda=cfg.get("lambda", 0.0),
        penalty_p=cfg.get("p", 1.0),
    )


def _explicit_params(cfg: dict, data: Dataset) -> KernelParams:
    base = heuristic_params(data.X, data.y)
    return KernelParams(
        signal_variance=cfg["signal_variance"] if cfg.get("signal_variance") is not None else base.signal_variance,
        length_scale=cfg["length_scale"] if cfg.get("length_scale") is not None else base.length_scale,
    )


def _run_fit(data: Dataset, cfg: dict, provided: set) -> tuple[KernelParams, np.ndarray, object, float | None]:
    """Returns (params, per-label sigma, trace, shared-sigma-or-None)."""
    if cfg["mode"] not in ("full", "basic"):
        raise ConfigError(f"mode must be full or basic, got {cfg['mode']!r}")
    mult = _mult_config(cfg)
    if cfg["joint"]:
        if provided & {"signal_variance", "length_scale"}:
            raise ConfigError("--joint optimizes the kernel; drop the explicit kernel flags")
        if cfg["mode"] != "full":
            raise ConfigError("--joint requires --mode full")
        joint = JointOptConfig(
            outer_rounds=cfg["outer_rounds"],
            restarts=cfg["restarts"],
            restart_seed=cfg["seed"],
        )
        params, sigma, trace = joint_optimize(data, joint, mult)
        return params, sigma, trace, None
    params = _explicit_params(cfg, data)
    if cfg["mode"] == "basic":
        shared, trace = optimize_sigma_uniform(params, data, mult)
        return params, np.full(data.n, shared), trace, shared
    sigma, trace = optimize_sigma(params, data, mult)
    return params, sigma, trace, None


def _per_label_section(sigma, flags, truth: LabelTruth | None) -> list[dict]:
    rows = []
    for i in range(len(sigma)):
        row = {
            "index": i,
            "sigma": float(sigma[i]),
            "score": float(sigma[i]),
            "flag": bool(flags[i]),
        }
        if truth is not None:
            row["epsilon"] = float(truth.epsilon[i])
            row["corrupted"] = bool(truth.corrupted[i])
        rows.append(row)
    return rows


def _trace_section(trace) -> dict:
    return {
        "iters": trace.iters,
        "converged": trace.converged,
        "monotone": trace.monotone,
        "final_nll": trace.final_nll,
        "func_evals": trace.func_evals,
    }


def _metrics_section(sigma, truth: LabelTruth | None, levels: list[float]) -> tuple[dict | None, dict]:
    """Compute detection metrics, collecting per-metric failures instead of
    aborting: a degenerate truth vector should not sink the whole report."""
    if truth is None:
        return None, {}
    corrupted = truth.corrupted
    errors: dict[str, str] = {}
    metrics: dict[str, object] = {}
    try:
        metrics["auc"] = roc_auc(sigma, corrupted)
    except UndefinedMetricError as e:
        errors["auc"] = str(e)
    try:
        pr = precision_at_recall(sigma, corrupted, levels)
        metrics["precision_at_recall"] = {repr(level): pr[level] for level in levels}
    except UndefinedMetricError as e:
        errors["precision_at_recall"] = str(e)
    try:
        metrics["r2_noise"] = r2_noise(sigma, truth.epsilon**2)
    except UndefinedMetricError as e:
        errors["r2_noise"] = str(e)
    return metrics, errors


# ---------------------------------------------------------------------------
# subcommands


def _cmd_gen(args) -> int:
    cfg, provided = _resolve(args, _GEN_OPTS)
    selectors = [name for name in ("example1", "hetero", "grid") if cfg[name]]
    if len(selectors) != 1:
        raise ConfigError("pick exactly one of --example1, --hetero, --grid")
    kind = selectors[0]

    fixed = {
        "example1": {"n", "d", "n_corrupt", "rate", "level", "base_noise"},
        "hetero": {"d", "rate", "level", "base_noise"},
        "grid": {"n_corrupt"},
    }[kind]
    clash = provided & fixed
    if clash:
        raise ConfigError(f"--{kind} does not take --{sorted(clash)[0].replace('_', '-')}")

    if kind == "example1":
        dataset = gen_example1(cfg["seed"])
    elif kind == "hetero":
        dataset = gen_heteroscedastic(cfg["hetero"], cfg["n"], cfg["n_corrupt"], {}, cfg["seed"])
    else:
        gp_params = KernelParams(cfg["gp_signal_variance"], cfg["gp_length_scale"])
        clean = gen_gp(
            gp_params, cfg["n"], d=cfg["d"], seed=cfg["seed"], base_noise_std=cfg["base_noise"]
        )
        dataset = inject_noise(
            clean, NoiseInjectionSpec(rate=cfg["rate"], level=cfg["level"], seed=cfg["seed"])
        )
    write_dataset(dataset, cfg["out"])
    corrupted = int(np.sum(dataset.truth.corrupted)) if dataset.truth is not None else 0
    print(f"wrote {cfg['out']}: N={dataset.n} d={dataset.d} corrupted={corrupted} seed={cfg['seed']}")
    return EXIT_OK


def _fit_document(command: str, dataset: Dataset, cfg: dict, provided: set, threshold=None, levels=None):
    params, sigma, trace, shared = _run_fit(dataset, cfg, provided)
    report = flag_noisy(sigma, threshold)
    if levels is not None:
        metrics, metric_errors = _metrics_section(sigma, dataset.truth, levels)
    else:
        metrics, metric_errors = None, {}
    doc = {
        "tool": {"name": "gplabelnoise", "version": __version__},
        "command": command,
        "config": {k: v for k, v in sorted(cfg.items())},
        "theta": {
            "signal_variance": params.signal_variance,
            "length_scale": params.length_scale,
        },
        "threshold": report.threshold,
        "sigma_shared": shared,
        "per_label": _per_label_section(sigma, report.flags, dataset.truth),
        "metrics": metrics,
        "metric_errors": metric_errors,
        "trace": _trace_section(trace),
        "final_nll": trace.final_nll,
    }
    return doc, trace, report


def _cmd_fit(args) -> int:
    cfg, provided = _resolve(args, _FIT_OPTS)
    if cfg["data"] is None:
        raise ConfigError("--data is required")
    dataset = read_dataset(cfg["data"])
    doc, trace, _ = _fit_document("fit", dataset, cfg, provided)
    _write_report(cfg["out"], doc)
    status = "converged" if trace.converged else "hit max-iters"
    print(
        f"wrote {cfg['out']}: N={dataset.n} iters={trace.iters} "
        f"final_nll={trace.final_nll!r} ({status})"
    )
    return EXIT_OK if trace.converged else EXIT_NOT_CONVERGED


def _load_report_labels(path: str) -> tuple[np.ndarray, LabelTruth | None]:
    with open(path, "r") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: not valid JSON ({e})", line=e.lineno) from None
    try:
        rows = doc["per_label"]
        sigma = np.array([row["sigma"] for row in rows], dtype=float)
    except (KeyError, TypeError):
        raise ParseError(f"{path}: missing per_label sigma entries", line=1) from None
    if rows and "corrupted" in rows[0]:
        eps = np.array([row.get("epsilon", 0.0) for row in rows], dtype=float)
        corrupted = np.array([bool(row["corrupted"]) for row in rows])
        return sigma, LabelTruth(eps, corrupted)
    return sigma, None


def _cmd_detect(args) -> int:
    cfg, provided = _resolve(args, _DETECT_OPTS)
    levels = cfg["recall_levels"]
    if (cfg["data"] is None) == (cfg["report"] is None):
        raise ConfigError("pass exactly one of --data (fit in-line) or --report")
    if cfg["report"] is not None:
        sigma, truth = _load_report_labels(cfg["report"])
        report = flag_noisy(sigma, cfg["threshold"])
        metrics, metric_errors = _metrics_section(sigma, truth, levels)
        doc = {
            "tool": {"name": "gplabelnoise", "version": __version__},
            "command": "detect",
            "config": {k: v for k, v in sorted(cfg.items())},
            "threshold": report.threshold,
            "per_label": _per_label_section(sigma, report.flags, truth),
            "metrics": metrics,
            "metric_errors": metric_errors,
        }
    else:
        dataset = read_dataset(cfg["data"])
        doc, _, report = _fit_document(
            "detect", dataset, cfg, provided, threshold=cfg["threshold"], levels=levels
        )
    _write_report(cfg["out"], doc)
    print(f"wrote {cfg['out']}: flagged={report.n_flagged}/{len(report.flags)} threshold={report.threshold!r}")
    return EXIT_OK


def _cmd_benchmark(args) -> int:
    cfg, _ = _resolve(args, _BENCHMARK_OPTS)
    if (cfg["data"] is None) == (cfg["gp_n"] is None):
        raise ConfigError("pass exactly one of --data or --gp-n")
    if cfg["data"] is not None:
        base = read_dataset(cfg["data"])
        if base.truth is not None:
            raise ConfigError("benchmark base dataset must be pristine (no truth columns)")
    else:
        base = gen_gp(
            KernelParams(cfg["gp_signal_variance"], cfg["gp_length_scale"]),
            cfg["gp_n"],
            d=cfg["gp_d"],
            seed=cfg["seed"],
            base_noise_std=cfg["base_noise"],
        )

    levels_cols = [f"precision_at_{level!r}" for level in cfg["recall_levels"]]
    header = ["rate", "level", "r2", "auc", *levels_cols, "mae_plain", "mae_basic", "mae_full", "error"]
    lines = [",".join(header)]
    mult = _mult_config(cfg)
    cell = 0
    for rate in cfg["rates"]:
        for level in cfg["levels"]:
            row = _benchmark_cell(base, rate, level, cfg, mult, cell_seed=cfg["seed"] + cell)
            lines.append(",".join(row))
            cell += 1
    _write_text(cfg["out"], "\n".join(lines) + "\n")
    print(f"wrote {cfg['out']}: {cell} cells")
    return EXIT_OK


def _benchmark_cell(
    base: Dataset, rate: float, level: float, cfg: dict, mult: MultUpdateConfig, cell_seed: int
) -> list[str]:
    cells: dict[str, float | None] = {
        key: None
        for key in ("r2", "auc", *[f"p{i}" for i in range(len(cfg["recall_levels"]))],
                    "mae_plain", "mae_basic", "mae_full")
    }
    error = ""
    try:
        noisy = inject_noise(base, NoiseInjectionSpec(rate=rate, level=level, seed=cell_seed))
        if cfg["joint"]:
            joint = JointOptConfig(restart_seed=cell_seed)
            params, sigma, _ = joint_optimize(noisy, joint, mult)
        else:
            params = heuristic_params(noisy.X, noisy.y)
            sigma, _ = optimize_sigma(params, noisy, mult)
        truth = noisy.truth
        try:
            cells["r2"] = r2_noise(sigma, truth.epsilon**2)
        except UndefinedMetricError:
            pass
        try:
            cells["auc"] = roc_auc(sigma, truth.corrupted)
        except UndefinedMetricError:
            pass
        try:
            pr = precision_at_recall(sigma, truth.corrupted, cfg["recall_levels"])
            for i, lv in enumerate(cfg["recall_levels"]):
                cells[f"p{i}"] = pr[lv]
        except UndefinedMetricError:
            pass
        for mode in ("plain", "basic", "full"):
            cells[f"mae_{mode}"] = cv_mae(
                noisy, params, mode, folds=cfg["folds"], seed=cell_seed, config=mult
            )
    except GplnError as e:
        # a failed cell reports its error and the sweep moves on
        error = str(e).replace(",", ";").replace("\n", " ")
    return [repr(float(rate)), repr(float(level))] + [
        _float_cell(cells[k]) for k in cells
    ] + [error]


def _cmd_compare_optimizers(args) -> int:
    cfg, _ = _resolve(args, _COMPARE_OPTS)
    if cfg["data"] is None:
        raise ConfigError("--data is required")
    dataset = read_dataset(cfg["data"])
    params = _explicit_params(cfg, dataset)
    y = dataset.y_centered
    v = float(np.var(y))
    sigma0 = np.full(dataset.n, 0.1 * v if v > 0.0 else 1.0)

    _, mult_trace = optimize_sigma(
        params, dataset, MultUpdateConfig(max_iters=cfg["max_iters"], sigma_init=sigma0)
    )
    _, pgd_trace = projected_gradient_baseline(
        params, dataset, PgdConfig(max_iters=cfg["max_iters"], sigma_init=sigma0)
    )

    lines = ["optimizer,iteration,nll,func_evals"]
    for name, trace in (("multiplicative", mult_trace), ("projected_gradient", pgd_trace)):
        for i in range(trace.iters + 1):
            lines.append(
                f"{name},{i},{float(trace.nll_per_iter[i])!r},{int(trace.func_evals_per_iter[i])}"
            )
    _write_text(cfg["out"], "\n".join(lines) + "\n")
    print(
        f"wrote {cfg['out']}: multiplicative {mult_trace.func_evals} evals, "
        f"projected_gradient {pgd_trace.func_evals} evals"
    )
    return EXIT_OK


_HANDLERS = {
    "gen": _cmd_gen,
    "fit": _cmd_fit,
    "detect": _cmd_detect,
    "benchmark": _cmd_benchmark,
    "compare-optimizers": _cmd_compare_optimizers,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return _HANDLERS[args.command](args)
    except SystemExit as e:  # --help / --version
        return e.code if isinstance(e.code, int) else 0
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParseError, EmptyDatasetError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except NumericalError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InvalidInputError, UndefinedMetricError, GplnError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
