"""Command line front end: simulate study datasets, fit either skew normal
family by MCMC or variational inference, compare the three fitters on one
dataset, and reproduce the bundled comparison-study exhibits.

Every command is deterministic for a fixed seed and configuration: reports
carry runtime_ms=0, progress and timing go to stderr only, and all file
writes are atomic.  Exit codes: 0 success, 2 usage or configuration error,
3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import __version__
from .analysis import (
    build_report,
    kde_curve,
    pearson_skewness,
    report_predictive_sample,
    silverman_bandwidth,
)
from .asn_gibbs import AsnPriorSpec
from .asn_gibbs import run_chain as run_asn_chain
from .chain import GEOMETRIC_PROPOSAL, RANDOM_WALK, ChainConfig
from .datasets import (
    atomic_write_text,
    load_dataset,
    load_frontier,
    load_guinea_pigs,
    write_dataset,
)
from .distributions import AsnParams, GsnParams, asn_sample, gsn_sample, lognormal
from .errors import DataError, NumericalError
from .gsn_mcmc import GsnPriorSpec
from .gsn_mcmc import run_chain as run_gsn_chain
from .gsn_vi import run_cavi

__all__ = ["main", "build_parser"]

_LATENT_FLAGS = {"geom": GEOMETRIC_PROPOSAL, "rw": RANDOM_WALK}

_MCMC_ITERS = 20_000
_MCMC_BURNIN = 5_000
_MCMC_THIN = 5
_VI_TOL = 1e-6
_VI_MAX_ITER = 500
_DENSITY_GRID = 512

# the five simulated skewness regimes of the comparison study, in increasing
# order of |skewness|; m=100 draws each
_STUDY_REGIMES = (
    ("very_small_skew", "asn", {"xi": 0.0, "omega": 1.0, "alpha": -0.5}),
    ("small_skew", "asn", {"xi": 0.0, "omega": 1.0, "alpha": -1.0}),
    ("moderate_skew", "gsn", {"mu": 1.0, "sigma": 1.0, "p": 0.8}),
    ("large_skew", "asn", {"xi": 0.0, "omega": 1.0, "alpha": 100.0}),
    ("neg_lognormal", "lognormal",
     {"log_mu": 0.0, "log_sigma2": 0.6, "negate": True}),
)
_TABLE_STUDIES = {
    "table1": "very_small_skew",
    "table2": "small_skew",
    "table3": "moderate_skew",
    "table4": "large_skew",
}
_SIM_DEFAULTS = {
    "gsn": {"mu": 1.0, "sigma": 1.0, "p": 0.8},
    "asn": {"xi": 0.0, "omega": 1.0, "alpha": -0.5},
    "lognormal": {"log_mu": 0.0, "log_sigma2": 0.6},
}
# sentinel-checked flags that belong to exactly one simulate family
_FAMILY_FLAGS = {
    "gsn": ("mu", "sigma", "p"),
    "asn": ("xi", "omega", "alpha"),
    "lognormal": ("log_mu", "log_sigma2"),
}


def _log(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# prior configuration files


def _parse_flat_toml(text: str, origin: str) -> dict:
    """Minimal reader for the prior file layout: [section] headers and
    key = number lines, # comments.  Used when tomllib is unavailable."""
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if not current:
                raise DataError(f"{origin}:{lineno}: empty section name")
            sections.setdefault(current, {})
            continue
        if "=" not in line:
            raise DataError(f"{origin}:{lineno}: expected key = number")
        if current is None:
            raise DataError(f"{origin}:{lineno}: key outside any [section]")
        key, _, value = line.partition("=")
        try:
            sections[current][key.strip()] = float(value.strip())
        except ValueError as exc:
            raise DataError(
                f"{origin}:{lineno}: not a number: {value.strip()!r}"
            ) from exc
    return sections


def load_prior_overrides(path) -> dict:
    """Read a prior file with [gsn] and/or [asn] sections of numeric keys.

    Returns {section: {key: float}}; keys override the module defaults."""
    path = os.fspath(path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DataError(f"cannot read prior file {path}: {exc}") from exc
    try:
        import tomllib
    except ModuleNotFoundError:
        sections = _parse_flat_toml(text, path)
    else:
        try:
            sections = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise DataError(f"malformed prior file {path}: {exc}") from exc
    out: dict = {}
    for name, table in sections.items():
        if name not in ("gsn", "asn"):
            raise DataError(f"{path}: unknown prior section [{name}]")
        if not isinstance(table, dict):
            raise DataError(f"{path}: section [{name}] must hold key = number")
        out[name] = {}
        for key, value in table.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise DataError(f"{path}: [{name}] {key} must be a number")
            out[name][key] = float(value)
    return out


def _prior_from(spec_type, overrides: dict, section: str):
    try:
        return dataclasses.replace(spec_type(), **overrides.get(section, {}))
    except TypeError as exc:
        raise DataError(f"unknown prior key in [{section}]: {exc}") from exc


def _gsn_prior(overrides: dict) -> GsnPriorSpec:
    return _prior_from(GsnPriorSpec, overrides, "gsn")


def _asn_prior(overrides: dict) -> AsnPriorSpec:
    return _prior_from(AsnPriorSpec, overrides, "asn")


# ---------------------------------------------------------------------------
# artifact writers


def _write_json(path, payload: dict) -> None:
    atomic_write_text(path, json.dumps(payload, indent=2) + "\n")


def _write_draws_csv(path, chain) -> None:
    start, step = chain.config.burn_in, chain.config.thin
    lines = ["iter," + ",".join(chain.param_names)]
    for k, row in enumerate(chain.draws):
        cells = [str(start + k * step)] + [repr(float(v)) for v in row]
        lines.append(",".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _write_elbo_csv(path, state) -> None:
    lines = ["iter,elbo"]
    for k, value in enumerate(state.elbo_trace, start=1):
        lines.append(f"{k},{repr(float(value))}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def _write_density_pair_csv(path, data, predictive) -> None:
    """512-point grid over the data range: kernel density of the data next
    to the kernel density of the posterior predictive sample."""
    data = np.asarray(data, dtype=float)
    h = silverman_bandwidth(data)
    grid = np.linspace(data.min() - 3.0 * h, data.max() + 3.0 * h,
                       _DENSITY_GRID)
    data_density = kde_curve(data, grid)
    fit_density = kde_curve(predictive, grid)
    lines = ["x,data_density,fit_density"]
    for x, a, b in zip(grid, data_density, fit_density):
        lines.append(f"{repr(float(x))},{repr(float(a))},{repr(float(b))}")
    atomic_write_text(path, "\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# shared fit plumbing


def _chain_config(args, latent_key: str) -> ChainConfig:
    return ChainConfig(
        iterations=args.iters if args.iters is not None else _MCMC_ITERS,
        burn_in=args.burnin if args.burnin is not None else _MCMC_BURNIN,
        thin=args.thin if args.thin is not None else _MCMC_THIN,
        seed=args.seed,
        latent_update=_LATENT_FLAGS[latent_key],
    )


def _simulate_values(family: str, params: dict, m: int, rng) -> np.ndarray:
    if m < 1:
        raise ValueError("m must be at least 1")
    if family == "gsn":
        return gsn_sample(
            GsnParams(params["mu"], params["sigma"], params["p"]), m, rng)
    if family == "asn":
        return asn_sample(
            AsnParams(params["xi"], params["omega"], params["alpha"]), m, rng)
    if family == "lognormal":
        if not params["log_sigma2"] > 0.0:
            raise ValueError("log-sigma2 must be positive")
        values = lognormal(params["log_mu"], params["log_sigma2"], rng, size=m)
        return -values if params.get("negate") else values
    raise ValueError(f"unknown family {family!r}")


def _report_dict(report) -> dict:
    return json.loads(report.to_json())


# ---------------------------------------------------------------------------
# simulate


def cmd_simulate(args) -> int:
    for family, flags in _FAMILY_FLAGS.items():
        if family == args.family:
            continue
        for flag in flags:
            if getattr(args, flag) is not None:
                raise ValueError(
                    f"--{flag.replace('_', '-')} applies only to "
                    f"--family {family}")
    if args.negate and args.family != "lognormal":
        raise ValueError("--negate applies only to --family lognormal")

    params = dict(_SIM_DEFAULTS[args.family])
    for flag in _FAMILY_FLAGS[args.family]:
        given = getattr(args, flag)
        if given is not None:
            params[flag] = given
    if args.family == "lognormal":
        params["negate"] = args.negate

    rng = np.random.default_rng(args.seed)
    values = _simulate_values(args.family, params, args.m, rng)
    metadata = {"family": args.family}
    for key, value in params.items():
        metadata[key.replace("_", "-")] = value
    metadata["m"] = args.m
    metadata["seed"] = args.seed
    metadata["sample-skewness"] = f"{pearson_skewness(values):.6f}"
    write_dataset(values, args.out, metadata=metadata)
    print(f"wrote {args.m} values to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# fit


def _validate_fit_flags(args) -> None:
    if args.method == "vi":
        if args.model != "gsn":
            raise ValueError("--method vi is only available for --model gsn")
        for flag in ("latent", "burnin", "thin"):
            if getattr(args, flag) is not None:
                raise ValueError(
                    f"--{flag} applies only to --method mcmc")
        if args.emit_draws is not None:
            raise ValueError("--emit-draws applies only to --method mcmc")
    else:
        if args.tol is not None:
            raise ValueError("--tol applies only to --method vi")
        if args.emit_elbo is not None:
            raise ValueError("--emit-elbo applies only to --method vi")


def cmd_fit(args) -> int:
    _validate_fit_flags(args)
    dataset = load_dataset(args.data)
    overrides = load_prior_overrides(args.priors) if args.priors else {}

    started = time.perf_counter()
    if args.method == "vi":
        prior = _gsn_prior(overrides)
        result = run_cavi(
            dataset.values, prior,
            tol=args.tol if args.tol is not None else _VI_TOL,
            max_iter=args.iters if args.iters is not None else _VI_MAX_ITER,
            seed=args.seed)
    else:
        config = _chain_config(args, args.latent or "rw")
        if args.model == "gsn":
            prior = _gsn_prior(overrides)
            result = run_gsn_chain(dataset.values, prior, config)
        else:
            prior = _asn_prior(overrides)
            result = run_asn_chain(dataset.values, prior, config)
    elapsed_ms = 1000.0 * (time.perf_counter() - started)

    report = build_report(result, dataset.values, prior)
    atomic_write_text(args.out, report.to_json() + "\n")
    _log(f"fit finished in {elapsed_ms:.0f} ms")

    if args.emit_draws is not None:
        _write_draws_csv(args.emit_draws, result)
        print(f"wrote draws to {args.emit_draws}")
    if args.emit_elbo is not None:
        _write_elbo_csv(args.emit_elbo, result)
        print(f"wrote elbo trace to {args.emit_elbo}")
    if args.emit_predictive is not None:
        predictive = report_predictive_sample(result, dataset.values.size)
        write_dataset(predictive, args.emit_predictive,
                      metadata={"model": report.model,
                                "method": report.method,
                                "seed": args.seed,
                                "n": predictive.size})
        print(f"wrote predictive sample to {args.emit_predictive}")

    maps = " ".join(f"{k}={v:.6g}" for k, v in report.map_estimates.items())
    print(f"model={report.model} method={report.method} ksd={report.ksd:.4f}")
    print(f"map: {maps}")
    print(f"report: {args.out}")
    return 0


# ---------------------------------------------------------------------------
# compare


def _three_fits(values, gsn_prior, asn_prior, config, tol, vi_max_iter):
    """GSN chain, GSN variational fit, ASN chain, all on the same data and
    seed; returns {label: report}."""
    reports = {}
    started = time.perf_counter()
    reports["gsn_mcmc"] = build_report(
        run_gsn_chain(values, gsn_prior, config), values, gsn_prior)
    reports["gsn_vi"] = build_report(
        run_cavi(values, gsn_prior, tol=tol, max_iter=vi_max_iter,
                 seed=config.seed), values, gsn_prior)
    reports["asn_mcmc"] = build_report(
        run_asn_chain(values, asn_prior, config), values, asn_prior)
    _log(f"three fits finished in "
         f"{1000.0 * (time.perf_counter() - started):.0f} ms")
    return reports


def _compare_table(name: str, reports: dict) -> str:
    lines = [f"dataset: {name}",
             f"{'method':<10}{'ksd':>8}  map_estimates"]
    for label, report in reports.items():
        maps = " ".join(
            f"{k}={v:.4g}" for k, v in report.map_estimates.items())
        lines.append(f"{label:<10}{report.ksd:>8.4f}  {maps}")
    return "\n".join(lines)


def cmd_compare(args) -> int:
    dataset = load_dataset(args.data)
    overrides = load_prior_overrides(args.priors) if args.priors else {}
    config = _chain_config(args, args.latent or "rw")
    reports = _three_fits(
        dataset.values, _gsn_prior(overrides), _asn_prior(overrides), config,
        args.tol if args.tol is not None else _VI_TOL, _VI_MAX_ITER)

    payload = {
        "data": {
            "name": dataset.name,
            "m": int(dataset.values.size),
            "skewness": pearson_skewness(dataset.values),
        },
        "seed": args.seed,
        "ksd": {label: report.ksd for label, report in reports.items()},
        "reports": {label: _report_dict(report)
                    for label, report in reports.items()},
    }
    _write_json(args.out, payload)
    print(_compare_table(dataset.name, reports))
    print(f"report: {args.out}")
    return 0


# ---------------------------------------------------------------------------
# reproduce


def _study_datasets(seed: int):
    """All seven study datasets: the five simulated regimes (streams derived
    from the study seed) plus the two bundled real datasets."""
    out = []
    for index, (name, family, params) in enumerate(_STUDY_REGIMES):
        rng = np.random.default_rng([seed, index])
        values = _simulate_values(family, params, 100, rng)
        metadata = {"family": family}
        metadata.update(
            (k.replace("_", "-"), v) for k, v in params.items())
        metadata["m"] = 100
        metadata["seed-path"] = f"{seed}.{index}"
        out.append((name, values, metadata))
    for loader in (load_guinea_pigs, load_frontier):
        bundled = loader()
        metadata = {k: v for k, v in bundled.provenance.items()
                    if k != "bundled"}
        out.append((bundled.name.removesuffix(".csv"), bundled.values,
                    metadata))
    return out


class _ArtifactDir:
    """Tracks every file written under the output directory so the manifest
    can list them with checksums."""

    def __init__(self, root: str):
        self.root = root
        self.written: list = []
        os.makedirs(root, exist_ok=True)

    def path(self, name: str) -> str:
        self.written.append(name)
        return os.path.join(self.root, name)

    def manifest(self, payload: dict) -> None:
        files = {}
        for name in sorted(self.written):
            with open(os.path.join(self.root, name), "rb") as handle:
                files[name] = hashlib.sha256(handle.read()).hexdigest()
        payload = dict(payload)
        payload["files"] = files
        _write_json(os.path.join(self.root, "manifest.json"), payload)


def _dataset_entry(name: str, values) -> dict:
    return {"name": name, "m": int(values.size),
            "skewness": pearson_skewness(values)}


def _reproduce_table(args, out: _ArtifactDir, study: str) -> None:
    wanted = _TABLE_STUDIES[study]
    datasets = {name: (values, meta)
                for name, values, meta in _study_datasets(args.seed)}
    values, metadata = datasets[wanted]
    write_dataset(values, out.path(f"{wanted}.csv"), metadata=metadata)

    config = _chain_config(args, args.latent or "rw")
    gsn_prior, asn_prior = _gsn_prior({}), _asn_prior({})
    reports = {
        "gsn_mcmc": build_report(
            run_gsn_chain(values, gsn_prior, config), values, gsn_prior),
        "asn_mcmc": build_report(
            run_asn_chain(values, asn_prior, config), values, asn_prior),
    }
    payload = {
        "study": study,
        "dataset": _dataset_entry(wanted, values),
        "seed": args.seed,
        "ksd": {label: report.ksd for label, report in reports.items()},
        "fits": {label: _report_dict(report)
                 for label, report in reports.items()},
    }
    _write_json(out.path(f"{study}.json"), payload)


def _reproduce_table5(args, out: _ArtifactDir) -> None:
    config = _chain_config(args, args.latent or "rw")
    gsn_prior, asn_prior = _gsn_prior({}), _asn_prior({})
    rows, reports = {}, {}
    for name, values, metadata in _study_datasets(args.seed):
        write_dataset(values, out.path(f"{name}.csv"), metadata=metadata)
        _log(f"fitting {name}")
        fits = _three_fits(values, gsn_prior, asn_prior, config,
                           _VI_TOL, _VI_MAX_ITER)
        rows[name] = {label: report.ksd for label, report in fits.items()}
        reports[name] = {label: _report_dict(report)
                         for label, report in fits.items()}
    payload = {
        "study": "table5",
        "seed": args.seed,
        "columns": ["gsn_vi", "gsn_mcmc", "asn_mcmc"],
        "rows": rows,
        "reports": reports,
    }
    _write_json(out.path("table5.json"), payload)


def _reproduce_figures(args, out: _ArtifactDir) -> None:
    config = _chain_config(args, args.latent or "rw")
    gsn_prior, asn_prior = _gsn_prior({}), _asn_prior({})
    for name, values, metadata in _study_datasets(args.seed):
        write_dataset(values, out.path(f"{name}.csv"), metadata=metadata)
        _log(f"fitting {name}")
        for label, runner, prior in (
                ("asn", run_asn_chain, asn_prior),
                ("gsn", run_gsn_chain, gsn_prior)):
            result = runner(values, prior, config)
            predictive = report_predictive_sample(result, values.size)
            _write_density_pair_csv(
                out.path(f"{name}_{label}_density.csv"), values, predictive)

    # small synthetic check of the variational fit: highly skewed data from
    # the geometric family, with the predictive overlay and the bound trace
    rng = np.random.default_rng([args.seed, len(_STUDY_REGIMES)])
    toy = gsn_sample(GsnParams(2.0, 1.0, 0.6), 100, rng)
    write_dataset(toy, out.path("vi_toy.csv"),
                  metadata={"family": "gsn", "mu": 2.0, "sigma": 1.0,
                            "p": 0.6, "m": 100,
                            "seed-path": f"{args.seed}.{len(_STUDY_REGIMES)}"})
    state = run_cavi(toy, gsn_prior, tol=_VI_TOL, max_iter=_VI_MAX_ITER,
                     seed=args.seed)
    predictive = report_predictive_sample(state, toy.size)
    _write_density_pair_csv(out.path("vi_toy_density.csv"), toy, predictive)
    _write_elbo_csv(out.path("vi_toy_elbo.csv"), state)


def cmd_reproduce(args) -> int:
    out = _ArtifactDir(args.out)
    started = time.perf_counter()
    if args.study in _TABLE_STUDIES:
        _reproduce_table(args, out, args.study)
    elif args.study == "table5":
        _reproduce_table5(args, out)
    else:
        _reproduce_figures(args, out)
    _log(f"study {args.study} finished in "
         f"{1000.0 * (time.perf_counter() - started):.0f} ms")

    out.manifest({
        "version": __version__,
        "study": args.study,
        "seed": args.seed,
        "config": {
            "iters": args.iters if args.iters is not None else _MCMC_ITERS,
            "burnin": args.burnin if args.burnin is not None else _MCMC_BURNIN,
            "thin": args.thin if args.thin is not None else _MCMC_THIN,
            "latent": args.latent or "rw",
        },
    })
    for name in sorted(out.written):
        print(f"wrote {name}")
    print(f"manifest: {os.path.join(args.out, 'manifest.json')}")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_sampler_flags(sub, with_vi: bool = True) -> None:
    sub.add_argument("--latent", choices=sorted(_LATENT_FLAGS),
                     default=None,
                     help="latent-count move for the geometric model "
                          "(default rw)")
    sub.add_argument("--iters", type=int, default=None,
                     help=f"MCMC iterations (default {_MCMC_ITERS}) or "
                          f"variational sweep cap (default {_VI_MAX_ITER})")
    sub.add_argument("--burnin", type=int, default=None,
                     help=f"discarded MCMC iterations "
                          f"(default {_MCMC_BURNIN})")
    sub.add_argument("--thin", type=int, default=None,
                     help=f"keep every k-th draw (default {_MCMC_THIN})")
    if with_vi:
        sub.add_argument("--tol", type=float, default=None,
                         help=f"variational stopping increment "
                              f"(default {_VI_TOL})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewfit",
        description="Bayesian fitting and comparison of the geometric and "
                    "Azzalini skew normal families.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    sim = commands.add_parser(
        "simulate", help="draw a dataset and write it as one-column CSV")
    sim.add_argument("--family", choices=("gsn", "asn", "lognormal"),
                     required=True)
    sim.add_argument("--m", type=int, default=100, help="sample size")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--mu", type=float, default=None,
                     help="gsn summand mean (default 1.0)")
    sim.add_argument("--sigma", type=float, default=None,
                     help="gsn summand sd (default 1.0)")
    sim.add_argument("--p", type=float, default=None,
                     help="gsn stopping probability (default 0.8)")
    sim.add_argument("--xi", type=float, default=None,
                     help="asn location (default 0.0)")
    sim.add_argument("--omega", type=float, default=None,
                     help="asn scale (default 1.0)")
    sim.add_argument("--alpha", type=float, default=None,
                     help="asn shape (default -0.5)")
    sim.add_argument("--log-mu", type=float, default=None,
                     help="lognormal log-scale mean (default 0.0)")
    sim.add_argument("--log-sigma2", type=float, default=None,
                     help="lognormal log-scale variance (default 0.6)")
    sim.add_argument("--negate", action="store_true",
                     help="negate lognormal draws for negative skew")
    sim.set_defaults(handler=cmd_simulate)

    fit = commands.add_parser(
        "fit", help="fit one model to a dataset and write a JSON report")
    fit.add_argument("--model", choices=("gsn", "asn"), required=True)
    fit.add_argument("--method", choices=("mcmc", "vi"), default="mcmc")
    fit.add_argument("--data", required=True, help="input CSV path")
    fit.add_argument("--priors", default=None,
                     help="prior file with [gsn]/[asn] sections")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--out", required=True, help="report JSON path")
    _add_sampler_flags(fit)
    fit.add_argument("--emit-draws", default=None, metavar="PATH",
                     help="also write retained draws as CSV (mcmc only)")
    fit.add_argument("--emit-predictive", default=None, metavar="PATH",
                     help="also write the predictive sample as CSV")
    fit.add_argument("--emit-elbo", default=None, metavar="PATH",
                     help="also write the bound trace as CSV (vi only)")
    fit.set_defaults(handler=cmd_fit)

    cmp_ = commands.add_parser(
        "compare",
        help="fit GSN-MCMC, GSN-VI and ASN-MCMC to one dataset")
    cmp_.add_argument("--data", required=True, help="input CSV path")
    cmp_.add_argument("--priors", default=None,
                      help="prior file with [gsn]/[asn] sections")
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--out", required=True, help="comparison JSON path")
    _add_sampler_flags(cmp_)
    cmp_.set_defaults(handler=cmd_compare)

    rep = commands.add_parser(
        "reproduce", help="rebuild one comparison-study exhibit end to end")
    rep.add_argument(
        "--study", required=True,
        choices=("table1", "table2", "table3", "table4", "table5", "figures"),
        help="table1-4: one simulated regime, both MCMC fits; table5: KSD "
             "matrix of all seven study datasets under three fitters; "
             "figures: density-pair CSVs for every study dataset plus the "
             "variational toy trace")
    rep.add_argument("--seed", type=int, default=0)
    rep.add_argument("--out", required=True, help="output directory")
    _add_sampler_flags(rep, with_vi=False)
    rep.set_defaults(handler=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ValueError as exc:
        _log(f"error: {exc}")
        return 2
    except (DataError, OSError) as exc:
        _log(f"error: {exc}")
        return 3
    except NumericalError as exc:
        _log(f"error: {exc}")
        return 4


if __name__ == "__main__":
    sys.exit(main())
