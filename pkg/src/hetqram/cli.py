"""Command-line front end: sweeps, bound curves, resource tables, comparisons.

Every flag can also be given in a flat key=value config file (--config);
explicit flags override file values. Exit codes: 0 success, 2 invalid
configuration, 3 simulation/resource limit, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import analytics
from .harness import (
    ARCHITECTURES,
    ComparisonRow,
    ConfigError,
    ExperimentConfig,
    ResourceLimitError,
    compare_resources,
    emit_report,
    fit_scaling,
    load_report,
    report_to_csv,
    report_to_json,
    run_sweep,
)
from .noise import CycleCost, SurfaceParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3
EXIT_IO = 4

_CONFIG_KEYS = {
    "arch",
    "routers",
    "n",
    "p-prime",
    "epsilon-prime",
    "c",
    "s",
    "trials",
    "seed",
    "profile",
    "address-mode",
    "database",
    "round-trip",
    "batch-size",
    "out",
    "format",
    "efficient",
    "mode",
    "in",
    "distance",
}


def _parse_n_range(text: str) -> tuple[int, ...]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return tuple(range(lo, hi + 1))
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ConfigError(f"bad n range {text!r}; use A..B or comma list") from None


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, val = (part.strip() for part in line.split("=", 1))
            key = key.replace("_", "-")
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hetqram",
        description="Heterogeneously error-corrected QRAM simulator and analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("--arch", help="comma list of " + ",".join(ARCHITECTURES))
        p.add_argument("--routers", choices=("qubit", "qutrit"))
        p.add_argument("--n", help="depth range A..B or comma list")
        p.add_argument("--p-prime", type=float, dest="p_prime")
        p.add_argument("--epsilon-prime", type=float, dest="epsilon_prime")
        p.add_argument("--c", type=int)
        p.add_argument("--s", type=int)
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--profile", help="linear | odd-paired | uniform:D")
        p.add_argument("--address-mode", choices=("superposition", "basis"), dest="address_mode")
        p.add_argument("--database", choices=("random", "all_zero", "all_one"))
        p.add_argument("--round-trip", choices=("on", "off"), dest="round_trip")
        p.add_argument("--batch-size", type=int, dest="batch_size")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))

    p_sim = sub.add_parser("sim", help="Monte Carlo infidelity sweep")
    common(p_sim)
    p_bounds = sub.add_parser("bounds", help="closed-form bound curves")
    common(p_bounds)
    p_res = sub.add_parser("resources", help="physical qubit overhead tables")
    common(p_res)
    p_res.add_argument("--efficient", action="store_true", help="odd-paired distances")
    p_res.add_argument("--distance", type=int, help="uniform tree distance")
    p_cmp = sub.add_parser("compare", help="equal-fidelity overhead comparison")
    common(p_cmp)
    p_cmp.add_argument("--mode", choices=("analytic", "simulated", "auto"), default=None)
    p_fit = sub.add_parser("fit", help="scaling exponent from a sweep CSV")
    p_fit.add_argument("--in", dest="input", required=True, help="sweep report (csv or json)")
    p_fit.add_argument("--out")
    p_fit.add_argument("--format", choices=("csv", "json"))
    return parser


def _merge(args: argparse.Namespace) -> dict:
    """File values first, then explicit flags on top."""
    merged: dict[str, str] = {}
    if getattr(args, "config", None):
        merged.update(_read_config_file(args.config))
    mapping = {
        "arch": "arch",
        "routers": "routers",
        "n": "n",
        "p_prime": "p-prime",
        "epsilon_prime": "epsilon-prime",
        "c": "c",
        "s": "s",
        "trials": "trials",
        "seed": "seed",
        "profile": "profile",
        "address_mode": "address-mode",
        "database": "database",
        "round_trip": "round-trip",
        "batch_size": "batch-size",
        "out": "out",
        "format": "format",
    }
    for attr, key in mapping.items():
        val = getattr(args, attr, None)
        if val is not None:
            merged[key] = str(val)
    return merged


def _config_from(merged: dict) -> ExperimentConfig:
    archs = tuple(a.strip() for a in merged.get("arch", "bb-hetero").split(",") if a.strip())
    try:
        params = SurfaceParams(
            epsilon_prime=float(merged.get("epsilon-prime", 0.03)),
            p_ratio=float(merged.get("p-prime", 0.1)),
        )
        cost = CycleCost(c=int(merged.get("c", 2)), s=int(merged.get("s", 1)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentConfig(
        architectures=archs,
        router_kind=merged.get("routers", "qutrit"),
        n_values=_parse_n_range(merged.get("n", "4")),
        params=params,
        cost=cost,
        profile=merged.get("profile"),
        trials=int(merged.get("trials", 1000)),
        seed=int(merged.get("seed", 7)),
        address_mode=merged.get("address-mode", "superposition"),
        database_mode=merged.get("database", "random"),
        batch_size=int(merged.get("batch-size", 512)),
        round_trip=merged.get("round-trip", "on") != "off",
    )


def _emit_rows(fields: tuple[str, ...], rows: list[tuple], fmt: str, out: str | None) -> None:
    if fmt == "json":
        text = json.dumps([dict(zip(fields, r)) for r in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for r in rows:
            writer.writerow([repr(v) if isinstance(v, float) else str(v) for v in r])
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_sim(merged: dict) -> int:
    config = _config_from(merged)
    report = run_sweep(config)
    fmt = merged.get("format", "csv")
    out = merged.get("out")
    if out:
        emit_report(report, fmt, out)
    else:
        sys.stdout.write(report_to_csv(report) if fmt == "csv" else report_to_json(report))
    return EXIT_OK


def _cmd_bounds(merged: dict) -> int:
    config = _config_from(merged)
    rows = []
    for arch in config.architectures:
        kind = "qutrit" if arch == "walker" else config.router_kind
        for n in config.n_values:
            profile = config.profile_for(arch, n)
            inputs = analytics.BoundInputs(n, config.params, config.cost)
            if arch in ("uniform-bb", "walker"):
                d = profile.uniform_d
                exact = analytics.uniform_bb_infidelity(inputs, d)
                closed = exact
            elif arch == "ft-hetero":
                exact, closed = analytics.ft_infidelity_bound(inputs)
            else:
                exact, closed = analytics.bb_infidelity_bound(inputs)
            if kind == "qubit":
                if arch in ("uniform-bb", "walker"):
                    extra = 4.0 * analytics.uniform_qubit_delta(inputs, profile.uniform_d)
                else:
                    key = "ft" if arch == "ft-hetero" else "bb"
                    extra = 4.0 * analytics.qubit_router_delta(key, inputs)
                exact += extra
                closed += extra
            rows.append(
                (arch, kind, n, config.params.p_ratio, exact, closed,
                 analytics.vacuous(exact))
            )
    _emit_rows(
        ("architecture", "router_kind", "n", "p_prime", "bound", "closed_form", "vacuous"),
        rows,
        merged.get("format", "csv"),
        merged.get("out"),
    )
    return EXIT_OK


def _cmd_resources(merged: dict, efficient: bool, distance: int | None) -> int:
    config = _config_from(merged)
    rows = []
    for arch in config.architectures:
        for n in config.n_values:
            if arch == "ft-hetero":
                est = analytics.ft_resources(n, efficient=efficient)
            elif arch == "bb-hetero":
                est = analytics.bb_resources(n, efficient=efficient)
            elif arch in ("uniform-bb", "walker"):
                d = distance if distance is not None else config.profile_for(arch, n).uniform_d
                est = analytics.uniform_resources(n, d)
            else:
                raise ConfigError(f"no resource model for {arch!r}")
            rows.append(
                (arch, n, efficient, est.physical_total, est.physical_total / (1 << n))
            )
    _emit_rows(
        ("architecture", "n", "efficient", "physical_qubits", "per_entry_overhead"),
        rows,
        merged.get("format", "csv"),
        merged.get("out"),
    )
    return EXIT_OK


def _cmd_compare(merged: dict, mode: str | None) -> int:
    config = _config_from(merged)
    arch = config.architectures[0]
    if arch not in ("ft-hetero", "bb-hetero"):
        raise ConfigError("compare needs --arch ft-hetero or bb-hetero")
    rows = []
    for n in config.n_values:
        row: ComparisonRow = compare_resources(n, config, architecture=arch, mode=mode or "analytic")
        rows.append(
            (row.n, row.hetero_architecture, row.target_infidelity, row.target_vacuous,
             row.uniform_distance, row.uniform_physical_qubits,
             row.hetero_physical_qubits, row.ratio)
        )
    _emit_rows(
        ("n", "architecture", "target_infidelity", "target_vacuous",
         "uniform_distance", "uniform_physical_qubits", "hetero_physical_qubits", "ratio"),
        rows,
        merged.get("format", "csv"),
        merged.get("out"),
    )
    return EXIT_OK


def _cmd_fit(args: argparse.Namespace) -> int:
    report = load_report(args.input)
    groups: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for row in report.rows:
        groups.setdefault((row.architecture, row.router_kind), []).append(
            (row.n, row.mean_infidelity)
        )
    rows = []
    for (arch, kind), points in sorted(groups.items()):
        slope, r2 = fit_scaling(points)
        rows.append((arch, kind, len(points), slope, r2))
    _emit_rows(
        ("architecture", "router_kind", "points", "slope", "r_squared"),
        rows,
        getattr(args, "format", None) or "csv",
        getattr(args, "out", None),
    )
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit":
            return _cmd_fit(args)
        merged = _merge(args)
        if args.command == "sim":
            return _cmd_sim(merged)
        if args.command == "bounds":
            return _cmd_bounds(merged)
        if args.command == "resources":
            return _cmd_resources(merged, args.efficient, args.distance)
        if args.command == "compare":
            return _cmd_compare(merged, args.mode)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
