"""Command-line entry point.

Three subcommands:

* ``verify``   -- run named verification suites and emit a report
* ``spectrum`` -- print the extracted particle masses
* ``expand``   -- dump the scale-expansion coefficients of the bosonic
  density for a seeded random configuration

JSON is the machine format (schema-versioned, seed echoed, deterministic
for a fixed config up to the timestamp field); CSV is available for the
spectrum table only. Exit codes: 0 all checks pass, 1 a suite failed,
2 the configuration was rejected.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Optional, Sequence

import numpy as np

from .fields import ConfigError, Couplings
from .jets import DEFAULT_ORDER, ContractionMode
from .spectrum import (
    IllConditioned,
    bosonic_density_evaluator,
    epsilon_expand,
    halton_points,
    mass_spectrum,
    random_bosonic_config,
)
from .suites import REGISTRY, RunConfig, SCHEMA_VERSION, run_suites

ENV_PREFIX = "EWCONTRACT_"

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_CONFIG_ERROR = 2

DEFAULT_COUPLINGS = {"g": 0.65, "gp": 0.35, "R": 1.0, "h_e": 1.0}


def _env_default(name: str, fallback: Optional[str] = None) -> Optional[str]:
    """CI can override any flag through EWCONTRACT_<FLAG> variables."""
    return os.environ.get(ENV_PREFIX + name.upper(), fallback)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ewcontract",
        description="Verification and spectrum tools for the contracted "
        "electroweak model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=str, default=_env_default("config"),
                       help="JSON config file (couplings, tolerances, ...)")
        p.add_argument("--seed", type=int,
                       default=int(_env_default("seed", "0")))
        p.add_argument("--order", type=int,
                       default=int(_env_default("order", str(DEFAULT_ORDER))))
        p.add_argument("--mode", type=str,
                       default=_env_default("mode", "unit"),
                       help="unit | nilpotent | numeric:<t>")
        p.add_argument("--out", type=str, default=_env_default("out"),
                       help="write the machine-readable report here")
        p.add_argument("--format", type=str, choices=("json", "csv"),
                       default=_env_default("format", "json"))

    p_verify = sub.add_parser("verify", help="run verification suites")
    common(p_verify)
    p_verify.add_argument(
        "--suite", action="append", default=None,
        help="suite name (repeatable); default: all of "
        + ", ".join(REGISTRY),
    )

    p_spectrum = sub.add_parser("spectrum", help="extracted particle masses")
    common(p_spectrum)
    p_spectrum.add_argument("--g", type=float, default=None)
    p_spectrum.add_argument("--gp", type=float, default=None)
    p_spectrum.add_argument("--R", type=float, default=None)
    p_spectrum.add_argument("--h-e", dest="h_e", type=float, default=None)

    p_expand = sub.add_parser(
        "expand", help="scale-expansion coefficients of the bosonic density"
    )
    common(p_expand)
    p_expand.add_argument("--n", type=int, default=2,
                          help="highest expansion order to report (max 6)")

    return parser


def _load_config_file(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must contain a JSON object")
    return data


def _couplings_from(args, file_cfg: dict) -> Couplings:
    values = dict(DEFAULT_COUPLINGS)
    values.update(file_cfg.get("couplings", {}))
    for key in ("g", "gp", "R", "h_e"):
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            values[key] = cli_value
    try:
        return Couplings(
            g=float(values["g"]), gp=float(values["gp"]),
            R=float(values["R"]), h_e=float(values["h_e"]),
            mode=_parse_mode(args.mode),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad couplings: {exc}") from exc


def _parse_mode(text: str) -> ContractionMode:
    try:
        return ContractionMode.parse(text)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _sanitize(value):
    """Make report payloads JSON-serializable (numpy scalars, tuples)."""
    if isinstance(value, dict):
        return {str(k): _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    return value


def _write_report(payload: dict, out: Optional[str], text: str = "") -> None:
    if out is None:
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text if text else json.dumps(payload, indent=2, sort_keys=True))
        fh.write("\n")


def _report_envelope(args, couplings: Couplings) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "seed": args.seed,
        "order": args.order,
        "mode": str(_parse_mode(args.mode)),
        "couplings": {
            "g": couplings.g, "gp": couplings.gp,
            "R": couplings.R, "h_e": couplings.h_e,
        },
    }


def cmd_verify(args) -> int:
    file_cfg = _load_config_file(args.config)
    couplings = _couplings_from(args, file_cfg)
    suite_names = args.suite if args.suite is not None else file_cfg.get("suites")
    if suite_names is not None and len(suite_names) == 0:
        raise ConfigError("empty suite selection")
    cfg = RunConfig(
        couplings=couplings,
        mode=_parse_mode(args.mode),
        order=args.order,
        seed=args.seed,
        suites=tuple(suite_names) if suite_names else (),
        sample_counts=file_cfg.get("sample_counts", {}),
        tolerances=file_cfg.get("tolerances", {}),
    )
    results = run_suites(cfg)
    all_passed = all(r.passed for r in results.values())

    for name, res in results.items():
        status = "pass" if res.passed else "FAIL"
        print(f"suite {name:12s} {status}  residual {res.residual:.3e}"
              f"  (tolerance {res.tolerance:.1e})")
    print("verify:", "all suites passed" if all_passed else "suite failure")

    payload = _report_envelope(args, couplings)
    payload["suites"] = _sanitize({n: r.to_json() for n, r in results.items()})
    payload["passed"] = all_passed
    _write_report(payload, args.out)
    return EXIT_OK if all_passed else EXIT_SUITE_FAILURE


def _spectrum_rows(report) -> list:
    return [
        ("m_w", report.m_w, report.closed["m_w"]),
        ("m_z", report.m_z, report.closed["m_z"]),
        ("m_a", report.m_a, report.closed["m_a"]),
        ("m_e", report.m_e, report.closed["m_e"]),
        ("weinberg_cos", report.weinberg_cos, report.closed["weinberg_cos"]),
    ]


def cmd_spectrum(args) -> int:
    file_cfg = _load_config_file(args.config)
    couplings = _couplings_from(args, file_cfg)
    report = mass_spectrum(couplings, args.order)

    print(f"{'quantity':14s} {'extracted':>14s} {'closed form':>14s}")
    for name, extracted, closed in _spectrum_rows(report):
        print(f"{name:14s} {extracted:14.10f} {closed:14.10f}")

    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["quantity", "extracted", "closed_form"])
        for row in _spectrum_rows(report):
            writer.writerow(row)
        _write_report({}, args.out, text=buf.getvalue().rstrip("\n"))
    else:
        payload = _report_envelope(args, couplings)
        payload["spectrum"] = _sanitize(report.to_json())
        _write_report(payload, args.out)
    return EXIT_OK


def cmd_expand(args) -> int:
    file_cfg = _load_config_file(args.config)
    couplings = _couplings_from(args, file_cfg)
    if args.format == "csv":
        raise ConfigError("CSV output is only available for the spectrum table")
    mode = _parse_mode(args.mode)
    jval = mode.t if mode.kind == "numeric" else None

    rng = np.random.default_rng(args.seed)
    gauge, psi = random_bosonic_config(rng)
    points = halton_points(seed=args.seed)
    evaluator = bosonic_density_evaluator(
        gauge, psi, couplings, points, args.order, jval
    )
    expansion = epsilon_expand(evaluator, args.n)

    payload = _report_envelope(args, couplings)
    payload["expansion"] = _sanitize(expansion.to_json())
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    _write_report(payload, args.out)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "expand": cmd_expand,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, IllConditioned) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
