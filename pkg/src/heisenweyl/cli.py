"""Command line entry point: ``heisenweyl verify <suite>`` and ``heisenweyl dump-sample``.

Exit status is 0 when every gating check passes (or the suite holds only
audits), 1 when a check fails or a numerical error aborts the run, and 2 for
invalid arguments or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

from .haar import SeededRng, matrix_to_json, sample_virtual
from .suites import FORMATS, SUITES, ConfigError, SuiteConfig, default_seed, run_suite, to_jsonable

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heisenweyl", description="Numerical checks for virtual Haar integrals.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--config", help="JSON file with suite options; command-line flags override it")
    v.add_argument("--samples", type=int, help="Monte Carlo draws per estimate (default 100000)")
    v.add_argument("--seed", type=int, help="base seed (default $HEISENWEYL_SEED or 42)")
    v.add_argument("--dim", "--m", dest="dim", type=int, help="matrix size for Haar suites")
    v.add_argument("--level", type=int, help="virtual chain depth for the norm audits")
    v.add_argument("--degree", type=int, help="polynomial degree for the Weyl and Gram checks")
    v.add_argument("--tol", type=float, help="audit resolution override")
    v.add_argument("--format", choices=FORMATS)
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--tabloid", action="append", help="restrict norms/fourier to these tabloids (repeatable)")

    d = sub.add_parser("dump-sample", help="print one virtual chain draw as JSON")
    d.add_argument("--level", type=int, default=3)
    d.add_argument("--seed", type=int)
    d.add_argument("--stream", type=int, default=0)
    d.add_argument("--out")
    return p


def _config(args) -> SuiteConfig:
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    data["suite"] = args.suite
    for key in ("samples", "seed", "dim", "level", "degree", "tol", "format", "out", "tabloid"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    return SuiteConfig.from_dict(data)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _verify(args) -> int:
    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(f"heisenweyl: error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_suite(cfg)
    except (ArithmeticError, FloatingPointError) as exc:
        failure = {
            "suite": cfg.suite,
            "config": cfg.echo(),
            "status": "fail",
            "records": [{"kind": "error", "gating": True, "passed": False,
                         "error": type(exc).__name__, "message": str(exc)}],
        }
        _emit(json.dumps(to_jsonable(failure), sort_keys=True, indent=2), cfg.out)
        return 1
    _emit(report.dumps(cfg.format), cfg.out)
    return 1 if report.status == "fail" else 0


def _dump_sample(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    if args.level < 1:
        print("heisenweyl: error: level must be positive", file=sys.stderr)
        return 2
    s = sample_virtual(args.level, SeededRng(seed, args.stream).generator())
    payload = {
        "level": args.level,
        "seed": seed,
        "stream": args.stream,
        "chain": [matrix_to_json(s.u(k)) for k in range(1, args.level + 1)],
        "phis": [[complex(z).real, complex(z).imag] for z in s.phis()],
    }
    _emit(json.dumps(payload, sort_keys=True, indent=2), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        return _dump_sample(args)
    except ConfigError as exc:
        print(f"heisenweyl: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
