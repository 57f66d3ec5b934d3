"""
main.py
kaczeta entrypoint.
Parses the command line, merges it over the JSON config file and config.py
defaults, runs one subcommand and writes its document as JSON or CSV.

Exit codes: 0 success, 1 verification failure, 2 input validation,
3 resource cap, 4 numerical failure.
"""

import argparse
import logging
import sys
from typing import List, Optional

import config
from core.errors import KacZetaError, VerificationFailed
from core.output import OutputWriter
from core.run_config import RunConfig, parse_beta_range, parse_complex, parse_float_list, parse_periods
from modules.cli.commands import (cmd_asymptotics, cmd_partition, cmd_spectrum, cmd_trace, cmd_zeros, cmd_zeta,
                                  plotdata)
from modules.cli.verify import cmd_verify

COMMANDS = {
    "partition": cmd_partition,
    "trace": cmd_trace,
    "spectrum": cmd_spectrum,
    "zeta": cmd_zeta,
    "zeros": cmd_zeros,
    "asymptotics": cmd_asymptotics,
    "verify": cmd_verify,
}

logger = logging.getLogger("kaczeta")


def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="JSON run config; flags override its values")
    p.add_argument("--m", type=int, help="number of interaction channels")
    p.add_argument("--lambda", dest="lam", help="comma-separated decay rates lambda_l")
    p.add_argument("--J", help="comma-separated couplings J_l")
    p.add_argument("--beta", type=float, help="inverse temperature")
    p.add_argument("--beta-range", dest="beta_range", help="lo:hi:step")
    p.add_argument("--n", help="periods: 4, 1,3 or 1:4")
    p.add_argument("--degree", type=int, help="Hermite truncation degree N")
    p.add_argument("--z", help="re[,im]")
    p.add_argument("--output", choices=["json", "csv"])
    p.add_argument("--deterministic", action="store_true", default=None, help="single worker, reproducible output")
    p.add_argument("--threads", type=int, help="worker cap")
    p.add_argument("--verbose", action="store_true", help="debug logging")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kaczeta",
                                     description="Kac-Baker transfer operators, zeta functions and their verification")
    sub = parser.add_subparsers(dest="command", required=True)
    shared = _shared_flags()
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[shared])
        if name == "zeta":
            sp.add_argument("--cross-check", dest="cross_check", choices=["series"])
            sp.add_argument("--series-terms", dest="series_terms", type=int)
        if name == "spectrum":
            sp.add_argument("--emit", choices=["plotdata"])
        if name == "asymptotics":
            sp.add_argument("--direction", choices=["+inf", "-inf"])
            sp.add_argument("--parity", choices=["even", "odd"])
            sp.add_argument("--alpha", help="comma-separated multi-index")
            sp.add_argument("--count", type=int)
            sp.add_argument("--statement-form", dest="statement_form", action="store_true", default=None)
        if name == "verify":
            sp.add_argument("--break-me", dest="break_me", action="store_true", default=None,
                            help="perturb lambda by 1e-3 on the operator side (negative control)")
    return parser


def overrides_from(args: argparse.Namespace) -> dict:
    values = {
        "m": args.m,
        "lam": parse_float_list(args.lam) if args.lam else None,
        "J": parse_float_list(args.J) if args.J else None,
        "beta": args.beta,
        "beta_range": parse_beta_range(args.beta_range) if args.beta_range else None,
        "n": parse_periods(args.n) if args.n else None,
        "degree": args.degree,
        "z": parse_complex(args.z) if args.z else None,
        "output": args.output,
        "deterministic": args.deterministic,
        "threads": args.threads,
    }
    if values["m"] is None and values["lam"] is not None:
        values["m"] = len(values["lam"])
    for name in ("cross_check", "series_terms", "emit", "direction", "parity", "count", "statement_form", "break_me"):
        values[name] = getattr(args, name, None)
    alpha = getattr(args, "alpha", None)
    values["alpha"] = [int(a) for a in parse_float_list(alpha)] if alpha else None
    return values


def _set_level(level) -> None:
    logging.getLogger().setLevel(level)
    for name, lg in logging.Logger.manager.loggerDict.items():
        if isinstance(lg, logging.Logger) and name.startswith(("core", "modules")):
            lg.setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=config.LOGGING["level"])
    if args.verbose:
        _set_level(logging.DEBUG)

    try:
        base = RunConfig.load(args.config) if args.config else RunConfig()
        cfg = base.merged(overrides_from(args))
        logger.info("Running %s with %s", args.command, cfg.to_json())
        document = COMMANDS[args.command](cfg)
        writer = OutputWriter(cfg.output)
        if cfg.emit == "plotdata":
            writer.emit_series(plotdata(document))
        else:
            writer.emit(document)
        if args.command == "verify" and not document["passed"]:
            failed = [c["name"] for c in document["checks"] if not c["passed"]]
            raise VerificationFailed(f"failed checks: {', '.join(failed)}")
        return 0
    except KacZetaError as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception:
        logger.exception("Unexpected failure")
        return 4


if __name__ == "__main__":
    sys.exit(main())
