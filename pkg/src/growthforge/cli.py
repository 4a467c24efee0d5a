"""Command-line surface: validate, build, analyze, free.

Configuration comes from an INI-style file (sections per concern, key = value,
rationals as "p/q" or exact decimal strings) with flags overriding file
values. Every report embeds the effective configuration and the system
digest. Exit codes: 0 success, 1 mathematical or verification failure,
2 usage or I/O failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import analyzer, freesub, persist
from .errors import GrowthForgeError, SystemFileError
from .exactmath import parse_rational
from .growth import (
    GrowthSpec, exp_power, geometric, poly_geometric, sharp_paper, table_spec,
    verify_hypotheses,
)
from .construction import build_free_power_system, build_plain, build_uniformly_recurrent

EXIT_OK = 0
EXIT_MATH = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    """Effective configuration, echoed into every report."""

    family: str = "poly_geometric"
    epsilon: str = "1/10"
    power: str = "1/2"
    table_values: str = ""
    horizon: int = 12
    betas: str = "2,10,100"
    alpha_max: int = 16
    mu_t_max: int = 3

    mode: str = "plain"
    depth: int = 5
    captures: int = 2
    mu_offset: int = 0
    chooser: str = "lex"
    seed: int = 0

    nmax: int = 16
    forbidden_max: int = 0
    scan_cap: int = 10_000
    sample_seed: int = 0

    free_epsilon: str = "1"
    products_len: int = 4
    free_depth: int = 4

    out: str = ""
    csv: str = ""

    _sections = {
        "growth": ("family", "epsilon", "power", "table_values", "horizon",
                   "betas", "alpha_max", "mu_t_max"),
        "build": ("mode", "depth", "captures", "mu_offset", "chooser", "seed"),
        "analyze": ("nmax", "forbidden_max", "scan_cap", "sample_seed"),
        "free": ("free_epsilon", "products_len", "free_depth"),
        "output": ("out", "csv"),
    }

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        parser = configparser.ConfigParser()
        read = parser.read(path)
        if not read:
            raise SystemFileError(f"cannot read config file {path}")
        cfg = cls()
        for section, keys in cls._sections.items():
            if not parser.has_section(section):
                continue
            for key in keys:
                ini_key = key[5:] if section == "free" and key.startswith("free_") else key
                if parser.has_option(section, ini_key):
                    current = getattr(cfg, key)
                    raw = parser.get(section, ini_key)
                    setattr(cfg, key, int(raw) if isinstance(current, int) else raw)
        return cfg

    def apply_flags(self, args: argparse.Namespace) -> None:
        mapping = {
            "family": "family", "epsilon": "epsilon", "power": "power",
            "table_values": "table_values", "horizon": "horizon",
            "depth": "depth", "captures": "captures", "mu_offset": "mu_offset",
            "chooser": "chooser", "seed": "seed", "mode": "mode",
            "nmax": "nmax", "forbidden_max": "forbidden_max",
            "scan_cap": "scan_cap",
            "products_len": "products_len",
            "out": "out", "csv": "csv",
        }
        for flag, attr in mapping.items():
            value = getattr(args, flag, None)
            if value is not None:
                setattr(self, attr, value)
        if getattr(args, "command", "") == "free" and getattr(args, "epsilon", None) is not None:
            self.free_epsilon = args.epsilon
        if getattr(args, "command", "") == "free" and getattr(args, "depth", None) is not None:
            self.free_depth = args.depth

    def growth_spec(self) -> GrowthSpec:
        if self.family == "geometric":
            return geometric(parse_rational(self.epsilon))
        if self.family == "poly_geometric":
            return poly_geometric(parse_rational(self.epsilon))
        if self.family == "sharp_paper":
            return sharp_paper(parse_rational(self.epsilon))
        if self.family == "exp_power":
            return exp_power(parse_rational(self.power))
        if self.family == "table":
            return table_spec(self.parse_table())
        raise ValueError(f"unknown family {self.family!r}")

    def parse_table(self) -> dict[int, int]:
        if not self.table_values.strip():
            raise ValueError("table family needs --table-values")
        out: dict[int, int] = {}
        parts = [p for p in self.table_values.split(",") if p.strip()]
        if ":" in self.table_values:
            for part in parts:
                n, v = part.split(":")
                out[int(n)] = int(v)
        else:
            for i, part in enumerate(parts):
                out[1 << i] = int(part)
        return out

    def beta_list(self) -> list[Fraction]:
        return [parse_rational(b) for b in self.betas.split(",") if b.strip()]

    def to_dict(self) -> dict:
        return {
            section: {key: getattr(self, key) for key in keys}
            for section, keys in self._sections.items()
        }


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _emit(doc: dict, path: str) -> None:
    text = json.dumps(doc, sort_keys=True, indent=1) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _frac_str(x) -> str:
    return str(x)


# -- subcommands ----------------------------------------------------------------


def cmd_validate(cfg: RunConfig) -> int:
    spec = cfg.growth_spec()
    horizon = cfg.horizon
    if spec.family == "table":
        horizon = min(horizon, spec.table_horizon - 1)
        if horizon < 3:
            raise SystemFileError("table support too small for dyadic checks")
    report = verify_hypotheses(
        spec, horizon,
        betas=cfg.beta_list(),
        mu_t_max=cfg.mu_t_max,
        mu_offset=cfg.mu_offset,
        alpha_max=cfg.alpha_max,
    )
    doc = {
        "kind": "hypothesis-report",
        "config": cfg.to_dict(),
        "generated_at": _timestamp(),
        "horizon": report.horizon,
        "verdicts": report.verdicts(),
        "all_pass": report.all_pass,
        "basic": {
            "monotone_ok": report.basic.monotone_ok,
            "monotone_violation": report.basic.monotone_violation,
            "strictness_warnings": report.basic.strictness_warnings[:8],
            "submultiplicative_ok": report.basic.submultiplicative_ok,
            "submultiplicative_violation": report.basic.submultiplicative_violation,
            "horizon": report.basic.horizon,
        },
        "rapid_growth": {
            "alpha": report.rapid.alpha,
            "checked_points": report.rapid.checked_points,
            "failures": report.rapid.failures,
            "vacuous": report.rapid.vacuous,
            "best_failure": report.rapid.best_failure,
            "horizon": report.rapid.horizon,
        },
        "capture_conditions": {
            "beta_table": [[_frac_str(b), nb] for b, nb in report.capture.beta_table],
            "margins": [[n, _frac_str(m)] for n, m in report.capture.margins],
            "product_partials": [_frac_str(p) for p in report.capture.product_partials],
            "ceiling_slack_partials": [_frac_str(p) for p in report.capture.ceiling_slack_partials],
            "summand_decay_ok": report.capture.summand_decay_ok,
            "product_tail_estimate": _frac_str(report.capture.product_tail_estimate)
            if report.capture.product_tail_estimate is not None else None,
        },
        "mu_table": report.mu_table,
    }
    _emit(doc, cfg.out)
    return EXIT_OK if report.all_pass else EXIT_MATH


def cmd_build(cfg: RunConfig, force: bool) -> int:
    spec = cfg.growth_spec()
    if cfg.mode == "recurrent" and not force:
        checks = verify_hypotheses(spec, cfg.horizon, betas=cfg.beta_list(),
                                   mu_t_max=0, mu_offset=cfg.mu_offset)
        if not checks.all_pass:
            bad = {k: v for k, v in checks.verdicts().items() if not v.startswith("pass")}
            print(f"validation failed ({bad}); use --force to build anyway", file=sys.stderr)
            return EXIT_MATH
    if cfg.mode == "plain":
        system = build_plain(spec, cfg.chooser, cfg.depth, seed=cfg.seed)
    elif cfg.mode == "recurrent":
        system = build_uniformly_recurrent(
            spec, cfg.depth, cfg.captures,
            mu_offset=cfg.mu_offset, chooser=cfg.chooser, seed=cfg.seed,
            horizon=cfg.horizon)
    elif cfg.mode == "free":
        # Free mode pins the family to geometric(epsilon); the growth epsilon
        # is the one parameter.
        system, _ = build_free_power_system(
            parse_rational(cfg.epsilon), cfg.depth, chooser=cfg.chooser, seed=cfg.seed)
    else:
        raise ValueError(f"unknown mode {cfg.mode!r}")
    out = cfg.out or "system.json"
    digest = persist.save_system(system, out)
    print(f"wrote {out} depth={system.depth} captures={len(system.capture_log)} {digest}")
    return EXIT_OK


def cmd_analyze(cfg: RunConfig, system_path: str) -> int:
    system = persist.load_system(system_path)
    digest = persist.system_to_document(system)["digest"]
    n_max = min(cfg.nmax, 1 << (system.depth - 1))
    dims = analyzer.dim_series(system, n_max)
    sandwich = []
    n = 1
    while (1 << n) <= n_max:
        sandwich.append(analyzer.check_growth_sandwich(system, n))
        n += 1
    recurrence = analyzer.verify_recurrence_gaps(system, cfg.scan_cap, cfg.sample_seed)
    aperiodicity = None
    if system.depth >= 2:
        aperiodicity = analyzer.check_nonperiodicity(system, max(2, n_max))
    forbidden, forb_depth = ([], system.depth)
    if cfg.forbidden_max > 0:
        forbidden, forb_depth = analyzer.minimal_forbidden_words(
            system, min(cfg.forbidden_max, n_max))
    entropy = analyzer.entropy_partial(system, n_max)
    submult = dims.submultiplicative_violations()

    hard_pass = (
        all(s.hard_ok for s in sandwich)
        and recurrence.passed
        and not submult
    )
    doc = {
        "kind": "analysis-report",
        "config": cfg.to_dict(),
        "generated_at": _timestamp(),
        "system_digest": digest,
        "depth": system.depth,
        "dimensions": [
            {"n": r.n, "dim": r.dim, "cumulative": r.cumulative, "entropy_partial": r.entropy_str}
            for r in dims.rows
        ],
        "sandwich": [s.to_dict() for s in sandwich],
        "recurrence": recurrence.to_dict(),
        "aperiodicity": aperiodicity.to_dict() if aperiodicity else None,
        "minimal_forbidden": {
            "max_len": cfg.forbidden_max, "words": forbidden, "depth": forb_depth,
        },
        "entropy": entropy.to_dict(),
        "submultiplicative_violations": submult,
        "hard_assertions_pass": hard_pass,
    }
    _emit(doc, cfg.out)
    if cfg.csv:
        Path(cfg.csv).write_text(dims.to_csv())
    return EXIT_OK if hard_pass else EXIT_MATH


def cmd_free(cfg: RunConfig, system_path: str | None) -> int:
    eps = parse_rational(cfg.free_epsilon)
    verification = None
    digest = None
    if system_path:
        system = persist.load_system(system_path)
        if system.free_params is None:
            raise SystemFileError(f"{system_path} was not built in free mode")
        params = system.free_params
        eps = params.epsilon
        digest = persist.system_to_document(system)["digest"]
        verification = freesub.verify_free_generators(system, params, cfg.products_len)
    elif cfg.free_depth > 0:
        system, params = build_free_power_system(eps, cfg.free_depth)
        verification = freesub.verify_free_generators(system, params, cfg.products_len)
    t = freesub.compute_t(eps)
    bound = freesub.degree_lower_bound(eps, tol=Fraction(1, 10 ** 6))
    optimality = freesub.optimality_report(eps)
    doc = {
        "kind": "freeness-report",
        "config": cfg.to_dict(),
        "generated_at": _timestamp(),
        "system_digest": digest,
        "epsilon": str(eps),
        "t": t,
        "generator_degree": 1 << t,
        "degree_lower_bound": str(bound),
        "degree_lower_bound_decimal": f"{float(bound):.6f}",
        "optimality": optimality.to_dict(),
        "verification": verification.to_dict() if verification else None,
    }
    _emit(doc, cfg.out)
    passed = optimality.in_band and (verification is None or verification.passed)
    return EXIT_OK if passed else EXIT_MATH


# -- argument parsing --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growthforge",
        description="Build and verify finite truncations of dyadic level systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_build: bool = False) -> None:
        p.add_argument("--config", help="INI config file; flags override it")
        p.add_argument("--family", choices=("geometric", "poly_geometric", "sharp_paper",
                                            "exp_power", "table"))
        p.add_argument("--epsilon", help="exact rational, e.g. 1/10 or 0.1")
        p.add_argument("--power", help="exponent r for exp_power")
        p.add_argument("--table-values", dest="table_values",
                       help='table data: "2,4,8,16" (at 1,2,4,8) or "1:2,2:4,..."')
        p.add_argument("--horizon", type=int, help="dyadic level horizon for checks")
        p.add_argument("--out", help="report/system output path (default stdout)")
        if with_build:
            p.add_argument("--mode", choices=("plain", "recurrent", "free"))
            p.add_argument("--depth", type=int)
            p.add_argument("--captures", type=int)
            p.add_argument("--mu-offset", dest="mu_offset", type=int)
            p.add_argument("--chooser", choices=("lex", "seeded"))
            p.add_argument("--seed", type=int)

    p_val = sub.add_parser("validate", help="check growth-function hypotheses")
    common(p_val)

    p_build = sub.add_parser("build", help="build and persist a level system")
    common(p_build, with_build=True)
    p_build.add_argument("--force", action="store_true",
                         help="build even if validation fails")

    p_an = sub.add_parser("analyze", help="exact factor analytics on a system file")
    p_an.add_argument("system", help="persisted system file")
    p_an.add_argument("--config")
    p_an.add_argument("--nmax", type=int, help="largest factor length analyzed")
    p_an.add_argument("--forbidden-max", dest="forbidden_max", type=int)
    p_an.add_argument("--scan-cap", dest="scan_cap", type=int)
    p_an.add_argument("--out")
    p_an.add_argument("--csv", help="write the dimension series as CSV")

    p_free = sub.add_parser("free", help="free-subalgebra certification")
    p_free.add_argument("system", nargs="?", help="free-mode system file (optional)")
    p_free.add_argument("--config")
    p_free.add_argument("--epsilon", help="exact rational in (0, 1]")
    p_free.add_argument("--depth", type=int, help="build depth for on-the-fly verification")
    p_free.add_argument("--products-len", dest="products_len", type=int)
    p_free.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
        cfg.apply_flags(args)
        if args.command == "validate":
            return cmd_validate(cfg)
        if args.command == "build":
            return cmd_build(cfg, force=args.force)
        if args.command == "analyze":
            return cmd_analyze(cfg, args.system)
        if args.command == "free":
            return cmd_free(cfg, args.system)
        parser.error(f"unknown command {args.command}")
    except SystemFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GrowthForgeError as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_MATH
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
