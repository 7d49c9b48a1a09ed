"""Command-line entry point.

    adiabatic-fock list-scenarios
    adiabatic-fock run smith-counterexample -o results
    adiabatic-fock run --config my.toml --alpha 2.5 --alpha-search
    adiabatic-fock sweep alpha3 --axis T --values 5:60:5
    adiabatic-fock validate-config my.toml

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 inconclusive
by design (degenerate H_P ground level or no stable alpha).
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import config as config_mod
from .errors import AdiabaticError, ConfigError
from .runner import SWEEP_AXES, parse_values, run_scenario, sweep

DEFAULT_SWEEP_VALUES = {
    "alpha_mod": "0.5:4.0:0.25",
    "T": "5,10,13.3444,20,30,40,60,80,100",
}


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}") from None
    return parse


def _add_overrides(p: argparse.ArgumentParser):
    g = p.add_argument_group("overrides (win over config file and preset)")
    g.add_argument("--config", help="TOML run configuration")
    g.add_argument("--modes", type=int)
    g.add_argument("--dims", type=_csv_list(int), help="truncation per mode, e.g. 5 or 3,3")
    g.add_argument("--boundary", choices=["rigid", "periodic", "antiperiodic"])
    g.add_argument("--alpha", help="complex displacement, e.g. 1 or 2+0.5j (comma-separated per mode)")
    g.add_argument("--shifted", action=argparse.BooleanOptionalAction, default=None,
                   help="add (1 - |alpha|^2) to H_I (single mode)")
    g.add_argument("--T", type=float, dest="T")
    g.add_argument("--grid-points", type=int)
    g.add_argument("--substeps", type=int)
    g.add_argument("--eps", type=float, dest="eps_condition", help="simultaneous-vanishing tolerance")
    g.add_argument("--dominance-threshold", type=float)
    g.add_argument("--max-rounds", type=int)
    g.add_argument("--hp-diag", type=_csv_list(float), help="explicit H_P diagonal")
    g.add_argument("--hp-poly", dest="hp_polynomial", help="Diophantine polynomial, H_P = D(n)^2")
    g.add_argument("-o", "--output-dir")
    g.add_argument("--figures", action=argparse.BooleanOptionalAction, default=None)


_OVERRIDE_KEYS = ("modes", "dims", "boundary", "alpha", "shifted", "T", "grid_points", "substeps",
                  "eps_condition", "dominance_threshold", "max_rounds", "hp_diag", "hp_polynomial",
                  "output_dir", "figures")


def resolve_config(args) -> config_mod.RunConfig:
    if args.config:
        cfg = config_mod.load_config(args.config)
        if args.scenario:
            cfg = cfg.replace(scenario=args.scenario)
    else:
        cfg = config_mod.preset(args.scenario or "smith-counterexample")
    flags = {}
    for key in _OVERRIDE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            flags[key] = value.split(",") if key == "alpha" else value
    return config_mod.apply_overrides(cfg, flags)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="adiabatic-fock",
                                     description="Adiabatic evolution on truncated Fock spaces")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one scenario and write CSV/JSON/figures")
    run.add_argument("scenario", nargs="?", help="preset name (see list-scenarios)")
    run.add_argument("--alpha-search", action="store_true", help="also run the alpha escalation search")
    run.add_argument("--truncation-dims", type=_csv_list(int),
                     help="also compare final distributions over these truncations (polynomial H_P only)")
    _add_overrides(run)

    sw = sub.add_parser("sweep", help="sweep |alpha| or T and write a summary CSV")
    sw.add_argument("scenario", nargs="?")
    sw.add_argument("--axis", choices=SWEEP_AXES, required=True)
    sw.add_argument("--values", help="comma-separated values or start:stop:step ranges")
    sw.add_argument("--workers", type=int, default=None)
    _add_overrides(sw)

    sub.add_parser("list-scenarios", help="list preset scenarios")

    val = sub.add_parser("validate-config", help="check a TOML config file")
    val.add_argument("path")
    return parser


def _cmd_run(args) -> int:
    cfg = resolve_config(args)
    res = run_scenario(cfg, alpha_search=args.alpha_search, truncation_dims=args.truncation_dims)
    v = res.verdict
    space = res.setup.space
    cand = space.format_label(v.candidate) if v.candidate is not None else "none"
    print(f"{cfg.scenario}: final max probability {v.probability:.6f} on {cand}; "
          f"claim={'yes' if v.is_ground_claim else 'no'}; true ground {space.format_label(res.true_ground)}")
    c = res.crossing
    print(f"min gap {c.min_gap:.6g} at t={c.t_min_gap:.6g}; simultaneous zeros at "
          f"{', '.join(f'{t:.6g}' for t in c.zero_times) or 'none'}")
    if res.alpha_search is not None:
        acc = res.alpha_search.accepted
        print("alpha search: " + (f"accepted {space.format_label(acc.verdict.candidate)} at alpha="
                                  f"{acc.alpha.values}" if acc else "no stable candidate"))
    for f in res.files:
        print(f"wrote {f}")
    return res.exit_code


def _cmd_sweep(args) -> int:
    cfg = resolve_config(args)
    values = parse_values(args.values or DEFAULT_SWEEP_VALUES[args.axis])
    res = sweep(cfg, args.axis, values, workers=args.workers)
    for f in res.files:
        print(f"wrote {f}")
    return 4 if any(r.verdict.degenerate_target for r in res.rows) else 0


def _cmd_list(_args) -> int:
    width = max(map(len, config_mod.SCENARIOS))
    for name, (_, desc) in config_mod.SCENARIOS.items():
        print(f"{name:<{width}}  {desc}")
    return 0


def _cmd_validate(args) -> int:
    cfg = config_mod.load_config(args.path)
    print(f"{args.path}: ok (scenario {cfg.scenario})")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"run": _cmd_run, "sweep": _cmd_sweep, "list-scenarios": _cmd_list,
                "validate-config": _cmd_validate}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return exc.exit_code
    except AdiabaticError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
