"""Command-line surface: moments, witnesses, sweeps, figure packs, verify.

Exit codes are the machine-readable failure channel:

    0  success
    1  verification failure (a verify suite failed, or engine=both deviated)
    2  configuration error (bad flags, unknown figure id, ...)
    3  the requested state is annihilated by its engineering operation
    4  a series failed to converge
    5  an indeterminate determinant-ratio witness

All stdout records are single-line CSV. Floats print in their shortest
round-trip form (17 significant digits at most).
"""

from __future__ import annotations

import argparse
import sys

from . import sweep_report, verify
from . import states as states_mod
from . import witnesses as witnesses_mod
from .errors import (
    DegenerateState,
    NonConvergent,
    SingularDenominator,
)
from .states import EngineeringOp, StateSpec

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_NONCONVERGENT = 4
EXIT_SINGULAR = 5

_WITNESS_NAMES = {
    "mandel": "mandel",
    "hoa": "hoa",
    "hosps": "hosps",
    "hos": "hos",
    "a3": "agarwal_tara",
    "agarwal_tara": "agarwal_tara",
    "klyshko": "klyshko",
    "husimi-zero": "husimi_zero",
    "husimi_zero": "husimi_zero",
}

_CONFIG_KEYS = {
    "family": str,
    "op": str,
    "p": int,
    "q": int,
    "rbar": float,
    "alpha_re": float,
    "alpha_im": float,
    "engine": str,
    "out": str,
    "tol": float,
    "steps": int,
    "grid_steps": int,
    "name": str,
    "variant": str,
    "l": int,
    "m": int,
    "n": int,
    "param_min": float,
    "param_max": float,
    "variants": str,
}


class ConfigError(Exception):
    pass


def _fmt(x: float) -> str:
    if x == 0:
        return "0"
    return repr(float(x))


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"config line {line!r} is not key=value")
                key, _, value = line.partition("=")
                key = key.strip().replace("-", "_")
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"unknown config key {key!r}")
                values[key] = _CONFIG_KEYS[key](value.strip())
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return values


def _merge_config(args: argparse.Namespace) -> None:
    """Precedence: explicit flags > config file values > defaults."""
    if not getattr(args, "config", None):
        return
    file_values = _read_config_file(args.config)
    for key, value in file_values.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", choices=("thermal", "ecs"))
    parser.add_argument("--op", choices=("none", "pas", "psa"))
    parser.add_argument("--p", type=int)
    parser.add_argument("--q", type=int)
    parser.add_argument("--rbar", type=float)
    parser.add_argument("--alpha", "--alpha-re", dest="alpha_re", type=float)
    parser.add_argument("--alpha-im", dest="alpha_im", type=float)


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--engine", choices=("analytic", "oracle", "both"))
    parser.add_argument("--out")
    parser.add_argument("--tol", type=float)
    parser.add_argument("--config")


def _build_op(args: argparse.Namespace) -> EngineeringOp:
    order = args.op or "none"
    p = args.p or 0
    q = args.q or 0
    try:
        if order == "none":
            if p or q:
                raise ConfigError("--op none is incompatible with --p/--q")
            return EngineeringOp.bare()
        if order == "pas":
            return EngineeringOp.pas(p, q)
        return EngineeringOp.psa(p, q)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build_spec(args: argparse.Namespace) -> StateSpec:
    if args.family is None:
        raise ConfigError("--family is required")
    op = _build_op(args)
    try:
        if args.family == "thermal":
            if args.rbar is None:
                raise ConfigError("thermal family requires --rbar")
            if args.alpha_re is not None or args.alpha_im is not None:
                raise ConfigError("thermal family takes no --alpha")
            return StateSpec.thermal(args.rbar, op)
        if args.alpha_re is None and args.alpha_im is None:
            raise ConfigError("ecs family requires --alpha-re (or --alpha)")
        if args.rbar is not None:
            raise ConfigError("ecs family takes no --rbar")
        alpha = complex(args.alpha_re or 0.0, args.alpha_im or 0.0)
        return StateSpec.even_coherent(alpha, op)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _cmd_moment(args: argparse.Namespace) -> int:
    if args.m is None or args.n is None:
        raise ConfigError("moment requires --m and --n")
    if args.m < 0 or args.n < 0:
        raise ConfigError("--m and --n must be non-negative")
    spec = _build_spec(args)
    engine = args.engine or "analytic"
    if engine in ("analytic", "both"):
        value = states_mod.moment(spec, args.m, args.n)
    else:
        value = None
    if engine in ("oracle", "both"):
        from . import oracle as oracle_mod

        state = oracle_mod.build_truncated(spec)
        reference = oracle_mod.oracle_moment(state, args.m, args.n)
        if value is None:
            value = reference
        elif abs(value - reference) / max(abs(reference), 1e-30) > (args.tol or 1e-8):
            print(f"{args.m},{args.n},{_fmt(value.real)},{_fmt(value.imag)}")
            print(
                f"analytic/oracle deviation exceeds tolerance: {value!r} vs {reference!r}",
                file=sys.stderr,
            )
            return EXIT_VERIFY_FAILED
    print(f"{args.m},{args.n},{_fmt(value.real)},{_fmt(value.imag)}")
    return EXIT_OK


def _cmd_witness(args: argparse.Namespace) -> int:
    if args.name is None:
        raise ConfigError("witness requires --name")
    key = args.name.lower()
    if key not in _WITNESS_NAMES:
        raise ConfigError(f"unknown witness name {args.name!r}")
    witness = _WITNESS_NAMES[key]
    spec = _build_spec(args)
    engine = args.engine or "analytic"
    if witness == "klyshko":
        if args.m is None:
            raise ConfigError("klyshko requires --m")
        order = args.m
    elif witness in ("mandel", "hoa", "hosps", "hos"):
        order = args.l if args.l is not None else 2
    else:
        order = 0
    variant = args.variant or witnesses_mod.VARIANT_NUMBER_MOMENTS

    def run(engine_name: str) -> witnesses_mod.WitnessResult:
        return witnesses_mod.evaluate_witness(
            spec, witness, order=order, variant=variant, engine=engine_name
        )

    result = run("analytic" if engine in ("analytic", "both") else "oracle")
    if engine == "both":
        reference = run("oracle")
        tol = args.tol or 1e-8
        dev = abs(result.value - reference.value)
        if dev / max(abs(reference.value), 1e-30) > tol and dev > tol:
            _print_witness(result)
            print(
                f"analytic/oracle deviation exceeds tolerance: "
                f"{result.value!r} vs {reference.value!r}",
                file=sys.stderr,
            )
            return EXIT_VERIFY_FAILED
    _print_witness(result)
    return EXIT_OK


def _print_witness(result: witnesses_mod.WitnessResult) -> None:
    flag = "true" if result.nonclassical else "false"
    print(f"{result.witness},{result.order},{repr(float(result.value))},{flag}")


def _parse_variant_labels(text: str) -> list[EngineeringOp]:
    ops = []
    for raw in text.split(","):
        label = raw.strip()
        if not label:
            continue
        if label == "bare":
            ops.append(EngineeringOp.bare())
            continue
        tag = label[:3].upper()
        if tag not in ("PAS", "PSA") or not label[3:].startswith("("):
            raise ConfigError(f"cannot parse variant label {label!r}")
        body = label[4:].rstrip(")")
        try:
            p_text, q_text = body.split(";") if ";" in body else body.split(":")
        except ValueError:
            raise ConfigError(f"variant label {label!r} must look like PAS(1:1)")
        try:
            p, q = int(p_text), int(q_text)
        except ValueError as exc:
            raise ConfigError(f"variant label {label!r}: {exc}") from exc
        ops.append(EngineeringOp.pas(p, q) if tag == "PAS" else EngineeringOp.psa(p, q))
    if not ops:
        raise ConfigError("no variants given")
    return ops


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.name is None:
        raise ConfigError("sweep requires --name")
    key = args.name.lower()
    if key not in _WITNESS_NAMES:
        raise ConfigError(f"unknown witness name {args.name!r}")
    witness = _WITNESS_NAMES[key]
    if witness == "husimi_zero":
        raise ConfigError("husimi-zero has no scalar sweep; use the figure packs")
    if args.family is None:
        raise ConfigError("sweep requires --family")
    family = states_mod.FAMILY_THERMAL if args.family == "thermal" else states_mod.FAMILY_EVEN_COHERENT
    order = args.m if witness == "klyshko" else (args.l if args.l is not None else 2)
    if order is None:
        raise ConfigError("klyshko sweep requires --m")
    variants = _parse_variant_labels(args.variants or "PAS(1:1),PSA(1:1)")
    param_range = {}
    if args.param_min is not None:
        param_range["min"] = args.param_min
    if args.param_max is not None:
        param_range["max"] = args.param_max
    if args.steps is not None:
        param_range["steps"] = args.steps
    table = sweep_report.sweep(
        witness,
        order,
        variants,
        family,
        param_range=param_range or None,
        engine=args.engine or "analytic",
        include_bare=args.include_bare,
    )
    text = sweep_report.sweep_table_csv(table)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
        print(args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_figure(args: argparse.Namespace) -> int:
    if args.figure_id not in sweep_report.FIGURE_IDS:
        raise ConfigError(f"unknown figure id {args.figure_id!r}")
    pack = sweep_report.figure_pack(
        args.figure_id,
        steps=args.steps,
        grid_steps=args.grid_steps,
        engine=args.engine or "analytic",
    )
    out_dir = args.out or "."
    manifest = sweep_report.write_figure_pack(pack, out_dir)
    for name, path in manifest:
        print(f"{name},{path}")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    suites = args.suite or None
    try:
        results = verify.run_suites(suites, tol=args.tol, report=print)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fockwitness",
        description="Nonclassicality witnesses for photon-engineered thermal and even coherent states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_moment = sub.add_parser("moment", help="print one normalized moment <a'^m a^n>")
    _add_state_flags(p_moment)
    _add_shared_flags(p_moment)
    p_moment.add_argument("--m", type=int)
    p_moment.add_argument("--n", type=int)
    p_moment.set_defaults(func=_cmd_moment)

    p_witness = sub.add_parser("witness", help="evaluate one nonclassicality witness")
    _add_state_flags(p_witness)
    _add_shared_flags(p_witness)
    p_witness.add_argument("--name")
    p_witness.add_argument("--l", type=int)
    p_witness.add_argument("--m", type=int)
    p_witness.add_argument("--variant", choices=("number_moments", "power_of_mean"))
    p_witness.set_defaults(func=_cmd_witness)

    p_sweep = sub.add_parser("sweep", help="scan a witness over a parameter range")
    _add_shared_flags(p_sweep)
    p_sweep.add_argument("--name")
    p_sweep.add_argument("--family", choices=("thermal", "ecs"))
    p_sweep.add_argument("--l", type=int)
    p_sweep.add_argument("--m", type=int)
    p_sweep.add_argument("--variants", help="comma list like PAS(1:1),PSA(2:1),bare")
    p_sweep.add_argument("--include-bare", action="store_true")
    p_sweep.add_argument("--param-min", dest="param_min", type=float)
    p_sweep.add_argument("--param-max", dest="param_max", type=float)
    p_sweep.add_argument("--steps", type=int)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_figure = sub.add_parser("figure", help="emit the CSV pack for one figure")
    _add_shared_flags(p_figure)
    p_figure.add_argument("figure_id")
    p_figure.add_argument("--steps", type=int)
    p_figure.add_argument("--grid-steps", dest="grid_steps", type=int)
    p_figure.set_defaults(func=_cmd_figure)

    p_verify = sub.add_parser("verify", help="run the verification suites")
    p_verify.add_argument("--suite", action="append", choices=verify.SUITE_NAMES)
    p_verify.add_argument("--tol", type=float)
    p_verify.add_argument("--config")
    p_verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _merge_config(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateState as exc:
        print(f"degenerate state: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except NonConvergent as exc:
        print(f"series did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENT
    except SingularDenominator as exc:
        print(f"indeterminate witness: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
