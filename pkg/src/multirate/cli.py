"""Command-line front end for the airplane turning control system.

Four commands: `simulate` writes the status history of one run as CSV,
`search` hunts for reachable states satisfying a predicate, `check`
model-checks a time-bounded LTL formula, and `validate` reports on the
model's structural health.

Exit codes are uniform: 0 success / property holds / no solution,
1 property violated / solutions found, 2 usage error, 3 model validation
error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .airplane import (
    AirplaneParams,
    airplane_props,
    build_airplane,
)
from .analysis import ResourceError, check_ltl, search, simulate
from .formulas import ParseError, parse_formula
from .model import BOT, Bot, EnvIn, EnvOut, ModelError, Status, SystemState, Value, Wire
from .semantics import initial_state, validate

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_INVALID = 3

CSV_HEADER = "step,time_ms,dir,roll,yaw,goal"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Input files.


def parse_scenario(path: str | Path) -> list[Value]:
    """Scenario file: one heading increment or `bot` per line, `#` comments."""
    values: list[Value] = []
    for lineno, raw in enumerate(_read_lines(path), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "bot":
            values.append(BOT)
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise UsageError(f"{path}:{lineno}: not a number or 'bot': {line!r}") from None
        if values[-1] != values[-1] or values[-1] in (float("inf"), float("-inf")):
            raise UsageError(f"{path}:{lineno}: value must be finite")
    return values


def parse_env_rules(path: str | Path) -> list[float]:
    """Environment rules file: one alternative pilot input per line."""
    rules = []
    for lineno, raw in enumerate(_read_lines(path), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rules.append(float(line))
        except ValueError:
            raise UsageError(f"{path}:{lineno}: not a number: {line!r}") from None
    if not rules:
        raise UsageError(f"{path}: no environment rules found")
    return rules


_PARAM_KEYS = {
    "plane_size",
    "weight",
    "wing_size",
    "virt_lift_const",
    "horz_lift_const",
    "drag_ratio",
    "velocity",
    "gravity",
    "sub_diff_angle",
}


def parse_config(path: str | Path) -> dict:
    """Flat `key = value` configuration with `#` comments.

    Keys: the airplane parameter names, `units_mode`, `law_version`,
    `quantization_decimals`, plus the fault-injection keys `period.<machine>`
    and `extra_connection` (value `src.port->dst.port`, member ports).
    """
    cfg: dict = {"params": {}, "period_overrides": {}, "extra_connections": []}
    for lineno, raw in enumerate(_read_lines(path), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key in _PARAM_KEYS:
                cfg["params"][key] = float(value)
            elif key == "units_mode":
                cfg["params"]["units_mode"] = value
            elif key == "law_version":
                cfg["law_version"] = value
            elif key == "quantization_decimals":
                cfg["quantize"] = int(value)
            elif key.startswith("period."):
                cfg["period_overrides"][key.split(".", 1)[1]] = int(value)
            elif key == "extra_connection":
                cfg["extra_connections"].append(_parse_connection(value))
            else:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from None
    return cfg


def _parse_connection(text: str):
    src, arrow, dst = text.partition("->")
    if not arrow:
        raise UsageError(f"bad connection {text!r}, expected 'src.port->dst.port'")

    def endpoint(s):
        comp, dot, port = s.strip().partition(".")
        if not dot:
            raise UsageError(f"bad connection endpoint {s!r}")
        return comp, port

    (sc, sp), (dc, dp) = endpoint(src), endpoint(dst)
    return Wire(sc, sp, dc, dp)


def _read_lines(path: str | Path) -> list[str]:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"file not found: {p}")
    return p.read_text(encoding="utf-8").splitlines()


# ---------------------------------------------------------------------------
# Model assembly and CSV output.


def _build(args) -> tuple[SystemState, dict]:
    cfg = parse_config(args.config) if args.config else {"params": {}, "period_overrides": {}, "extra_connections": []}
    law = args.laws or cfg.get("law_version", "v2")
    scenario = parse_scenario(args.scenario) if args.scenario else []
    env_rules = parse_env_rules(args.env_rules) if getattr(args, "env_rules", None) else None
    quantize = args.quantize if args.quantize is not None else cfg.get("quantize")
    try:
        params = AirplaneParams(**cfg["params"])
        model = build_airplane(
            params,
            scenario,
            law,
            env_rules,
            check=False,
            period_overrides=cfg["period_overrides"],
            extra_csystem_connections=tuple(cfg["extra_connections"]),
        )
    except (ValueError, ModelError) as e:
        raise UsageError(str(e)) from None
    issues = validate(model)
    options = {"quantize": quantize, "budget": args.budget, "issues": issues}
    return initial_state(model), options


def _require_valid(options):
    if options["issues"]:
        for issue in options["issues"]:
            print(str(issue), file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _warn_bound(bound: int, period: int):
    if bound <= 0 or bound % period != 0:
        print(
            f"warning: bound {bound} ms is not a positive multiple of the "
            f"top period {period} ms; using {max(0, bound) // period} steps",
            file=sys.stderr,
        )


def _status_rows(states) -> list[str]:
    rows = []
    time_ms = 0
    for step, state in enumerate(states, start=1):
        for record in state.tree.port("output").content:
            time_ms += 60
            rows.append(
                f"{step},{time_ms},{record.dir!r},{record.roll!r},"
                f"{record.yaw!r},{record.goal!r}"
            )
    return rows


def _write_csv(rows: list[str], out: str | None):
    text = "\n".join([CSV_HEADER] + rows) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Commands.


def cmd_simulate(args) -> int:
    init, options = _build(args)
    _require_valid(options)
    _warn_bound(args.bound, init.tree.period)
    trace = simulate(init, None, args.bound)
    rows = _status_rows(trace.states[1:])
    _write_csv(rows, args.out)
    if args.out:
        print(f"wrote {len(rows)} records ({trace.steps} steps) to {args.out}")
    return EXIT_OK


def cmd_search(args) -> int:
    if args.max < 1:
        raise UsageError("--max must be at least 1")
    init, options = _build(args)
    _require_valid(options)
    _warn_bound(args.bound, init.tree.period)
    registry = airplane_props()
    try:
        hits = search(
            init,
            args.pred,
            bound=args.bound,
            max_solutions=args.max,
            registry=registry,
            budget=options["budget"],
            quantize=options["quantize"],
        )
    except ModelError as e:
        raise UsageError(str(e)) from None
    if not hits:
        print("No solution")
        return EXIT_OK
    for n, hit in enumerate(hits, start=1):
        t = hit.state.elapsed_ms
        print(f"solution {n}: step {hit.steps}, time {t} ms")
        for choice, _ in hit.path:
            print(f"  choice: {_format_choice(choice)}")
        for record in hit.state.tree.port("output").content:
            print(
                f"  record dir={record.dir:.4f} roll={record.roll:.4f} "
                f"yaw={record.yaw:.4f} goal={record.goal:.4f}"
            )
    return EXIT_VIOLATED


def cmd_check(args) -> int:
    try:
        formula = parse_formula(args.formula)
    except ParseError as e:
        raise UsageError(f"bad formula: {e}") from None
    init, options = _build(args)
    _require_valid(options)
    _warn_bound(args.bound, init.tree.period)
    registry = airplane_props()
    try:
        result = check_ltl(
            init,
            formula,
            args.bound,
            registry,
            budget=options["budget"],
            quantize=options["quantize"],
        )
    except ModelError as e:
        raise UsageError(str(e)) from None
    print(f"explored states: {result.explored}")
    if result.holds:
        print("holds")
        return EXIT_OK
    print("violated")
    cex = result.counterexample
    prefix_states = [s for _, s in cex.prefix]
    cycle_states = [s for c, s in cex.cycle if c is not None]
    print(f"counterexample: prefix {len(cex.prefix)} steps, cycle {len(cex.cycle)} steps")
    if args.out:
        rows = _status_rows(prefix_states + cycle_states)
        _write_csv(rows, args.out)
        print(f"wrote counterexample records to {args.out}")
    return EXIT_VIOLATED


def cmd_validate(args) -> int:
    init, options = _build(args)
    issues = options["issues"]
    if not issues:
        print("model valid")
        return EXIT_OK
    for issue in issues:
        print(str(issue))
    return EXIT_INVALID


def _format_choice(choice) -> str:
    if not choice:
        return "(none)"
    parts = []
    for port, values in choice.items():
        rendered = " ".join("bot" if isinstance(v, Bot) else repr(v) for v in values)
        parts.append(f"{port} = {rendered}")
    return ", ".join(parts)


# ---------------------------------------------------------------------------
# Argument parsing.


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="multirate",
        description="Simulate, search and model-check the turning control system.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, bound_required=True):
        p.add_argument("--scenario", help="scenario file (one increment per line)")
        p.add_argument("--laws", choices=["v1", "v2"], help="control law version")
        p.add_argument("--config", help="key = value configuration file")
        p.add_argument("--quantize", type=int, help="round state keys to N decimals")
        p.add_argument("--budget", type=int, default=5_000_000, help="node budget")
        if bound_required:
            p.add_argument("--bound", type=int, required=True, help="time bound, ms")

    p = sub.add_parser("simulate", help="run one behavior and write its CSV trace")
    common(p)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("search", help="breadth-first search for a predicate")
    common(p)
    p.add_argument("--pred", required=True, help="predicate name (e.g. unsafe-yaw)")
    p.add_argument("--max", type=int, default=1, help="maximum solutions")
    p.add_argument("--env-rules", dest="env_rules", help="environment rules file")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("check", help="time-bounded LTL model checking")
    common(p)
    p.add_argument("--formula", required=True, help="LTL formula")
    p.add_argument("--env-rules", dest="env_rules", help="environment rules file")
    p.add_argument("--out", help="counterexample CSV path")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("validate", help="report structural validation issues")
    common(p, bound_required=False)
    p.set_defaults(fn=cmd_validate)

    return top


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)


if __name__ == "__main__":
    sys.exit(main())
