"""Command-line interface.

    jcsqueeze simulate --preset fig1_caption --out fig1.csv
    jcsqueeze sweep-theta --thetas 0,pi/6,pi/3,5*pi/6,pi --out fig3.csv
    jcsqueeze validate --preset fig1_caption

Exit codes: 0 success, 1 invalid parameters, 2 invariant violation,
3 engine disagreement above threshold, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import ast
import logging
import math
import operator
import sys
from pathlib import Path

from .errors import EngineDisagreementError, InvalidParameterError, InvariantViolationError
from .field_states import CatFieldSpec
from .jc_evolution import QubitSpec, cross_validate
from .scenario_runner import (
    FIG3_THETAS,
    FIG4_NBARS,
    PRESETS,
    Engine,
    OutputFormat,
    ScenarioConfig,
    companion_path,
    emit,
    render_csv,
    render_json,
    render_rho_c_table,
    run_rho_c_compare,
    run_time_series,
)

log = logging.getLogger("jcsqueeze")

EXIT_OK, EXIT_INVALID, EXIT_INVARIANT, EXIT_DISAGREE, EXIT_IO = 0, 1, 2, 3, 4

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_number(text: str) -> float:
    """Evaluate a plain arithmetic expression such as ``pi/4`` or ``2*pi/6``."""
    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ValueError(text)

    try:
        value = ev(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise InvalidParameterError(f"not a number: {text!r}") from None
    return value


def parse_list(text: str) -> list[float]:
    return [parse_number(part) for part in text.split(",") if part.strip()]


# key -> (ScenarioConfig.with_ keyword, converter)
_KEYS = {
    "nbar": ("n_bar", parse_number),
    "beta": ("beta", parse_number),
    "rhoc": ("rho_c", parse_number),
    "theta": ("theta", parse_number),
    "phi": ("phi", parse_number),
    "tau_start": ("tau_start", parse_number),
    "tau_end": ("tau_end", parse_number),
    "points": ("n_points", int),
    "engine": ("engine", Engine),
    "tail_eps": ("tail_eps", parse_number),
    "threshold": ("agreement_threshold", parse_number),
    "nmax": ("n_max", int),
    "out": ("output_path", str),
    "format": ("output_format", OutputFormat),
}


def read_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` pairs; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key != "preset" and key not in _KEYS:
            raise InvalidParameterError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def build_config(args) -> ScenarioConfig:
    """Preset, then config file, then explicit flags; later sources win."""
    settings = {}
    if args.config:
        settings.update(read_config_file(args.config))
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if args.preset:
        settings["preset"] = args.preset

    preset = settings.pop("preset", "fig1_caption")
    if preset not in PRESETS:
        raise InvalidParameterError(f"unknown preset {preset!r}; choose from {', '.join(PRESETS)}")
    changes = {}
    for key, value in settings.items():
        name, convert = _KEYS[key]
        try:
            changes[name] = convert(value)
        except ValueError as exc:
            raise InvalidParameterError(f"bad value for {key}: {value!r}") from exc
    return PRESETS[preset].with_(**changes)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--preset", choices=sorted(PRESETS), help="parameter regime to start from (default fig1_caption)")
    p.add_argument("--config", help="key = value file; flags override it")
    for flag in ("nbar", "beta", "rhoc", "theta", "phi"):
        p.add_argument(f"--{flag}")
    p.add_argument("--tau-start", dest="tau_start")
    p.add_argument("--tau-end", dest="tau_end")
    p.add_argument("--points")
    p.add_argument("--engine", choices=[e.value for e in Engine])
    p.add_argument("--tail-eps", dest="tail_eps")
    p.add_argument("--threshold", help="closed-form agreement threshold (default 1e-8)")
    p.add_argument("--nmax", help="override the automatic Fock truncation")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=[f.value for f in OutputFormat])
    p.add_argument("-v", "--verbose", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jcsqueeze", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _common(sub.add_parser("simulate", help="one time series"))
    p = sub.add_parser("sweep-theta", help="one series per initial qubit angle")
    _common(p)
    p.add_argument("--thetas", default=",".join(repr(t) for t in FIG3_THETAS))
    p = sub.add_parser("sweep-nbar", help="one series per mean photon number")
    _common(p)
    p.add_argument("--nbars", default=",".join(repr(n) for n in FIG4_NBARS))
    p = sub.add_parser("compare-rhoc", help="max |E(rho_c) - E(0)| per cat phase")
    _common(p)
    p.add_argument("--rhocs", default="0,pi/6,pi/2,pi,2*pi")
    _common(sub.add_parser("validate", help="closed form vs exact evolution report"))
    return parser


def _write_series(series, out, fmt):
    if out is None:
        if fmt is OutputFormat.CSV:
            sys.stdout.write(render_csv(series.table))
        else:
            sys.stdout.write(render_json(series.table, series.config, series.validation))
        if series.validation is not None:
            sys.stderr.write(series.validation.render() + "\n")
        return
    for path in emit(series, out, fmt):
        log.info("wrote %s", path)


def _sweep(config, param, values):
    for i, value in enumerate(values):
        cfg = config.with_(**{param: value})
        series = run_time_series(cfg)
        out = None
        if config.output_path:
            out = companion_path(config.output_path, f"{param}{i}")
        else:
            sys.stdout.write(f"# {param} = {value!r}\n")
        _write_series(series, out, config.output_format)
        series.check_agreement()


def _run(args) -> int:
    config = build_config(args)
    log.info("n_max = %d, %d points on [%g, %g]", config.resolved_n_max(), config.n_points,
             config.tau_start, config.tau_end)

    if args.command == "simulate":
        series = run_time_series(config)
        _write_series(series, config.output_path, config.output_format)
        series.check_agreement()
    elif args.command == "sweep-theta":
        _sweep(config, "theta", parse_list(args.thetas))
    elif args.command == "sweep-nbar":
        _sweep(config, "n_bar", parse_list(args.nbars))
    elif args.command == "compare-rhoc":
        text = render_rho_c_table(run_rho_c_compare(config, parse_list(args.rhocs)))
        if config.output_path:
            Path(config.output_path).write_text(text)
        else:
            sys.stdout.write(text)
    elif args.command == "validate":
        report = cross_validate(config.qubit, config.field, config.taus(), config.resolved_n_max(),
                                threshold=config.agreement_threshold)
        text = report.render() + "\n"
        if config.output_path:
            Path(config.output_path).write_text(text)
        sys.stdout.write(text)
        if not report.consistent:
            return EXIT_DISAGREE
    return EXIT_OK


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return _run(args)
    except InvalidParameterError as exc:
        print(f"jcsqueeze: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InvariantViolationError as exc:
        print(f"jcsqueeze: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except EngineDisagreementError as exc:
        print(f"jcsqueeze: {exc}", file=sys.stderr)
        return EXIT_DISAGREE
    except OSError as exc:
        print(f"jcsqueeze: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
