#!/usr/bin/env python3
"""
halg command-line application

Reads structure files, runs identity checks and homotopy, Maurer-Cartan and Loday cohomology
constructions, and prints a JSON report. Exit codes: 0 when every identity holds, 1 when an
identity fails or a construction rejects its input, 2 when an input file or the configuration
is malformed.
"""

import argparse
import logging
import os
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

from halgebra import __version__
from halgebra.config import LOG_LEVEL_ENV, Settings, load_settings, parse_degree_window, use_settings
from halgebra.errors import ConfigError, HalgebraError, SchemaError
from halgebra.graded import Vector
from halgebra.infinity import Flavor, check_inf_morphism, check_leibniz_infinity, check_lie_infinity
from halgebra.loday import (
    Representation,
    cartan_check,
    check_bimodule,
    check_leibniz_algebra,
    check_lie_algebra,
    check_representation,
    check_squares_ideal,
    cohomology_dimensions,
    loday_coboundary,
    squares_ideal_quotient,
)
from halgebra.reports import IdentityReport
from halgebra.schema import (
    FileBuilder,
    FileResolver,
    Report,
    dump_report,
    read_structure_file,
    report_from_identities,
    write_structure_file,
)
from halgebra.simplex import (
    b_inverse_iterates,
    extract_homotopy,
    filler_data,
    lift_homotopy,
    vcompose_via_simplex,
)
from halgebra.two_term import (
    TwoTermHomotopy,
    check_homotopy,
    check_two_term_algebra,
    hcompose,
    vcompose,
)

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2

DEFAULT_CONFIG = "halgebra.yaml"

CHECK_KINDS = ("leibniz", "lie", "two-term", "morphism", "homotopy", "bimodule")

T = TypeVar("T")

logger = logging.getLogger("halgebra.app")


class InputError(Exception):
    """Wraps an error that should end the run with exit code 2."""


def configure_logging(log_file: Optional[str] = None, verbose: bool = False) -> logging.Logger:
    """
    Configure logging for the application.

    Parameters
    ----------
    log_file : str, optional
        Path to the log file
    verbose : bool, optional
        Whether to use verbose (DEBUG) logging

    Returns
    -------
    logging.Logger
        Configured logger instance
    """
    log_level = logging.DEBUG if verbose else logging.INFO

    # stdout carries the JSON report, so log records go to stderr
    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    app_logger = logging.getLogger("halgebra.app")

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s"))
        file_handler.setLevel(log_level)
        package_logger = logging.getLogger("halgebra")
        package_logger.addHandler(file_handler)
        package_logger.setLevel(log_level)

    # Worker processes read the level back from the environment
    os.environ[LOG_LEVEL_ENV] = str(log_level)

    return app_logger


def load_config(config_path: Optional[str], args: argparse.Namespace) -> Settings:
    """
    Merge the YAML configuration, the environment and command-line flags into settings.

    A missing default configuration file is not an error; a missing explicit one is.
    """
    if config_path == DEFAULT_CONFIG and not Path(config_path).exists():
        config_path = None
    overrides = {
        "degree_window": parse_degree_window(args.degree_window) if args.degree_window else None,
        "max_workers": args.max_workers,
        "max_word_length": args.max_word_length,
    }
    return load_settings(config_path, overrides)


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------


def _resolver(path: str) -> FileResolver:
    return FileResolver(read_structure_file(path))


def _select(names: Sequence[str], wanted: Optional[str], what: str, path: str) -> str:
    if wanted is not None:
        if wanted not in names:
            raise SchemaError(f"{path} has no {what} named '{wanted}'")
        return wanted
    if len(names) != 1:
        raise SchemaError(f"{path} must hold exactly one {what} (found {len(names)}); pass --name")
    return names[0]


def _homotopy(path: str, name: Optional[str] = None) -> TwoTermHomotopy:
    resolver = _resolver(path)
    return resolver.homotopy(_select(sorted(resolver.model.homotopies), name, "homotopy", path))


def _labelled(label: str, report: IdentityReport) -> IdentityReport:
    return IdentityReport(name=label).merge(report)


def _write_homotopy(h: TwoTermHomotopy, output: str) -> None:
    builder = FileBuilder()
    builder.add_homotopy("homotopy", h)
    write_structure_file(builder.build(), output)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _check_file(kind: str, path: str, n_max: Optional[int]) -> List[Tuple[str, IdentityReport]]:
    resolver = _resolver(path)
    model = resolver.model
    results: List[Tuple[str, IdentityReport]] = []
    if kind in ("leibniz", "lie"):
        flavor = Flavor(kind)
        names = [n for n, s in sorted(model.structures.items()) if s.flavor == flavor.value]
        if not names:
            raise SchemaError(f"{path} declares no {kind} structures")
        checker = check_leibniz_infinity if flavor is Flavor.LEIBNIZ else check_lie_infinity
        results = [(n, checker(resolver.structure(n), n_max)) for n in names]
    elif kind == "two-term":
        names = sorted(model.structures)
        results = [(n, check_two_term_algebra(resolver.two_term(n))) for n in names]
    elif kind == "morphism":
        names = sorted(model.morphisms)
        results = [(n, check_inf_morphism(resolver.morphism(n), n_max)) for n in names]
    elif kind == "homotopy":
        names = sorted(model.homotopies)
        results = [(n, check_homotopy(resolver.homotopy(n))) for n in names]
    elif kind == "bimodule":
        names = sorted(model.algebras)
        for n in names:
            report = _labelled(n, check_leibniz_algebra(resolver.leibniz_algebra(n)))
            coeff = resolver.coefficients(n)
            if isinstance(coeff, Representation):
                report.merge(check_representation(coeff))
            else:
                report.merge(check_bimodule(coeff))
            results.append((n, report))
    if not results:
        raise SchemaError(f"{path} declares nothing to check as {kind}")
    return results


def cmd_check(args: argparse.Namespace) -> List[IdentityReport]:
    """Run the checker for ``args.kind`` on every matching role of every file."""
    reports: List[IdentityReport] = []
    for path in args.files:
        for name, report in _check_file(args.kind, path, args.n_max):
            label = name if len(args.files) == 1 else f"{path}#{name}"
            reports.append(_labelled(label, report))
    return reports


def _round_trip_report(h: TwoTermHomotopy, extracted: TwoTermHomotopy) -> IdentityReport:
    report = IdentityReport(name="round-trip")
    report.touch("theta")
    for x in h.source.source.space.basis():
        v = Vector.basis(x)
        report.record("theta", (x,), extracted.theta(v) - h.theta(v))
    return report


def cmd_homotopy(args: argparse.Namespace) -> List[IdentityReport]:
    """Compose, lift or extract 2-term homotopies and write the result to ``args.output``."""
    sub = args.subcommand
    if sub in ("compose-v", "compose-h", "compose-simplex"):
        first, second = _homotopy(args.first), _homotopy(args.second)
        if sub == "compose-v":
            result = vcompose(second, first)
        elif sub == "compose-h":
            result = hcompose(second, first)
        else:
            result = vcompose_via_simplex(second, first)
        _write_homotopy(result, args.output)
        return [check_homotopy(result)]
    if sub == "lift":
        return cmd_mc_lift(args)
    return cmd_mc_extract(args)


def cmd_mc_lift(args: argparse.Namespace) -> List[IdentityReport]:
    h = _homotopy(args.file, args.name)
    alpha = lift_homotopy(h, args.vertex)
    builder = FileBuilder()
    builder.add_element("filler", alpha)
    write_structure_file(builder.build(), args.output)
    return [_round_trip_report(h, extract_homotopy(alpha, args.vertex))]


def cmd_mc_extract(args: argparse.Namespace) -> List[IdentityReport]:
    resolver = _resolver(args.file)
    name = _select(sorted(resolver.model.elements), args.name, "element", args.file)
    result = extract_homotopy(resolver.element(name), args.vertex)
    _write_homotopy(result, args.output)
    return [check_homotopy(result)]


def cmd_mc_iterate(args: argparse.Namespace) -> Tuple[List[IdentityReport], List[str]]:
    """The successive Kan-filler approximations, one element per step."""
    h = _homotopy(args.file, args.name)
    mu, nu = filler_data(h, args.vertex)
    iterates = list(b_inverse_iterates(mu, nu, args.vertex, args.max_steps))
    notes = [f"stabilised after {len(iterates) - 1} steps"]
    for k, alpha in enumerate(iterates):
        notes.append(f"iterate {k}: {len(alpha.terms)} terms")
    if args.output:
        builder = FileBuilder()
        for k, alpha in enumerate(iterates):
            builder.add_element(f"iterate{k}", alpha)
        write_structure_file(builder.build(), args.output)
    final = extract_homotopy(iterates[-1], args.vertex)
    return [_round_trip_report(h, final)], notes


def cmd_loday(args: argparse.Namespace) -> Tuple[List[IdentityReport], List[str]]:
    """Coboundaries, Cartan identities, squares quotients and cohomology dimensions."""
    resolver = _resolver(args.file)
    model = resolver.model
    sub = args.subcommand
    if sub == "coboundary":
        name = _select(sorted(model.cochains), args.name, "cochain", args.file)
        c = resolver.cochain(name)
        algebra_name = model.cochains[name].algebra
        coeff = resolver.coefficients(algebra_name)
        image = loday_coboundary(c, coeff)
        builder = FileBuilder()
        builder.add_algebra(algebra_name, c.algebra, coeff)
        builder.add_cochain("coboundary", image, algebra_name)
        write_structure_file(builder.build(), args.output)
        return [], [f"coboundary of a {c.arity}-cochain has {len(image.values.entries)} nonzero values"]
    algebras = [_select(sorted(model.algebras), args.name, "algebra", args.file)] if args.name else sorted(model.algebras)
    if not algebras:
        raise SchemaError(f"{args.file} declares no algebras")
    reports: List[IdentityReport] = []
    notes: List[str] = []
    if sub == "cartan":
        for n in algebras:
            coeff = resolver.coefficients(n)
            if not isinstance(coeff, Representation):
                raise SchemaError(f"Algebra '{n}' carries a bimodule; the Cartan calculus needs a representation")
            reports.append(_labelled(n, cartan_check(coeff, args.max_arity)))
    elif sub == "quotient":
        builder = FileBuilder()
        for n in algebras:
            alg = resolver.leibniz_algebra(n)
            result = squares_ideal_quotient(alg)
            report = _labelled(n, check_squares_ideal(alg, result))
            report.merge(check_lie_algebra(result.quotient), prefix="quotient-")
            reports.append(report)
            builder.add_algebra(n, result.quotient)
            notes.append(f"{n}: ideal of dimension {len(result.ideal)}, quotient of dimension {result.quotient.dimension}")
        write_structure_file(builder.build(), args.output)
    else:
        for n in algebras:
            dimensions = cohomology_dimensions(resolver.coefficients(n), args.max_arity)
            notes.append(f"{n}: " + ", ".join(f"HL^{p} = {d}" for p, d in sorted(dimensions.items())))
    return reports, notes


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="halg", description="Exact checks and constructions for homotopy Leibniz algebras")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-c", "--config", help="Path to configuration file", default=DEFAULT_CONFIG)
    parser.add_argument("--degree-window", help="Admissible degrees as 'lo..hi'")
    parser.add_argument("--max-workers", type=int, help="Worker processes for identity checks")
    parser.add_argument("--max-word-length", type=int, help="Longest coalgebra word")
    parser.add_argument("--report", help="Also write the JSON report to this file")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose output")
    parser.add_argument("--log-file", help="Path to log file")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Check the identities of structures in files")
    check.add_argument("kind", choices=CHECK_KINDS)
    check.add_argument("files", nargs="+")
    check.add_argument("--n-max", type=int, help="Highest identity index to evaluate")

    homotopy = commands.add_parser("homotopy", help="Compose, lift and extract 2-term homotopies")
    homotopy_sub = homotopy.add_subparsers(dest="subcommand", required=True)
    for name, text in (
        ("compose-v", "vertical composite of FIRST: f => g and SECOND: g => h"),
        ("compose-h", "horizontal composite of FIRST (V -> W) and SECOND (W -> X)"),
        ("compose-simplex", "vertical composite through a Maurer-Cartan element on the 2-simplex"),
    ):
        p = homotopy_sub.add_parser(name, help=text)
        p.add_argument("first")
        p.add_argument("second")
        p.add_argument("-o", "--output", required=True)

    mc = commands.add_parser("mc", help="Maurer-Cartan elements of the convolution algebra")
    mc_sub = mc.add_subparsers(dest="subcommand", required=True)
    for parent in (homotopy_sub, mc_sub):
        lift = parent.add_parser("lift", help="Lift a homotopy to a Maurer-Cartan element on the 1-simplex")
        extract = parent.add_parser("extract", help="Read a homotopy off a Maurer-Cartan element on the 1-simplex")
        for p in (lift, extract):
            p.add_argument("file")
            p.add_argument("--name")
            p.add_argument("--vertex", type=int, choices=(0, 1), default=0)
            p.add_argument("-o", "--output", required=True)
    iterate = mc_sub.add_parser("iterate", help="Show the Kan-filler iterates of a homotopy lift")
    iterate.add_argument("file")
    iterate.add_argument("--name")
    iterate.add_argument("--vertex", type=int, choices=(0, 1), default=0)
    iterate.add_argument("--max-steps", type=int)
    iterate.add_argument("-o", "--output")

    loday = commands.add_parser("loday", help="Loday cohomology of Leibniz algebras")
    loday_sub = loday.add_subparsers(dest="subcommand", required=True)
    coboundary = loday_sub.add_parser("coboundary", help="Apply the Loday coboundary to a cochain")
    coboundary.add_argument("file")
    coboundary.add_argument("--name")
    coboundary.add_argument("-o", "--output", required=True)
    cartan = loday_sub.add_parser("cartan", help="Check the Cartan calculus identities")
    quotient = loday_sub.add_parser("quotient", help="Quotient by the squares ideal")
    dimensions = loday_sub.add_parser("dimensions", help="Dimensions of Loday cohomology")
    for p in (cartan, quotient, dimensions):
        p.add_argument("file")
        p.add_argument("--name")
    cartan.add_argument("--max-arity", type=int, default=3)
    dimensions.add_argument("--max-arity", type=int, default=3)
    quotient.add_argument("-o", "--output", required=True)
    return parser


def _guard(func: Callable[[], T]) -> T:
    try:
        return func()
    except (SchemaError, ConfigError, OSError) as e:
        raise InputError(str(e)) from e


def _command_line(args: argparse.Namespace) -> str:
    parts = [args.command]
    if getattr(args, "kind", None):
        parts.append(args.kind)
    if getattr(args, "subcommand", None):
        parts.append(args.subcommand)
    return " ".join(parts)


def run(args: argparse.Namespace) -> Tuple[List[IdentityReport], List[str]]:
    handlers: Dict[str, Callable[[argparse.Namespace], List[IdentityReport]]] = {
        "check": cmd_check,
        "homotopy": cmd_homotopy,
    }
    if args.command in handlers:
        return _guard(lambda: handlers[args.command](args)), []
    if args.command == "mc":
        if args.subcommand == "iterate":
            return _guard(lambda: cmd_mc_iterate(args))
        return _guard(lambda: cmd_mc_lift(args) if args.subcommand == "lift" else cmd_mc_extract(args)), []
    return _guard(lambda: cmd_loday(args))


def _emit(report: Report, destination: Optional[str]) -> None:
    text = dump_report(report)
    sys.stdout.write(text)
    if destination:
        Path(destination).write_text(text, encoding="utf-8")


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main function for the command-line application.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    app_logger = configure_logging(log_file=args.log_file, verbose=args.verbose)
    command = _command_line(args)

    try:
        settings = load_config(args.config, args)
    except ConfigError as e:
        app_logger.error(f"Invalid configuration: {e}")
        _emit(Report(command=command, passed=False, notes=[str(e)]), args.report)
        return EXIT_INPUT_ERROR

    start = time.perf_counter()
    with use_settings(settings):
        try:
            reports, notes = run(args)
        except InputError as e:
            app_logger.error(f"Input error: {e}")
            _emit(Report(command=command, passed=False, notes=[str(e)]), args.report)
            return EXIT_INPUT_ERROR
        except HalgebraError as e:
            app_logger.error(f"{command} failed: {e}")
            report = Report(command=command, passed=False, notes=[str(e)])
            report.elapsed_seconds = round(time.perf_counter() - start, 6)
            _emit(report, args.report)
            return EXIT_FAILURE
        report = report_from_identities(command, reports, time.perf_counter() - start, settings.report_residual_limit)
    report.notes.extend(notes)
    _emit(report, args.report)
    for identity_report in reports:
        identity_report.log_summary()
    app_logger.info(f"{command}: {'PASS' if report.passed else 'FAIL'}")
    return EXIT_PASS if report.passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
