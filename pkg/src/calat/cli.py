"""Command-line interface.

    calat <command> [--backend exact|float] [--tol T] [--window imin imax jmin jmax]
                    [--coeffs FILE | --lattice FILE | --example NAME] [-o FILE]

Exit codes: 0 success, 1 usage or parse error, 2 validation or
compatibility failure, 3 numerical singularity.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import analysis, compat, invariants, lattice, mesh, synthesis
from .errors import (
    AssumptionViolated,
    IncompatibleField,
    InvalidWindow,
    MissingStencil,
    SingularTransition,
    ZeroDenominator,
)
from .scalar import Backend, default_backend, format_scalar, is_zero, set_tolerance

log = logging.getLogger("calat")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_SINGULAR = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ValidationFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _backend(args) -> Backend:
    return Backend(args.backend) if args.backend else default_backend()


def _window_arg(args):
    return tuple(args.window) if args.window else None


def _load_coefficients(args, backend):
    data = _read_json(args.coeffs)
    try:
        return invariants.coefficients_from_dict(data, backend)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise UsageError(f"{args.coeffs}: {exc}") from exc


def _load_lattice(args, backend) -> lattice.LatticeWindow:
    if args.lattice:
        data = _read_json(args.lattice)
        try:
            return lattice.window_from_dict(data, backend)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise UsageError(f"{args.lattice}: {exc}") from exc
    if args.example:
        _, w = synthesis.generate_example(args.example, _window_arg(args), backend)
        return w
    if getattr(args, "coeffs", None):
        coeffs = _load_coefficients(args, backend)
        rect = _window_arg(args)
        if rect is None:
            raise UsageError("--window is required with --coeffs")
        return synthesis.synthesize(coeffs, rect)
    raise UsageError("one of --lattice, --example or --coeffs is required")


def _require_valid(w: lattice.LatticeWindow) -> None:
    report = lattice.validate_window(w)
    if not report.ok:
        for v in report.violations:
            log.error("%s", v.describe())
        raise ValidationFailed(f"{len(report.failing_sites())} site(s) fail the lattice conditions")


# -- commands -------------------------------------------------------------------


def cmd_synth(args) -> int:
    backend = _backend(args)
    frame = None
    rect = _window_arg(args)
    if args.config:
        cfg = _read_json(args.config)
        ref = cfg.get("coefficients")
        if isinstance(ref, str):
            ref_data = _read_json(str(Path(args.config).parent / ref))
        elif isinstance(ref, dict):
            ref_data = ref
        else:
            raise UsageError("config needs a 'coefficients' file reference or object")
        coeffs = invariants.coefficients_from_dict(ref_data, backend)
        rect = rect or tuple(cfg.get("window") or ()) or None
        fr = cfg.get("frame", "canonical")
        if fr != "canonical":
            frame = lattice.Frame.from_scalars(fr, backend)
    elif args.example:
        coeffs = synthesis.example_set(args.example, backend)
        rect = rect or synthesis.EXAMPLES[args.example][1]
    elif args.coeffs:
        coeffs = _load_coefficients(args, backend)
    else:
        raise UsageError("one of --example, --coeffs or --config is required")
    if rect is None:
        raise UsageError("--window is required")
    if args.frame:
        frame = lattice.Frame.from_scalars(args.frame, backend)
    if frame is None:
        frame = lattice.Frame.canonical(backend)
    try:
        w = synthesis.synthesize(coeffs, rect, frame)
    except IncompatibleField as exc:
        _report_incompatible(exc)
        raise
    _write(lattice.window_to_json(w), args.output)
    return EXIT_OK


def _report_incompatible(exc: IncompatibleField) -> None:
    for key, res in exc.residuals.items():
        if isinstance(res, compat.CompatResiduals):
            cells = ", ".join(f"{k}={v}" for k, v in res.to_dict().items())
            log.error("residuals at %s: %s", key, cells)
        else:
            log.error("%s: %s", key, ", ".join(str(format_scalar(x)) for x in res))


def cmd_extract(args) -> int:
    w = _load_lattice(args, _backend(args))
    _require_valid(w)
    f = invariants.extract_field(w)
    for msg in f.warnings:
        log.warning("%s", msg)
    _write(invariants.field_to_json(f), args.output)
    return EXIT_OK


def cmd_check_compat(args) -> int:
    backend = _backend(args)
    if args.coeffs:
        coeffs = _load_coefficients(args, backend)
    else:
        w = _load_lattice(args, backend)
        _require_valid(w)
        coeffs = invariants.extract_field(w)
    rows = []
    if isinstance(coeffs, invariants.CoefficientSet):
        sites = [(0, 0)]
    else:
        sites = compat.residual_sites(coeffs)
    ok = True
    for s in sites:
        res = compat.scalar_residuals(coeffs, s)
        mres = compat.matrix_residual(coeffs, s)
        good = res.compatible and res.nonzero() == [] and is_zero(mres, res.scale)
        ok = ok and good
        rows.append({"i": s[0], "j": s[1], **res.to_dict(),
                     "matrix_residual": format_scalar(mres), "compatible": good})
        if not good:
            log.error("site %s: %s nonzero", s, ", ".join(res.nonzero()) or "matrix residual")
    out = {"compatible": ok, "sites": rows}
    if isinstance(coeffs, invariants.CoefficientSet):
        out["affine_sphere"] = compat.is_affine_sphere(coeffs)
    _write(lattice.dumps(out), args.output)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_analyze(args) -> int:
    w = _load_lattice(args, _backend(args))
    _require_valid(w)
    report = analysis.analyze(w)
    _write(report.to_json(), args.output)
    if args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    line = report.summary_line() + "\n"
    if args.output in (None, "-"):
        sys.stderr.write(line)
    else:
        sys.stdout.write(line)
    return EXIT_OK


def cmd_export(args) -> int:
    w = _load_lattice(args, _backend(args))
    if args.format == "obj":
        text = mesh.to_obj(w, args.digits)
    else:
        text = mesh.to_off(w, args.digits if args.digits is not None else 17)
    _write(text, args.output)
    return EXIT_OK


def cmd_example(args) -> int:
    name = args.name or args.example
    if not name:
        raise UsageError("an example name is required")
    s = synthesis.example_set(name, _backend(args))
    out = {"name": name, "coefficients": s.to_dict(), "window": list(synthesis.EXAMPLES[name][1])}
    _write(lattice.dumps(out), args.output)
    return EXIT_OK


# -- wiring -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--backend", choices=[b.value for b in Backend], default=None,
                        help="scalar backend (default: $CALAT_BACKEND or exact)")
    common.add_argument("--tol", type=float, default=None, help="float zero tolerance")
    common.add_argument("--window", type=int, nargs=4, metavar=("IMIN", "IMAX", "JMIN", "JMAX"))
    common.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    src = _Parser(add_help=False)
    g = src.add_mutually_exclusive_group()
    g.add_argument("--coeffs", metavar="FILE")
    g.add_argument("--lattice", metavar="FILE")
    g.add_argument("--example", choices=list(synthesis.EXAMPLES))

    p = _Parser(prog="calat", description="Discrete centroaffine indefinite surfaces on Z^2 lattices.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", parents=[common, src], help="generate a lattice from coefficients")
    s.add_argument("--config", metavar="FILE", help="synthesis config JSON")
    s.add_argument("--frame", nargs=9, metavar="X", help="initial frame, column by column")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("extract", parents=[common, src], help="coefficient field of a lattice")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("check_compat", aliases=["check-compat"], parents=[common, src],
                       help="integrability residuals")
    s.set_defaults(func=cmd_check_compat)

    s = sub.add_parser("analyze", parents=[common, src], help="Laplacian, convexity and volumes")
    s.add_argument("--csv", metavar="FILE", help="also write a per-site CSV table")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("export", parents=[common, src], help="write an OBJ or OFF mesh")
    s.add_argument("--format", choices=["obj", "off"], default="obj")
    s.add_argument("--digits", type=int, default=None,
                   help="significant digits (OBJ default: shortest round trip; OFF default: 17)")
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("example", parents=[common, src], help="print a named coefficient set")
    s.add_argument("name", nargs="?", choices=list(synthesis.EXAMPLES))
    s.set_defaults(func=cmd_example)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    try:
        if args.tol is not None:
            set_tolerance(args.tol)
        return args.func(args)
    except (UsageError, InvalidWindow) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except (ValidationFailed, IncompatibleField, AssumptionViolated, MissingStencil) as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except (ZeroDenominator, SingularTransition, ZeroDivisionError) as exc:
        log.error("%s", exc)
        return EXIT_SINGULAR
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
