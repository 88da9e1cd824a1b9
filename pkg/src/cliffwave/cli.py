"""Command-line interface: ``cliffwave <subcommand> ...`` (also ``python -m cliffwave``).

Exit status: 0 on success, 1 on invalid input (arguments, files, configs),
2 when ``verify`` finds a failing check.
"""

from __future__ import annotations

import argparse
import ast
import operator
import sys
import warnings
from pathlib import Path

from . import fourier
from .algebra import Multivector, algebra, blade_name
from .config import ConfigError, RunConfig, load_config
from .corpus import NAMED as FIELD_NAMES
from .corpus import make_field
from .cwt import CWTGrid, cwt_analyze, default_threads, normalizer, reconstruct
from .fourier import cft_forward, cft_inverse
from .grid import GridMismatchError, GridSpec
from .io import FileFormatError, load_field, load_tensor, save_field, save_tensor
from .report import format_float, to_columns, to_csv, to_json, write_text
from .scales import parse_scale_spec
from .suite import SUITES, load_wavelet, run_verification_suite
from .uncertainty import fourier_uncertainty, lemma_check, wavelet_uncertainty
from .wavelets import BUILTIN, NotAdmissible, admissibility, wavelet_from_field

EXIT_OK, EXIT_INVALID, EXIT_CHECK_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default; 2 is reserved for failed checks
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# -- algebra expressions -----------------------------------------------------

_BINARY = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_FUNCS = {
    "rev": lambda a: a.reversion(),
    "conj": lambda a: a.conjugation(),
    "inv": lambda a: a.grade_involution(),
    "dag": lambda a: a.dagger(),
    "even": lambda a: a.even(),
    "odd": lambda a: a.odd(),
    "grade": lambda a, k: a.grade(int(k)),
    "mag": lambda a: a.magnitude(),
}


def _generator_word(name: str, n: int) -> Multivector:
    """``e1``, ``e12``, ``e21``: product of generators in the written order."""
    out = Multivector.scalar(n)
    for ch in name[1:]:
        k = int(ch)
        if not 1 <= k <= n:
            raise UsageError(f"{name}: generator e{k} does not exist for n={n}")
        out = out * Multivector.blade(n, 1 << (k - 1))
    return out


def evaluate_expression(text: str, n: int):
    """Evaluate an algebra expression such as ``rev(e1*e2 + 3) * e3``.

    Accepts numbers (``2``, ``1.5``, ``2j``), blades ``e<digits>``, the
    operators ``+ - * /`` and integer powers, and the functions
    rev, conj, inv, dag, even, odd, grade(x, k) and mag.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise UsageError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
            return node.value
        if isinstance(node, ast.Name):
            if node.id.startswith("e") and node.id[1:].isdigit():
                return _generator_word(node.id, n)
            raise UsageError(f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            value = ev(node.operand)
            return -value if isinstance(node.op, ast.USub) else value
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(right, int) and right >= 0):
                    raise UsageError("powers must be non-negative integers")
                out = Multivector.scalar(n)
                for _ in range(right):
                    out = out * left
                return out
            if type(node.op) not in _BINARY:
                raise UsageError(f"unsupported operator {type(node.op).__name__}")
            if isinstance(node.op, ast.Div) and isinstance(right, Multivector):
                raise UsageError("division is only defined by numbers")
            return _BINARY[type(node.op)](left, right)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS:
            args = [ev(a) for a in node.args]
            if not args or not isinstance(args[0], Multivector):
                args[0:1] = [Multivector.scalar(n, args[0] if args else 0)]
            return _FUNCS[node.func.id](*args)
        raise UsageError(f"unsupported syntax in {text!r}")

    return ev(tree)


def cmd_algebra(args) -> int:
    if args.table:
        alg = algebra(args.n)
        names = [blade_name(m) for m in range(alg.dim)]
        rows = []
        for a in range(alg.dim):
            cells = []
            for b in range(alg.dim):
                sign, mask = alg.signs[a, b], a ^ b
                cells.append(("-" if sign < 0 else "") + names[mask])
            rows.append(dict(zip(["*"] + names, [names[a]] + cells)))
        sys.stdout.write(to_csv(rows, ["*"] + names))
    for expr in args.expressions:
        value = evaluate_expression(expr, args.n)
        text = format_float(value) if isinstance(value, float) else str(value)
        print(f"{expr} = {text}")
    return EXIT_OK


# -- field commands ----------------------------------------------------------


def _shape(text: str, n: int) -> list[int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) == 1:
        parts *= n
    if len(parts) != n:
        raise UsageError(f"--shape needs 1 or {n} values, got {len(parts)}")
    if any(p < 3 or p % 2 == 0 for p in parts):
        raise UsageError(f"--shape values must be odd and at least 3, got {parts}")
    return parts


def _grid(args) -> GridSpec:
    shape = _shape(args.shape, args.n)
    h = [2 * args.span / (s - 1) for s in shape]
    return GridSpec(shape, h, [-args.span] * args.n)


def cmd_gen(args) -> int:
    grid = _grid(args)
    if args.wavelet:
        f = load_wavelet(args.wavelet, grid).field
    else:
        f = make_field(args.field, grid)
    save_field(args.out, f, as_json=args.json)
    print(f"wrote {args.out} (shape {list(grid.shape)}, n={grid.n})")
    return EXIT_OK


def cmd_cft(args) -> int:
    f = load_field(args.input)
    if args.inverse:
        if f.domain != "frequency":
            raise UsageError(f"{args.input} holds a space-domain field; drop --inverse")
        out = cft_inverse(f)
    else:
        if f.domain != "space":
            raise UsageError(f"{args.input} holds a frequency-domain field; use --inverse")
        out = cft_forward(f)
    save_field(args.out, out, as_json=args.json)
    print(f"wrote {args.out} ({out.domain} domain)")
    return EXIT_OK


def _wavelet_for(args, grid: GridSpec):
    name = args.wavelet
    if name == "file":
        if not args.wavelet_file:
            raise UsageError("--wavelet file needs --wavelet-file PATH")
        name = f"file:{args.wavelet_file}"
    return load_wavelet(name, grid)


def _cwt_grid(args, grid: GridSpec) -> CWTGrid:
    a_min, a_max, count = parse_scale_spec(args.scales)
    return CWTGrid.logarithmic(a_min, a_max, count, args.spins, grid)


def cmd_admissibility(args) -> int:
    if args.input:
        f = load_field(args.input)
        psi = wavelet_from_field(f, name=args.input)
    else:
        psi = load_wavelet(args.wavelet, _grid(args))
    report = admissibility(psi, pad=args.pad, strict=False)
    sys.stdout.write(to_json(report.to_dict()))
    profile = report.integrand_profile
    rows = [{"radius": r, "mean_density": d} for r, d in zip(profile["radius"], profile["mean_density"])]
    if args.profile:
        write_text(args.profile, to_csv(rows, ["radius", "mean_density"]))
        if args.emit_gnuplot_ready:
            write_text(Path(args.profile).with_suffix(".dat"), to_columns(rows, ["radius", "mean_density"]))
    return EXIT_OK if report.admissible else EXIT_CHECK_FAILED


def cmd_cwt(args) -> int:
    f = load_field(args.input)
    psi = _wavelet_for(args, f.grid)
    T = cwt_analyze(f, psi, _cwt_grid(args, f.grid), threads=args.threads)
    save_tensor(args.out, T)
    print(f"wrote {args.out} (coefficients {list(T.coefficients.shape)})")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    T = load_tensor(args.input)
    psi = _wavelet_for(args, T.grid.translations)
    Z = normalizer(psi)
    out = reconstruct(T, psi, Z)
    save_field(args.out, out, as_json=args.json)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_uncertainty(args) -> int:
    f = load_field(args.input)
    axes = [args.axis] if args.axis else list(range(1, f.n + 1))
    reports = {"fourier": [fourier_uncertainty(f, k).to_dict() for k in axes]}
    if args.wavelet:
        psi = _wavelet_for(args, f.grid)
        grid = _cwt_grid(args, f.grid)
        C = admissibility(psi).C_psi
        reports["wavelet"] = [wavelet_uncertainty(f, psi, grid, k, C_psi=C, threads=args.threads).to_dict() for k in axes]
        reports["lemma"] = []
        for k in axes:
            lhs, rhs, ratio = lemma_check(f, psi, grid, k, C_psi=C, threads=args.threads)
            reports["lemma"].append({"axis": k, "lhs": lhs, "rhs": rhs, "ratio": ratio})
    sys.stdout.write(to_json(reports))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = load_config(args.config) if args.config else RunConfig()
    suites = [args.suite]
    if args.target == "plancherel":
        suites = ["wavelet"]
    report = run_verification_suite(cfg, suites, threads=args.threads)
    paths = report.write(args.report_dir, gnuplot=args.emit_gnuplot_ready)
    counts = report.counts
    print(f"{counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped, {counts['error']} errors")
    for row in report.rows:
        if row.status in ("fail", "error"):
            where = " ".join(x for x in (row.wavelet, row.field, f"k={row.axis}" if row.axis else "") if x)
            print(f"  {row.status.upper()} {row.suite}/{row.check} {where}: {format_float(row.value)} {row.note}".rstrip())
    print("reports: " + ", ".join(str(p) for p in paths))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    # SUPPRESS keeps a value given before the subcommand from being reset by the subparser
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker cap (default: $CLIFFWAVE_THREADS or 1)")
    common.add_argument("--emit-gnuplot-ready", action="store_true", default=argparse.SUPPRESS, help="also write whitespace-separated .dat columns")

    parser = _Parser(prog="cliffwave", description="Clifford-algebra Fourier and wavelet transforms with numerical identity checks.", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def grid_options(p):
        p.add_argument("--n", type=int, default=2, help="dimension (default 2)")
        p.add_argument("--shape", default="65", help="points per axis, odd; one value or a comma list (default 65)")
        p.add_argument("--span", type=float, default=8.0, help="grid covers [-span, span] per axis (default 8)")

    def wavelet_options(p, required=True):
        p.add_argument("--wavelet", required=required, choices=["vector-gaussian", "mexican-hat", "file"])
        p.add_argument("--wavelet-file", help="CField file used when --wavelet file")
        p.add_argument("--scales", default="2^-3:2^3:32", help="min:max:count, log-spaced (default 2^-3:2^3:32)")
        p.add_argument("--spins", type=int, default=16, help="spin quadrature nodes (default 16)")

    p = sub.add_parser("algebra", parents=[common], help="evaluate Clifford algebra expressions")
    p.add_argument("expressions", nargs="*", help="e.g. 'e1*e2', 'rev(e12 + e3)', 'dag(2j*e1)'")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--table", action="store_true", help="print the blade multiplication table as CSV")
    p.set_defaults(func=cmd_algebra)

    p = sub.add_parser("gen", parents=[common], help="write a built-in wavelet or test field as a CField file")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--wavelet", choices=sorted(BUILTIN))
    which.add_argument("--field", choices=sorted(FIELD_NAMES))
    grid_options(p)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true", help="write the JSON variant")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cft", parents=[common], help="Clifford-Fourier transform of a CField file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cft)

    p = sub.add_parser("admissibility", parents=[common], help="admissibility report (JSON) and radial profile (CSV)")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--wavelet", choices=sorted(BUILTIN))
    which.add_argument("--in", dest="input", help="candidate mother wavelet as a CField file")
    grid_options(p)
    p.add_argument("--pad", type=int, default=4, help="zero-padding factor in frequency (default 4)")
    p.add_argument("--profile", help="write the radial integrand profile to this CSV file")
    p.set_defaults(func=cmd_admissibility)

    p = sub.add_parser("cwt", parents=[common], help="wavelet coefficients of a CField file")
    p.add_argument("--in", dest="input", required=True)
    wavelet_options(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cwt)

    p = sub.add_parser("reconstruct", parents=[common], help="synthesize a field from a CWTT file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--wavelet", required=True, choices=["vector-gaussian", "mexican-hat", "file"])
    p.add_argument("--wavelet-file")
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("uncertainty", parents=[common], help="Heisenberg-type ratios for a CField file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--axis", type=int, help="1-based axis (default: all)")
    wavelet_options(p, required=False)
    p.set_defaults(func=cmd_uncertainty)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("target", nargs="?", choices=["plancherel"], help="shorthand for --suite wavelet")
    p.add_argument("--suite", default="all", choices=list(SUITES) + ["all"])
    p.add_argument("--config", help="JSON run configuration (default: built-in reference settings)")
    p.add_argument("--report-dir", help="where to write <stem>.csv and <stem>.json")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.threads = getattr(args, "threads", None) or default_threads()
    args.emit_gnuplot_ready = getattr(args, "emit_gnuplot_ready", False)
    fourier.set_workers(args.threads)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except (UsageError, ConfigError, FileFormatError, GridMismatchError, NotAdmissible, ValueError, OSError) as exc:
        print(f"cliffwave {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    finally:
        fourier.set_workers(None)


if __name__ == "__main__":
    sys.exit(main())
