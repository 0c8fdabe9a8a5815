"""Command line entry point: ``projconf <command> ...``.

Exit codes: 0 success (or equivalent), 1 malformed input, 2 inequivalent pair
or failed verification, 3 inconclusive equivalence check.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dilatation import (
    beltrami_constant_affine,
    beltrami_field,
    coefficients_from_matrix,
)
from .discrete import (
    EQUIVALENCE_TOL,
    INCONCLUSIVE_TOL,
    MeshPair,
    check_equivalence_cross_ratios,
    generate_moebius_pair,
    solve_scale_factors,
)
from .errors import ProjconfError
from .mesh_io import load_matrix, load_mesh, parse_matrix, save_mesh
from .plots import DEFAULT_LEVELS, plot_pencil
from .render import PiecewiseProjectiveMap, RasterJob, default_view, render_pullback, write_ppm
from .verify import SUITES, run_suite

EXIT_OK, EXIT_MALFORMED, EXIT_INEQUIVALENT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class MalformedInput(ProjconfError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _pair(c: complex) -> list[float]:
    return [float(np.real(c)), float(np.imag(c))]


def _reals(text: str, n: int, what: str) -> list[float]:
    parts = [p for p in text.replace(",", " ").split()]
    if len(parts) != n:
        raise MalformedInput(f"{what} needs {n} comma-separated numbers, got {text!r}")
    return [float(p) for p in parts]


def _matrix(values):
    if len(values) == 1 and Path(values[0]).is_file():
        return load_matrix(values[0])
    if len(values) == 1:
        values = values[0].replace(",", " ").split()
    return parse_matrix(values)


def cmd_analyze(args) -> int:
    m = _matrix(args.matrix)
    h = coefficients_from_matrix(m)
    report = {
        "matrix": m.matrix.tolist(),
        "coefficients": {k: _pair(getattr(h, k)) for k in ("a", "b", "c", "p", "q")},
        "affine": bool(h.is_affine),
    }
    if h.is_affine:
        report["mu_constant"] = _pair(beltrami_constant_affine(h))
    else:
        field = beltrami_field(h)
        report.update(
            alpha=_pair(field.alpha),
            beta=_pair(field.beta),
            gamma=_pair(field.gamma),
            limit_zero=_pair(field.z_zero),
            limit_inf=_pair(field.z_inf),
        )
    if args.svg:
        plot_pencil(m, args.k or DEFAULT_LEVELS, out=args.svg)
        report["svg"] = args.svg
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _combined_verdict(a: str, b: str) -> str:
    return a if a == b else "inconclusive"


def cmd_check(args) -> int:
    pair = MeshPair(load_mesh(args.src), load_mesh(args.dst))
    cross = check_equivalence_cross_ratios(pair, args.tol, max(args.tol, INCONCLUSIVE_TOL))
    _, residual = solve_scale_factors(pair)
    scale_verdict = (
        "equivalent" if residual <= args.tol
        else "inconclusive" if residual <= max(args.tol, INCONCLUSIVE_TOL) else "inequivalent"
    )
    verdict = _combined_verdict(cross["verdict"], scale_verdict)
    print(json.dumps({
        "cross_ratio_deviation": cross["max_deviation"],
        "worst_edge": cross["worst_edge"],
        "scale_factor_residual": residual,
        "cross_ratio_verdict": cross["verdict"],
        "scale_factor_verdict": scale_verdict,
        "verdict": verdict,
    }, indent=2))
    return {"equivalent": EXIT_OK, "inequivalent": EXIT_INEQUIVALENT}.get(verdict, EXIT_INCONCLUSIVE)


def _ppm(args) -> PiecewiseProjectiveMap:
    return PiecewiseProjectiveMap(MeshPair(load_mesh(args.src), load_mesh(args.dst)), args.t)


def cmd_map(args) -> int:
    x, y = _reals(args.point, 2, "--point")
    w = _ppm(args).evaluate(complex(x, y))
    print(f"{w.real!r} {w.imag!r}")
    return EXIT_OK


def cmd_render(args) -> int:
    ppm = _ppm(args)
    view = tuple(_reals(args.view, 4, "--view")) if args.view else default_view(ppm.pair.target)
    job = RasterJob(args.width, args.height, view, args.cell, args.ss)
    write_ppm(args.out, render_pullback(ppm, job))
    cont = ppm.continuity
    print(json.dumps({
        "out": args.out,
        "view": list(view),
        "continuity_discrepancy": cont["max_discrepancy"],
        "continuous": cont["continuous"],
    }, indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_suite(args.suite, args.seed, args.n_samples)
    print(json.dumps(report, indent=2))
    return EXIT_OK if report["passed"] else EXIT_INEQUIVALENT


def _complex(text: str) -> complex:
    return complex(text.strip().replace(" ", "").replace("i", "j"))


def cmd_generate(args) -> int:
    params = [_complex(p) for p in args.moebius.split(",")]
    if len(params) != 4:
        raise MalformedInput("--moebius needs four complex numbers a,b,c,d")
    pair = generate_moebius_pair(load_mesh(args.src), params)
    save_mesh(pair.target, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="projconf", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="coefficients, Beltrami field and pencil plot of a projective map")
    p.add_argument("--matrix", nargs="+", required=True, help="9 row-major reals or a matrix file")
    p.add_argument("--svg", help="write the contour pencil as SVG")
    p.add_argument("--k", type=float, nargs="+", help="contour levels of |mu|")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("check", help="discrete conformal equivalence of two meshes")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--tol", type=float, default=EQUIVALENCE_TOL)
    p.set_defaults(func=cmd_check)

    for name, helptext in (("map", "image of a point under the interpolation"),
                           ("render", "checkerboard pullback as PPM")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--src", required=True)
        p.add_argument("--dst", required=True)
        p.add_argument("--t", type=float, required=True, help="exponent of the preserved center")
        if name == "map":
            p.add_argument("--point", required=True, help="x,y")
            p.set_defaults(func=cmd_map)
        else:
            p.add_argument("--out", required=True)
            p.add_argument("--width", type=int, required=True)
            p.add_argument("--height", type=int, required=True)
            p.add_argument("--cell", type=float, required=True, help="checker cell size in source units")
            p.add_argument("--view", help="x0,y0,x1,y1 in target coordinates")
            p.add_argument("--ss", type=int, default=1, help="n x n supersampling")
            p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="run the seeded numerical checks, print a JSON report")
    p.add_argument("--suite", choices=["all", *SUITES], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-samples", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("generate", help="Moebius image of a mesh")
    p.add_argument("--src", required=True)
    p.add_argument("--moebius", required=True, help="a,b,c,d complex, e.g. 1,0.1j,0.3+0.2j,1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProjconfError, ValueError, KeyError, OSError) as exc:
        print(f"projconf {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
