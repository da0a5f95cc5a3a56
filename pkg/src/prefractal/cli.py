"""Batch command-line front end.

Every command validates its parameters, dispatches to the library, and
writes one artifact (JSON, CSV, or SVG) either to --out or stdout. The
determinism contract: identical configs and seeds give byte-identical
output, so JSON is dumped with sorted keys and no timestamps ever enter
a file. Exit codes: 0 success, 2 validation error, 3 non-convergence;
failures print a machine-readable JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .gasket import build_gasket, complex_to_dict
from .harmonic import build_harmonic_gasket, derive_subdivision_rule
from .metric import (FiniteMetricSpace, certify_vertex_agreement,
                     gasket_metric_graph, gh_upper_bound)
from .modes import covariant_reach_witness
from .spectrum import SpectrumSpec, dimension_fit, enumerate_eigenvalues
from .svg import gasket_svg, line_plot, plane_coords
from .transport import DiscreteMeasure, certify_extent, kantorovich

SCHEMA_VERSION = 1
CACHE_ENV = "PREFRACTAL_CACHE"


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _json_text(command: str, config: dict, body: dict) -> str:
    payload = {
        "schemaVersion": SCHEMA_VERSION,
        "version": __version__,
        "command": command,
        "config": config,
    }
    payload.update(body)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    if any(c in text for c in ".eE"):
        return Fraction(repr(float(text)))
    return Fraction(int(text))


def _parse_measure(text: str) -> DiscreteMeasure:
    """Comma list of index:weight pairs, weights as fractions or floats."""
    entries = []
    for chunk in text.split(","):
        if ":" not in chunk:
            raise ValueError("measure entry %r is not index:weight" % chunk)
        idx, w = chunk.split(":", 1)
        entries.append((int(idx), _parse_fraction(w)))
    return DiscreteMeasure(entries)


def _config_echo(args, keys) -> dict:
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def _cached_metric_space(level: int) -> FiniteMetricSpace:
    """Vertex metric space of (V_level, d_level), cached under $PREFRACTAL_CACHE."""
    cache_dir = os.environ.get(CACHE_ENV)
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, "sg-metric-level%d.json" % level)
        if os.path.exists(path):
            with open(path) as fh:
                return FiniteMetricSpace.from_dict(json.load(fh))
    cx = build_gasket(level)
    space = FiniteMetricSpace.from_graph(gasket_metric_graph(cx, level),
                                         validate=False)
    if path is not None:
        os.makedirs(cache_dir, exist_ok=True)
        with open(path, "w") as fh:
            json.dump(space.to_dict(), fh, sort_keys=True)
    return space


# -- commands --------------------------------------------------------------


def cmd_gen(args) -> str:
    config = _config_echo(args, ("geometry", "level", "tol", "format"))
    if args.geometry == "sg":
        cx = build_gasket(args.level)
        if args.format == "svg":
            return gasket_svg(cx, args.level)
        return _json_text("gen", config, {"complex": complex_to_dict(cx)})
    hg = build_harmonic_gasket(args.level, tol=args.tol)
    if args.format == "svg":
        coords = plane_coords(hg.table.embedding_array())
        return gasket_svg(hg.cx, args.level, coords=coords)
    rule = derive_subdivision_rule()
    body = {
        "complex": complex_to_dict(hg.cx),
        "subdivision": {"adjacent": rule.adjacent, "opposite": rule.opposite,
                        "denominator": rule.den},
        "lengths": hg.length_table(),
        "quadrature": {"tol": hg.tol, "depthCap": hg.cap,
                       "unconverged": hg.unconverged()},
    }
    if args.strict and hg.unconverged():
        raise RuntimeError(
            "harmonic quadrature hit the depth cap on %d curves before "
            "reaching tol=%g" % (len(hg.unconverged()), args.tol))
    return _json_text("gen", config, body)


def cmd_gh_table(args) -> str:
    if args.m < args.max_level:
        raise ValueError("--m must be at least --max-level")
    config = _config_echo(args, ("max_level", "m", "samples", "format"))
    cx = build_gasket(args.m)
    g_m = gasket_metric_graph(cx, args.m)
    rows = []
    for n in range(args.max_level + 1):
        rep = gh_upper_bound(n, args.m, samples_per_curve=args.samples, cx=cx)
        agree = certify_vertex_agreement(n, args.m, gasket_metric_graph(cx, n),
                                         g_m, workers=args.workers)
        rows.append((n, args.m, float(rep.bound), float(rep.bound_with_slack),
                     float(rep.paper_bound) + float(rep.tail),
                     float(agree.max_discrepancy)))
    header = ("n", "m", "bound", "boundWithSlack", "referenceBound",
              "agreementDiscrepancy")
    if args.format == "svg":
        certified = [(r[0], r[2]) for r in rows]
        reference = [(r[0], r[4]) for r in rows]
        return line_plot([("certified bound", certified),
                          ("reference 2^(1-n)+2^-m", reference)],
                         "level n", "bound", log_y=True,
                         title="two-scale convergence")
    if args.format == "json":
        return _json_text("gh-table", config,
                          {"header": list(header),
                           "rows": [list(r) for r in rows]})
    return _csv_text(header, rows)


def cmd_spectrum(args) -> str:
    spec = _spectrum_spec(args)
    enum = enumerate_eigenvalues(spec, args.cutoff)
    config = _config_echo(args, ("geometry", "level", "infinite", "cutoff", "format"))
    if args.format == "csv":
        return _csv_text(("value", "multiplicity"),
                         zip(enum.values.tolist(), enum.multiplicities.tolist()))
    return _json_text("spectrum", config, {
        "label": spec.label,
        "cutoff": float(args.cutoff),
        "total": enum.total,
        "values": enum.values.tolist(),
        "multiplicities": enum.multiplicities.tolist(),
    })


def _spectrum_spec(args) -> SpectrumSpec:
    if getattr(args, "infinite", False):
        return SpectrumSpec.gasket_limit()
    if args.level is None:
        raise ValueError("need --level or --infinite")
    return SpectrumSpec.gasket(args.level)


def cmd_dimension(args) -> str:
    spec = _spectrum_spec(args)
    fit = dimension_fit(spec, args.lambda_min, args.lambda_max,
                        grid_size=args.grid)
    config = _config_echo(args, ("geometry", "level", "infinite", "lambda_min",
                                 "lambda_max", "grid", "format"))
    if args.format == "svg":
        pts = list(zip(fit.grid.tolist(), [max(c, 1) for c in fit.counts.tolist()]))
        return line_plot([("mode counts", pts)], "cutoff", "count",
                         log_x=True, log_y=True,
                         title="counting function, slope %.4f" % fit.slope)
    return _json_text("dimension", config, {"fit": fit.to_dict()})


def cmd_kantorovich(args) -> str:
    space = _cached_metric_space(args.level)
    mu = _parse_measure(args.mu)
    nu = _parse_measure(args.nu)
    res = kantorovich(space, mu, nu)
    config = _config_echo(args, ("level", "mu", "nu"))
    return _json_text("kantorovich", config, {"transport": res.to_dict()})


def cmd_extent(args) -> str:
    alpha = None if args.alpha == "auto" else _parse_fraction(args.alpha)
    rep = certify_extent(args.n, args.m, alpha=alpha,
                         samples_per_curve=args.samples,
                         mixture_trials=args.trials, seed=args.seed)
    config = _config_echo(args, ("n", "m", "alpha", "samples", "trials", "seed",
                                 "format"))
    if args.format == "json":
        return _json_text("extent", config, {"report": rep.as_floats()})
    header = ("n", "m", "alpha", "epsilon", "bound", "empiricalMax")
    return _csv_text(header, [rep.to_row()])


def cmd_covariant(args) -> str:
    rep = covariant_reach_witness(args.n, args.epsilon, args.trials,
                                  seed=args.seed)
    config = _config_echo(args, ("n", "epsilon", "trials", "seed"))
    return _json_text("covariant", config, {"report": rep.to_dict()})


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prefractal",
        description="prefractal gasket geometry, spectra, and transport tables")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json",)):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                       help="worker processes for parallel stages")
        p.add_argument("--seed", type=int, default=0)
        if fmt:
            p.add_argument("--format", choices=fmt, default=fmt[0])

    p = sub.add_parser("gen", help="write a prefractal complex")
    p.add_argument("--geometry", choices=("sg", "harmonic"), default="sg")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="harmonic length quadrature tolerance")
    p.add_argument("--strict", action="store_true",
                   help="fail (exit 3) if any harmonic length hit the depth cap")
    common(p, fmt=("json", "svg"))
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("gh-table", help="two-scale convergence bounds per level")
    p.add_argument("--max-level", type=int, default=6)
    p.add_argument("--m", type=int, default=9, help="fine comparison level")
    p.add_argument("--samples", type=int, default=3, help="on-edge samples per curve")
    common(p, fmt=("csv", "json", "svg"))
    p.set_defaults(func=cmd_gh_table)

    p = sub.add_parser("spectrum", help="enumerate eigenvalues up to a cutoff")
    p.add_argument("--geometry", choices=("sg",), default="sg")
    p.add_argument("--level", type=int)
    p.add_argument("--infinite", action="store_true",
                   help="use the full scale-limit length sequence")
    p.add_argument("--cutoff", type=float, required=True)
    common(p, fmt=("json", "csv"))
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("dimension", help="log-log slope of the counting function")
    p.add_argument("--geometry", choices=("sg",), default="sg")
    p.add_argument("--level", type=int)
    p.add_argument("--infinite", action="store_true", default=None)
    p.add_argument("--lambda-min", type=float, required=True, dest="lambda_min")
    p.add_argument("--lambda-max", type=float, required=True, dest="lambda_max")
    p.add_argument("--grid", type=int, default=40)
    common(p, fmt=("json", "svg"))
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("kantorovich", help="transport distance between measures on V_n")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--mu", required=True, help="index:weight[,index:weight...]")
    p.add_argument("--nu", required=True)
    common(p, fmt=None)
    p.set_defaults(func=cmd_kantorovich)

    p = sub.add_parser("extent", help="certified two-scale Dirac bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", default="auto",
                   help="cross-edge weight; 'auto' picks epsilon/4")
    p.add_argument("--samples", type=int, default=3)
    p.add_argument("--trials", type=int, default=5, help="mixture spot-checks")
    common(p, fmt=("csv", "json"))
    p.set_defaults(func=cmd_extent)

    p = sub.add_parser("covariant", help="projection reach under time evolution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--trials", type=int, default=100)
    common(p, fmt=None)
    p.set_defaults(func=cmd_covariant)
    return parser


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps(
        {"error": kind, "exitCode": code, "message": message},
        sort_keys=True) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except (ValueError, KeyError) as exc:
        return _fail(2, "validation", str(exc))
    except RuntimeError as exc:
        return _fail(3, "non-convergence", str(exc))
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
