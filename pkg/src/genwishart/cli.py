"""Command line front end.

Subcommands: sample | verify | zonal | charpoly | density.  Every output
starts with a config header (or embeds the config as a JSON object / XML
comment), so any file can be traced back to the exact invocation, and any
rerun with the same seed is byte-identical.

Exit codes: 0 success, 1 at least one check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import formulas, verify
from .ensembles import AlphaSpec, MBParams, mb_alpha
from .errors import DegeneracyError
from .linalg import Field, RngStream
from .symfunc import GammaSpec, partitions_of, zonal
from .verify import SamplerSpec

_EIG_COLUMNS = "rep,index,value"
_ENTRY_COLUMNS = "rep,i,j,re,im"


def _config_json(cfg: dict) -> str:
    return json.dumps(cfg, sort_keys=True, separators=(",", ":"))


def _fail_usage(message: str) -> "SystemExit":
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(2)


def _parse_floats(text: str, flag: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t != "")
    except ValueError:
        raise _fail_usage(f"{flag} expects a comma-separated list of numbers")
    if not vals:
        raise _fail_usage(f"{flag} must not be empty")
    return vals


def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    vals = _parse_floats(text, flag)
    if any(not float(v).is_integer() for v in vals):
        raise _fail_usage(f"{flag} expects integers")
    return tuple(int(v) for v in vals)


def _require_seed(args) -> int:
    if args.seed is None:
        raise _fail_usage("--seed is required for stochastic commands")
    if not 0 <= args.seed < 2**64:
        raise _fail_usage("--seed must fit in an unsigned 64-bit integer")
    return args.seed


def _resolve_alpha(args, need_rows: bool) -> AlphaSpec:
    """Shape parameters from --alpha or the (--mb-theta, --mb-c, --dim)
    profile; --rows upgrades to the ordered mode used by the patterned
    sampler."""
    has_mb = args.mb_theta is not None or args.mb_c is not None
    if has_mb:
        if args.alpha is not None:
            raise _fail_usage("give either --alpha or the --mb-theta/--mb-c profile")
        if args.mb_theta is None or args.mb_c is None or args.dim is None:
            raise _fail_usage("the profile form needs --mb-theta, --mb-c and --dim")
        spec = mb_alpha(MBParams(theta=args.mb_theta, c=args.mb_c, dim=args.dim))
        if need_rows and args.rows is not None:
            spec = AlphaSpec.ordered(tuple(int(a) for a in spec.alphas), n=args.rows)
        return spec
    if args.alpha is None:
        raise _fail_usage("--alpha (or --mb-theta/--mb-c with --dim) is required")
    vals = _parse_floats(args.alpha, "--alpha")
    if args.rows is not None:
        if any(not v.is_integer() for v in vals):
            raise _fail_usage("--rows implies ordered mode, which needs integer --alpha")
        return AlphaSpec.ordered(tuple(int(v) for v in vals), n=args.rows)
    if need_rows:
        raise _fail_usage("the patterned shape needs --rows (rectangular row count)")
    return AlphaSpec.general(vals)


def _field_of(args, default: str = "complex") -> Field:
    return Field.parse(args.field if args.field is not None else default)


def _open_out(path):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", newline="\n"), True


def _write_lines(path, lines) -> None:
    handle, owned = _open_out(path)
    try:
        for line in lines:
            handle.write(line)
            handle.write("\n")
    finally:
        if owned:
            handle.close()


# ---------------------------------------------------------------- sample


def cmd_sample(args) -> int:
    seed = _require_seed(args)
    patterned = args.shape == "patterned"
    try:
        alpha = _resolve_alpha(args, need_rows=patterned)
    except ValueError as exc:
        raise _fail_usage(str(exc))
    field = _field_of(args)
    reps = args.reps if args.reps is not None else 10
    if reps < 1:
        raise _fail_usage("--reps must be positive")

    cfg = {
        "command": "sample",
        "alpha": list(alpha.alphas),
        "field": field.value,
        "shape": args.shape,
        "what": args.what,
        "reps": reps,
        "seed": seed,
        "format": args.format,
    }
    if patterned:
        cfg["rows"] = alpha.n

    stream = RngStream(seed)
    spec = SamplerSpec(alpha, field, args.shape)
    rows: list[list] = []
    if args.what == "eigs":
        eigs = verify.sample_eigenvalues(spec, stream, reps)
        for r in range(reps):
            for k in range(alpha.dim):
                rows.append([r, k + 1, repr(float(eigs[r, k]))])
        columns = _EIG_COLUMNS
    else:
        w = spec.draw_gram(stream, reps)
        iu = np.triu_indices(alpha.dim)
        for r in range(reps):
            for i, j in zip(*iu):
                v = w[r, i, j]
                rows.append(
                    [r, int(i) + 1, int(j) + 1, repr(float(np.real(v))), repr(float(np.imag(v)))]
                )
        columns = _ENTRY_COLUMNS

    if args.format == "json":
        payload = {"config": cfg, "columns": columns.split(","), "rows": rows}
        _write_lines(args.out, [json.dumps(payload, sort_keys=True, separators=(",", ":"))])
    else:
        lines = [f"# config: {_config_json(cfg)}", columns]
        lines.extend(",".join(str(c) for c in row) for row in rows)
        _write_lines(args.out, lines)
    return 0


# ---------------------------------------------------------------- verify

_CHECK_NAMES = (
    "triangular_vs_patterned",
    "alpha_symmetry",
    "avg_charpoly",
    "fuss_catalan",
    "eig_pdf_small_n",
    "correlation",
    "constant_audit",
    "bordered",
    "gn_adjudication",
    "real_spherical",
    "tilde_reduction",
    "splitting",
)

_AUDIT_TARGETS = ("complex_eig", "real_eig", "complex_corr", "real_corr", "gn")


def _ensemble_from_flags(args):
    if args.gamma is not None:
        gam = _parse_ints(args.gamma, "--gamma")
        nvars = args.dim if args.dim is not None else len(gam)
        return GammaSpec(gam, nvars)
    if args.mb_theta is not None or args.mb_c is not None:
        if args.mb_theta is None or args.mb_c is None or args.dim is None:
            raise _fail_usage("the profile form needs --mb-theta, --mb-c and --dim")
        return MBParams(theta=args.mb_theta, c=args.mb_c, dim=args.dim)
    if args.alpha is not None:
        return AlphaSpec.general(_parse_floats(args.alpha, "--alpha"))
    return AlphaSpec.general((1.0, 0.0))


def _run_one_check(name: str, args, seed: int, reps: int | None, tol: float):
    """Each check owns a fixed substream index so a report does not depend
    on which other checks were selected."""
    stream = RngStream(seed).substream(_CHECK_NAMES.index(name))

    def r(default: int) -> int:
        return reps if reps is not None else default

    if name == "triangular_vs_patterned":
        if args.alpha is not None or args.rows is not None:
            alpha = _resolve_alpha(args, need_rows=True)
        else:
            alpha = AlphaSpec.ordered((0, 2), n=4)
        return verify.check_triangular_vs_patterned(
            alpha, _field_of(args, "real"), r(100_000), tol, stream
        )
    if name == "alpha_symmetry":
        a = _parse_floats(args.alpha, "--alpha") if args.alpha is not None else (0.0, 3.0)
        return verify.check_alpha_symmetry(
            AlphaSpec.general(a), _field_of(args), r(100_000), tol, stream
        )
    if name == "avg_charpoly":
        a = _parse_floats(args.alpha, "--alpha") if args.alpha is not None else (1.0, 0.0)
        return verify.check_avg_charpoly(
            AlphaSpec.general(a), _field_of(args), r(100_000), tol, stream
        )
    if name == "fuss_catalan":
        params = MBParams(
            theta=args.mb_theta if args.mb_theta is not None else 1.0,
            c=args.mb_c if args.mb_c is not None else 0.0,
            dim=args.dim if args.dim is not None else 50,
        )
        return verify.check_fuss_catalan(
            params, _field_of(args), r(200), k_max=3, tol_sigma=tol, stream=stream
        )
    if name == "eig_pdf_small_n":
        ensemble = _ensemble_from_flags(args)
        return verify.check_eig_pdf_small_n(
            ensemble, r(200_000), bins=args.bins or 20, stream=stream
        )
    if name == "correlation":
        a = _parse_floats(args.alpha, "--alpha") if args.alpha is not None else (1.0, 3.0)
        return verify.check_correlation(
            AlphaSpec.general(a), _field_of(args, "real"), r(100_000), tol, stream
        )
    if name == "bordered":
        return verify.check_bordered_identity(trials=r(100), stream=stream)
    if name == "gn_adjudication":
        return verify.check_gn_adjudication(reps=r(20_000), stream=stream, tol_sigma=tol)
    if name == "real_spherical":
        return verify.check_real_spherical(
            max_size=4, reps=r(20_000), stream=stream, tol_sigma=tol
        )
    if name == "tilde_reduction":
        if args.gamma is not None:
            gam = _parse_ints(args.gamma, "--gamma")
            g = GammaSpec(gam, args.dim if args.dim is not None else len(gam))
        else:
            g = GammaSpec((3, 1), 2)
        return verify.check_tilde_reduction(g, reps=r(50_000), stream=stream, tol_sigma=tol)
    if name == "splitting":
        kappa = _parse_ints(args.partition, "--partition") if args.partition else (2,)
        return verify.check_splitting_identity(
            kappa, (1.0, 2.0), (1.0, 3.0), _field_of(args, "real"), r(50_000), stream, tol
        )
    raise _fail_usage(f"unknown check {name!r}; known: {', '.join(_CHECK_NAMES)}")


def _run_audit_checks(args, seed: int, reps: int | None):
    stream = RngStream(seed).substream(_CHECK_NAMES.index("constant_audit"))
    targets = (args.target,) if args.target else _AUDIT_TARGETS
    out = []
    for i, target in enumerate(targets):
        out.append(
            verify.check_constant_audit(
                target, reps=reps if reps is not None else 200_000, stream=stream.substream(i)
            )
        )
    return out


def cmd_verify(args) -> int:
    seed = _require_seed(args)
    requested = args.check or "all"
    if requested == "all":
        names = list(_CHECK_NAMES)
    elif requested in _CHECK_NAMES:
        names = [requested]
    else:
        raise _fail_usage(
            f"unknown check {requested!r}; known: {', '.join(_CHECK_NAMES + ('all',))}"
        )
    if args.target and "constant_audit" not in names:
        raise _fail_usage("--target only applies to the constant_audit check")

    def run(name: str):
        if name == "constant_audit":
            return _run_audit_checks(args, seed, args.reps)
        return [_run_one_check(name, args, seed, args.reps, args.tol_sigma)]

    threads = args.threads or 1
    if threads > 1 and len(names) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            grouped = list(pool.map(run, names))
    else:
        grouped = [run(name) for name in names]
    reports = [rep for group in grouped for rep in group]

    cfg = {
        "command": "verify",
        "check": requested,
        "seed": seed,
        "tol_sigma": args.tol_sigma,
        "threads": threads,
    }
    lines = [json.dumps({"config": cfg}, sort_keys=True, separators=(",", ":"))]
    lines.extend(rep.to_json() for rep in reports)
    _write_lines(args.out, lines)

    failed = [rep.name for rep in reports if not rep.passed]
    if failed:
        print(f"FAILED: {', '.join(failed)}", file=sys.stderr)
        return 1
    print(f"all {len(reports)} checks passed", file=sys.stderr)
    return 0


# ---------------------------------------------------------------- zonal


def cmd_zonal(args) -> int:
    if not args.partition:
        raise _fail_usage("--partition is required")
    kappa = _parse_ints(args.partition, "--partition")
    nvars = args.dim if args.dim is not None else len(kappa)
    cap = args.max_degree
    if sum(kappa) > cap:
        raise _fail_usage(
            f"partition weight {sum(kappa)} exceeds the degree cap {cap}; "
            "raise --max-degree"
        )
    try:
        poly = zonal(kappa, nvars, max_degree=cap)
    except (ValueError, DegeneracyError) as exc:
        raise _fail_usage(str(exc))
    out = {}
    for mu in partitions_of(sum(kappa), max_len=nvars):
        coeff = poly.coeffs.get(mu)
        if coeff:
            key = "[" + ",".join(str(p) for p in mu) + "]"
            out[key] = str(coeff)
    _write_lines(args.out, [json.dumps(out, separators=(",", ":"))])
    return 0


# ---------------------------------------------------------------- charpoly


def cmd_charpoly(args) -> int:
    if args.alpha is None:
        raise _fail_usage("--alpha is required")
    try:
        coeffs = formulas.avg_charpoly(_parse_floats(args.alpha, "--alpha"))
    except ValueError as exc:
        raise _fail_usage(str(exc))
    rendered = [
        int(c) if isinstance(c, Fraction) and c.denominator == 1 else float(c)
        for c in coeffs
    ]
    _write_lines(args.out, [json.dumps(rendered)])
    return 0


# ---------------------------------------------------------------- density


def _mp_density(x: np.ndarray) -> np.ndarray:
    """Square-root law on (0, 4): the closed-form curve for theta = 1."""
    out = np.zeros_like(x)
    inside = (x > 0) & (x < 4.0)
    xi = x[inside]
    out[inside] = np.sqrt((4.0 - xi) / xi) / (2.0 * math.pi)
    return out


def cmd_density(args) -> int:
    seed = _require_seed(args)
    ensemble = _ensemble_from_flags(args)
    reps = args.reps if args.reps is not None else 200
    bins = args.bins if args.bins is not None else 50
    if reps < 2 or bins < 1:
        raise _fail_usage("--reps must be at least 2 and --bins positive")

    theta = None
    if isinstance(ensemble, MBParams):
        alpha = mb_alpha(ensemble)
        field = _field_of(args)
        theta = ensemble.theta
    elif isinstance(ensemble, GammaSpec):
        alpha = AlphaSpec.general(ensemble.alphas())
        field = Field.REAL
    else:
        alpha = ensemble
        field = _field_of(args)

    stream = RngStream(seed)
    eigs = verify.sample_eigenvalues(SamplerSpec(alpha, field), stream, reps)
    if theta is not None:
        values = (eigs / (alpha.dim * theta)) ** theta
    else:
        values = eigs
    values = values.ravel()

    cfg = {
        "command": "density",
        "alpha": list(alpha.alphas),
        "field": field.value,
        "reps": reps,
        "bins": bins,
        "seed": seed,
        "rescaled": theta is not None,
    }
    if theta is not None:
        cfg["theta"] = theta

    counts, edges = np.histogram(values, bins=bins)
    widths = np.diff(edges)
    dens = counts / (values.size * widths)
    centers = 0.5 * (edges[:-1] + edges[1:])
    lines = [f"# config: {_config_json(cfg)}", "x,log_density"]
    for c, d in zip(centers, dens):
        logd = math.log(d) if d > 0 else float("-inf")
        lines.append(f"{repr(float(c))},{repr(float(logd))}")
    _write_lines(args.out, lines)

    if args.svg:
        curve_x = curve_y = None
        if theta is not None and theta == 1.0 and getattr(ensemble, "c", None) == 0.0:
            curve_x = np.linspace(1e-3, 4.0, 400)
            curve_y = _mp_density(curve_x)
        _write_svg_histogram(args.svg, edges, dens, curve_x, curve_y, cfg)
    return 0


def _write_svg_histogram(path, edges, dens, curve_x, curve_y, cfg) -> None:
    """Minimal static SVG: histogram bars plus an optional curve overlay."""
    width, height, pad = 800.0, 500.0, 60.0
    x_lo, x_hi = float(edges[0]), float(edges[-1])
    y_hi = float(max(np.max(dens), np.max(curve_y) if curve_y is not None else 0.0, 1e-12))
    y_hi *= 1.08

    def sx(x):
        return pad + (x - x_lo) / (x_hi - x_lo) * (width - 2 * pad)

    def sy(y):
        return height - pad - y / y_hi * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {width:g} {height:g}">',
        f"<!-- config: {_config_json(cfg)} -->",
        f'<rect x="0" y="0" width="{width:g}" height="{height:g}" fill="white"/>',
    ]
    for i, d in enumerate(dens):
        x0, x1 = sx(float(edges[i])), sx(float(edges[i + 1]))
        y = sy(float(d))
        parts.append(
            f'<rect x="{x0:.3f}" y="{y:.3f}" width="{x1 - x0:.3f}" '
            f'height="{height - pad - y:.3f}" fill="#9ecae1" stroke="#3182bd" '
            'stroke-width="0.5"/>'
        )
    if curve_x is not None:
        pts = " ".join(
            f"{sx(float(x)):.3f},{sy(float(y)):.3f}" for x, y in zip(curve_x, curve_y)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="#de2d26" stroke-width="2"/>'
        )
    parts.append(
        f'<line x1="{pad:g}" y1="{height - pad:g}" x2="{width - pad:g}" '
        f'y2="{height - pad:g}" stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{pad:g}" y1="{pad:g}" x2="{pad:g}" y2="{height - pad:g}" '
        'stroke="black" stroke-width="1"/>'
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = x_lo + frac * (x_hi - x_lo)
        parts.append(
            f'<text x="{sx(xv):.1f}" y="{height - pad + 18:.1f}" font-size="12" '
            f'text-anchor="middle" font-family="sans-serif">{xv:.3g}</text>'
        )
        yv = frac * y_hi
        parts.append(
            f'<text x="{pad - 8:.1f}" y="{sy(yv) + 4:.1f}" font-size="12" '
            f'text-anchor="end" font-family="sans-serif">{yv:.3g}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")


# ---------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genwishart",
        description="Samplers, exact formulas and verification checks for "
        "structured Gram-matrix ensembles.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="master RNG seed (u64)")
        p.add_argument("--reps", type=int, default=None, help="number of repetitions")
        p.add_argument("--dim", type=int, default=None, help="matrix dimension N")
        p.add_argument("--rows", type=int, default=None, help="rectangular row count n")
        p.add_argument("--alpha", type=str, default=None, help="shape parameters a1,a2,...")
        p.add_argument(
            "--mb-theta", "--theta", dest="mb_theta", type=float, default=None,
            help="slope of the linear shape profile",
        )
        p.add_argument(
            "--mb-c", "--c", dest="mb_c", type=float, default=None,
            help="offset of the linear shape profile",
        )
        p.add_argument("--gamma", type=str, default=None, help="partition g1,g2,...")
        p.add_argument("--field", choices=("real", "complex"), default=None)
        p.add_argument("--tol-sigma", type=float, default=4.0)
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--bins", type=int, default=None)
        p.add_argument("--partition", type=str, default=None, help="partition k1,k2,...")

    p_sample = sub.add_parser("sample", help="draw Gram matrices or their spectra")
    common(p_sample)
    p_sample.add_argument("--shape", choices=("triangular", "patterned"), default="triangular")
    p_sample.add_argument("--what", choices=("eigs", "entries"), default="eigs")
    p_sample.set_defaults(func=cmd_sample)

    p_verify = sub.add_parser("verify", help="run named verification checks")
    common(p_verify)
    p_verify.add_argument("--check", type=str, default="all")
    p_verify.add_argument("--target", choices=_AUDIT_TARGETS, default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_zonal = sub.add_parser("zonal", help="exact monomial coefficients of a zonal polynomial")
    common(p_zonal)
    p_zonal.add_argument("--max-degree", type=int, default=12)
    p_zonal.set_defaults(func=cmd_zonal)

    p_charpoly = sub.add_parser("charpoly", help="averaged characteristic polynomial")
    common(p_charpoly)
    p_charpoly.set_defaults(func=cmd_charpoly)

    p_density = sub.add_parser("density", help="histogram of sampled spectra as CSV/SVG")
    common(p_density)
    p_density.add_argument("--svg", type=str, default=None, help="also write an SVG plot")
    p_density.set_defaults(func=cmd_density)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else 2
        return code
    except (ValueError, DegeneracyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
