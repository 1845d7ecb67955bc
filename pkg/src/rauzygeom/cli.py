"""Command-line front-end: classification, rendering, matrices, and the
dynamics subcommands, with JSON/CSV/SVG file outputs.

Reports are plain dictionaries built in a fixed field order and serialized
without key sorting, so identical runs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .algebra import pisot_split
from .chains import Chain
from .dualmaps import exterior_matrices
from .dynamics import (
    chi_apply,
    coding_cross_check,
    exchange_orbit,
    first_return_check,
    modified_partition,
    strong_coincidence,
)
from .geometry import check_nice, make_patch, stepped_surface
from .projections import projections
from .substitution import (
    Substitution,
    format_substitution,
    is_primitive,
    parse_substitution,
)
from .svg import SvgScene, render_patch, type_colors

LEVEL_CAP = 14

EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_CHECK_FAILED = 2


def _thread_cap() -> int:
    """Worker-count cap from RAUZY_THREADS (also forwarded to BLAS pools)."""
    cap = os.environ.get("RAUZY_THREADS")
    if cap is None:
        return os.cpu_count() or 1
    try:
        n = max(1, int(cap))
    except ValueError:
        raise SystemExit("RAUZY_THREADS must be an integer")
    os.environ.setdefault("OMP_NUM_THREADS", str(n))
    os.environ.setdefault("OPENBLAS_NUM_THREADS", str(n))
    return n


def _load_sub(path: str) -> Substitution:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_substitution(fh.read())
    except OSError as exc:
        raise SystemExit(f"cannot read {path}: {exc}")
    except ValueError as exc:
        raise SystemExit(f"{path}: {exc}")


def _emit_report(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, default=_json_default) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not serializable: {type(obj)!r}")


def _fmt_poly(coeffs) -> str:
    """Integer polynomial (ascending coefficients) as a readable string."""
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            mag = {1: "", -1: "-"}.get(c, str(c))
            parts.append(f"{mag}x^{i}" if i > 1 else f"{mag}x")
    return " + ".join(reversed(parts)).replace("+ -", "- ") or "0"


# --- classify -----------------------------------------------------------------


def cmd_classify(args) -> int:
    sub = _load_sub(args.sub)
    pd = pisot_split(sub)
    verdict = check_nice(sub, pd)
    report = {
        "substitution": format_substitution(sub).strip().split("\n"),
        "primitive": bool(is_primitive(sub)),
        "pisot_factor": _fmt_poly(pd.f),
        "neutral_factor": _fmt_poly(pd.g),
        "degree": pd.d,
        "unit": bool(pd.is_unit),
        "reducible": bool(pd.is_reducible),
        "beta": pd.beta_float(),
        "hypotheses": {
            "N": verdict["N"],
            "P": verdict["P"],
            "S1": {
                "passed": verdict["S1"]["passed"],
                "witnesses": verdict["S1"]["witnesses"],
            },
            "S2": {
                "passed": verdict["S2"]["passed"],
                "radius": verdict["S2"].get("radius"),
                "pairs_checked": verdict["S2"]["pairs_checked"],
                "witnesses": verdict["S2"]["witnesses"],
            },
        },
        "nice": verdict["nice"],
    }
    _emit_report(report, args.report)
    return EXIT_PASS if verdict["nice"] else EXIT_CHECK_FAILED


# --- matrices -----------------------------------------------------------------


def _csv_matrix(name: str, mat) -> str:
    lines = [name]
    for row in np.asarray(mat):
        lines.append(",".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def cmd_matrices(args) -> int:
    sub = _load_sub(args.sub)
    k = args.exponent if args.exponent is not None else sub.n - 1
    if not 1 <= k <= sub.n:
        raise SystemExit(f"exponent must be in 1..{sub.n}")
    b_k, m_k_star, m_geom, nmat = exterior_matrices(sub, k)
    out = (
        _csv_matrix(f"B_{k}", b_k)
        + _csv_matrix(f"M_{k}_star", m_k_star)
        + _csv_matrix(f"M_{k}_geometric", m_geom)
    )
    if nmat is not None:
        out += _csv_matrix("N_conjugator", nmat)
    else:
        out += "N_conjugator\nnone\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_PASS


# --- render -------------------------------------------------------------------


def _parse_seed_faces(spec: str, n: int) -> Chain:
    """Seed syntax: semicolon-separated wedge types, letters space/``^``
    separated, all faces based at the origin, e.g. ``1^3;1^4;2^4``."""
    faces = []
    for part in spec.split(";"):
        part = part.strip().replace("^", " ")
        if not part:
            continue
        letters = tuple(int(tok) for tok in part.split())
        faces.append((1, (0,) * n, letters))
    if not faces:
        raise SystemExit("empty seed spec")
    return Chain.from_faces(n, len(faces[0][2]), faces)


def cmd_render(args) -> int:
    sub = _load_sub(args.sub)
    pd = pisot_split(sub)
    proj = projections(sub, pd)
    seed = _parse_seed_faces(args.faces, sub.n)
    exponent = args.exponent if args.exponent is not None else 5
    level = args.level or 0
    if level > LEVEL_CAP:
        raise SystemExit(f"level must be at most {LEVEL_CAP}")
    try:
        patch = stepped_surface(sub, proj, seed, exponent, args.iters)
    except (ValueError, ArithmeticError) as exc:
        _emit_report({"error": str(exc)}, args.report)
        return EXIT_CHECK_FAILED
    from .geometry import projects_well

    ok, witnesses = projects_well(proj, patch.chain)
    if level == 0:
        scene = render_patch(patch)
    else:
        from .fractal import rauzy_approx

        scene = SvgScene()
        tiles = {}
        wtypes = sorted({t for (_b, t), _c in patch.chain.items()})
        colors = type_colors(wtypes)
        for (base, wtype), _c in sorted(patch.chain.items()):
            if wtype not in tiles:
                tiles[wtype] = rauzy_approx(sub, proj, wtype, level)
            shift = proj.pi_c(np.array(base))
            for v in tiles[wtype].polygons:
                scene.add_polygon(v + shift, fill=colors[wtype])
    if args.svg:
        scene.write(args.svg)
    report = {
        "faces": len(patch.polygons),
        "exponent": exponent,
        "iterations": args.iters,
        "level": level,
        "projects_well": bool(ok),
        "overlap_witnesses": [
            [list(a), list(b), area] for a, b, area in witnesses
        ],
        "svg": args.svg,
    }
    _emit_report(report, args.report)
    return EXIT_PASS if ok else EXIT_CHECK_FAILED


# --- dynamics subcommands -----------------------------------------------------


def cmd_scc(args) -> int:
    sub = _load_sub(args.sub)
    proj = projections(sub, pisot_split(sub))
    table = strong_coincidence(sub, proj, depth_cap=args.iters or 20)
    lines = ["pair_a,pair_b,k"]
    for (atype, btype), k in sorted(table.pairs.items()):
        a = "^".join(map(str, atype))
        b = "^".join(map(str, btype))
        lines.append(f"{a},{b},{'undecided' if k is None else k}")
    out = "\n".join(lines) + "\n"
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return EXIT_PASS if table.passed else EXIT_CHECK_FAILED


def _family_partition(sub, proj, level):
    if sub.n != 5:
        raise SystemExit("this subcommand needs the five-letter family")
    return modified_partition(sub, proj, level)


def cmd_orbit(args) -> int:
    sub = _load_sub(args.sub)
    proj = projections(sub, pisot_split(sub))
    level = min(args.level or 12, LEVEL_CAP)
    partition = _family_partition(sub, proj, level)
    rng = np.random.default_rng(args.seed)
    # sample a start deep inside a random piece
    for _ in range(10_000):
        piece = partition[rng.integers(0, len(partition))]
        minx, miny, maxx, maxy = piece.region.bounds
        x = rng.uniform(minx, maxx), rng.uniform(miny, maxy)
        from shapely.geometry import Point

        if piece.signed_depth(Point(x)) > 0.05:
            break
    else:
        raise SystemExit("could not sample an interior start point")
    coding = exchange_orbit(np.array(x), args.iters or 200, partition)
    sys.stdout.write("".join(str(a) for a in coding.labels) + "\n")
    report = {
        "start": list(map(float, x)),
        "steps": len(coding.labels),
        "ambiguous_steps": list(coding.ambiguous_steps),
        "endpoint": [float(v) for v in coding.endpoint],
    }
    if args.report:
        _emit_report(report, args.report)
    return EXIT_PASS


def cmd_return(args) -> int:
    sub = _load_sub(args.sub)
    proj = projections(sub, pisot_split(sub))
    if sub.n != 5:
        raise SystemExit("this subcommand needs the five-letter family")
    samples = args.iters or 10_000
    result = first_return_check(
        sub, proj, samples=samples, cloud_size=800_000, seed=args.seed
    )
    report = {
        "samples": result["samples"],
        "verified": result["verified"],
        "fraction_verified": result["fraction_verified"],
        "ambiguous": len(result["ambiguous"]),
        "failures": result["failures"],
        "cloud_resolution": result["resolution"],
        "threshold": args.tol,
    }
    _emit_report(report, args.report)
    ok = result["fraction_verified"] >= args.tol and not result["failures"]
    return EXIT_PASS if ok else EXIT_CHECK_FAILED


def cmd_coding(args) -> int:
    sub = _load_sub(args.sub)
    proj = projections(sub, pisot_split(sub))
    level = min(args.level or 12, LEVEL_CAP)
    partition = _family_partition(sub, proj, level)
    n_symbols = args.n if args.n is not None else (args.iters or 10_000)
    result = coding_cross_check(sub, proj, partition, symbols=n_symbols)
    report = {
        "symbols": result["symbols"],
        "mismatches": result["mismatches"],
        "ambiguous": len(result["ambiguous_steps"]),
        "margin": result["margin"],
        "coding": "".join(str(a) for a in result["coding"][:200]),
        "expected": "".join(str(a) for a in result["expected"][:200]),
    }
    _emit_report(report, args.report)
    return EXIT_PASS if not result["mismatches"] else EXIT_CHECK_FAILED


# --- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rauzygeom",
        description="Geometry and dynamics of reducible Pisot substitutions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, svg=False, n=False):
        p.add_argument("--sub", required=True, help="substitution file")
        p.add_argument("--level", type=int, default=None, help="approximation level (<= 14)")
        p.add_argument("--exponent", type=int, default=None, help="dual-map exponent m")
        p.add_argument("--iters", type=int, default=None, help="iterations / samples / depth cap")
        p.add_argument("--radius", type=float, default=None, help="pair-enumeration radius override")
        p.add_argument("--seed", type=int, default=0, help="RNG master seed")
        p.add_argument("--report", default=None, help="JSON/CSV report path (default stdout)")
        p.add_argument("--tol", type=float, default=0.99, help="pass threshold where applicable")
        if svg:
            p.add_argument("--svg", default=None, help="SVG output path")
            p.add_argument(
                "--faces",
                default="1 3;1 4;2 4;2 5;3 5",
                help="seed faces at the origin, e.g. '1 3;1 4;2 4'",
            )
        if n:
            p.add_argument("--n", type=int, default=None, help="number of symbols")

    common(sub.add_parser("classify", help="Pisot split and the nice-substitution hypotheses"))
    common(sub.add_parser("matrices", help="dual-map abelianization matrices as CSV"))
    common(sub.add_parser("render", help="stepped-surface / fractal patch SVG"), svg=True)
    common(sub.add_parser("scc", help="strong coincidence table as CSV"))
    common(sub.add_parser("orbit", help="domain-exchange orbit coding"))
    common(sub.add_parser("return", help="first-return verification run"))
    common(sub.add_parser("coding", help="orbit coding against the morphism image"), n=True)
    return parser


COMMANDS = {
    "classify": cmd_classify,
    "matrices": cmd_matrices,
    "render": cmd_render,
    "scc": cmd_scc,
    "orbit": cmd_orbit,
    "return": cmd_return,
    "coding": cmd_coding,
}


def main(argv=None) -> int:
    _thread_cap()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return COMMANDS[args.command](args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            sys.stderr.write(exc.code + "\n")
            return EXIT_USAGE
        return exc.code if exc.code is not None else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
