"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 inconclusive or insufficient data.
Verdict citations go to stderr, one line per rule.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .catalog import (NAMED, SL3_WHICH, build, catalog_labels, exemplar, EXEMPLAR_LABELS,
                      DeformationMatrix)
from .classify import (INCONCLUSIVE, classify_type, ck_verdict, su_conjugacy,
                       su_conjugacy_search)
from .errors import CartanLabError, InsufficientData, NoPrediction, UnknownLabel
from .growth import fit_window, predicted_window, sample_orbit
from .io import ParseError, dumps, load_json, load_subalgebra, matrix_from_json, subalgebra_to_json
from .properness import (REDUCTIVE_WINDOWS, appendix_constant, cone_separation, ideal_slope,
                         proper_pair_predicted, reductive_sample, sl3_bplus_crossing)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 2, 3


def _default_seed() -> int:
    raw = os.environ.get("CARTANLAB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"CARTANLAB_SEED must be an integer, got {raw!r}") from None


def _emit(obj, out: str | None) -> None:
    text = dumps(obj) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cite(prefix: str, tags) -> None:
    for tag in tags:
        print(f"citation: {prefix}: {tag}", file=sys.stderr)


def _subalgebra(spec: str, n: int | None):
    """A file path, or a catalog label (optionally label@n)."""
    if os.path.exists(spec):
        return load_subalgebra(spec)
    label, _, tail = spec.partition("@")
    if tail:
        try:
            n = int(tail)
        except ValueError:
            raise ParseError(f"bad dimension in {spec!r}") from None
    return build(label, n)


# ---------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    if args.action == "list":
        labels = catalog_labels(args.n) + list(SL3_WHICH)
        for lab in labels:
            desc = NAMED.get(lab, "exemplar" if lab in EXEMPLAR_LABELS else "sl(3,R) subgroup")
            print(f"{lab}\t{desc}")
        return EXIT_OK
    if not args.label:
        raise ParseError("catalog emit needs --label")
    params = json.loads(args.params) if args.params else None
    if args.label in EXEMPLAR_LABELS:
        h = exemplar(args.label, args.n, params)
    else:
        h = build(args.label, args.n, params)
    _emit(subalgebra_to_json(h), args.out)
    return EXIT_OK


def _report(h, assume: bool) -> tuple[dict, str]:
    report: dict = {"version": __version__, "label": h.label, "dim": h.dim, "n": h.n}
    if h.in_an:
        tv = classify_type(h)
        report["type"] = tv.to_json()
        try:
            report["window"] = predicted_window(tv).to_json()
        except NoPrediction as exc:
            report["window"] = None
            report["window_note"] = str(exc)
    else:
        report["type"] = None
        report["window"] = None
    v = ck_verdict(h, assume_su_conjecture=assume)
    report["verdict"] = v.to_json()
    return report, v


def cmd_classify(args) -> int:
    h = _subalgebra(args.input, args.n)
    report, v = _report(h, args.assume_su_conjecture)
    _emit(report, args.out)
    _cite(v.verdict, v.justification)
    return EXIT_INCONCLUSIVE if v.verdict == INCONCLUSIVE else EXIT_OK


def cmd_mu(args) -> int:
    h = _subalgebra(args.input, args.n)
    seed = _default_seed() if args.seed is None else args.seed
    grid = np.geomspace(1.0, args.t_max, args.steps)
    sample = sample_orbit(h, grid, n_dirs=args.samples, seed=seed)
    result = {"version": __version__, "label": h.label, "seed": seed, "t_max": args.t_max,
              "steps": args.steps, "samples": args.samples}
    try:
        result["window"] = fit_window(sample, t_min=args.t_min).to_json()
    except InsufficientData as exc:
        result["window"] = None
        result["error"] = str(exc)
    csv_text = sample.to_csv()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(csv_text)
        sys.stdout.write(dumps(result) + "\n")
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(dumps(result) + "\n")
    return EXIT_INCONCLUSIVE if result["window"] is None else EXIT_OK


def _side(spec: str, n: int, seed: int):
    """(window or None, sample) for a properness argument."""
    if spec in REDUCTIVE_WINDOWS:
        return REDUCTIVE_WINDOWS[spec], reductive_sample(spec, n, seed=seed)
    h = _subalgebra(spec, n)
    try:
        w = predicted_window(classify_type(h)) if h.in_an else None
    except NoPrediction:
        w = None
    return w, sample_orbit(h, seed=seed)


def cmd_proper(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    wl, sl = _side(args.left, args.n, seed)
    wr, sr = _side(args.right, args.n, seed)
    if wl is None or wr is None:
        predicted, ideal = "unknown", None
    else:
        predicted, ideal = proper_pair_predicted(wl, wr), ideal_slope(wl, wr)
    radii = [float(r) for r in args.radius.split(",")] if args.radius else None
    rep = cone_separation(sl, sr, radii, predicted=predicted, ideal=ideal)
    out = rep.to_json()
    out.update(left=args.left, right=args.right, version=__version__)
    _emit(out, args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(rep.to_csv())
    _cite(f"predicted {predicted}", ["Thm 3.9", "Remark H'<CHC"])
    return EXIT_INCONCLUSIVE if rep.empirical == "unknown" else EXIT_OK


def cmd_conjsu(args) -> int:
    rows = load_json(args.matrix)
    M = matrix_from_json(rows)
    # JSON floats are measured data: judge them with tolerance, not exactly.
    floats = any(isinstance(e, float) for r in rows for e in r)
    d = su_conjugacy(np.array(M.evalf().tolist(), dtype=float) if floats
                     else DeformationMatrix(M, validate=False))
    out = d.to_json()
    if args.oracle:
        found, resid = su_conjugacy_search(M, seed=_default_seed())
        out["oracle"] = {"found": found, "residual": resid}
    _emit(out, args.out)
    _cite(out["decision"], ["Thm 1.5(3)"])
    return EXIT_OK


def cmd_sl3(args) -> int:
    if args.action == "bplus-cross":
        h = build(args.which)
        res = sl3_bplus_crossing(h, t_max=args.t_max, steps=args.steps)
        out = res.to_json()
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                fh.write(res.to_csv())
        _emit(out, args.out)
        _cite("B+ crossing", ["Prop SL3-B+"])
        return EXIT_OK
    seed = _default_seed() if args.seed is None else args.seed
    runs = [appendix_constant(args.samples, s, seed).to_json() for s in args.g_scale]
    _emit({"version": __version__, "runs": runs}, args.out)
    _cite("perturbation constant", ["Prop A.2"])
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cartanlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list or emit catalog subalgebras")
    c.add_argument("action", choices=["list", "emit"])
    c.add_argument("--label")
    c.add_argument("--n", type=int, default=4)
    c.add_argument("--params", help="JSON object of exemplar parameters")
    c.add_argument("--out")
    c.set_defaults(func=cmd_catalog)

    c = sub.add_parser("classify", help="type, growth window and compact-form verdict")
    c.add_argument("input", help="SubalgebraFile path or catalog label[@n]")
    c.add_argument("--n", type=int)
    c.add_argument("--assume-su-conjecture", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("mu", help="sample mu along the subgroup and fit its window")
    c.add_argument("input")
    c.add_argument("--n", type=int)
    c.add_argument("--t-max", type=float, default=24.0)
    c.add_argument("--steps", type=int, default=40)
    c.add_argument("--t-min", type=float, default=4.0)
    c.add_argument("--samples", type=int, default=8, help="random directions")
    c.add_argument("--seed", type=int)
    c.add_argument("--out", help="CSV path (JSON then goes to stdout)")
    c.set_defaults(func=cmd_mu)

    c = sub.add_parser("proper", help="predicted and empirical properness of a pair")
    c.add_argument("--left", required=True, help="SO(1,n), SU(1,m), a label or a file")
    c.add_argument("--right", required=True)
    c.add_argument("--n", type=int, default=4)
    c.add_argument("--radius", help="comma separated annulus radii")
    c.add_argument("--seed", type=int)
    c.add_argument("--csv", help="per-annulus distances")
    c.add_argument("--out")
    c.set_defaults(func=cmd_proper)

    c = sub.add_parser("conjsu", help="is B orthogonally conjugate to SU block form")
    c.add_argument("--matrix", required=True, help="JSON file with a list of rows")
    c.add_argument("--oracle", action="store_true", help="also run the numerical search")
    c.add_argument("--out")
    c.set_defaults(func=cmd_conjsu)

    c = sub.add_parser("sl3", help="SL(3,R) B+ crossing and mu perturbation")
    c.add_argument("action", choices=["bplus-cross", "mu-perturb"])
    c.add_argument("--which", default="sl2-top-left")
    c.add_argument("--t-max", type=float, default=10.0)
    c.add_argument("--steps", type=int, default=20)
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--g-scale", type=float, nargs="+", default=[1e2, 1e4, 1e6])
    c.add_argument("--seed", type=int)
    c.add_argument("--csv")
    c.add_argument("--out")
    c.set_defaults(func=cmd_sl3)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InsufficientData as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (CartanLabError, json.JSONDecodeError) as exc:
        code = getattr(exc, "code", "parse-error")
        print(f"error: {code}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
