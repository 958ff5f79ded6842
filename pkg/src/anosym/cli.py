"""Command-line entry point.

Subcommands: certify, limitset, classify, dod, reduce.  All outputs are
UTF-8 CSV with LF endings and a schema-version header; identical configs
and seeds produce byte-identical files.  This is the only module with I/O
side effects.

Config file schema (JSON):

    {
      "group": {"kind": "surface", "genus": 2}   (or {"kind": "free", "rank": k}),
      "construction": "hitchin" | "product" | "realified" | "custom",
      "n": 2,                      half-dimension of the target (hitchin)
      "epsilon": -1,               product form sign
      "factors": ["fuchsian", "trivial"],        product factors
      "matrices": ["gen1.mat", ...]              custom/realified generators
    }

Exit codes: 0 pass, 1 fail, 2 inconclusive, 64 bad configuration.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import anosov, cartan, dod, lagrangians, matrixio, reps, symplectic, words
from .errors import AnosymError, InconclusiveError
from .numerics import Tolerance

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_CONFIG = 0, 1, 2, 64


def load_config(path):
    with open(path) as fh:
        cfg = json.load(fh)
    if "group" not in cfg:
        raise ValueError("config needs a 'group' section")
    return cfg


def presentation_from_config(cfg):
    grp = cfg["group"]
    if grp["kind"] == "surface":
        return words.surface_group(int(grp["genus"]))
    if grp["kind"] == "free":
        return words.free_group(int(grp["rank"]))
    raise ValueError(f"unknown group kind {grp['kind']!r}")


def build_representation(cfg, tol):
    pres = presentation_from_config(cfg)
    construction = cfg.get("construction", "hitchin")
    n = int(cfg.get("n", 1))
    if construction == "hitchin":
        if pres.kind != "surface":
            raise ValueError("hitchin construction needs a surface group")
        return reps.build_hitchin_base(pres.genus, n, tol)
    if construction == "product":
        eps = int(cfg.get("epsilon", -1))
        factors = cfg.get("factors", ["fuchsian", "trivial"])
        built = []
        for f in factors:
            if f == "fuchsian":
                built.append(reps.fuchsian_representation(pres.genus, tol))
            elif f == "trivial":
                built.append(reps.trivial_rep(pres, symplectic.SymplecticSpace(n, "R")))
            elif f == "hitchin":
                built.append(reps.build_hitchin_base(pres.genus, n, tol))
            else:
                raise ValueError(f"unknown product factor {f!r}")
        if len(built) != 2:
            raise ValueError("product construction needs exactly two factors")
        return reps.product_rep(built[0], built[1], eps, tol)
    if construction in ("custom", "realified"):
        paths = cfg.get("matrices", [])
        if len(paths) != pres.n_generators:
            raise ValueError("need one matrix file per generator")
        mats, field = [], "R"
        for p in paths:
            M, f = matrixio.read_matrix_file(p)
            mats.append(M)
            field = "C" if f == "C" else field
        space = symplectic.SymplecticSpace(n, field)
        rep = reps.make_representation(pres, space, mats, lineage="custom", tol=tol)
        if construction == "realified":
            rep = reps.realify(rep, tol)
        return rep
    if construction == "complexified-hitchin":
        return reps.complexify_rep(reps.build_hitchin_base(pres.genus, n, tol), tol)
    raise ValueError(f"unknown construction {construction!r}")


def _tolerance(args):
    return Tolerance(rank_tol=args.tol, form_tol=args.tol)


def _word_text(word, pres):
    return words.format_word(word, pres)


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------

def cmd_certify(args):
    cfg = load_config(args.config)
    tol = _tolerance(args)
    rep = build_representation(cfg, tol)
    i = rep.space.n if args.i == "n" else int(args.i)
    L_max = args.Lmax
    scan = anosov.sphere_scan(rep, L_max, seed=args.seed, tol=tol)
    div = anosov.divergence_report(rep, i, L_max, scan=scan, seed=args.seed, tol=tol)
    qi = anosov.qi_embedding_check(rep, L_max, scan=scan, seed=args.seed, tol=tol)
    trans_verdict = dyn_verdict = "inconclusive"
    margin = float("nan")
    dyn_failures = -1
    sample_size = 0
    sample_note = ""
    try:
        sample = anosov.limit_sample(rep, i, min(L_max, 6), args.count,
                                     seed=args.seed, tol=tol)
        sample_size = len(sample)
        ta = anosov.transversality_audit(sample, tol)
        margin = ta.margin
        trans_verdict = "pass" if ta.passed else "fail"
        dyn = anosov.dynamics_preservation_check(rep, sample, n_tests=args.dyn_tests,
                                                 seed=args.seed, tol=tol)
        dyn_failures = dyn.failures
        dyn_verdict = "pass" if dyn.failures == 0 else "fail"
    except InconclusiveError as exc:
        sample_note = str(exc)
    if div.verdict == "fail":
        overall = "fail"
    elif div.verdict == "pass" and trans_verdict == "pass" and dyn_verdict == "pass":
        overall = "pass"
    else:
        overall = "inconclusive"

    os.makedirs(args.out, exist_ok=True)
    rows = []
    for k, L in enumerate(div.lengths):
        rows.append([L, div.counts[k], int(div.sampled[k]), div.minima[k], div.means[k]])
    matrixio.write_csv(os.path.join(args.out, "divergence.csv"), "divergence",
                       ["L", "count", "sampled", f"min_alpha_{i}", f"mean_alpha_{i}"], rows)
    witness_rows = []
    for L in div.lengths:
        st = scan.stats(L)
        for r, word in enumerate(st.argmin_words):
            if word is None:
                continue
            g = cartan.word_value(rep, word, tol)
            mu = cartan.cartan_projection(g, tol, warn=False)
            witness_rows.append(matrixio.cartan_csv_row(_word_text(word, rep.presentation), mu))
    matrixio.write_csv(os.path.join(args.out, "witnesses.csv"), "cartan",
                       ["word", "length",
                        *[f"lambda_{j+1}" for j in range(rep.space.n)],
                        *[f"alpha_{j+1}" for j in range(rep.space.n)]], witness_rows)
    report_lines = [
        f"representation: {rep.name}",
        f"index i: {i}   horizon L_max: {L_max}",
        f"divergence: {div.verdict} (slope {div.slope!r}, se {div.slope_se!r})",
        "  note: the two-sigma slope rule is a finite-horizon convention,",
        "  not a proof; 'inconclusive' is a first-class outcome.",
        f"transversality: {trans_verdict} (margin {margin!r}, sample {sample_size})",
        f"dynamics preservation: {dyn_verdict} (failures {dyn_failures})",
        f"QI embedding: {qi.verdict} (L {qi.L_fit!r}, l {qi.l_fit!r}, "
        f"window {qi.ratio_window!r})",
        f"overall: {overall}",
    ]
    if sample_note:
        report_lines.insert(5, f"sample: {sample_note}")
    with open(os.path.join(args.out, "report.txt"), "w", newline="\n") as fh:
        fh.write("\n".join(report_lines) + "\n")
    print("\n".join(report_lines))
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(overall, EXIT_INCONCLUSIVE)


# ---------------------------------------------------------------------------
# limitset
# ---------------------------------------------------------------------------

def _chart_coords(basis):
    """Fixed affine chart on projector coordinates: lines over a circle map
    to a circle, subspaces to a 2-d shadow of the projector."""
    P = basis @ basis.conj().T
    n = P.shape[0] // 2
    x = float(np.real(P[0, 0] - P[n, n]))
    y = float(np.real(P[0, n] + P[n, 0]))
    return x, y


def cmd_limitset(args):
    cfg = load_config(args.config)
    tol = _tolerance(args)
    rep = build_representation(cfg, tol)
    i = rep.space.n if args.i == "n" else int(args.i)
    header = ["word", "length"]
    dim = rep.space.dim
    for c in range(i):
        for r in range(dim):
            header.append(f"b{r}{c}")
    header += ["chart_x", "chart_y"]
    rows = []
    warn = ""
    if args.count > 0:
        try:
            sample = anosov.limit_sample(rep, i, args.Lmax, args.count,
                                         seed=args.seed, tol=tol)
        except InconclusiveError as exc:
            warn = f"# warning: {exc}"
            sample = None
        if sample is not None:
            for p in sample.points:
                word = p.boundary.element
                x, y = _chart_coords(p.subspace.basis)
                entries = [matrixio.format_scalar(v, rep.space.field)
                           for v in p.subspace.basis.T.reshape(-1)]
                rows.append([_word_text(word, rep.presentation), len(word),
                             *entries, x, y])
    os.makedirs(os.path.dirname(os.path.abspath(args.outfile)) or ".", exist_ok=True)
    matrixio.write_csv(args.outfile, "limitset", header, rows)
    if warn:
        with open(args.outfile, "a", newline="\n") as fh:
            fh.write(warn + "\n")
    if args.svg:
        _write_svg(args.svg, [(r[-2], r[-1]) for r in rows])
    print(f"wrote {len(rows)} limit points to {args.outfile}")
    return EXIT_PASS


def _write_svg(path, pts, size=480):
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        lo = min(min(xs), min(ys)) - 0.1
        hi = max(max(xs), max(ys)) + 0.1
        span = max(hi - lo, 1e-9)
        for x, y in pts:
            cx = (x - lo) / span * (size - 20) + 10
            cy = size - ((y - lo) / span * (size - 20) + 10)
            lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2" fill="#1f6feb"/>')
    lines.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def cmd_classify(args):
    tol = _tolerance(args)
    rows = []
    for path in args.input:
        try:
            W = matrixio.read_subspace_file(path)
            label = lagrangians.classify_lagrangian(W, tol)
            closure = ""
            if args.closure and label.i == 0:
                closure = " ".join(str(l) for l in lagrangians.stratum_closure(label.p, label.q))
            rows.append([path, str(label), closure])
        except AnosymError as exc:
            rows.append([path, "error", f"ill-conditioned: {exc}"])
    matrixio.write_csv(args.outfile, "classify", ["file", "label", "closure"], rows)
    for r in rows:
        print(",".join(str(x) for x in r))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# dod
# ---------------------------------------------------------------------------

def cmd_dod(args):
    cfg = load_config(args.config)
    tol = _tolerance(args)
    rep = build_representation(cfg, tol)
    i = rep.space.n if args.i == "n" else int(args.i)
    sample = anosov.limit_sample(rep, i, args.Lmax, args.count, seed=args.seed, tol=tol)
    rows = []
    if args.r0_audit:
        violations = dod.r0_inclusion_audit(rep, sample, args.audit_count,
                                            seed=args.seed, tol=tol)
        rows.append(["r0-audit", "violations", violations, "", len(sample)])
    for path in args.candidates or []:
        W = matrixio.read_subspace_file(path)
        verdict = dod.in_bad_set(W, sample, tol)
        note = "near-boundary" if verdict.near_boundary else ""
        rows.append([path, verdict.verdict, verdict.margin,
                     _word_text(verdict.witness, rep.presentation), verdict.sample_size])
        if args.witness and not verdict.inside:
            prop = dod.properness_witness(rep, W, sample, args.witness_length, tol=tol)
            rows.append([path, "properness-counts",
                         " ".join(f"{L}:{c}" for L, c in sorted(prop.counts_by_length.items())),
                         prop.note, prop.total])
    matrixio.write_csv(args.outfile, "dod",
                       ["candidate", "verdict", "margin", "witness", "sample_size"], rows)
    for r in rows:
        print(",".join(str(x) for x in r))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# reduce
# ---------------------------------------------------------------------------

def cmd_reduce(args):
    cfg = load_config(args.config)
    pres = presentation_from_config(cfg)
    for text in args.words:
        w = words.parse_word(text, pres)
        print(words.format_word(words.reduce(w, pres), pres))
    return EXIT_PASS


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="anosym",
                                description="numerical laboratory for symplectic "
                                            "Anosov representations")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--threads", type=int, default=os.cpu_count(),
                        help="parallelism cap (current build is vectorized "
                             "single-process; accepted for compatibility)")

    c = sub.add_parser("certify", help="run the Anosov certification battery")
    c.add_argument("--config", required=True)
    c.add_argument("--i", default="1", help="root index: 1..n or 'n'")
    c.add_argument("--Lmax", type=int, default=6)
    c.add_argument("--count", type=int, default=200, help="limit sample size")
    c.add_argument("--dyn-tests", type=int, default=50)
    c.add_argument("--out", default="certify-out")
    common(c)
    c.set_defaults(func=cmd_certify)

    l = sub.add_parser("limitset", help="sample the limit map to CSV (and SVG)")
    l.add_argument("--config", required=True)
    l.add_argument("--i", default="1")
    l.add_argument("--count", type=int, default=200)
    l.add_argument("--Lmax", type=int, default=6)
    l.add_argument("--svg", default=None)
    l.add_argument("--outfile", default="limitset.csv")
    common(l)
    l.set_defaults(func=cmd_limitset)

    k = sub.add_parser("classify", help="stratum labels for Lagrangian files")
    k.add_argument("--input", nargs="+", required=True)
    k.add_argument("--closure", action="store_true")
    k.add_argument("--outfile", default="classify.csv")
    common(k)
    k.set_defaults(func=cmd_classify)

    d = sub.add_parser("dod", help="domain-of-discontinuity membership queries")
    d.add_argument("--config", required=True)
    d.add_argument("--candidates", nargs="*")
    d.add_argument("--i", default="1")
    d.add_argument("--count", type=int, default=100)
    d.add_argument("--Lmax", type=int, default=5)
    d.add_argument("--r0-audit", action="store_true")
    d.add_argument("--audit-count", type=int, default=20)
    d.add_argument("--witness", action="store_true")
    d.add_argument("--witness-length", type=int, default=4)
    d.add_argument("--outfile", default="dod.csv")
    common(d)
    d.set_defaults(func=cmd_dod)

    r = sub.add_parser("reduce", help="free/Dehn reduce words")
    r.add_argument("--config", required=True)
    r.add_argument("words", nargs="+")
    common(r)
    r.set_defaults(func=cmd_reduce)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (AnosymError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
