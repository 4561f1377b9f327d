"""coxlab command line.

Exit codes: 0 analysis done (and certificate passes), 1 certificate
fails, 2 usage or input error, 3 I/O error.
"""
import argparse
import csv
import io
import itertools
import json
import os
import sys

from . import catalog, certify, orbit, tits
from .classify import Kind, classify_irreducible, moussong
from .diagram import (INF, DiagramError, cosine_matrix, lambda_cosine_matrix, parse, serialize,
                      to_dot)
from .exactla import determinant, inertia
from .nerve import join_sphere_certificate, nerve
from .scalar import expression, to_float


class UsageError(Exception):
    pass


def _precision(args):
    if getattr(args, "precision", None) is not None:
        return args.precision
    env = os.environ.get("COXLAB_PRECISION")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError("COXLAB_PRECISION must be an integer")
    return 6


def _param_value(text):
    if text.lower() in ("inf", "infinity", "∞"):
        return INF
    try:
        return int(text)
    except ValueError:
        raise UsageError("parameter values must be integers or inf, got %r" % text)


def _params(args):
    out = {}
    for item in getattr(args, "param", None) or []:
        if "=" not in item:
            raise UsageError("--param expects k=v, got %r" % item)
        k, v = item.split("=", 1)
        out[k.strip()] = _param_value(v.strip())
    return out


def _catalog_ref(text):
    if ":" not in text:
        raise UsageError("--catalog expects table:item, got %r" % text)
    table, item = text.split(":", 1)
    return table, (int(item) if item.isdigit() else item)


def _entry(args):
    table, item = _catalog_ref(args.catalog)
    try:
        table = catalog.resolve_table(table)
    except catalog.CatalogError as exc:
        raise UsageError(str(exc))
    if table in catalog.classification_tables():
        return None
    try:
        return catalog.get_entry(table, item)
    except catalog.CatalogError as exc:
        raise UsageError(str(exc))


def _load(args, template=False):
    """(diagram, id, entry) from --file or --catalog."""
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            d = parse(fh.read())
        params = _params(args)
        if d.is_parametric() and not template:
            d = d.instantiate(**params)
        return d, os.path.basename(args.file), None
    table, item = _catalog_ref(args.catalog)
    entry = _entry(args)
    params = _params(args)
    ident = "%s:%s" % (table, item)
    if params:
        ident += "[" + ",".join("%s=%s" % kv for kv in sorted(params.items())) + "]"
    if entry is not None and template:
        return entry.template, ident, entry
    try:
        d = catalog.catalog_get(table, item, **params)
    except catalog.CatalogError as exc:
        raise UsageError(str(exc))
    return d, ident, entry


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def _nodes(T, d):
    return [d.names[t] for t in sorted(T)]


# ---------------------------------------------------------------------
# commands

def cmd_classify(args):
    d, ident, _ = _load(args)
    rows = []
    for comp in d.components():
        sub = d.restrict(sorted(comp))
        cls = classify_irreducible(sub)
        rows.append({"nodes": _nodes(comp, d), "kind": cls.kind.value,
                     "name": cls.catalog_name})
    if args.format == "json":
        _emit(args, _json({"diagram": ident, "components": rows}))
    elif args.format == "csv":
        _emit(args, _csv([[" ".join(r["nodes"]), r["kind"], r["name"] or ""] for r in rows],
                         ["nodes", "kind", "name"]))
    else:
        _emit(args, "".join("{%s}: %s%s\n" % (", ".join(r["nodes"]), r["kind"],
                                               " (%s)" % r["name"] if r["name"] else "")
                            for r in rows))
    return 0


def cmd_signature(args):
    d, ident, _ = _load(args)
    digits = _precision(args)
    if args.lam is not None:
        C = lambda_cosine_matrix(d, args.lam)
    else:
        C = cosine_matrix(d)
    det = determinant(C)
    sig = inertia(C)
    out = {"diagram": ident, "det_exact": expression(det), "det_float": to_float(det, digits),
           "signature": list(sig)}
    if args.format == "json":
        _emit(args, _json(out))
    elif args.format == "csv":
        _emit(args, _csv([[ident, out["det_exact"], out["det_float"]] + list(sig)],
                         ["diagram", "det_exact", "det_float", "sig_p", "sig_q", "sig_r"]))
    else:
        _emit(args, "det = %s = %s\nsignature = (%d,%d,%d)\n"
              % ((out["det_exact"], out["det_float"]) + tuple(sig)))
    return 0


def _verdict_json(v, d):
    return {"hyperbolic": v.hyperbolic, "reason": v.reason,
            "witness": [_nodes(w, d) for w in v.witness] if v.witness else None}


def cmd_moussong(args):
    d, ident, _ = _load(args)
    v = moussong(d)
    out = dict(diagram=ident, **_verdict_json(v, d))
    if args.format == "json":
        _emit(args, _json(out))
    elif args.format == "csv":
        _emit(args, _csv([[ident, v.hyperbolic, v.reason or "",
                           " | ".join(" ".join(w) for w in out["witness"] or [])]],
                         ["diagram", "hyperbolic", "reason", "witness"]))
    else:
        if v.hyperbolic:
            _emit(args, "hyperbolic\n")
        else:
            _emit(args, "not hyperbolic: %s %s\n" % (v.reason, out["witness"]))
    return 0


def cmd_nerve(args):
    d, ident, _ = _load(args)
    N = nerve(d)
    cert = join_sphere_certificate(d)
    if args.format == "dot":
        _emit(args, N.to_dot(d.names))
        return 0
    out = {"diagram": ident, "f_vector": list(N.f_vector()),
           "euler_characteristic": N.euler_characteristic(),
           "facets": N.to_json(d.names)["facets"],
           "join_sphere": cert.to_json() if cert else None}
    if args.format == "json":
        _emit(args, _json(out))
    elif args.format == "csv":
        _emit(args, _csv([[len(f), " ".join(map(str, f))] for f in out["facets"]],
                         ["size", "facet"]))
    else:
        text = "f-vector %s, chi = %d\n" % (tuple(out["f_vector"]), out["euler_characteristic"])
        if cert:
            text += "join of boundaries on %s and %s: sphere of dimension %d\n" % (
                cert.to_json()["S1"], cert.to_json()["S2"], cert.d - 1)
        else:
            text += "no Lanner bipartition found\n"
        _emit(args, text)
    return 0


def _cert_text(cert):
    lines = ["%s certificate for %s" % (cert.kind, cert.diagram)]
    for c in cert.checks:
        lines.append("  %-30s %s" % (c.name, "pass" if c.passed else "FAIL"))
    if cert.passed and cert.statement:
        lines.append(cert.statement)
    return "\n".join(lines) + "\n"


def _cert_csv(cert):
    return _csv([[c.name, c.passed, json.dumps(c.evidence, ensure_ascii=False)]
                 for c in cert.checks], ["check", "pass", "evidence"])


def cmd_certify(args):
    d, ident, entry = _load(args)
    if args.kind == "ghc":
        cert = certify.certify_ghc(d, ident)
    elif args.kind == "qf":
        cert = certify.certify_quasi_fuchsian(d, ident)
    else:
        dark = entry.dark if entry else None
        light = entry.light if entry else None
        cert = certify.disconnected_check(d, dark, light, ident)
    if args.format == "json":
        _emit(args, _json(cert.to_json()))
    elif args.format == "csv":
        _emit(args, _cert_csv(cert))
    else:
        _emit(args, _cert_text(cert))
    return 0 if cert.passed else 1


def cmd_lambda(args):
    d, ident, entry = _load(args)
    digits = _precision(args)
    q = certify.lambda_polynomial(d)
    dark = entry.dark if entry else None
    light = entry.light if entry else None
    ident_ok = certify.discriminant_identity(d, dark, light)
    out = {"diagram": ident, "quadratic": q.to_json(digits), "discriminant_identity": ident_ok}
    if args.format == "json":
        _emit(args, _json(out))
    else:
        vals = [to_float(x, digits) for x in (q.a0, q.a1, q.a2, q.delta)]
        roots = [to_float(r, digits) for r in q.roots] if q.roots else []
        if args.format == "csv":
            _emit(args, _csv([[ident] + vals + (roots + ["", ""])[:2]],
                             ["diagram", "a0", "a1", "a2", "delta", "lambda1", "lambda2"]))
        else:
            text = "f(lam) = (%s) lam^2 + (%s) lam + (%s)\n" % (
                expression(q.a2), expression(q.a1), expression(q.a0))
            text += "a0 = %s, a1 = %s, a2 = %s, delta = %s\n" % tuple(vals)
            text += "discriminant identity: %s\n" % ("holds" if ident_ok else "FAILS")
            if roots:
                text += "roots: %s, %s\n" % tuple(roots)
            elif q.double_root is not None:
                text += "double root: %s\n" % to_float(q.double_root, digits)
            _emit(args, text)
    return 0


def _parse_range(text):
    if "=" not in text or ":" not in text:
        raise UsageError("--range expects name=lo:hi, got %r" % text)
    name, span = text.split("=", 1)
    lo, hi = span.split(":", 1)
    return name.strip(), int(lo), int(hi)


def cmd_sweep(args):
    template, ident, _ = _load(args, template=True)
    if not template.is_parametric():
        raise UsageError("sweep needs a parametric diagram")
    ranges = [_parse_range(r) for r in args.range]
    if args.widen:
        template = certify.widen(template, **{n: (lo, None) for n, lo, _ in ranges})
    names = [n for n, _, _ in ranges]
    if sorted(names) != sorted(template.params):
        raise UsageError("give a --range for each parameter: %s" % ", ".join(sorted(template.params)))
    grid = [dict(zip(names, vals))
            for vals in itertools.product(*[range(lo, hi + 1) for _, lo, hi in ranges])]
    res = certify.sweep_family(template, grid, certify=not args.no_certify)
    digits = _precision(args)
    header = names + ["det_exact", "det_float", "sig_p", "sig_q", "sig_r", "moussong", "verdict"]
    rows = [[r.params[n] for n in names] + [expression(r.det), to_float(r.det, digits)]
            + list(r.signature) + [r.hyperbolic, r.kind] for r in res.rows]
    if args.format == "json":
        _emit(args, _json({"diagram": ident, "header": header, "rows": rows,
                           "increasing": res.increasing,
                           "limit": certify.exact_evidence(res.limit, digits)
                           if res.limit is not None else None}))
    elif args.format == "csv":
        _emit(args, _csv(rows, header))
    else:
        text = "".join("%s: det = %s, signature (%d,%d,%d), %s\n"
                       % ((", ".join("%s=%s" % (n, r.params[n]) for n in names),
                           to_float(r.det, digits)) + tuple(r.signature) + (r.kind,))
                       for r in res.rows)
        text += "increasing: %s\nlimit: %s\n" % (res.increasing, to_float(res.limit, digits))
        _emit(args, text)
    return 0


def cmd_region(args):
    qmax = args.qmax if args.qmax is not None else args.pmax
    try:
        scan = certify.region_scan(args.pmax, qmax, upper_triangle=not args.full)
    except ValueError as exc:
        raise UsageError(str(exc))
    header = ["p", "q", "sign_detS1", "sign_detS2", "sign_a0", "sign_a1", "sign_a2",
              "boundary", "verdict"]
    rows = [[p, q] + list(v.signs) + [v.boundary, v.membership]
            for (p, q), v in sorted(scan.items())]
    if args.format == "json":
        _emit(args, _json({"header": header, "rows": rows}))
    elif args.format == "csv":
        _emit(args, _csv(rows, header))
    else:
        for region in (certify.REGION_L, certify.REGION_D):
            pts = [k for k, v in sorted(scan.items()) if v.membership == region]
            _emit(args, "%s (%d): %s\n" % (region, len(pts), " ".join("(%d,%d)" % k for k in pts)))
    return 0


def cmd_orbit(args):
    d, ident, _ = _load(args)
    C = cosine_matrix(d) if args.lam is None else lambda_cosine_matrix(d, args.lam)
    rep = tits.build(C, d)
    tol = args.tol if args.tol is not None else 1e-9
    report = orbit.orbit_report(rep, args.length, args.samples, args.tiling, args.seed, tol)
    report = dict(diagram=ident, **report)
    if args.points:
        ball = orbit.enumerate_ball(rep, args.length, tol)
        with open(args.points, "w", encoding="utf-8") as fh:
            fh.write(orbit.limit_points_csv(orbit.sample_limit_set(rep, ball)))
    if args.format == "json":
        _emit(args, _json(report))
    elif args.format == "csv":
        _emit(args, _csv([[ident, report["ball_size"], report["n_proximal"],
                           repr(report["min_pairwise_inner"]), report["violations"], args.seed]],
                         ["diagram", "ball_size", "n_proximal", "min_pairwise_inner",
                          "violations", "seed"]))
    else:
        _emit(args, "ball sizes %s\nproximal limit points %d, max pairwise B %r\n"
              "lemma-light violations %d, tiling violations %d (%s)\n"
              % (report["ball_sizes"], report["n_proximal"], report["min_pairwise_inner"],
                 report["lemma_light"]["violations"], report["tiling"]["violations"],
                 orbit.EVIDENCE))
    ok = report["violations"] == 0
    return 0 if ok else 1


def cmd_catalog(args):
    if args.catalog or args.file:
        d, ident, _ = _load(args, template=not _params(args))
        if args.format == "dot":
            _emit(args, to_dot(d))
        else:
            _emit(args, serialize(d))
        return 0
    items = catalog.catalog_list()
    if args.format == "json":
        _emit(args, _json(items))
    elif args.format == "csv":
        _emit(args, _csv([[i["table"], i["index"], i.get("title") or "", i["rank"],
                           json.dumps(i.get("params") or {})] for i in items],
                         ["table", "index", "title", "rank", "params"]))
    else:
        _emit(args, "".join("%s:%s %s rank %d\n" % (i["table"], i["index"], i.get("title") or "",
                                                  i["rank"]) for i in items))
    return 0


# ---------------------------------------------------------------------
# tables

TABLE_HEADER = ["table", "item", "title", "params", "det_exact", "det_float",
                "sig_p", "sig_q", "sig_r", "verdict"]
LAMBDA_HEADER = ["a0", "a1", "a2", "delta", "lambda1", "lambda2", "double_root",
                 "det_at_root"]


def _fmt_params(ps):
    return ";".join("%s=%s" % kv for kv in sorted(ps.items()))


def _family_rows(table, digits):
    rows = []
    lam = any(e.template.infinite_edges() for e in catalog.entries(table))
    for e in catalog.entries(table):
        samples = list(e.test_parameters())
        if e.reference and e.reference not in samples:
            samples.append(e.reference)
        for ps in samples:
            d = e.instantiate(**ps)
            C = cosine_matrix(d)
            det = determinant(C)
            sig = inertia(C)
            row = [table, e.index, e.title or "", _fmt_params(ps), expression(det),
                   to_float(det, digits)] + list(sig)
            if lam:
                cert = certify.disconnected_check(d, e.dark, e.light)
                q = certify.lambda_polynomial(d)
                verdict = "two isolated points" if cert.passed else "-"
                extra = [to_float(x, digits) for x in (q.a0, q.a1, q.a2, q.delta)]
                extra += [to_float(r, digits) for r in q.roots] if q.roots else ["", ""]
                if q.double_root is not None:
                    at = determinant(lambda_cosine_matrix(d, q.double_root))
                    extra += [to_float(q.double_root, digits), to_float(at, digits)]
                else:
                    extra += ["", ""]
                rows.append(row + [verdict] + extra)
            else:
                rows.append(row + [certify.certificate_kind(d)])
    header = TABLE_HEADER + (LAMBDA_HEADER if lam else [])
    return header, rows


def _classification_rows(table, digits):
    rows = []
    expected = {"spherical": Kind.SPHERICAL, "affine": Kind.AFFINE, "lanner": Kind.LANNER}[table]
    for i, (name, d) in enumerate(catalog.classification_tables()[table], 1):
        C = cosine_matrix(d)
        det = determinant(C)
        sig = inertia(C)
        cls = classify_irreducible(d)
        verdict = cls.kind.value if cls.kind == expected else "MISMATCH " + cls.kind.value
        rows.append([table, i, name, "", expression(det), to_float(det, digits)]
                    + list(sig) + [verdict])
    return TABLE_HEADER, rows


def table_csv(table, digits=6):
    table = catalog.resolve_table(table)
    if table in catalog.classification_tables():
        header, rows = _classification_rows(table, digits)
    else:
        header, rows = _family_rows(table, digits)
    return _csv(rows, header)


def cmd_tables(args):
    digits = _precision(args)
    which = catalog.table_names() if args.which == "all" else [args.which]
    try:
        which = [catalog.resolve_table(w) for w in which]
    except catalog.CatalogError as exc:
        raise UsageError(str(exc))
    outdir = args.outdir
    if outdir:
        os.makedirs(outdir, exist_ok=True)
    for t in which:
        text = table_csv(t, digits)
        if outdir:
            with open(os.path.join(outdir, t + ".csv"), "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write("# %s\n%s" % (t, text))
    return 0


# ---------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("%s: error: %s\n" % (self.prog, message))
        raise SystemExit(2)


def _input(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("-f", "--file", help="diagram file")
    g.add_argument("--catalog", metavar="TABLE:ITEM", help="built-in diagram")
    p.add_argument("--param", action="append", metavar="K=V", help="parameter value")


def _common(p, formats=("text", "json", "csv")):
    p.add_argument("--format", choices=formats, default="text")
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--precision", type=int, help="digits for decimal output")


def build_parser():
    parser = _Parser(prog="coxlab", description="Exact computations for Coxeter groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="classify the components of a diagram")
    _input(p); _common(p); p.set_defaults(func=cmd_classify)

    p = sub.add_parser("signature", help="determinant and inertia of the Cosine matrix")
    _input(p); _common(p)
    p.add_argument("--lambda", dest="lam", type=_param_value, help="use the lambda-Cosine matrix")
    p.set_defaults(func=cmd_signature)

    p = sub.add_parser("moussong", help="Gromov hyperbolicity")
    _input(p); _common(p); p.set_defaults(func=cmd_moussong)

    p = sub.add_parser("nerve", help="nerve and join-sphere certificate")
    _input(p); _common(p, ("text", "json", "csv", "dot")); p.set_defaults(func=cmd_nerve)

    p = sub.add_parser("certify", help="run a certification pipeline")
    p.add_argument("kind", choices=["ghc", "qf", "disconnected"])
    _input(p); _common(p); p.set_defaults(func=cmd_certify)

    p = sub.add_parser("lambda", help="the quadratic det of the lambda-Cosine matrix")
    _input(p); _common(p); p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("sweep", help="tabulate a parametric family")
    _input(p); _common(p)
    p.add_argument("--range", action="append", required=True, metavar="NAME=LO:HI")
    p.add_argument("--widen", action="store_true", help="allow values below the printed bound")
    p.add_argument("--no-certify", action="store_true", help="skip the certification column")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("region", help="sign scan of the first two-parameter family")
    p.add_argument("--pmax", type=int, default=40)
    p.add_argument("--qmax", type=int)
    p.add_argument("--full", action="store_true", help="scan p > q as well")
    _common(p); p.set_defaults(func=cmd_region)

    p = sub.add_parser("orbit", help="numerical orbit evidence")
    _input(p); _common(p)
    p.add_argument("--length", type=int, default=6)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tiling", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float)
    p.add_argument("--lambda", dest="lam", type=_param_value)
    p.add_argument("--points", help="write limit points as CSV")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("catalog", help="list or show built-in diagrams")
    _input(p, required=False); _common(p, ("text", "json", "csv", "dot"))
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("tables", help="write one CSV per built-in table")
    p.add_argument("which", help="table name or 'all'")
    p.add_argument("--outdir", help="directory for the CSV files (default: stdout)")
    p.add_argument("--precision", type=int)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (UsageError, DiagramError, catalog.CatalogError, certify.PreconditionError,
            orbit.PreconditionError, tits.ZeroTypeComponent, ValueError) as exc:
        sys.stderr.write("coxlab: error: %s\n" % exc)
        return 2
    except OSError as exc:
        sys.stderr.write("coxlab: I/O error: %s\n" % exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
