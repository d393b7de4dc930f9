"""Command line front end.

Every run starts with a header naming the field(s) it used.  JSON output is
newline-delimited: the header object comes first, then one object per
record.  Exit codes: 0 all checks passed, 1 a mathematical check failed,
2 usage or precondition error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np

from . import __version__
from .construct import (Classifier, Family, PPForm, base_binomials, base_pp_gammas,
                        carlitz_gammas, complete_from_base_pp, complete_general,
                        complete_rank1, complete_rank1_spoly, complete_rank2_kernel_aligned,
                        complete_trace_spoly, complete_transported)
from .errors import PPError
from .fields import FieldCtx, build_field, deltas, field_from_spec, prime_factors
from .inverse import invert
from .spoly import (SPoly, base_point, eligible_rank1_lines, eligible_rank2_affines, g_set,
                    h_set)
from .verify import (census_pair, distribution, emit_csv, emit_json, emit_text,
                     first_collision, inverse_counterexample, is_permutation,
                     normalized_base_pps, table, trace_census, without_linear_term)

FAMILIES = {
    "kernel-aligned": Family.Rank2KernelAligned,
    "rank1": Family.Rank1Coprime,
    "base-pp": Family.Rank2FromBasePP,
    "trace": Family.TraceSPoly,
    "transported": Family.SPolyTransported,
    "rank1-spoly": Family.SPolyRank1,
    "general": Family.GeneralRank2,
}


class UsageError(Exception):
    pass


class Out:
    """Collects output lines and writes them to a stream."""

    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def json(self, obj):
        self.stream.write(json.dumps(obj, sort_keys=True) + "\n")

    def text(self, line: str = ""):
        self.stream.write(line + "\n")

    def header(self, command: str, fields: list[FieldCtx]):
        specs = [c.spec() for c in fields]
        if self.fmt == "json":
            self.json({"header": {"tool": "fq2perm", "version": __version__,
                                  "command": command, "fields": specs}})
        else:
            for s in specs:
                self.text(f"# fq2perm {__version__} {command} field={json.dumps(s, sort_keys=True)}")


# -- argument helpers --------------------------------------------------------

def _int_list(text: str) -> list:
    text = text.strip()
    if text.startswith("["):
        return json.loads(text)
    return [int(t) for t in text.split(",") if t.strip()]


def _coeff_pairs(text: str | None) -> dict:
    """'5:1,4:5,3:9' -> {5: 1, 4: 5, 3: 9} (index: F_q encoding)."""
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        i, _, a = part.partition(":")
        if not _:
            raise UsageError(f"--g expects index:coefficient pairs, got {part!r}")
        out[int(i)] = int(a)
    return out


def _coeffs(ctx: FieldCtx, args) -> dict:
    """--g values are element encodings (F_q is the range [0, q))."""
    out = {}
    for i, a in _coeff_pairs(args.g).items():
        if not 0 <= a < ctx.order:
            raise UsageError(f"coefficient {a} is not an element encoding of F_{ctx.q}^2")
        out[i] = ctx.elt(a)
    return out


def _field(args) -> FieldCtx:
    if args.p is None:
        raise UsageError("--p is required for this command")
    base = _int_list(args.base_modulus) if args.base_modulus else None
    ext = _int_list(args.ext_modulus) if args.ext_modulus else None
    return build_field(args.p, args.r, base, ext)


def _field_for_q(q: int) -> FieldCtx:
    ps = prime_factors(q)
    if len(ps) != 1:
        raise UsageError(f"{q} is not a prime power")
    p = ps[0]
    r = 1
    while p ** r < q:
        r += 1
    return build_field(p, r)


def _spoly(ctx: FieldCtx, args, delta_index: int | None = None) -> SPoly:
    if args.m is None:
        raise UsageError("--m is required")
    di = args.delta_index if delta_index is None else delta_index
    return SPoly.make(deltas(ctx)[di], args.m, _coeffs(ctx, args))


def _lam(ctx: FieldCtx, args):
    if args.lam is None:
        return None
    return ctx.omega ** args.lam


def _read_records(path: str) -> list[dict]:
    with (sys.stdin if path == "-" else open(path)) as fh:
        text = fh.read()
    text = text.strip()
    if not text:
        return []
    try:
        docs = [json.loads(text)]
    except json.JSONDecodeError:
        docs = [json.loads(line) for line in text.splitlines() if line.strip()]
    out = []
    for d in docs:
        if isinstance(d, list):
            out.extend(d)
        elif "header" not in d:
            out.append(d)
    return out


# -- subcommands -------------------------------------------------------------

def cmd_field_info(args, out: Out) -> int:
    ctx = _field(args)
    out.header("field-info", [ctx])
    info = {"p": ctx.p, "r": ctx.r, "q": ctx.q, "order": ctx.order,
            "omega": ctx.omega.coeffs, "spec": ctx.spec(), "num_deltas": ctx.q + 1}
    if out.fmt == "json":
        out.json(info)
    else:
        for k, v in info.items():
            out.text(f"{k}: {v}")
    return 0


def cmd_list_delta(args, out: Out) -> int:
    ctx = _field(args)
    out.header("list-delta", [ctx])
    rows = []
    for i, d in enumerate(deltas(ctx)):
        u, v0, v = base_point(d)
        rows.append({"index": i, "delta": d.coeffs, "log": d.log(), "u": u.coeffs,
                     "v0": v0.coeffs, "v": v.coeffs})
    if out.fmt == "json":
        for r in rows:
            out.json(r)
    elif out.fmt == "csv":
        out.text("index,delta,log,u,v0,v")
        for r in rows:
            out.text(",".join(str(r[k]).replace(",", " ") for k in
                              ("index", "delta", "log", "u", "v0", "v")))
    else:
        for r in rows:
            out.text(f"delta[{r['index']}] = omega^{r['log']}  coeffs={r['delta']}  "
                     f"ker s = span {r['u']}  v0={r['v0']}  s(v0)={r['v']}")
    return 0


def _family_stream(ctx: FieldCtx, args):
    fam = args.family
    di = args.delta_index
    coeffs = _coeffs(ctx, args)
    if fam in ("kernel-aligned", "rank1") and coeffs:
        raise UsageError(f"family {fam} takes a monomial; drop --g")
    if fam == "trace":
        return complete_trace_spoly(ctx, _spoly(ctx, args, 0))
    if fam == "general":
        return complete_general(ctx, _spoly(ctx, args))
    if args.m is None:
        raise UsageError("--m is required")
    if fam == "kernel-aligned":
        return complete_rank2_kernel_aligned(ctx, di, args.m)
    if fam == "rank1":
        return complete_rank1(ctx, di, args.m)
    if fam == "base-pp":
        return complete_from_base_pp(ctx, di, args.m, coeffs, _lam(ctx, args))
    if fam == "rank1-spoly":
        return complete_rank1_spoly(ctx, args.m, coeffs, di, _lam(ctx, args))
    if fam == "transported":
        lam = _lam(ctx, args)
        if lam is None:
            lam = base_point(deltas(ctx)[di])[2]
        return complete_transported(ctx, args.m, coeffs, di, lam)
    raise UsageError(f"unknown family {fam!r}")


def cmd_construct(args, out: Out) -> int:
    ctx = _field(args)
    if not 0 <= args.delta_index <= ctx.q:
        raise UsageError(f"--delta-index must be in [0, {ctx.q}]")
    stream = _family_stream(ctx, args)
    if args.all:
        forms = stream
    elif args.sample:
        pool = list(stream)
        rng = random.Random(args.seed)
        forms = rng.sample(pool, min(args.sample, len(pool)))
    else:
        forms = []
        for k, f in enumerate(stream):
            if k == args.index:
                forms = [f]
                break
        if not forms:
            raise UsageError(f"family has no member with --index {args.index}")
    out.header("construct", [ctx])
    status, count = 0, 0
    for f in forms:
        count += 1
        if not is_permutation(ctx, f):
            status = 1
            out.stream.flush()
            print(f"check failed: {f!r} is not a permutation", file=sys.stderr)
        if out.fmt == "json":
            out.json(f.to_json())
        else:
            out.text(repr(f))
    if out.fmt != "json":
        out.text(f"# {count} form(s)")
    return status


def _inverse_record(ctx: FieldCtx, f: PPForm):
    cert = invert(ctx, f)
    rec = cert.to_json()
    rec["inverse_of"] = f.to_json()
    return rec, cert


def cmd_invert(args, out: Out) -> int:
    records = _read_records(args.input)
    forms = [PPForm.from_json(r) for r in records if "table" not in r]
    out.header("invert", _distinct_fields(f.ctx for f in forms))
    status = 0
    for f in forms:
        rec, cert = _inverse_record(f.ctx, f)
        if not cert.verified:
            status = 1
            print(f"check failed: {cert.method} inverse of {f!r} does not compose to x",
                  file=sys.stderr)
        if out.fmt == "json":
            out.json(rec)
        else:
            out.text(f"{f!r}\n  -> [{cert.method}, verified={cert.verified}] "
                     f"{cert.h!r}" if cert.h else f"{f!r}\n  -> [Generic table]")
    return status


def _distinct_fields(ctxs) -> list[FieldCtx]:
    seen = []
    for c in ctxs:
        if c not in seen:
            seen.append(c)
    return seen


def _table_of(rec: dict, ctx: FieldCtx) -> np.ndarray:
    if "table" in rec:
        tab = np.empty(ctx.order, dtype=np.int64)
        for x, y in rec["table"]:
            tab[ctx.from_coeffs(x).n] = ctx.from_coeffs(y).n
        return tab
    return PPForm.from_json(rec, ctx).values()


def cmd_verify(args, out: Out) -> int:
    records = _read_records(args.input)
    ctxs = [field_from_spec(r["field"]) for r in records]
    out.header("verify", _distinct_fields(ctxs))
    status = 0
    for n, (rec, ctx) in enumerate(zip(records, ctxs)):
        checks = {}
        tab = _table_of(rec, ctx)
        coll = first_collision(ctx, tab)
        checks["permutation"] = coll is None
        detail = None if coll is None else f"f({coll[0]!r}) = f({coll[1]!r})"
        if "inverse_of" in rec:
            f = PPForm.from_json(rec["inverse_of"])
            ce = inverse_counterexample(ctx, f, tab)
            checks["inverse"] = ce is None
            if ce is not None and detail is None:
                detail = f"{ce[1]} at x = {ce[0]!r}"
        elif "table" not in rec:
            f = PPForm.from_json(rec, ctx)
            if f.is_normalized and f.family not in (Family.GeneralRank1, Family.GeneralRank2):
                fam = Classifier(ctx, f.g)(f.L)
                checks["certificate"] = fam is not None
                if fam is None and detail is None:
                    detail = "no family certificate re-derives for this form"
        ok = all(checks.values())
        status = status or (0 if ok else 1)
        res = {"record": n, "ok": ok, "checks": checks}
        if detail:
            res["counterexample"] = detail
        if out.fmt == "json":
            out.json(res)
        else:
            out.text(f"record {n}: {'ok' if ok else 'FAILED'} {checks}"
                     + (f"  first counterexample: {detail}" if detail else ""))
    return status


def cmd_eligible(args, out: Out) -> int:
    ctx = _field(args)
    g = _spoly(ctx, args)
    out.header("eligible", [ctx])
    G = sorted(g_set(ctx, g), key=lambda e: e.n)
    H = sorted(h_set(ctx, g), key=lambda e: e.n)
    lines = eligible_rank1_lines(ctx, g)
    affs = eligible_rank2_affines(ctx, g)
    q = ctx.q
    data = {"g": g.to_json(), "G": [x.coeffs for x in G], "H": [x.coeffs for x in H],
            "rank1_lines": [ln.to_json() for ln in lines],
            "rank2_affine_lines": [ln.to_json() for ln in affs],
            "rank1_count": len(lines) * q * (q - 1), "rank2_count": len(affs) * q * (q - 1)}
    if out.fmt == "json":
        out.json(data)
    else:
        out.text(f"g = {g!r}")
        out.text(f"|G| = {len(G)}  zero in G: {ctx.zero in set(G)}")
        out.text(f"|H| = {len(H)}")
        out.text(f"eligible subspaces: {len(lines)} -> {data['rank1_count']} rank-1 PPs")
        for ln in lines:
            out.text(f"  span {ln.direction.coeffs}")
        out.text(f"eligible affine lines: {len(affs)} -> {data['rank2_count']} rank-2 PPs")
        for ln in affs:
            out.text(f"  {ln.offset.coeffs} + span {ln.direction.coeffs}")
    return 0


def cmd_census(args, out: Out) -> int:
    ctx = _field(args)
    if args.trace_spolys:
        counts = trace_census(ctx, jobs=args.jobs)
        r2 = [a for a, _ in counts]
        dist = distribution(r2)
        out.header("census", [ctx])
        res = {"spolys": len(counts), "rank2_total": sum(r2),
               "rank1_total": sum(b for _, b in counts), "rank2_distribution": dist}
        if out.fmt == "json":
            out.json(res)
        else:
            for k, v in res.items():
                out.text(f"{k}: {v}")
        return 0
    g = _spoly(ctx, args)
    out.header("census", [ctx])
    rows, hits = census_pair(ctx, args.delta_index, g, attribute=not args.no_attribute,
                             jobs=args.jobs, return_hits=True)
    ranks = (1, 2) if args.rank == "both" else (int(args.rank),)
    status = 0
    for rk in ranks:
        row = rows[rk]
        if row.unexplained:
            status = 1
        if out.fmt == "json":
            out.json(row.to_json())
        elif out.fmt == "csv":
            out.text(f"{row.q},{row.delta_index},{row.shape},{row.rank},{row.count},"
                     f"{row.unexplained if row.unexplained is not None else ''}")
        else:
            out.text(f"rank {rk}: {row.count} PPs  families={row.family_breakdown}  "
                     f"unexplained={row.unexplained}")
    if args.hits and out.fmt == "json":
        Q = ctx.order
        for k in hits:
            a1, a0 = ctx.elt(int(k) // Q), ctx.elt(int(k) % Q)
            out.json({"hit": {"a1": a1.coeffs, "a0": a0.coeffs}})
    return status


def cmd_tables(args, out: Out) -> int:
    if args.q_list:
        ctxs = [_field_for_q(q) for q in _int_list(args.q_list)]
    else:
        ctxs = [_field(args)]
    out.header("tables", ctxs)
    results = {}
    status = 0
    for ctx in ctxs:
        label = f"F_{ctx.q}^2"
        rows = table(ctx, args.which, jobs=args.jobs, attribute=args.attribute)
        results[label] = rows
        if args.attribute and any(r.unexplained for r in rows):
            status = 1
        if args.which == 3 and args.cross_check:
            t1 = {r.shape: r.count for r in table(ctx, 1, jobs=args.jobs)}
            t2 = {r.shape: r.count for r in table(ctx, 2, jobs=args.jobs)}
            for r in rows:
                want = (ctx.q + 1) * (t1.get(r.shape, 0) + t2.get(r.shape, 0))
                if want != r.count:
                    status = 1
                    print(f"check failed: {label} {r.shape} total {r.count} != "
                          f"(q+1)(T1+T2) = {want}", file=sys.stderr)
    if out.fmt == "json":
        for line in emit_json(results).splitlines():
            out.text(line)
    elif out.fmt == "csv":
        out.stream.write(emit_csv(results))
    else:
        out.stream.write(emit_text(results))
    return status


def cmd_base_pps(args, out: Out) -> int:
    ctx = _field(args)
    out.header("base-pps", [ctx])
    q = ctx.q
    data = {}
    if q <= 9:
        pps = normalized_base_pps(ctx)
        nolin = without_linear_term(pps)
        data["normalized_pps"] = len(pps)
        data["without_linear_term"] = len(nolin)
        data["list"] = [[c.n for c in p] for p in (nolin if args.no_linear else pps)]
    data["binomials"] = {str(m): [b.gamma.n for b in base_binomials(ctx, m)] for m in range(2, q)}
    if q % 2 and q >= 7:
        data["carlitz"] = sorted(c.n for c in carlitz_gammas(ctx))
    if args.g:
        m = args.m
        if m is None:
            raise UsageError("--m is required with --g")
        coeffs = _coeffs(ctx, args)
        data["gammas_for_g"] = [c.n for c in base_pp_gammas(ctx, m, coeffs)]
    if out.fmt == "json":
        out.json(data)
    else:
        for k, v in data.items():
            if k == "list":
                out.text("polynomials (coefficients of x^0..x^d, F_q encodings):")
                for p in v:
                    out.text(f"  {p}")
            else:
                out.text(f"{k}: {v}")
    return 0


COMMANDS = {
    "field-info": cmd_field_info,
    "list-delta": cmd_list_delta,
    "construct": cmd_construct,
    "invert": cmd_invert,
    "verify": cmd_verify,
    "eligible": cmd_eligible,
    "census": cmd_census,
    "tables": cmd_tables,
    "base-pps": cmd_base_pps,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="characteristic")
    common.add_argument("--r", type=int, default=1, help="degree of F_q over F_p (q = p^r)")
    common.add_argument("--base-modulus", help="coefficients c0,..,cr of the F_q modulus")
    common.add_argument("--ext-modulus",
                        help="coefficients d0,d1,d2 of the F_q^2 modulus (JSON for r > 1)")
    common.add_argument("--out", choices=("json", "csv", "text"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="census worker processes")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled modes")

    shape = argparse.ArgumentParser(add_help=False)
    shape.add_argument("--delta-index", type=int, default=0)
    shape.add_argument("--m", type=int)
    shape.add_argument("--g", help="lower coefficients as index:value pairs, e.g. 3:1,2:5")

    ap = argparse.ArgumentParser(prog="fq2perm", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("field-info", parents=[common], help="describe the field tower")
    sub.add_parser("list-delta", parents=[common], help="the q+1 roots of unity")

    c = sub.add_parser("construct", parents=[common, shape], help="certified PPs of a family")
    c.add_argument("--family", required=True, choices=sorted(FAMILIES))
    c.add_argument("--lam", type=int, help="transport by lambda = omega^LAM (must lie in im s)")
    c.add_argument("--all", action="store_true", help="stream the complete family")
    c.add_argument("--index", type=int, default=0, help="member to emit without --all")
    c.add_argument("--sample", type=int, help="emit this many random members (uses --seed)")

    i = sub.add_parser("invert", parents=[common], help="compositional inverses")
    i.add_argument("--in", dest="input", required=True, help="PPForm JSON/NDJSON file or -")
    v = sub.add_parser("verify", parents=[common], help="re-check PPs and inverses")
    v.add_argument("--in", dest="input", required=True, help="JSON/NDJSON file or -")

    sub.add_parser("eligible", parents=[common, shape], help="G/H sets and eligible lines")

    ce = sub.add_parser("census", parents=[common, shape], help="exhaustive census over all L")
    ce.add_argument("--rank", choices=("1", "2", "both"), default="both")
    ce.add_argument("--no-attribute", action="store_true", help="skip family attribution")
    ce.add_argument("--hits", action="store_true", help="stream every hit (JSON output)")
    ce.add_argument("--trace-spolys", action="store_true",
                    help="census every s-polynomial over the trace with F_q coefficients")

    t = sub.add_parser("tables", parents=[common], help="counting tables by census")
    t.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    t.add_argument("--q-list", help="several fields with default moduli, e.g. 4,5,7")
    t.add_argument("--attribute", action="store_true", help="attribute hits to families")
    t.add_argument("--cross-check", action="store_true",
                   help="for table 3, check totals against (q+1)(T1+T2)")

    b = sub.add_parser("base-pps", parents=[common], help="permutation polynomials of F_q")
    b.add_argument("--no-linear", action="store_true", help="list only those without x term")
    b.add_argument("--m", type=int)
    b.add_argument("--g", help="with --m: report gammas making g + gamma x a PP")
    return ap


def run(argv=None, stream=None) -> int:
    stream = sys.stdout if stream is None else stream
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = Out(args.out, stream)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except PPError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
