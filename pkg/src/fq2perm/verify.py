"""Brute-force oracles and the exhaustive census of g(s) + L(x).

The census never consults the constructors: it evaluates g(s) + L on every
point for all q^4 pairs (a1, a0) and keeps the bijections.  Only afterwards
are hits attributed to families by re-deriving certificates.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .construct import Classifier, is_base_pp
from .errors import FieldTooLargeForListing
from .fields import Elt, FieldCtx, deltas, field_from_spec
from .linearized import LinPoly
from .spoly import SPoly

CENSUS_MAX_Q = 16


def is_permutation(ctx: FieldCtx, f) -> bool:
    """f is a PPForm/LinPoly/SPoly (anything with .values()), a callable on Elt, or a table."""
    return first_collision(ctx, f) is None


def _table(ctx: FieldCtx, f) -> np.ndarray:
    if hasattr(f, "values"):
        return np.asarray(f.values())
    if callable(f):
        return np.array([f(x).n for x in ctx.elements()])
    return np.asarray(f)


def first_collision(ctx: FieldCtx, f):
    """None for a bijection, else (x1, x2) with f(x1) = f(x2)."""
    tab = _table(ctx, f)
    seen = np.full(ctx.order, -1, dtype=np.int64)
    for x, y in enumerate(tab):
        if seen[y] >= 0:
            return ctx.elt(int(seen[y])), ctx.elt(x)
        seen[y] = x
    return None


def inverse_counterexample(ctx: FieldCtx, f, h):
    """None if h o f = f o h = id, else (x, which) for the first failure."""
    ft, ht = _table(ctx, f), _table(ctx, h)
    for x in range(ctx.order):
        if ht[ft[x]] != x:
            return ctx.elt(x), "h(f(x)) != x"
        if ft[ht[x]] != x:
            return ctx.elt(x), "f(h(x)) != x"
    return None


def check_inverse(ctx: FieldCtx, f, h) -> bool:
    return inverse_counterexample(ctx, f, h) is None


# -- census ------------------------------------------------------------------

@dataclass
class CensusRow:
    q: int
    delta_index: int | None  # None when summed over all roots of unity
    shape: str  # "m=<k>" or an s-polynomial label
    rank: int
    count: int
    family_breakdown: dict = field(default_factory=dict)
    unexplained: int | None = None  # None when attribution was not requested

    def to_json(self):
        return asdict(self)


@lru_cache(maxsize=8)
def _grid(ctx: FieldCtx):
    """(L-values grid flattened to (q^4, q^2), add table, rank-2 mask)."""
    Q = ctx.order
    xs = np.arange(Q)
    mul = ctx.mul_table()
    add = ctx.add_table()
    fx = ctx.vfrob(xs)
    T1 = mul[:, fx]  # a1 * x^q
    T0 = mul[:, xs]  # a0 * x
    dtype = np.int16 if Q < 2 ** 15 else np.int32
    LV = add[T1[:, None, :], T0[None, :, :]].reshape(Q * Q, Q).astype(dtype)
    norm = ctx.vpow(xs, ctx.q + 1)
    rank2 = (norm[:, None] != norm[None, :]).reshape(-1)
    return LV, add.astype(np.int64), rank2


def _check_census_size(ctx: FieldCtx):
    if ctx.q > CENSUS_MAX_Q:
        raise ValueError(f"census is capped at q <= {CENSUS_MAX_Q}; about "
                         f"{ctx.q ** 4 * ctx.order:.2e} evaluations would be needed")


def census_hits(ctx: FieldCtx, G: np.ndarray, rows: slice | None = None) -> np.ndarray:
    """Indices k = a1 q^2 + a0 for which G + L is a bijection."""
    LV, add, _ = _grid(ctx)
    Q = ctx.order
    sub = LV if rows is None else LV[rows]
    f = add[sub, np.asarray(G)[None, :]]
    f.sort(axis=1)
    ok = (f == np.arange(Q)[None, :]).all(axis=1)
    idx = np.nonzero(ok)[0]
    return idx if rows is None else idx + rows.start


def _spoly_of(ctx: FieldCtx, delta: Elt, shape) -> SPoly:
    if isinstance(shape, SPoly):
        return shape
    return SPoly.make(delta, int(shape))


def _label(g: SPoly) -> str:
    if g.is_monomial:
        return f"m={g.m}"
    return "+".join([f"s^{g.m}"] + [f"{a.n}*s^{i}" for i, a in reversed(g.coeffs)])


def census_pair(ctx: FieldCtx, delta_index: int, shape, attribute=True, jobs=1,
                return_hits=False):
    """Census of one shape over one root of unity; returns {1: row, 2: row}."""
    _check_census_size(ctx)
    delta = deltas(ctx)[delta_index]
    g = _spoly_of(ctx, delta, shape)
    G = g.values()
    Q = ctx.order
    if jobs > 1:
        blocks = [slice(a, min(a + Q * Q // jobs + 1, Q * Q))
                  for a in range(0, Q * Q, Q * Q // jobs + 1)]
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_hits_worker, [(ctx.spec(), G, b.start, b.stop) for b in blocks]))
        hits = np.concatenate(parts)
    else:
        hits = census_hits(ctx, G)
    _, _, rank2 = _grid(ctx)
    out = {}
    for rk in (1, 2):
        sel = hits[rank2[hits]] if rk == 2 else hits[~rank2[hits]]
        row = CensusRow(ctx.q, delta_index, _label(g), rk, int(len(sel)))
        if attribute:
            cls = Classifier(ctx, g)
            bd = {}
            unexplained = 0
            for k in sel:
                L = LinPoly(ctx.elt(int(k) // Q), ctx.elt(int(k) % Q))
                fam = cls(L)
                if fam is None:
                    unexplained += 1
                else:
                    bd[fam.value] = bd.get(fam.value, 0) + 1
            row.family_breakdown = dict(sorted(bd.items()))
            row.unexplained = unexplained
        out[rk] = row
    if return_hits:
        return out, hits
    return out


def _hits_worker(args):
    spec, G, start, stop = args
    ctx = field_from_spec(spec)
    return census_hits(ctx, G, slice(start, stop))


def census(ctx: FieldCtx, delta_index: int, shape, rank_filter: int, attribute=True,
           jobs=1) -> CensusRow:
    """Exhaustive count of L of the given rank with g(s) + L a normalized PP."""
    return census_pair(ctx, delta_index, shape, attribute, jobs)[rank_filter]


def hit_set(ctx: FieldCtx, delta_index: int, shape) -> set:
    """All (a1, a0) encodings for which the shape plus L is a PP."""
    _, hits = census_pair(ctx, delta_index, shape, attribute=False, return_hits=True)
    Q = ctx.order
    return {(int(k) // Q, int(k) % Q) for k in hits}


# -- tables ------------------------------------------------------------------

def _pair_task(args):
    spec, di, m, attribute = args
    ctx = field_from_spec(spec)
    return census_pair(ctx, di, m, attribute)


def _run_pairs(ctx: FieldCtx, pairs, attribute, jobs):
    tasks = [(ctx.spec(), di, m, attribute) for di, m in pairs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(jobs) as ex:
            res = list(ex.map(_pair_task, tasks))
    else:
        res = [census_pair(ctx, di, m, attribute) for di, m in pairs]
    return dict(zip(pairs, res))


def table_indices(q: int, which: int) -> list[int]:
    ms = list(range(2, q))
    if which == 2:
        return [m for m in ms if gcd(m, q - 1) == 1]
    return ms


def table(ctx: FieldCtx, which: int, jobs: int = 1, attribute: bool = False) -> list[CensusRow]:
    """Rows of the counting tables for one field.

    1: rank-2 counts for the first root of unity, one row per index m.
    2: rank-1 counts for the first root of unity, indices coprime to q-1.
    3: rank-1 plus rank-2 counts summed over every root of unity.
    """
    q = ctx.q
    ms = table_indices(q, which)
    if which in (1, 2):
        rk = 2 if which == 1 else 1
        res = _run_pairs(ctx, [(0, m) for m in ms], attribute, jobs)
        return [res[(0, m)][rk] for m in ms]
    if which != 3:
        raise ValueError("which must be 1, 2 or 3")
    pairs = [(di, m) for m in ms for di in range(q + 1)]
    res = _run_pairs(ctx, pairs, attribute, jobs)
    rows = []
    for m in ms:
        total, bd, unexp = 0, {}, 0
        for di in range(q + 1):
            for rk in (1, 2):
                r = res[(di, m)][rk]
                total += r.count
                for k, v in r.family_breakdown.items():
                    bd[k] = bd.get(k, 0) + v
                unexp = None if r.unexplained is None or unexp is None else unexp + r.unexplained
        rows.append(CensusRow(q, None, f"m={m}", 0, total, dict(sorted(bd.items())), unexp))
    return rows


def delta_invariance(ctx: FieldCtx, m: int) -> dict:
    """Per-root census counts {delta_index: (rank1, rank2)} for one index."""
    res = _run_pairs(ctx, [(di, m) for di in range(ctx.q + 1)], False, 1)
    return {di: (r[1].count, r[2].count) for (di, _), r in res.items()}


# -- base field listings -----------------------------------------------------

def _fq_tables(ctx: FieldCtx):
    q = ctx.q
    mul = ctx.mul_table()[:q, :q]
    add = ctx.add_table()[:q, :q]
    neg = ctx.vneg(np.arange(q))
    pw = np.array([[ctx.pow_n(a, e) if a else int(e == 0) for e in range(q)] for a in range(q)])
    return mul, add, neg, pw


def interpolate_perms(ctx: FieldCtx, perms: np.ndarray) -> np.ndarray:
    """Coefficients (c_0..c_(q-1)) of the polynomials through rows of perms.

    Row r gives the images of the F_q encodings 0..q-1.  Uses the indicator
    1 - (y - a)^(q-1) expanded as sum_k a^(q-1-k) y^k.
    """
    q = ctx.q
    mul, add, neg, pw = _fq_tables(ctx)
    P = perms.shape[0]
    out = np.zeros((P, q), dtype=np.int64)
    out[:, 0] = perms[:, 0]
    for k in range(1, q):
        acc = np.zeros(P, dtype=np.int64)
        for a in range(q):
            acc = add[acc, mul[perms[:, a], pw[a, q - 1 - k]]]
        out[:, k] = neg[acc]
    return out


def normalized_base_pps(ctx: FieldCtx) -> list[list[Elt]]:
    """All monic PPs of F_q of degree < q fixing 0, as dense coefficient lists."""
    q = ctx.q
    if q > 9:
        raise FieldTooLargeForListing(f"listing all PPs of F_{q} is capped at q <= 9")
    perms = np.array([(0,) + p for p in itertools.permutations(range(1, q))], dtype=np.int64)
    coeffs = interpolate_perms(ctx, perms)
    nz = coeffs != 0
    deg = q - 1 - np.argmax(nz[:, ::-1], axis=1)
    monic = coeffs[np.arange(len(coeffs)), deg] == 1
    out = []
    for row, d in zip(coeffs[monic], deg[monic]):
        out.append([ctx.elt(int(c)) for c in row[: d + 1]])
    out.sort(key=lambda c: (len(c), [x.n for x in reversed(c)]))
    return out


def without_linear_term(polys) -> list:
    return [c for c in polys if len(c) > 2 and c[1].n == 0]


# -- s-polynomials over the trace --------------------------------------------

def trace_spolys(ctx: FieldCtx):
    """Every monic s-polynomial with F_q coefficients for s = x^q + x, in order."""
    one = ctx.one
    fq = list(ctx.subfield())
    for m in range(2, ctx.q):
        for cs in itertools.product(fq, repeat=m - 2):
            yield SPoly.make(one, m, {i + 2: c for i, c in enumerate(cs)})


def _trace_block(args):
    spec, start, stop = args
    ctx = field_from_spec(spec)
    _, _, rank2 = _grid(ctx)
    out = []
    for g in itertools.islice(trace_spolys(ctx), start, stop):
        hits = census_hits(ctx, g.values())
        out.append((int(rank2[hits].sum()), int((~rank2[hits]).sum())))
    return out


def trace_census(ctx: FieldCtx, jobs: int = 1) -> list[tuple[int, int]]:
    """(rank-2 count, rank-1 count) for every trace s-polynomial, in order."""
    _check_census_size(ctx)
    n = sum(ctx.q ** (m - 2) for m in range(2, ctx.q))
    step = max(1, n // (8 * max(jobs, 1)))
    blocks = [(ctx.spec(), a, min(a + step, n)) for a in range(0, n, step)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_trace_block, blocks))
    else:
        parts = [_trace_block(b) for b in blocks]
    return [x for p in parts for x in p]


def trace_rank2_oracle(ctx: FieldCtx, g: SPoly) -> int:
    """q(q-1)^2 + k q^2 (q-1), k = #gamma in F_q^* with g + gamma x a PP of F_q."""
    from .construct import base_poly
    q = ctx.q
    base = dict(g.coeffs)
    k = sum(is_base_pp(base_poly(ctx, g.m, base, c)) for c in ctx.subfield_nonzero())
    return q * (q - 1) ** 2 + k * q * q * (q - 1)


def distribution(counts) -> dict:
    out = {}
    for c in counts:
        out[c] = out.get(c, 0) + 1
    return dict(sorted(out.items(), reverse=True))


# -- emitters ----------------------------------------------------------------

def table_columns(results: dict) -> tuple[list[str], dict]:
    """{field label: rows} -> (column labels, {m: {label: count}})."""
    cols = list(results)
    grid = {}
    for label, rows in results.items():
        for r in rows:
            m = int(r.shape.split("=")[1])
            grid.setdefault(m, {})[label] = r.count
    return cols, dict(sorted(grid.items()))


def emit_csv(results: dict) -> str:
    cols, grid = table_columns(results)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m"] + cols)
    for m, row in grid.items():
        w.writerow([m] + [row.get(c, "--") for c in cols])
    return buf.getvalue()


def emit_json(results: dict) -> str:
    return json.dumps({k: [r.to_json() for r in rows] for k, rows in results.items()},
                      sort_keys=True)


def emit_text(results: dict) -> str:
    cols, grid = table_columns(results)
    width = max(8, *(len(c) + 2 for c in cols))
    lines = ["m".ljust(4) + "".join(c.rjust(width) for c in cols)]
    for m, row in grid.items():
        lines.append(str(m).ljust(4) + "".join(str(row.get(c, "--")).rjust(width) for c in cols))
    return "\n".join(lines) + "\n"


def field_label(ctx: FieldCtx) -> str:
    return f"F_{ctx.q}^2"

