"""Compositional inverses of certified PPs.

Each recipe re-derives its ingredients (basis, root of unity, scalars) from
f itself, builds h, and checks h(f(x)) = f(h(x)) = x on the whole field
before returning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .construct import (Classifier, Family, PPForm, base_eval, base_poly, is_base_pp,
                        is_square_fq)
from .errors import (BaseNotPermutation, EvenCharacteristic, LambdaPowerNotInKernel,
                     NotAPermutation, NotAPermutationWitness, NoSuchDeltaJ, WrongFamily)
from .fields import Elt, FieldCtx, deltas
from .linearized import (LinPoly, from_images, in_span, inverse_rank2, kernel_vector,
                         s_poly)
from .spoly import SPoly, base_point

METHODS = ("Rank2Aligned", "Rank1Coprime", "HalfIndex", "TraceSPoly", "Transported",
           "FromPermLift", "Rank1SPoly", "Generic")


@dataclass
class InverseCert:
    """An inverse of f: a closed form ``h`` when a recipe applies, and its table."""

    h: PPForm | None
    table: np.ndarray
    method: str
    verified: bool = False
    notes: dict = field(default_factory=dict)
    ctx: FieldCtx | None = None

    def to_json(self):
        if self.h is None:
            ctx = self.ctx
            out = {"field": ctx.spec(),
                   "table": [[ctx.elt(x).coeffs, ctx.elt(int(y)).coeffs]
                             for x, y in enumerate(self.table)]}
        else:
            out = self.h.to_json()
        out["method"] = self.method
        out["verified"] = self.verified
        return out


def check_tables(f_tab: np.ndarray, h_tab: np.ndarray) -> bool:
    idx = np.arange(len(f_tab))
    return bool(np.array_equal(h_tab[f_tab], idx) and np.array_equal(f_tab[h_tab], idx))


def _finish(f: PPForm, h: PPForm, method: str, **notes) -> InverseCert:
    h_tab = h.values()
    return InverseCert(h, h_tab, method, check_tables(f.values(), h_tab), notes, f.ctx)


def find_delta_j(ctx: FieldCtx, w: Elt) -> Elt:
    """First root of unity delta_j (in list order) with w in ker(x^q + delta_j x)."""
    for d in deltas(ctx):
        if s_poly(d)(w).n == 0:
            return d
    raise NoSuchDeltaJ(f"no rank-1 s kills {w!r}")


def _as_form(ctx: FieldCtx, coeffs: dict, delta: Elt, M: LinPoly, family: Family) -> PPForm:
    """sum_i coeffs[i] s^i + M as a PPForm, pulling out the top coefficient."""
    top = max(i for i, c in coeffs.items() if c.n)
    lead = coeffs[top]
    g = SPoly.make(delta, top, {i: c / lead for i, c in coeffs.items() if i < top})
    return PPForm(g, M, family, {}, lead)


def _require(f: PPForm, *families: Family):
    if f.family not in families:
        raise WrongFamily(f"{f.family.value} is not one of {[x.value for x in families]}")
    if not f.is_normalized:
        raise WrongFamily("recipes expect a normalized form")


# -- monomial families -------------------------------------------------------

def invert_rank2_aligned(ctx: FieldCtx, f: PPForm) -> InverseCert:
    _require(f, Family.Rank2KernelAligned)
    g, L = f.g, f.L
    if not g.is_monomial or L.rank != 2:
        raise WrongFamily("expects s^m plus a rank-2 map")
    m = g.m
    u, v0, v = base_point(g.delta)
    z = v ** m
    if not in_span(L(u), z):
        raise WrongFamily("L does not send ker s into the line of im s^m")
    M = inverse_rank2(ctx, L)
    dj = find_delta_j(ctx, L(u))
    b = s_poly(dj)(L(v0))
    eta = -M(z) / b ** m
    h = PPForm(SPoly.make(dj, m), M, Family.Rank2KernelAligned, {}, eta)
    return _finish(f, h, "Rank2Aligned")


def invert_rank1_coprime(ctx: FieldCtx, f: PPForm) -> InverseCert:
    _require(f, Family.Rank1Coprime)
    g, L = f.g, f.L
    m, q = g.m, ctx.q
    if not g.is_monomial or L.rank != 1 or gcd(m, q - 1) != 1:
        raise WrongFamily("expects s^m plus a rank-1 map with gcd(m, q-1) = 1")
    u = kernel_vector(g.s)
    v = kernel_vector(L)
    z = g.s(v) ** m
    M = from_images(z, ctx.zero, L(u), u)
    dj = find_delta_j(ctx, L(u))
    n = pow(m, -1, q - 1)
    eta = v / s_poly(dj)(z) ** n
    h = PPForm(SPoly.make(dj, n), M, Family.Rank1Coprime, {}, eta)
    return _finish(f, h, "Rank1Coprime", n=n)


def comp_scalar_sign(ctx: FieldCtx, gamma: Elt) -> str:
    """'minus' when (1 + gamma)/gamma is a square in F_q, else 'plus'."""
    q = ctx.q
    if q % 2 == 0:
        raise EvenCharacteristic("the half-index sign rule needs odd q")
    m = (q + 1) // 2
    # x^m/gamma + x is a PP exactly when x^m + gamma x is
    if gamma.n == 0 or not gamma.in_subfield() or not is_base_pp(base_poly(ctx, m, linear=gamma)):
        raise NotAPermutationWitness(f"x^{m}/gamma + x is not a PP of F_q for {gamma!r}")
    return "minus" if is_square_fq((ctx.one + gamma) / gamma) else "plus"


def invert_half_index(ctx: FieldCtx, f: PPForm) -> InverseCert:
    _require(f, Family.Rank2FromBasePP)
    q = ctx.q
    if q % 2 == 0:
        raise EvenCharacteristic("the half-index recipe needs odd q")
    g, L = f.g, f.L
    m = (q + 1) // 2
    if not g.is_monomial or g.m != m or L.rank != 2:
        raise WrongFamily("expects s^((q+1)/2) plus a rank-2 map")
    s = g.s
    u, v0, base_v = base_point(g.delta)
    Linv = inverse_rank2(ctx, L)
    v = Linv(base_v ** m)
    if s(v).n == 0:
        raise WrongFamily("L sends ker s into the line of im s^m")
    v1, v2 = s(v) ** m, L(v)
    gamma = v2 / v1
    sq = gamma * gamma
    lam_v = sq / (sq - ctx.one)
    M = from_images(L(u), u, v2, lam_v * v)
    dj = find_delta_j(ctx, L(u))
    sign = comp_scalar_sign(ctx, gamma)
    k = gamma / (sq - ctx.one)
    k = -k if sign == "minus" else k
    eta = k * v / s_poly(dj)(v2) ** m
    h = PPForm(SPoly.make(dj, m), M, Family.Rank2FromBasePP, {}, eta)
    cert = _finish(f, h, "HalfIndex", gamma=gamma, sign=sign)
    # M o L has eigenvalues 1 and gamma^2/(gamma^2 - 1) on u and v
    cert.notes["eigen_ok"] = M(L(u)) == u and M(L(v)) == lam_v * v
    return cert


# -- s-polynomial families ---------------------------------------------------

def _base_of(ctx: FieldCtx, g: SPoly):
    """(lam, base coefficients) with g = lam^m g'(lam^-1 s), lam = s(v0)."""
    C = Classifier(ctx, g)
    if C.base is None:
        raise WrongFamily("outer coefficients are not a transported base polynomial")
    return C.lam, C.base


def invert_trace_spoly(ctx: FieldCtx, f: PPForm) -> InverseCert:
    _require(f, Family.TraceSPoly)
    g, L = f.g, f.L
    if g.delta != ctx.one or L.rank != 2 or any(not a.in_subfield() for _, a in g.coeffs):
        raise WrongFamily("expects a trace s-polynomial with F_q coefficients")
    u, v0, _ = base_point(g.delta)
    if not L(u).in_subfield():
        raise WrongFamily("L does not send ker s into F_q")
    v = v0 / g.s(v0)  # trace(v) = 1
    M = inverse_rank2(ctx, L)
    Lv = L(v)
    z = Lv.frob() - Lv
    M1 = M(ctx.one)
    a = dict(g.coeffs)
    a[g.m] = ctx.one
    etas = {i: -ai * M1 / z ** i for i, ai in a.items()}
    h = _as_form(ctx, etas, -ctx.one, M, Family.SPolyTransported)
    return _finish(f, h, "TraceSPoly")


def invert_transported_spoly(ctx: FieldCtx, f: PPForm) -> InverseCert:
    _require(f, Family.SPolyTransported, Family.TraceSPoly, Family.Rank2KernelAligned)
    g, L = f.g, f.L
    if L.rank != 2:
        raise WrongFamily("expects a rank-2 map")
    lam, base = _base_of(ctx, g)
    m = g.m
    u, v0, _ = base_point(g.delta)
    lm = lam ** m
    if not in_span(L(u), lm):
        raise WrongFamily("L does not send ker s into the line of lam^m")
    dj = find_delta_j(ctx, lm)
    sj = s_poly(dj)
    if sj(L(u)).n:
        raise LambdaPowerNotInKernel("L(u) and lam^m lie on different lines")
    v1 = g.s(v0) / lam
    v2 = sj(L(v0))
    M = inverse_rank2(ctx, L)
    a = dict(base)
    a[m] = ctx.one
    etas = {i: -ai * M(lm * v1 ** i) / v2 ** i for i, ai in a.items()}
    h = _as_form(ctx, etas, dj, M, Family.SPolyTransported)
    return _finish(f, h, "Transported")


def base_inverse(ctx: FieldCtx, phi: list[Elt]) -> list[Elt]:
    """Coefficients b_0..b_(q-1) of the inverse of the PP phi of F_q.

    Interpolates through the pairs (phi(x), x) using
    (y - a)^(q-1) = sum_k a^(q-1-k) y^k, so the y^k coefficient (k >= 1) is
    -sum_a psi(a) a^(q-1-k) and the constant term is psi(0).
    """
    q = ctx.q
    pts = {}
    for x in ctx.subfield():
        y = base_eval(phi, x)
        if y.n in pts:
            raise NotAPermutation("phi is not a permutation of F_q")
        pts[y.n] = x
    out = [pts[0]] + [ctx.zero] * (q - 1)
    for k in range(1, q):
        acc = ctx.zero
        for an, x in pts.items():
            e = q - 1 - k
            if an == 0 and e > 0:
                continue
            acc = acc + x * (ctx.elt(an) ** e if an else ctx.one)
        out[k] = -acc
    while len(out) > 1 and out[-1].n == 0:
        out.pop()
    return out


def invert_from_perm_lift(ctx: FieldCtx, f: PPForm) -> InverseCert:
    _require(f, Family.Rank2FromBasePP)
    g, L = f.g, f.L
    if L.rank != 2:
        raise WrongFamily("expects a rank-2 map")
    lam, base = _base_of(ctx, g)
    m = g.m
    s = g.s
    u, v0, _ = base_point(g.delta)
    lm = lam ** m
    if in_span(L(u), lm):
        raise WrongFamily("L sends ker s into the line of lam^m")
    v = inverse_rank2(ctx, L)(lm)
    z = s(v) / lam
    gamma = z.inverse()
    phi = base_poly(ctx, m, base, gamma)
    if not is_base_pp(phi):
        raise BaseNotPermutation("base polynomial plus gamma x is not a PP of F_q")
    psi = base_inverse(ctx, phi)
    b1 = psi[1] if len(psi) > 1 else ctx.zero
    M = from_images(L(u), u, lm, gamma * b1 * v)
    dj = find_delta_j(ctx, L(u))
    sl = s_poly(dj)(lm)
    cs = {i: gamma * psi[i] * v / sl ** i for i in range(2, len(psi)) if psi[i].n}
    h = _as_form(ctx, cs, dj, M, Family.Rank2FromBasePP)
    cert = _finish(f, h, "FromPermLift", gamma=gamma, b1=b1)
    cert.notes["eigen_ok"] = M(L(u)) == u and M(L(v)) == gamma * b1 * v
    return cert


def invert_rank1_spoly(ctx: FieldCtx, f: PPForm) -> InverseCert:
    _require(f, Family.SPolyRank1, Family.Rank1Coprime)
    g, L = f.g, f.L
    if L.rank != 1:
        raise WrongFamily("expects a rank-1 map")
    lam, base = _base_of(ctx, g)
    m = g.m
    phi = base_poly(ctx, m, base)
    if not is_base_pp(phi):
        raise BaseNotPermutation("outer polynomial is not a PP of F_q")
    s = g.s
    u = kernel_vector(s)
    v = kernel_vector(L)
    lm = lam ** m
    z = s(v) / lam
    dj = find_delta_j(ctx, L(u))
    sj = s_poly(dj)
    eta = sj(lm).inverse()
    M = from_images(lm, ctx.zero, L(u), u)
    psi = base_inverse(ctx, phi)
    kappa = v / z
    # the linear term of kappa psi(eta s_j) is folded into the linear part
    b1 = psi[1] if len(psi) > 1 else ctx.zero
    M2 = M + sj.scale(kappa * b1 * eta)
    cs = {i: kappa * psi[i] * eta ** i for i in range(2, len(psi)) if psi[i].n}
    h = _as_form(ctx, cs, dj, M2, Family.SPolyRank1)
    return _finish(f, h, "Rank1SPoly", kappa=kappa, eta=eta)


# -- dispatcher --------------------------------------------------------------

def invert_generic(ctx: FieldCtx, f: PPForm) -> InverseCert:
    f_tab = f.values()
    if len(np.unique(f_tab)) != ctx.order:
        raise NotAPermutation("f is not a permutation")
    h_tab = np.empty_like(f_tab)
    h_tab[f_tab] = np.arange(ctx.order)
    return InverseCert(None, h_tab, "Generic", check_tables(f_tab, h_tab),
                       {"note": "inverse given as a table; no closed form is claimed"}, ctx)


def _dispatch(ctx: FieldCtx, f: PPForm) -> InverseCert:
    fam, g = f.family, f.g
    if fam == Family.Rank2KernelAligned:
        return invert_rank2_aligned(ctx, f)
    if fam == Family.Rank1Coprime:
        return invert_rank1_coprime(ctx, f)
    if fam == Family.Rank2FromBasePP:
        if g.is_monomial and ctx.q % 2 and g.m == (ctx.q + 1) // 2:
            return invert_half_index(ctx, f)
        return invert_from_perm_lift(ctx, f)
    if fam == Family.TraceSPoly:
        return invert_trace_spoly(ctx, f)
    if fam == Family.SPolyTransported:
        return invert_transported_spoly(ctx, f)
    if fam == Family.SPolyRank1:
        return invert_rank1_spoly(ctx, f)
    return invert_generic(ctx, f)


def _dispatch_any(ctx: FieldCtx, f: PPForm) -> InverseCert:
    """Try the recipe named by the tag, then the one the certificate re-derives."""
    try:
        return _dispatch(ctx, f)
    except WrongFamily:
        fam = Classifier(ctx, f.g)(f.L)
        if fam is None or fam == f.family:
            raise
        return _dispatch(ctx, PPForm(f.g, f.L, fam))


def invert(ctx: FieldCtx, f: PPForm) -> InverseCert:
    """Inverse of any certified f, closed form when a recipe covers its family.

    A non-normalized f = c F is handled through F: if H inverts F then
    y -> H(y / c) inverts f, and that is again of the same shape.
    """
    if f.is_normalized:
        return _dispatch_any(ctx, f)
    fn = f.normalized()
    inner = _dispatch_any(ctx, fn)
    if inner.h is None:
        return invert_generic(ctx, f)
    h = inner.h.precompose_scalar(f.scale.inverse())
    return _finish(f, PPForm(h.g, h.L, inner.h.family, {}, h.scale), inner.method, **inner.notes)


def family_of(ctx: FieldCtx, h: PPForm):
    """Family of the normalized member of h's PP family."""
    hn = h.normalized()
    return Classifier(ctx, hn.g)(hn.L)
