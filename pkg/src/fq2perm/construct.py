"""Certified normalized permutation polynomials f = g(s) + L(x) of F_{q^2}.

Every constructor checks the condition that makes its family work, builds L
from images of the basis {u, v0} (u spans ker s, v0 is the first element
outside it) and returns a PPForm tagged with the family.  ``complete_*``
generators enumerate whole families in a fixed order for counting.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import (BaseNotPermutation, CoefficientNotInSubfield, EvenCharacteristic,
                     FieldTooSmall, ImageClash, IndexOutOfRange, IneligibleLine,
                     LambdaNotInImage, NotAPermutationWitness, NotCoprime, RankCollapse,
                     SameKernel)
from .fields import Elt, FieldCtx, deltas, field_from_spec
from .linearized import LinPoly, coordinates, from_images, image_vector, in_span, s_poly
from .spoly import (EligibleLine, SPoly, base_point, eligible_rank1_lines,
                    eligible_rank2_affines, g_set, h_set, make_line)


class Family(str, enum.Enum):
    Rank2KernelAligned = "Rank2KernelAligned"
    Rank1Coprime = "Rank1Coprime"
    Rank2FromBasePP = "Rank2FromBasePP"
    TraceSPoly = "TraceSPoly"
    SPolyTransported = "SPolyTransported"
    SPolyRank1 = "SPolyRank1"
    GeneralRank1 = "GeneralRank1"
    GeneralRank2 = "GeneralRank2"


def _jsonable(val):
    if isinstance(val, Elt):
        return val.coeffs
    if isinstance(val, (list, tuple)):
        return [_jsonable(v) for v in val]
    if isinstance(val, dict):
        return {str(k): _jsonable(v) for k, v in val.items()}
    if isinstance(val, enum.Enum):
        return val.value
    if hasattr(val, "to_json"):
        return val.to_json()
    return val


@dataclass(frozen=True)
class PPForm:
    """f(x) = scale * g(s(x)) + L(x).

    Constructors always return scale = 1 (a normalized PP).  Inverses carry the
    leading coefficient of their outer polynomial in ``scale``.
    """

    g: SPoly
    L: LinPoly
    family: Family
    certificate: dict = field(default_factory=dict, compare=False, hash=False)
    scale: Elt | None = None

    def __post_init__(self):
        if self.scale is None:
            object.__setattr__(self, "scale", self.g.ctx.one)
        elif self.scale.n == 0:
            raise ValueError("scale must be nonzero")

    @property
    def ctx(self) -> FieldCtx:
        return self.g.ctx

    @property
    def is_normalized(self) -> bool:
        return self.scale.n == 1

    def __call__(self, x: Elt) -> Elt:
        return self.scale * self.g(x) + self.L(x)

    def values(self) -> np.ndarray:
        ctx = self.ctx
        return ctx.vadd(ctx.vmul(self.scale.n, self.g.values()), self.L.values())

    def key(self):
        return (self.g.delta.n, self.g.m, tuple((i, a.n) for i, a in self.g.coeffs),
                self.L.key(), self.scale.n)

    def normalized(self) -> "PPForm":
        """The monic member (1/scale) f of the same family of PPs."""
        if self.is_normalized:
            return self
        c = self.scale.inverse()
        return PPForm(self.g, self.L.scale(c), self.family, dict(self.certificate))

    def precompose_scalar(self, t: Elt) -> "PPForm":
        """The form of x -> f(t x).

        s(t x) = t^q (x^q + delta t^(1-q) x), so the outer polynomial keeps its
        shape over a new root of unity and only its coefficients rescale.
        """
        tq = t.frob()
        delta2 = self.g.delta * t / tq
        m = self.g.m
        lead = self.scale * tq ** m
        coeffs = {i: a * tq ** i / tq ** m for i, a in self.g.coeffs}
        g2 = SPoly.make(delta2, m, coeffs)
        L2 = LinPoly(self.L.a1 * tq, self.L.a0 * t)
        return PPForm(g2, L2, self.family, {}, lead)

    def to_json(self):
        out = {"field": self.ctx.spec(), "g": self.g.to_json(), "L": self.L.to_json(),
               "family": self.family.value}
        if not self.is_normalized:
            out["scale"] = self.scale.coeffs
        if self.certificate:
            out["certificate"] = _jsonable(self.certificate)
        return out

    @classmethod
    def from_json(cls, data, ctx: FieldCtx | None = None) -> "PPForm":
        if ctx is None:
            ctx = field_from_spec(data["field"])
        scale = ctx.from_coeffs(data["scale"]) if "scale" in data else None
        return cls(SPoly.from_json(ctx, data["g"]), LinPoly.from_json(ctx, data["L"]),
                   Family(data["family"]), dict(data.get("certificate", {})), scale)

    def __repr__(self):
        lead = "" if self.is_normalized else f"{self.scale!r}*"
        return f"PPForm[{self.family.value}]({lead}{self.g!r} + {self.L!r})"


# -- base field polynomials --------------------------------------------------
# A base polynomial is a dense list of F_q elements (index = degree).

def base_poly(ctx: FieldCtx, m: int, coeffs: dict | None = None, linear=None) -> list[Elt]:
    """x^m + sum a_i x^i (+ linear x) as a dense coefficient list."""
    c = [ctx.zero] * (m + 1)
    c[m] = ctx.one
    for i, a in (coeffs or {}).items():
        a = _fq(ctx, a)
        if not a.in_subfield():
            raise CoefficientNotInSubfield(f"coefficient of x^{i} is not in F_q")
        c[i] = a
    if linear is not None:
        c[1] = c[1] + _fq(ctx, linear)
    return c


def base_eval(coeffs: list[Elt], x: Elt) -> Elt:
    acc = x.ctx.zero
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def base_values(coeffs: list[Elt]) -> list[Elt]:
    return [base_eval(coeffs, x) for x in coeffs[0].ctx.subfield()]


def is_base_pp(coeffs: list[Elt]) -> bool:
    q = coeffs[0].ctx.q
    return len({y.n for y in base_values(coeffs)}) == q


def base_pp_gammas(ctx: FieldCtx, m: int, coeffs: dict | None = None) -> list[Elt]:
    """All gamma in F_q^* making x^m + sum a_i x^i + gamma x a PP of F_q."""
    return [g for g in ctx.subfield_nonzero() if is_base_pp(base_poly(ctx, m, coeffs, g))]


@dataclass(frozen=True)
class BaseBinomial:
    m: int
    gamma: Elt

    def __post_init__(self):
        if not is_base_pp(base_poly(self.gamma.ctx, self.m, linear=self.gamma)):
            raise NotAPermutationWitness(f"x^{self.m} + {self.gamma!r} x is not a PP of F_q")


def base_binomials(ctx: FieldCtx, m: int) -> list[BaseBinomial]:
    if not 2 <= m < ctx.q:
        raise IndexOutOfRange(f"index m={m} outside [2, q)")
    return [BaseBinomial(m, g) for g in base_pp_gammas(ctx, m)]


def is_square_fq(a: Elt) -> bool:
    q = a.ctx.q
    if q % 2 == 0 or a.n == 0:
        return True
    return (a ** ((q - 1) // 2)).n == 1


def carlitz_gammas(ctx: FieldCtx) -> list[Elt]:
    """(c^2+1)/(c^2-1) over squares c^2 outside {0, 1, -1}, deduplicated."""
    q = ctx.q
    if q % 2 == 0:
        raise EvenCharacteristic("the half-index binomials need odd q")
    if q < 7:
        raise FieldTooSmall(f"q={q} is below 7")
    one = ctx.one
    sq = {(c * c).n for c in ctx.subfield_nonzero()}
    out = set()
    for n in sq:
        c2 = ctx.elt(n)
        if c2 == one or c2 == -one:
            continue
        out.add(((c2 + one) / (c2 - one)).n)
    return [ctx.elt(n) for n in sorted(out)]


def carlitz_count(q: int) -> int:
    return (q - 3) // 2 if q % 4 == 3 else (q - 5) // 2


# -- helpers -----------------------------------------------------------------

def _fq(ctx, a) -> Elt:
    # ints are F_q encodings
    return ctx.fq(a) if isinstance(a, int) else a


def _delta(ctx: FieldCtx, delta) -> Elt:
    """Accept an Elt or an index into the list of roots of unity."""
    if isinstance(delta, Elt):
        return delta
    ds = deltas(ctx)
    if not 0 <= delta < len(ds):
        raise IndexOutOfRange(f"delta index {delta} outside [0, {len(ds)})")
    return ds[delta]


def _check_m(ctx: FieldCtx, m: int):
    if not 2 <= m <= ctx.q - 1:
        raise IndexOutOfRange(f"index m={m} outside [2, q-1] for q={ctx.q}")


def _rank2(L: LinPoly) -> LinPoly:
    if L.rank != 2:
        raise RankCollapse(f"resulting linear map has rank {L.rank}")
    return L


def monomial_z(delta: Elt, m: int) -> Elt:
    """z = s(v0)^m, spanning the line that contains im s^m."""
    return base_point(delta)[2] ** m


def in_image_of_s(delta: Elt, lam: Elt) -> bool:
    # im s is the line {y : y^q = delta^q y}
    return lam.frob() == delta.frob() * lam


def transport_spoly(ctx: FieldCtx, m: int, coeffs: dict | None, delta, lam: Elt) -> SPoly:
    """s^m + sum lam^(m-i) a_i s^i for a base-field outer polynomial."""
    delta = _delta(ctx, delta)
    if lam.n == 0 or not in_image_of_s(delta, lam):
        raise LambdaNotInImage(f"{lam!r} is not a nonzero element of im s")
    base = base_poly(ctx, m, coeffs)
    return SPoly.make(delta, m, {i: lam ** (m - i) * base[i] for i in range(2, m)})


def transport(ctx: FieldCtx, g: SPoly, delta, lam: Elt) -> SPoly:
    """Transport an s-polynomial whose coefficients already lie in F_q."""
    return transport_spoly(ctx, g.m, dict(g.coeffs), delta, lam)


# -- families ----------------------------------------------------------------

def construct_rank2_kernel_aligned(ctx: FieldCtx, delta, m: int, gamma, Lv: Elt) -> PPForm:
    """s^m + L with L(u) = gamma z and L(v0) = Lv."""
    delta = _delta(ctx, delta)
    _check_m(ctx, m)
    gamma = _fq(ctx, gamma)
    if gamma.n == 0 or not gamma.in_subfield():
        raise ValueError("gamma must be a nonzero element of F_q")
    u, v0, v = base_point(delta)
    z = v ** m
    L = _rank2(from_images(u, gamma * z, v0, Lv))
    return PPForm(SPoly.make(delta, m), L, Family.Rank2KernelAligned,
                  {"u": u, "z": z, "gamma": gamma})


def construct_rank1(ctx: FieldCtx, delta_i, m: int, delta_j, alpha: Elt) -> PPForm:
    """s_i^m + alpha (x^q + delta_j x)."""
    di, dj = _delta(ctx, delta_i), _delta(ctx, delta_j)
    _check_m(ctx, m)
    if gcd(m, ctx.q - 1) != 1:
        raise NotCoprime(f"gcd({m}, {ctx.q - 1}) != 1")
    if di == dj:
        raise SameKernel("L and s share a kernel")
    if alpha.n == 0:
        raise RankCollapse("alpha = 0 gives the zero map")
    z = monomial_z(di, m)
    L = s_poly(dj).scale(alpha)
    if in_span(image_vector(L), z):
        raise ImageClash("im L equals the line of im s^m")
    return PPForm(SPoly.make(di, m), L, Family.Rank1Coprime, {"z": z, "delta_j": dj})


def lifted_from_base_pp(ctx: FieldCtx, delta, m: int, coeffs: dict | None, gamma,
                        b_choice, Lu: Elt, lam: Elt | None = None) -> PPForm:
    """lam^m g(lam^-1 s) + L from a base PP g + gamma x.

    With b = b_choice u + v0 and z' = lam^-1 s(v0) in F_q, L(b) = gamma z' lam^m
    and L(u) = Lu off the line of lam^m.
    """
    delta = _delta(ctx, delta)
    _check_m(ctx, m)
    gamma, b_choice = _fq(ctx, gamma), _fq(ctx, b_choice)
    u, v0, v = base_point(delta)
    lam = v if lam is None else lam
    g = transport_spoly(ctx, m, coeffs, delta, lam)
    if gamma.n == 0 or not gamma.in_subfield():
        raise NotAPermutationWitness("gamma must be a nonzero element of F_q")
    if not is_base_pp(base_poly(ctx, m, coeffs, gamma)):
        raise NotAPermutationWitness(f"base polynomial plus {gamma!r} x is not a PP of F_q")
    if not b_choice.in_subfield():
        raise ValueError("b_choice must lie in F_q")
    lm = lam ** m
    zp = v / lam
    b = b_choice * u + v0
    if Lu.n == 0 or in_span(Lu, lm):
        raise RankCollapse("L(u) must lie off the line spanned by lam^m")
    L = _rank2(from_images(u, Lu, b, gamma * zp * lm))
    return PPForm(g, L, Family.Rank2FromBasePP,
                  {"u": u, "b": b, "lam": lam, "gamma": gamma, "base": base_poly(ctx, m, coeffs)})


def construct_rank2_from_base_pp(ctx: FieldCtx, delta, m: int, gamma, b_choice, Lu: Elt,
                                 coeffs: dict | None = None, lam: Elt | None = None) -> PPForm:
    """Rank-2 L that misses the kernel-aligned condition, lifted from a base PP."""
    return lifted_from_base_pp(ctx, delta, m, coeffs, gamma, b_choice, Lu, lam)


def construct_trace_spoly(ctx: FieldCtx, g: SPoly, gamma, Lv: Elt) -> PPForm:
    """g(x^q + x) + L with L(u) = gamma in F_q^* and L(v0) = Lv outside F_q."""
    if g.delta != ctx.one:
        raise ValueError("the trace family needs delta = 1")
    for i, a in g.coeffs:
        if not a.in_subfield():
            raise CoefficientNotInSubfield(f"coefficient of s^{i} is not in F_q")
    gamma = _fq(ctx, gamma)
    if gamma.n == 0 or not gamma.in_subfield():
        raise ValueError("gamma must be a nonzero element of F_q")
    u, v0, _ = base_point(g.delta)
    if Lv.in_subfield():
        raise RankCollapse("L(v0) must lie outside F_q")
    L = _rank2(from_images(u, gamma, v0, Lv))
    return PPForm(g, L, Family.TraceSPoly, {"u": u, "gamma": gamma})


def construct_transported_spoly(ctx: FieldCtx, m: int, coeffs: dict | None, delta, lam: Elt,
                                gamma, Lv: Elt) -> PPForm:
    """Transported g(s) + L with L(u) = gamma lam^m and L(v0) = Lv."""
    delta = _delta(ctx, delta)
    g = transport_spoly(ctx, m, coeffs, delta, lam)
    gamma = _fq(ctx, gamma)
    if gamma.n == 0 or not gamma.in_subfield():
        raise ValueError("gamma must be a nonzero element of F_q")
    u, v0, _ = base_point(delta)
    lm = lam ** m
    L = _rank2(from_images(u, gamma * lm, v0, Lv))
    return PPForm(g, L, Family.SPolyTransported, {"u": u, "lam": lam, "gamma": gamma})


def construct_rank1_spoly(ctx: FieldCtx, m: int, coeffs: dict | None, delta_i, lam: Elt | None,
                          delta_j, eta: Elt) -> PPForm:
    """lam^m g(lam^-1 s_i) + eta (x^q + delta_j x) for a base PP g."""
    di, dj = _delta(ctx, delta_i), _delta(ctx, delta_j)
    lam = base_point(di)[2] if lam is None else lam
    g = transport_spoly(ctx, m, coeffs, di, lam)
    if not is_base_pp(base_poly(ctx, m, coeffs)):
        raise BaseNotPermutation("outer polynomial is not a PP of F_q")
    if di == dj:
        raise SameKernel("L and s share a kernel")
    if eta.n == 0:
        raise RankCollapse("eta = 0 gives the zero map")
    L = s_poly(dj).scale(eta)
    lm = lam ** m
    if in_span(image_vector(L), lm):
        raise ImageClash("im L equals the line spanned by lam^m")
    return PPForm(g, L, Family.SPolyRank1, {"lam": lam, "delta_j": dj})


def construct_general(ctx: FieldCtx, g: SPoly, line: EligibleLine, t, c) -> PPForm:
    """PP from an eligible line with free parameters (t, c).

    Subspace line: t indexes a root of unity delta_j != delta (in list order,
    skipping delta itself) and L = c eta0 (x^q + delta_j x) with im L = line.
    Affine line b + span(d): L(u) = c d and L(v0 + t u) = b.
    """
    c = _fq(ctx, c)
    if c.n == 0 or not c.in_subfield():
        raise ValueError("c must be a nonzero element of F_q")
    u, v0, v = base_point(g.delta)
    if line.is_subspace:
        if ctx.zero in (G := g_set(ctx, g)) or any(x in G for x in line.points()):
            raise IneligibleLine("line meets the difference set")
        others = [d for d in deltas(ctx) if d != g.delta]
        dj = others[t]
        sj = s_poly(dj)
        eta0 = line.direction / image_vector(sj)
        L = sj.scale(c * eta0)
        return PPForm(g, L, Family.GeneralRank1, {"line": line, "delta_j": dj})
    H = h_set(ctx, g)
    if any(x in H for x in line.points()):
        raise IneligibleLine("affine line meets the quotient set")
    t = _fq(ctx, t)
    L = _rank2(from_images(u, c * line.direction, v0 + t * u, line.offset))
    return PPForm(g, L, Family.GeneralRank2, {"line": line})


# -- complete sets -----------------------------------------------------------

def _off_line(ctx: FieldCtx, d: Elt):
    return [x for x in ctx.nonzero() if not in_span(x, d)]


def complete_rank2_kernel_aligned(ctx: FieldCtx, delta, m: int):
    delta = _delta(ctx, delta)
    z = monomial_z(delta, m)
    for gamma in ctx.subfield_nonzero():
        for Lv in _off_line(ctx, z):
            yield construct_rank2_kernel_aligned(ctx, delta, m, gamma, Lv)


def complete_rank1(ctx: FieldCtx, delta, m: int):
    delta = _delta(ctx, delta)
    z = monomial_z(delta, m)
    for dj in deltas(ctx):
        if dj == delta:
            continue
        w = image_vector(s_poly(dj))
        for alpha in ctx.nonzero():
            if not in_span(alpha * w, z):
                yield construct_rank1(ctx, delta, m, dj, alpha)


def complete_from_base_pp(ctx: FieldCtx, delta, m: int, coeffs: dict | None = None,
                          lam: Elt | None = None):
    delta = _delta(ctx, delta)
    lam = base_point(delta)[2] if lam is None else lam
    lm = lam ** m
    for gamma in base_pp_gammas(ctx, m, coeffs):
        for b in ctx.subfield():
            for Lu in _off_line(ctx, lm):
                yield lifted_from_base_pp(ctx, delta, m, coeffs, gamma, b, Lu, lam)


def complete_trace_spoly(ctx: FieldCtx, g: SPoly):
    for gamma in ctx.subfield_nonzero():
        for Lv in _off_line(ctx, ctx.one):
            yield construct_trace_spoly(ctx, g, gamma, Lv)


def complete_transported(ctx: FieldCtx, m: int, coeffs: dict | None, delta, lam: Elt):
    delta = _delta(ctx, delta)
    lm = lam ** m
    for gamma in ctx.subfield_nonzero():
        for Lv in _off_line(ctx, lm):
            yield construct_transported_spoly(ctx, m, coeffs, delta, lam, gamma, Lv)


def complete_rank1_spoly(ctx: FieldCtx, m: int, coeffs: dict | None, delta,
                         lam: Elt | None = None):
    delta = _delta(ctx, delta)
    lam = base_point(delta)[2] if lam is None else lam
    lm = lam ** m
    for dj in deltas(ctx):
        if dj == delta:
            continue
        w = image_vector(s_poly(dj))
        for eta in ctx.nonzero():
            if not in_span(eta * w, lm):
                yield construct_rank1_spoly(ctx, m, coeffs, delta, lam, dj, eta)


def complete_general(ctx: FieldCtx, g: SPoly):
    """Every PP certified by the general line conditions, rank 1 then rank 2."""
    for line in eligible_rank1_lines(ctx, g):
        for t in range(ctx.q):
            for c in ctx.subfield_nonzero():
                yield construct_general(ctx, g, line, t, c)
    for line in eligible_rank2_affines(ctx, g):
        for t in ctx.subfield():
            for c in ctx.subfield_nonzero():
                yield construct_general(ctx, g, line, t, c)


# -- classification ----------------------------------------------------------

class Classifier:
    """Re-derives the family certificate of g(s) + L for a fixed g.

    Families are tried from most to least specific; None means no family
    certifies the pair (for a true PP this would be an unexplained hit).
    """

    def __init__(self, ctx: FieldCtx, g: SPoly):
        self.ctx, self.g = ctx, g
        self.u, self.v0, self.v = base_point(g.delta)
        m = g.m
        # coefficients a_i = lam^(m-i) b_i with b_i in F_q, for lam = s(v0)
        lam = self.v
        base = {i: a / lam ** (m - i) for i, a in g.coeffs}
        self.base = base if all(b.in_subfield() for b in base.values()) else None
        self.lam = lam
        self.lm = lam ** m
        if self.base is not None:
            self.base_poly = base_poly(ctx, m, base)
            self.base_is_pp = is_base_pp(self.base_poly)
            self.gammas = {x.n for x in base_pp_gammas(ctx, m, base)}
        self.monomial = g.is_monomial
        self.trace = g.delta == ctx.one and all(a.in_subfield() for _, a in g.coeffs)
        self._G = self._H = None

    def _line_sets(self):
        if self._G is None:
            self._G = g_set(self.ctx, self.g)
            self._H = h_set(self.ctx, self.g)
        return self._G, self._H

    def __call__(self, L: LinPoly) -> Family | None:
        if L.rank == 0:
            return None
        u, v0 = self.u, self.v0
        Lu = L(u)
        if L.rank == 1:
            if Lu.n == 0:
                return None
            if self.base is not None and self.base_is_pp:
                if not in_span(image_vector(L), self.lm):
                    return Family.Rank1Coprime if self.monomial else Family.SPolyRank1
            return self._general(L)
        if self.base is not None:
            if in_span(Lu, self.lm):
                if self.monomial:
                    return Family.Rank2KernelAligned
                return Family.TraceSPoly if self.trace else Family.SPolyTransported
            # L(b) = gamma z' lam^m for b = alpha u + v0 means the coordinate of
            # L(v0) along lam^m (basis lam^m, L(u)) equals gamma z'
            c_lm, _ = coordinates(L(v0), self.lm, Lu)
            zp = self.v / self.lam
            gam = c_lm / zp
            if gam.n in self.gammas:
                return Family.Rank2FromBasePP
        return self._general(L)

    def _general(self, L: LinPoly) -> Family | None:
        G, H = self._line_sets()
        if L.rank == 1:
            w = image_vector(L)
            if L(self.u).n and self.ctx.zero not in G and not any(x in G for x in make_line(w).points()):
                return Family.GeneralRank1
            return None
        aff = make_line(L(self.u), L(self.v0))
        if not aff.is_subspace and not any(x in H for x in aff.points()):
            return Family.GeneralRank2
        return None


def classify(ctx: FieldCtx, g: SPoly, L: LinPoly) -> Family | None:
    return Classifier(ctx, g)(L)
