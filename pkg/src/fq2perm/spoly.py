"""s-polynomials g(s) = s^m + sum_{2 <= i < m} a_i s^i with s = x^q + delta x.

Also home to the difference set G and difference-quotient set H of g on a
line of im(s).  A one-dimensional subspace avoiding G is exactly the image
of a rank-1 L that completes g(s) to a permutation; a nontrivial affine line
avoiding H plays the same role for rank-2 L.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IndexOutOfRange
from .fields import Elt, FieldCtx, deltas
from .linearized import LinPoly, first_outside, in_span, kernel_vector, s_poly


@dataclass(frozen=True)
class SPoly:
    """Monic g with top index m and lower coefficients at indices 2..m-1."""

    delta: Elt
    m: int
    coeffs: tuple = ()  # sorted (i, a_i) pairs with a_i != 0

    def __post_init__(self):
        ctx = self.delta.ctx
        if self.delta.norm() != ctx.one:
            raise ValueError("delta must be a (q+1)-th root of unity")
        if not 2 <= self.m <= ctx.q - 1:
            raise IndexOutOfRange(f"index m={self.m} outside [2, q-1] for q={ctx.q}")
        clean = []
        for i, a in sorted(self.coeffs, key=lambda t: t[0]):
            if not 2 <= i < self.m:
                raise IndexOutOfRange(f"coefficient index {i} outside [2, {self.m})")
            if a.n:
                clean.append((int(i), a))
        object.__setattr__(self, "coeffs", tuple(clean))

    @classmethod
    def make(cls, delta: Elt, m: int, coeffs: dict | None = None) -> "SPoly":
        return cls(delta, m, tuple((coeffs or {}).items()))

    @property
    def ctx(self) -> FieldCtx:
        return self.delta.ctx

    @property
    def s(self) -> LinPoly:
        return s_poly(self.delta)

    @property
    def is_monomial(self) -> bool:
        return not self.coeffs

    @property
    def support(self) -> frozenset:
        return frozenset([self.m] + [i for i, _ in self.coeffs])

    def coeff_list(self) -> list[Elt]:
        """Dense coefficients c_0..c_m."""
        ctx = self.ctx
        c = [ctx.zero] * (self.m + 1)
        c[self.m] = ctx.one
        for i, a in self.coeffs:
            c[i] = a
        return c

    def outer(self, t: Elt) -> Elt:
        """g(t), the outer polynomial alone."""
        acc = self.ctx.zero
        for c in reversed(self.coeff_list()):
            acc = acc * t + c
        return acc

    def __call__(self, x: Elt) -> Elt:
        return self.outer(x.frob() + self.delta * x)

    def values(self):
        """g(s(x)) at every field element, indexed by encoding."""
        import numpy as np
        ctx = self.ctx
        xs = np.arange(ctx.order)
        t = ctx.vadd(ctx.vfrob(xs), ctx.vmul(self.delta.n, xs))
        acc = np.zeros_like(t)
        for c in reversed(self.coeff_list()):
            acc = ctx.vadd(ctx.vmul(acc, t), c.n)
        return acc

    def to_json(self):
        return {"delta": self.delta.coeffs, "m": self.m,
                "coeffs": {str(i): a.coeffs for i, a in self.coeffs}}

    @classmethod
    def from_json(cls, ctx: FieldCtx, data) -> "SPoly":
        coeffs = {int(i): ctx.from_coeffs(c) for i, c in data.get("coeffs", {}).items()}
        return cls.make(ctx.from_coeffs(data["delta"]), int(data["m"]), coeffs)

    def __repr__(self):
        terms = [f"s^{self.m}"] + [f"{a!r} s^{i}" for i, a in reversed(self.coeffs)]
        return f"SPoly({' + '.join(terms)}; delta={self.delta!r})"


def eval_spoly(ctx: FieldCtx, g: SPoly, x: Elt) -> Elt:
    return g(x)


def base_point(delta: Elt) -> tuple[Elt, Elt, Elt]:
    """(u, v0, v): u spans ker s, v0 is the first element outside ker s, v = s(v0)."""
    ctx = delta.ctx
    s = s_poly(delta)
    u = kernel_vector(s)
    v0 = first_outside(ctx, lambda x: in_span(x, u))
    return u, v0, s(v0)


def _line_values(g: SPoly, v: Elt | None):
    ctx = g.ctx
    if v is None:
        v = base_point(g.delta)[2]
    return [(a, g.outer(a * v)) for a in ctx.subfield()]


def g_set(ctx: FieldCtx, g: SPoly, v: Elt | None = None) -> set:
    """{g(a v) - g(b v) : a != b in F_q}."""
    vals = _line_values(g, v)
    return {ga - gb for a, ga in vals for b, gb in vals if a != b}


def h_set(ctx: FieldCtx, g: SPoly, v: Elt | None = None) -> set:
    """{(g(a v) - g(b v)) / (b - a) : a != b in F_q}."""
    vals = _line_values(g, v)
    return {(ga - gb) / (b - a) for a, ga in vals for b, gb in vals if a != b}


# -- lines -------------------------------------------------------------------

@dataclass(frozen=True)
class EligibleLine:
    """The point set offset + span(direction), stored in canonical form.

    Build with :func:`make_line`; the canonical direction is the smallest
    nonzero element of the span and the canonical offset the smallest point.
    A subspace has offset 0.
    """

    direction: Elt
    offset: Elt

    @property
    def is_subspace(self) -> bool:
        return self.offset.n == 0

    def points(self) -> list[Elt]:
        return [self.offset + c * self.direction for c in self.direction.ctx.subfield()]

    def __contains__(self, x: Elt) -> bool:
        return in_span(x - self.offset, self.direction)

    def to_json(self):
        return {"direction": self.direction.coeffs, "offset": self.offset.coeffs}

    @classmethod
    def from_json(cls, ctx: FieldCtx, data) -> "EligibleLine":
        return make_line(ctx.from_coeffs(data["direction"]), ctx.from_coeffs(data["offset"]))


def make_line(direction: Elt, offset: Elt | None = None) -> EligibleLine:
    ctx = direction.ctx
    if direction.n == 0:
        raise ValueError("a line needs a nonzero direction")
    d = min((c * direction for c in ctx.subfield_nonzero()), key=lambda e: e.n)
    off = ctx.zero if offset is None else offset
    o = min((off + c * d for c in ctx.subfield()), key=lambda e: e.n)
    return EligibleLine(d, o)


def all_lines(ctx: FieldCtx) -> list[EligibleLine]:
    """The q+1 one-dimensional F_q-subspaces, spanned by omega^0..omega^q."""
    return [make_line(ctx.omega ** k) for k in range(ctx.q + 1)]


def affine_lines(line: EligibleLine) -> list[EligibleLine]:
    """The q-1 nontrivial translates of a subspace."""
    ctx = line.direction.ctx
    w = first_outside(ctx, lambda x: in_span(x, line.direction))
    return [make_line(line.direction, c * w) for c in ctx.subfield_nonzero()]


def eligible_rank1_lines(ctx: FieldCtx, g: SPoly, v: Elt | None = None) -> list[EligibleLine]:
    G = g_set(ctx, g, v)
    if ctx.zero in G:
        return []
    return [ln for ln in all_lines(ctx) if not any(x in G for x in ln.points())]


def eligible_rank2_affines(ctx: FieldCtx, g: SPoly, v: Elt | None = None) -> list[EligibleLine]:
    H = h_set(ctx, g, v)
    out = []
    for ln in all_lines(ctx):
        for aff in affine_lines(ln):
            if not any(x in H for x in aff.points()):
                out.append(aff)
    return out


def line_of(g: SPoly, L: LinPoly) -> EligibleLine:
    """The line that certifies g(s) + L under the general characterization.

    For rank-1 L this is im L; for rank-2 L it is L(v0) + span(L(u)) with
    u in ker s and s(v0) the base point used for G and H.
    """
    u, v0, _ = base_point(g.delta)
    if L.rank == 1:
        w = L(u) if L(u).n else L(v0)
        return make_line(w)
    return make_line(L(u), L(v0))


def all_deltas(ctx: FieldCtx) -> list[Elt]:
    return deltas(ctx)
