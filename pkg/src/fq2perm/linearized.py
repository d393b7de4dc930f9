"""Linearized polynomials a1 x^q + a0 x over F_{q^2}.

Such a polynomial is an F_q-linear map of the two-dimensional F_q-space
F_{q^2}.  Its rank is read off the 2x2 Dickson matrix
``[[a0, a1], [a1^q, a0^q]]``, whose determinant is a0^(q+1) - a1^(q+1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotFullRank, RankCollapse
from .fields import Elt, FieldCtx


@dataclass(frozen=True)
class LinPoly:
    """L(x) = a1 x^q + a0 x.  Equality is coefficient equality."""

    a1: Elt
    a0: Elt
    rank: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.a1.n == 0 and self.a0.n == 0:
            rk = 0
        elif self.a0.norm() != self.a1.norm():
            rk = 2
        else:
            rk = 1
        object.__setattr__(self, "rank", rk)

    @property
    def ctx(self) -> FieldCtx:
        return self.a1.ctx

    def __call__(self, x: Elt) -> Elt:
        return self.a1 * x.frob() + self.a0 * x

    def values(self) -> np.ndarray:
        """L evaluated at every field element, indexed by encoding."""
        ctx = self.ctx
        xs = np.arange(ctx.order)
        return ctx.vadd(ctx.vmul(self.a1.n, ctx.vfrob(xs)), ctx.vmul(self.a0.n, xs))

    def scale(self, c: Elt) -> "LinPoly":
        return LinPoly(c * self.a1, c * self.a0)

    def __add__(self, other: "LinPoly") -> "LinPoly":
        return LinPoly(self.a1 + other.a1, self.a0 + other.a0)

    def compose(self, other: "LinPoly") -> "LinPoly":
        """self(other(x)) reduced mod x^(q^2) - x."""
        b1, b0 = other.a1, other.a0
        # a1 (b1 x^q + b0 x)^q + a0 (b1 x^q + b0 x), with x^(q^2) = x
        return LinPoly(self.a1 * b0.frob() + self.a0 * b1,
                       self.a1 * b1.frob() + self.a0 * b0)

    def key(self):
        return (self.a1.n, self.a0.n)

    def to_json(self):
        return {"a1": self.a1.coeffs, "a0": self.a0.coeffs}

    @classmethod
    def from_json(cls, ctx: FieldCtx, data) -> "LinPoly":
        return cls(ctx.from_coeffs(data["a1"]), ctx.from_coeffs(data["a0"]))

    def __repr__(self):
        return f"LinPoly({self.a1!r} x^q + {self.a0!r} x)"


def eval_lin(ctx: FieldCtx, L: LinPoly, x: Elt) -> Elt:
    return L(x)


def rank(ctx: FieldCtx, L: LinPoly) -> int:
    return L.rank


def dickson_matrix(L: LinPoly):
    return ((L.a0, L.a1), (L.a1.frob(), L.a0.frob()))


def dickson_rank(L: LinPoly) -> int:
    """Rank of the Dickson matrix by elimination over F_{q^2}."""
    (a, b), (c, d) = dickson_matrix(L)
    if not (a or b or c or d):
        return 0
    return 2 if a * d - b * c else 1


def brute_rank(L: LinPoly) -> int:
    """Dimension over F_q of the image, counted by evaluating everywhere."""
    size = len(np.unique(L.values()))
    q = L.ctx.q
    return {1: 0, q: 1, q * q: 2}[size]


# -- F_q-linear algebra in F_{q^2} ------------------------------------------

def independent(u: Elt, v: Elt) -> bool:
    """True when u, v form an F_q-basis of F_{q^2}."""
    return (u.frob() * v - u * v.frob()).n != 0


def in_span(x: Elt, d: Elt) -> bool:
    """x lies in the F_q-line spanned by the nonzero element d."""
    return (x / d).in_subfield()


def span(d: Elt) -> list[Elt]:
    return [c * d for c in d.ctx.subfield()]


def coordinates(w: Elt, u: Elt, v: Elt) -> tuple[Elt, Elt]:
    """(alpha, beta) in F_q with w = alpha u + beta v; u, v independent."""
    det = u.frob() * v - u * v.frob()
    alpha = (w.frob() * v - w * v.frob()) / det
    beta = (u.frob() * w - u * w.frob()) / det
    return alpha, beta


def from_images(u: Elt, Lu: Elt, v: Elt, Lv: Elt) -> LinPoly:
    """The unique linearized polynomial with L(u) = Lu and L(v) = Lv."""
    det = u.frob() * v - v.frob() * u
    if det.n == 0:
        raise ValueError("u and v are not F_q-independent")
    return LinPoly((Lu * v - Lv * u) / det, (u.frob() * Lv - v.frob() * Lu) / det)


def first_outside(ctx: FieldCtx, predicate) -> Elt:
    for x in ctx.nonzero():
        if not predicate(x):
            return x
    raise ValueError("every element satisfies the predicate")


# -- kernels and images ------------------------------------------------------

def kernel_basis(ctx: FieldCtx, L: LinPoly, method: str = "log") -> list[Elt]:
    """F_q-basis of ker L.

    For rank 1 the kernel is the line of solutions of x^(q-1) = -a0/a1,
    solved with the discrete log; ``method="scan"`` searches instead.
    """
    if L.rank == 2:
        return []
    if L.rank == 0:
        return [ctx.one, ctx.omega]
    if method == "scan":
        return [next(x for x in ctx.nonzero() if L(x).n == 0)]
    c = -L.a0 / L.a1
    k = c.log()
    # c has norm 1, so its log is a multiple of q-1
    return [ctx.omega ** (k // (ctx.q - 1))]


def image_basis(ctx: FieldCtx, L: LinPoly) -> list[Elt]:
    if L.rank == 0:
        return []
    if L.rank == 2:
        return [ctx.one, ctx.omega]
    w = L(ctx.one)
    return [w if w.n else L(ctx.omega)]


def kernel_vector(L: LinPoly) -> Elt:
    return kernel_basis(L.ctx, L)[0]


def image_vector(L: LinPoly) -> Elt:
    return image_basis(L.ctx, L)[0]


def inverse_rank2(ctx: FieldCtx, L: LinPoly) -> LinPoly:
    """Compositional inverse gamma x^q + eps x of a rank-2 L = alpha x^q + beta x."""
    if L.rank != 2:
        raise NotFullRank(f"{L!r} has rank {L.rank}")
    alpha, beta = L.a1, L.a0
    det = beta.norm() - alpha.norm()
    return LinPoly(-alpha / det, beta.frob() / det)


def enumerate_monic(ctx: FieldCtx, rank: int) -> list[LinPoly]:
    """Monic linearized polynomials of the requested rank.

    These are x^q + a0 x ordered by a0's encoding, plus x itself (listed
    first) among the rank-2 ones, for q^2 + 1 in total.
    """
    if rank not in (1, 2):
        raise ValueError("rank must be 1 or 2")
    one = ctx.one
    out = [LinPoly(ctx.zero, one)] if rank == 2 else []
    return out + [L for L in (LinPoly(one, a0) for a0 in ctx.elements()) if L.rank == rank]


def s_poly(delta: Elt) -> LinPoly:
    """s = x^q + delta x."""
    return LinPoly(delta.ctx.one, delta)


def rank1_with(kernel: Elt, image: Elt) -> LinPoly:
    """A rank-1 map with the given kernel line, sending a fixed complement onto ``image``."""
    ctx = kernel.ctx
    w = first_outside(ctx, lambda x: in_span(x, kernel))
    return from_images(kernel, ctx.zero, w, image)


def require_rank2(L: LinPoly):
    if L.rank != 2:
        raise RankCollapse(f"resulting linear map has rank {L.rank}")

