"""Worked inverse pairs over F_49, F_121 and F_169, and a representation search.

The pairs are written in terms of an unnamed primitive element a, so they
are checked under every monic primitive quadratic defining F_{p^2} over F_p
(with a the class of y).  A pair matches a representation when f is a
permutation and h inverts it there.
"""

from fq2perm.fields import build_field, multiplicative_order

# Each term is (coefficient, delta, exponent) for c (x^q + delta x)^k, or
# (a1, a0) for a linear part a1 x^q + a0 x.  Elements are ("pow", e) for a^e
# or ("lin", c0, c1) for c0 + c1 a.


def P(e):
    return ("pow", e)


def A(c0, c1):
    return ("lin", c0, c1)


ONE = A(1, 0)

F49 = [
    # f = (x^7+a^6x)^2 + 6a x^7 + (2a+6) x ; h = 6a (x^7+a^12 x)^2 + a x^7 + (5a+1) x
    ((ONE, P(6), 2, A(0, 6), A(6, 2)), (A(0, 6), P(12), 2, A(0, 1), A(1, 5))),
    ((ONE, P(6), 3, A(5, 2), A(2, 1)), (A(6, 0), P(6), 3, A(6, 0), A(2, 2))),
    ((ONE, P(18), 4, A(3, 0), A(5, 1)), (A(1, 6), P(6), 4, A(6, 0), A(2, 2))),
    ((ONE, P(36), 5, A(0, 4), A(4, 2)), (A(3, 0), P(36), 5, A(0, 1), A(3, 6))),
    ((ONE, P(30), 6, A(5, 4), A(4, 2)), (ONE, P(36), 6, A(5, 4), A(1, 2))),
]


def _rank1_form(coef, di, m, eta, dj):
    """(x^q + di x)^m + eta (x^q + dj x), scaled by coef; as (coef, di, m, a1, a0)."""
    return (coef, di, m, eta, ("mul", eta, dj))


F121 = [
    (_rank1_form(ONE, P(50), 3, P(30), P(70)), _rank1_form(P(60), P(50), 7, P(110), P(30))),
    (_rank1_form(ONE, P(10), 7, P(110), P(20)), _rank1_form(P(74), P(60), 3, P(90), P(110))),
    (_rank1_form(ONE, P(30), 9, P(51), P(110)), _rank1_form(P(35), P(100), 9, P(48), P(30))),
]

F169 = [
    (_rank1_form(ONE, P(12), 7, P(87), P(107)), _rank1_form(P(50), P(168), 7, P(59), P(167))),
]

FIXTURES = {7: F49, 11: F121, 13: F169}


def _elt(ctx, a, spec):
    if spec[0] == "pow":
        return a ** spec[1]
    if spec[0] == "lin":
        return ctx(spec[1]) + ctx(spec[2]) * a
    return _elt(ctx, a, spec[1]) * _elt(ctx, a, spec[2])


def form_values(ctx, a, form):
    coef, di, m, a1, a0 = (form[0], form[1], form[2], form[3], form[4])
    c, d = _elt(ctx, a, coef), _elt(ctx, a, di)
    b1, b0 = _elt(ctx, a, a1), _elt(ctx, a, a0)
    out = []
    for x in ctx.elements():
        xq = x.frob()
        out.append((c * (xq + d * x) ** m + b1 * xq + b0 * x).n)
    return out


def primitive_quadratics(p):
    """Monic x^2 + b x + c over F_p whose root generates F_{p^2}^*."""
    out = []
    for b in range(p):
        for c in range(1, p):
            try:
                ctx = build_field(p, 1, None, [c, b, 1])
            except ValueError:
                continue
            if multiplicative_order(ctx.from_coeffs([0, 1])) == p * p - 1:
                out.append([c, b, 1])
    return out


def check_pair(ctx, pair):
    """(f is a permutation, h o f = id)."""
    a = ctx.from_coeffs([0, 1])
    f = form_values(ctx, a, pair[0])
    h = form_values(ctx, a, pair[1])
    perm = len(set(f)) == ctx.order
    inv = perm and all(h[f[x]] == x for x in range(ctx.order))
    return perm, inv


def search(p):
    """{modulus: [(perm, inv) per pair]} over all primitive quadratics."""
    res = {}
    for mod in primitive_quadratics(p):
        ctx = build_field(p, 1, None, mod)
        res[tuple(mod)] = [check_pair(ctx, pair) for pair in FIXTURES[p]]
    return res


def matching(p):
    """Moduli under which every pair of the field is a valid (f, inverse) pair."""
    return [mod for mod, r in search(p).items() if all(inv for _, inv in r)]
