"""s-polynomials, the difference sets G and H, and eligible lines."""

import pytest

from fq2perm.errors import IndexOutOfRange
from fq2perm.fields import build_field, deltas
from fq2perm.linearized import in_span, s_poly
from fq2perm.spoly import (SPoly, affine_lines, all_lines, base_point, eligible_rank1_lines,
                           eligible_rank2_affines, eval_spoly, g_set, h_set, make_line)

import oracle


def test_kernel_of_trace_maps_to_zero(F7):
    g = SPoly.make(F7.one, 2)
    u, _, _ = base_point(F7.one)
    assert eval_spoly(F7, g, u).n == 0


def test_monomial_image_on_a_line(F7):
    for d in deltas(F7):
        g = SPoly.make(d, 4)
        _, _, v = base_point(d)
        z = v ** 4
        assert all(in_span(g(x), z) for x in F7.elements() if g(x).n)


def test_trace_spoly_image_in_subfield(F7):
    g = SPoly.make(F7.one, 5, {3: F7(2), 2: F7(6)})
    assert all(g(x).in_subfield() for x in F7.elements())


def test_values_match_naive_oracle(F7):
    F = oracle.Naive(7, list(F7.ext_modulus))
    g = SPoly.make(F7.one, 4, {3: F7(1), 2: F7(3)})
    naive = oracle.naive_spoly_values(F, (1, 0), [0, 0, 3, 1, 1])
    assert list(g.values()) == [F.encode(y) for y in naive]


def test_validation(F7):
    with pytest.raises(IndexOutOfRange):
        SPoly.make(F7.one, 7)
    with pytest.raises(IndexOutOfRange):
        SPoly.make(F7.one, 4, {1: F7.one})
    with pytest.raises(ValueError):
        SPoly.make(F7.elt(3), 3)


def test_zero_coefficients_dropped(F7):
    assert SPoly.make(F7.one, 4, {2: F7.zero}).is_monomial


def test_json_round_trip(F9):
    g = SPoly.make(deltas(F9)[2], 5, {3: F9.elt(40), 2: F9.elt(2)})
    assert SPoly.from_json(F9, g.to_json()) == g


def test_g_set_coprime_monomial(F7):
    g = SPoly.make(F7.one, 5)
    _, _, v = base_point(F7.one)
    G = g_set(F7, g)
    assert F7.zero not in G
    assert all(in_span(x, v ** 5) for x in G)


def test_g_set_contains_zero_for_square(F7):
    assert F7.zero in g_set(F7, SPoly.make(F7.one, 2))


def test_set_sizes_bounded(F7):
    q = F7.q
    g = SPoly.make(deltas(F7)[3], 5, {4: F7.elt(9), 2: F7.elt(30)})
    assert len(g_set(F7, g)) <= q * (q - 1)
    assert len(h_set(F7, g)) <= q * (q - 1)


def test_h_set_monomial_on_line(F7):
    for m in range(2, 7):
        g = SPoly.make(F7.one, m)
        _, _, v = base_point(F7.one)
        assert all(in_span(x, v ** m) for x in h_set(F7, g))


def test_h_set_trace_in_subfield(F7):
    g = SPoly.make(F7.one, 4, {3: F7(1), 2: F7(3)})
    assert all(x.in_subfield() for x in h_set(F7, g))


def test_coprime_monomial_has_q_lines(F7):
    g = SPoly.make(deltas(F7)[1], 5)
    lines = eligible_rank1_lines(F7, g)
    assert len(lines) == F7.q
    assert len(lines) * F7.q * (F7.q - 1) == 294


def test_zero_in_g_means_no_lines(F7):
    assert eligible_rank1_lines(F7, SPoly.make(F7.one, 2)) == []


def test_monomial_cosets_always_eligible(F7):
    for m in range(2, 7):
        g = SPoly.make(F7.one, m)
        _, _, v = base_point(F7.one)
        affs = eligible_rank2_affines(F7, g)
        cosets = affine_lines(make_line(v ** m))
        assert all(c in affs for c in cosets)


def test_rank2_affine_counts(F7):
    q = F7.q
    assert len(eligible_rank2_affines(F7, SPoly.make(F7.one, 4))) * q * (q - 1) == 840
    assert len(eligible_rank2_affines(F7, SPoly.make(F7.one, 2))) * q * (q - 1) == 252


def test_lines_partition_the_field(F7):
    lines = all_lines(F7)
    assert len(lines) == F7.q + 1
    pts = set()
    for ln in lines:
        pts |= {x.n for x in ln.points() if x.n}
    assert len(pts) == F7.order - 1


def test_line_canonical_form(F7):
    d = F7.elt(20)
    a = make_line(d)
    b = make_line(F7(3) * d)
    assert a == b
    w = F7.elt(1) if not in_span(F7.one, d) else F7.elt(8)
    assert make_line(d, w) == make_line(F7(5) * d, w + F7(2) * d)


def test_eligibility_independent_of_v():
    # the line counts do not depend on which nonzero v in im s is used
    for ctx in (build_field(5), build_field(7)):
        for di in (0, 2):
            d = deltas(ctx)[di]
            s = s_poly(d)
            vs = {s(x).n for x in ctx.elements()} - {0}
            for m, co in ((4, {3: 1, 2: 3}), (3, {}), (ctx.q - 1, {2: 1})):
                g = SPoly.make(d, m, {i: ctx(a) for i, a in co.items()})
                c1 = {len(eligible_rank1_lines(ctx, g, ctx.elt(v))) for v in vs}
                c2 = {len(eligible_rank2_affines(ctx, g, ctx.elt(v))) for v in vs}
                assert len(c1) == 1 and len(c2) == 1


def test_s_cubed_q7_literal_294(F7):
    # literal example: q=7, g=s^3, delta=omega^6 gives |lines| q(q-1) = 294.
    # gcd(3, 6) = 3 puts 0 in G, so no line is eligible and the product is 0.
    lines = eligible_rank1_lines(F7, SPoly.make(F7.omega ** 6, 3))
    assert len(lines) * F7.q * (F7.q - 1) == 294


def test_s_cubed_q7_has_no_rank1_lines(F7):
    d = F7.omega ** 6
    assert F7.zero in g_set(F7, SPoly.make(d, 3))
    assert eligible_rank1_lines(F7, SPoly.make(d, 3)) == []
    assert len(eligible_rank1_lines(F7, SPoly.make(d, 5))) * 42 == 294
