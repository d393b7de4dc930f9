"""Randomized invariants (hypothesis)."""

from hypothesis import given, settings, strategies as st

from fq2perm.errors import PPError
from fq2perm.construct import (complete_from_base_pp, complete_general, complete_rank1,
                               complete_rank1_spoly, complete_rank2_kernel_aligned,
                               complete_trace_spoly)
from fq2perm.fields import build_field, deltas
from fq2perm.inverse import invert
from fq2perm.linearized import LinPoly, enumerate_monic, inverse_rank2
from fq2perm.spoly import SPoly
from fq2perm.verify import check_inverse, is_permutation

from conftest import fields_small

FIELDS = fields_small() + [build_field(11), build_field(13)]


def field_and_elements(n=3):
    return st.sampled_from(FIELDS).flatmap(
        lambda ctx: st.tuples(st.just(ctx),
                              *[st.integers(0, ctx.order - 1).map(ctx.elt) for _ in range(n)]))


@given(field_and_elements())
def test_ring_axioms(t):
    ctx, a, b, c = t
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ctx.zero == a and a * ctx.one == a


@given(field_and_elements(1))
def test_inverse_and_norm(t):
    ctx, a = t
    if a.n:
        assert a * a.inverse() == ctx.one
        assert a.norm().in_subfield()
    assert a ** ctx.order == a


@given(field_and_elements(2))
def test_frobenius_homomorphism(t):
    ctx, a, b = t
    assert (a + b).frob() == a.frob() + b.frob()
    assert (a * b).frob() == a.frob() * b.frob()
    assert a.frob().frob() == a
    assert (a.frob() == a) == a.in_subfield()


@given(st.sampled_from(FIELDS))
def test_subfield_cardinality(ctx):
    assert len(ctx.subfield()) == ctx.q
    assert sum(1 for x in ctx.elements() if x.frob() == x) == ctx.q
    assert len(deltas(ctx)) == ctx.q + 1


SMALL = [build_field(2), build_field(3), build_field(2, 2), build_field(5), build_field(7),
         build_field(2, 3), build_field(3, 2)]


def test_inverse_rank2_all_monic():
    # exhaustive: every rank-2 monic L at q <= 9
    for ctx in SMALL:
        ident = LinPoly(ctx.zero, ctx.one)
        for L in enumerate_monic(ctx, 2):
            M = inverse_rank2(ctx, L)
            assert M.compose(L) == ident and L.compose(M) == ident


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_inverse_rank2_any(ctx, i, j):
    L = LinPoly(ctx.elt(i % ctx.order), ctx.elt(j % ctx.order))
    if L.rank == 2:
        M = inverse_rank2(ctx, L)
        assert all(M(L(x)) == x for x in ctx.elements())


def _family(ctx, kind, di, m):
    if kind == "aligned":
        return complete_rank2_kernel_aligned(ctx, di, m)
    if kind == "rank1":
        return complete_rank1(ctx, di, m)
    if kind == "lift":
        return complete_from_base_pp(ctx, di, m)
    if kind == "trace":
        return complete_trace_spoly(ctx, SPoly.make(ctx.one, m))
    if kind == "rank1-spoly":
        return complete_rank1_spoly(ctx, m, None, di)
    return complete_general(ctx, SPoly.make(deltas(ctx)[di], m))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([build_field(5), build_field(7), build_field(3, 2), build_field(2, 3)]),
       st.sampled_from(["aligned", "rank1", "lift", "trace", "rank1-spoly", "general"]),
       st.integers(0, 100), st.integers(0, 100), st.integers(0, 10 ** 6))
def test_constructed_forms_are_permutations(ctx, kind, di, m, pick):
    di %= ctx.q + 1
    m = 2 + m % (ctx.q - 2)
    try:
        forms = list(_family(ctx, kind, di, m))
    except (PPError, ValueError):
        return  # the family does not exist for these parameters
    if not forms:
        return
    f = forms[pick % len(forms)]
    assert is_permutation(ctx, f)
    cert = invert(ctx, f)
    assert cert.verified and check_inverse(ctx, f, cert.table)
