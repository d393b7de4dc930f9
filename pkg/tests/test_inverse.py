import random

import numpy as np
import pytest

from fq2perm.construct import (Classifier, Family, PPForm, base_binomials, base_values,
                               carlitz_gammas, complete_from_base_pp, complete_general,
                               complete_rank1, complete_rank1_spoly,
                               complete_rank2_kernel_aligned, complete_trace_spoly,
                               complete_transported, construct_rank2_from_base_pp)
from fq2perm.errors import NotAPermutation, NotAPermutationWitness, WrongFamily
from fq2perm.fields import build_field, deltas
from fq2perm.inverse import (base_inverse, check_tables, comp_scalar_sign, family_of, invert,
                             invert_half_index, invert_rank1_coprime, invert_rank2_aligned)
from fq2perm.linearized import LinPoly
from fq2perm.spoly import SPoly, base_point
from fq2perm.verify import interpolate_perms

import worked_pairs as pf


def fixture_form(ctx, spec):
    a = ctx.from_coeffs([0, 1])
    coef, di, m, a1, a0 = (pf._elt(ctx, a, x) if i != 2 else x for i, x in enumerate(spec))
    g = SPoly.make(di, m)
    L = LinPoly(a1, a0)
    fam = Classifier(ctx, g)(L.scale(coef.inverse()))
    return PPForm(g, L, fam, {}, coef)


def assert_inverts(ctx, f, cert):
    assert cert.verified
    assert check_tables(f.values(), cert.table)
    if cert.h is not None:
        assert np.array_equal(cert.h.values(), cert.table)


# -- worked pairs ------------------------------------------------------------

F49 = build_field(7, 1, None, [3, 6, 1])
F121 = build_field(11, 1, None, [2, 7, 1])
F169 = build_field(13, 1, None, [2, 12, 1])


def test_f49_first_pair_closed_form():
    f_spec, h_spec = pf.F49[0]
    f = fixture_form(F49, f_spec)
    cert = invert(F49, f)
    assert cert.method == "Rank2Aligned"
    assert_inverts(F49, f, cert)
    want = fixture_form(F49, h_spec)
    h = cert.h
    assert (h.scale, h.g.delta, h.g.m, h.L) == (want.scale, want.g.delta, 2, want.L)


@pytest.mark.parametrize("i", range(5))
def test_f49_pairs_permute_and_invert(i):
    f = fixture_form(F49, pf.F49[i][0])
    assert len(set(f.values().tolist())) == 49
    assert_inverts(F49, f, invert(F49, f))


def test_f121_pairs_match_our_inverse():
    a = F121.from_coeffs([0, 1])
    for f_spec, h_spec in pf.F121:
        f = fixture_form(F121, f_spec)
        cert = invert(F121, f)
        assert cert.method == "Rank1Coprime"
        assert_inverts(F121, f, cert)
        assert cert.h.values().tolist() == pf.form_values(F121, a, h_spec)


def test_f169_half_index_pair():
    # m = (q+1)/2 with a rank-2 linear part
    a = F169.from_coeffs([0, 1])
    f_spec, h_spec = pf.F169[0]
    f = fixture_form(F169, f_spec)
    assert f.g.m == 7 and f.L.rank == 2
    cert = invert(F169, f)
    assert_inverts(F169, f, cert)
    assert cert.h.g.m == 7
    assert cert.h.values().tolist() == pf.form_values(F169, a, h_spec)


def test_rank1_inverse_exponent(F7):
    f = next(complete_rank1(F7, 0, 5))
    cert = invert_rank1_coprime(F7, f)
    assert cert.notes["n"] == 5  # 5 * 5 = 25 = 1 mod 6
    ctx = build_field(11)
    f = next(complete_rank1(ctx, 1, 7))
    assert invert(ctx, f).notes["n"] == 3


# -- half-index sign rule ----------------------------------------------------

def test_sign_q7(F7):
    assert comp_scalar_sign(F7, F7(3)) == "plus"


def test_sign_rejects_non_witness(F7):
    with pytest.raises(NotAPermutationWitness):
        comp_scalar_sign(F7, F7(1))


@pytest.mark.parametrize("p", [7, 11, 19])
def test_half_index_composition_identity(p):
    # h o f = id for a representative of every admissible gamma
    ctx = build_field(p)
    m = (p + 1) // 2
    _, _, v = base_point(ctx.one)
    rng = random.Random(p)
    for gamma in carlitz_gammas(ctx):
        Lu = ctx.elt(rng.randrange(1, ctx.order))
        try:
            f = construct_rank2_from_base_pp(ctx, 0, m, gamma, 0, Lu)
        except Exception:
            continue
        cert = invert_half_index(ctx, f)
        assert_inverts(ctx, f, cert)
        assert cert.notes["eigen_ok"]
        assert cert.notes["sign"] in ("plus", "minus")


# -- every family, every member ----------------------------------------------

def families(ctx):
    q = ctx.q
    ds = deltas(ctx)
    yield "aligned", complete_rank2_kernel_aligned(ctx, 3, q - 3)
    yield "rank1", complete_rank1(ctx, 2, 3 if q == 5 else 5)
    yield "trace", complete_trace_spoly(ctx, SPoly.make(ctx.one, 3, {2: ctx(3)}))
    lam = base_point(ds[4])[2] * ctx(2)
    yield "transported", complete_transported(ctx, 3, {2: ctx(2)}, ds[4], lam)
    if q == 5:
        yield "general", complete_general(ctx, SPoly.make(ds[2], 3, {2: ctx.omega ** 5}))
    if q == 7:
        yield "general", complete_general(ctx, SPoly.make(ctx.one, 4, {3: ctx(1), 2: ctx(3)}))
        yield "half", complete_from_base_pp(ctx, 1, 4)
        yield "lift", complete_from_base_pp(ctx, 5, 4, {2: ctx(3), 3: ctx(1)})
        yield "rank1-spoly", complete_rank1_spoly(ctx, 4, {2: ctx(3), 3: ctx(1)}, 4)


@pytest.mark.parametrize("p", [5, 7])
def test_all_families_invert(p):
    ctx = build_field(p)
    for name, gen in families(ctx):
        n = 0
        for f in gen:
            cert = invert(ctx, f)
            assert_inverts(ctx, f, cert)
            if name != "general":
                assert cert.h is not None, name
            if "eigen_ok" in cert.notes:
                assert cert.notes["eigen_ok"], name
            n += 1
        assert n > 0, name


def test_inverse_families_closed(F7):
    # inverses of aligned / rank-one / lifted PPs land in certified families
    for gen in (complete_rank2_kernel_aligned(F7, 2, 3), complete_rank1(F7, 0, 5),
                complete_from_base_pp(F7, 3, 4)):
        for f in list(gen)[::11]:
            h = invert(F7, f).h
            assert family_of(F7, h) is not None


def test_aligned_inverse_stays_aligned(F7):
    for f in list(complete_rank2_kernel_aligned(F7, 0, 3))[::7]:
        h = invert_rank2_aligned(F7, f).h
        assert family_of(F7, h) == Family.Rank2KernelAligned
        assert h.g.m == 3


def test_double_inversion(F7):
    for f in list(complete_rank1(F7, 4, 5))[::13] + list(complete_from_base_pp(F7, 0, 4))[::29]:
        h = invert(F7, f).h
        back = invert(F7, h)
        assert np.array_equal(back.table, f.values())


def test_wrong_family_rejected(F7):
    f = next(complete_rank1(F7, 0, 5))
    with pytest.raises(WrongFamily):
        invert_rank2_aligned(F7, f)


def test_generic_fallback(F7):
    # a non-normalized PP with no family tag falls back to a table
    f = next(complete_general(F7, SPoly.make(deltas(F7)[1], 4, {2: F7(1)})))
    g = PPForm(f.g, f.L, Family.GeneralRank2)
    cert = invert(F7, g)
    assert_inverts(F7, g, cert)


def test_non_permutation_rejected(F7):
    f = PPForm(SPoly.make(F7.one, 2), LinPoly(F7.zero, F7.zero), Family.GeneralRank2)
    with pytest.raises(NotAPermutation):
        invert(F7, f)


def test_json(F7):
    f = next(complete_rank1(F7, 0, 5))
    cert = invert(F7, f)
    data = cert.to_json()
    assert data["method"] == "Rank1Coprime" and data["verified"]
    assert PPForm.from_json(data).values().tolist() == cert.table.tolist()


# -- base field inverses -----------------------------------------------------

def _inv_ok(ctx, phi):
    psi = base_inverse(ctx, phi)
    ys = base_values(phi)
    return all(base_values(psi)[y.n] == x for x, y in zip(ctx.subfield(), ys))


def test_base_inverse_identity(F7):
    assert [c.n for c in base_inverse(F7, [F7.zero, F7.one])] == [0, 1]


def test_base_inverse_x5(F7):
    phi = [F7.zero] * 5 + [F7.one]
    psi = base_inverse(F7, phi)
    assert [c.n for c in psi] == [0, 0, 0, 0, 0, 1]  # 5 * 5 = 1 mod 6


def test_base_inverse_binomial(F7):
    b = base_binomials(F7, 4)[0]
    phi = [F7.zero, b.gamma, F7.zero, F7.zero, F7.one]
    assert _inv_ok(F7, phi)


def test_base_inverse_random_pps():
    ctx = build_field(11)
    sub = ctx.subfield()
    rng = random.Random(3)
    for _ in range(50):
        perm = sub[:]
        rng.shuffle(perm)
        # interpolate a random permutation and invert it back
        (row,) = interpolate_perms(ctx, np.array([[p.n for p in perm]]))
        assert _inv_ok(ctx, [ctx.fq(int(c)) for c in row])


def test_base_inverse_rejects(F7):
    with pytest.raises(NotAPermutation):
        base_inverse(F7, [F7.zero, F7.zero, F7.one])


# -- scalar multiples --------------------------------------------------------

def test_non_normalized_input(F7):
    f = next(complete_rank1(F7, 0, 5))
    c = F7.elt(19)
    fc = PPForm(f.g, f.L.scale(c), f.family, {}, c)
    cert = invert(F7, fc)
    assert_inverts(F7, fc, cert)
    assert cert.method == "Rank1Coprime"
