import random

import pytest

from cotorkit.algebra import build_graded_quotient, opposite
from cotorkit.cotor import (
    CanonicalMaps,
    HomothetyNotIso,
    PreconditionFailed,
    addc_precover,
    build_approximation,
    canonical_maps,
    check_cotranspose_sequence,
    check_transpose_sequence,
    cograde,
    cospherical_through,
    cotorsionfree_through,
    cotranspose,
    ext_C_module,
    in_bass_class,
    is_gorenstein_injective,
    make_context,
    matlis_context,
    proper_addc_resolution,
    regular_context,
    torsionfree_through,
    transpose,
    vanishing_profile,
)
from cotorkit.homology import cosyzygy, ext, injective_envelope, tor
from cotorkit.linalg import QQ, Matrix
from cotorkit.modules import (
    direct_sum,
    free_module,
    free_module_hom,
    iso_test,
    matlis_bimodule,
    matlis_dual,
    retag_left_over_opposite,
    structural_modules,
    submodule,
    subquotients,
    zero_module,
)

from test_algebra import f1_presentation, f2_presentation, f3_presentation


@pytest.fixture(scope="module")
def f1():
    return build_graded_quotient(f1_presentation(), QQ)


@pytest.fixture(scope="module")
def f2():
    return build_graded_quotient(f2_presentation(), QQ)


@pytest.fixture(scope="module")
def f3():
    return build_graded_quotient(f3_presentation(), QQ)


@pytest.fixture(scope="module")
def ctx1(f1):
    return matlis_context(f1, 6)


@pytest.fixture(scope="module")
def ctx2(f2):
    return matlis_context(f2, 6)


@pytest.fixture(scope="module")
def ctx3(f3):
    return regular_context(f3, 4)


def im_f9_dual(f1):
    free2 = free_module(f1, 2)
    x = f1.basis_vector(1)
    zero = tuple(QQ.zero() for _ in range(2))
    f9 = free_module_hom(free2, free2, [[x, zero], [x, x]], f1)
    im = subquotients(f9).image
    return retag_left_over_opposite(matlis_dual(im))


def test_matlis_context_valid(f2, ctx2):
    assert ctx2.kind == "matlis"
    assert ctx2.C.dim == 3
    assert ctx2.homothety_witness_left.rows == 3


def test_regular_context_valid(f3, ctx3):
    assert ctx3.kind == "regular"
    assert ctx3.C.dim == f3.dim


def test_simple_is_not_semidualizing(f2):
    st = structural_modules(f2)
    s2 = st.simples[0]
    c_bad = __import__("cotorkit.modules", fromlist=["Bimodule"]).Bimodule(
        f2, f2, 1, s2.action, [m.transpose() for m in matlis_dual(s2).action]
    )
    with pytest.raises(HomothetyNotIso):
        make_context(f2, f2, c_bad, 3)


def test_transpose_of_projective_vanishes(f2, ctx2):
    st = structural_modules(f2)
    assert transpose(st.regular, ctx2).dim == 0
    assert transpose(st.projectives[0], ctx2).dim == 0


def test_transpose_s1_regular_context(f1):
    ctx = regular_context(f1, 6)
    s1 = structural_modules(f1).simples[0]
    tr = transpose(s1, ctx)
    assert tr.dim == 1
    # Tr S1 is the right-module version of S1
    assert iso_test(
        retag_left_over_opposite(tr),
        retag_left_over_opposite(matlis_dual(s1)),
        random.Random(0),
    ).verdict == "Isomorphic"


def test_cotranspose_of_injective_vanishes(f2, ctx2):
    dlam = ctx2.c_left
    assert cotranspose(dlam, ctx2).dim == 0


def test_cotranspose_s1(f1, ctx1):
    s1 = structural_modules(f1).simples[0]
    ct = cotranspose(s1, ctx1)
    assert ct.dim == 1
    assert iso_test(ct, s1, random.Random(1)).verdict == "Isomorphic"


def test_tr_iso_cotr_dual(f2, ctx2):
    # Tr A = cTr D(A) for the simple and for a 2-dimensional cosyzygy
    st = structural_modules(f2)
    op = opposite(f2)
    ctx_op = matlis_context(op, 6)
    reg_ctx = regular_context(f2, 6)
    pool = [st.simples[0], cosyzygy(st.simples[0], 1)]
    for a_mod in pool:
        tr = transpose(a_mod, reg_ctx)  # right module over F2
        da = retag_left_over_opposite(matlis_dual(a_mod))  # left over op
        ctr = cotranspose(da, ctx_op)  # left over op
        res = iso_test(retag_left_over_opposite(tr), ctr, random.Random(2))
        assert res.verdict == "Isomorphic"


def test_theta_iso_for_injective_and_for_C(f2, ctx2):
    dlam = ctx2.c_left
    maps = canonical_maps(dlam, ctx2)
    assert maps.theta_iso
    st = structural_modules(f2)
    maps2 = canonical_maps(st.regular, ctx2)
    # regular module: theta surjectivity matches 1-cotorsionfreeness
    assert maps2.theta_epi == (cotorsionfree_through(st.regular, ctx2, 1) >= 1)


def test_vanishing_profile_injective(f2, ctx2):
    prof = vanishing_profile(ctx2.c_left, ctx2, 6)
    assert prof.cotorsionfree_through_bound
    assert prof.cospherical_through_bound
    assert prof.theta_iso


def test_profile_im_f9_dual(f1, ctx1):
    m = im_f9_dual(f1)
    # the retagged dual lives over the opposite algebra, which equals f1 here
    ctx = matlis_context(m.algebra, 6)
    prof = vanishing_profile(m, ctx, 6)
    assert prof.cotorsionfree_through_bound
    env, mono = injective_envelope(m)
    assert env.dim > m.dim  # not injective


def test_cograde_basics(f2, ctx2):
    z = zero_module(f2)
    assert cograde(z, ctx2, 6) is None
    st = structural_modules(f2)
    assert cograde(st.regular, ctx2, 6) == 0
    assert cograde(st.simples[0], ctx2, 6) == 0


def test_bass_class(f2, ctx2):
    assert in_bass_class(ctx2.c_left, ctx2, 6).holds
    st = structural_modules(f2)
    rep = in_bass_class(st.regular, ctx2, 6)
    prof = vanishing_profile(st.regular, ctx2, 6)
    assert rep.holds == (
        prof.cotorsionfree_through_bound and prof.cospherical_through_bound
    )


def test_addc_precover_of_C_and_injective(f2, ctx2):
    pre = addc_precover(ctx2.c_left, ctx2)
    assert pre.multiplicity == 1
    assert pre.is_epi
    assert pre.hom_c_surjective
    st = structural_modules(f2)
    pre2 = addc_precover(st.simples[0], ctx2)
    assert pre2.hom_c_surjective
    assert pre2.is_epi == (cotorsionfree_through(st.simples[0], ctx2, 1) >= 1)


def test_proper_resolution_of_C(f2, ctx2):
    res = proper_addc_resolution(ctx2.c_left, ctx2, 3)
    assert res.success
    assert res.steps[0].term.dim == 3
    assert all(s.term.dim == 0 for s in res.steps[1:])


def test_proper_resolution_matches_profile(f1, f2, ctx1, ctx2):
    for a, ctx in ((f1, ctx1), (f2, ctx2)):
        st = structural_modules(a)
        for m in (st.simples[0], st.regular, ctx.c_left):
            prof = cotorsionfree_through(m, ctx, 4)
            res = proper_addc_resolution(m, ctx, 4)
            assert res.success == (prof >= 4)
            if not res.success:
                assert res.failed_step == prof


def test_approximation_injective_n1(f2, ctx2):
    ap = build_approximation(ctx2.c_left, ctx2, 1)
    assert ap.certificate["sequence_exact"]
    assert ap.certificate["x_cospherical_through"] == 1
    assert ap.certificate["y_addc_id_at_most"] == 0


def test_approximation_s1_n2(f1, ctx1):
    s1 = structural_modules(f1).simples[0]
    ap = build_approximation(s1, ctx1, 2)
    assert ap.certificate["sequence_exact"]
    assert ap.certificate["x_cospherical_through"] == 2
    assert ap.certificate["y_addc_id_at_most"] <= 1


def test_approximation_s2_n1(f2, ctx2):
    # coOmega^1 is always 1-cotorsionfree, so the n = 1 build never fails
    s2 = structural_modules(f2).simples[0]
    ap = build_approximation(s2, ctx2, 1)
    assert ap.certificate["sequence_exact"]
    assert ap.into_x.source is s2


def test_approximation_bounded_infinity(f1, ctx1):
    s1 = structural_modules(f1).simples[0]
    ap = build_approximation(s1, ctx1, 2, mode="bounded-infinity")
    assert ap.certificate["sequence_exact"]
    assert ap.certificate["x_cotorsionfree_through"] == 4  # bound 6 - n 2
    assert ap.certificate["y_addc_id_at_most"] <= 1


def test_approximation_precondition_failure(f2, ctx2):
    # over the two-loop algebra the simple is not 2-cotorsionfree at depth 2
    s2 = structural_modules(f2).simples[0]
    if cotorsionfree_through(cosyzygy(s2, 2), ctx2, 2) < 2:
        with pytest.raises(PreconditionFailed):
            build_approximation(s2, ctx2, 2)


def test_gorenstein_injective_reports(f1, f2, ctx1, ctx2):
    rep = is_gorenstein_injective(ctx2.c_left, ctx2, 6)
    assert rep.holds_through_bound
    m = im_f9_dual(f1)
    ctx = matlis_context(m.algebra, 6)
    rep2 = is_gorenstein_injective(m, ctx, 6)
    assert rep2.holds_through_bound


def test_four_term_sequences_on_fixtures(f1, f2, ctx1, ctx2):
    for a, ctx in ((f1, ctx1), (f2, ctx2)):
        st = structural_modules(a)
        pool = [st.simples[0], st.regular, ctx.c_left, cosyzygy(st.simples[0], 1)]
        for m in pool:
            ok, detail = check_cotranspose_sequence(m, ctx)
            assert ok, detail
            ok2, detail2 = check_transpose_sequence(m, ctx)
            assert ok2, detail2


def test_ext_C_module_and_cograde_criterion(f2, ctx2):
    # degree-2 instance of the cograde criterion for the simple module
    s2 = structural_modules(f2).simples[0]
    lhs = all(
        cotorsionfree_through(cosyzygy(s2, i), ctx2, i) >= i for i in (1, 2)
    )
    rhs = True
    for i in (1, 2):
        e = ext_C_module(s2, ctx2, i)
        cg = cograde(e, ctx2, 6)
        if not (cg is None or cg >= i - 1):
            rhs = False
    assert lhs == rhs


def test_ker_theta_matches_tensor_ext(f2, ctx2):
    # dim Ker theta_{coOmega^n} = dim C (x) Ext^n(C, M) for n = 2
    st = structural_modules(f2)
    m = st.simples[0]
    w2 = cosyzygy(m, 2)
    maps = canonical_maps(w2, ctx2)
    ker_dim = maps.theta.source.dim - maps.theta.rank()
    e2 = ext_C_module(m, ctx2, 2)
    t = tor(ctx2.C, e2, 0)
    assert ker_dim == t.dim


def test_torsionfree_f3_module(f3, ctx3):
    # the cokernel of [[v,2x],[y,z]] is torsionfree as far as we look
    free2 = free_module(f3, 2)

    def elem(**kw):
        coeffs = [QQ.zero()] * f3.dim
        for name, val in kw.items():
            coeffs[f3.label_index(name)] = QQ.coerce(val)
        return tuple(coeffs)

    zero = tuple(QQ.zero() for _ in range(f3.dim))
    f10 = free_module_hom(
        free2, free2, [[elem(v=1), elem(x=2)], [elem(y=1), elem(z=1)]], f3
    )
    m = subquotients(f10).cokernel
    assert torsionfree_through(m, ctx3, 2) >= 2
