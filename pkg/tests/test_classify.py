import pytest
from sympy import primerange

from gl2tors.errors import PreconditionError
from gl2tors.modarith import Mat2, mat_inv, mat_mul, primitive_root, unipotent
from gl2tors.groups import NamedGroupId, closure, named_group, subgroup_from_elements
from gl2tors.stabilizers import ProjPoint
from gl2tors.classify import (
    BlHypotheses,
    ClassifyTarget,
    admissible_inertia_exponents,
    classify_image,
    cong_check,
    derive_delta,
    mod36_filter,
    not_bl_check,
    stripped_diagonal,
)


def test_mod36_examples():
    assert mod36_filter(11) is True
    assert mod36_filter(19) is False
    assert mod36_filter(43) is True


def test_mod36_rejects_composite():
    with pytest.raises(PreconditionError):
        mod36_filter(15)


def test_mod36_equivalent_descriptions():
    for ell in primerange(5, 10**4):
        direct = ell % 36 in {7, 11, 23, 31, 35}
        residues = ell % 4 == 3 and ell % 9 != 1 and ell != 3
        assert direct == residues


def test_cong_check_examples():
    assert cong_check(named_group(NamedGroupId.DELTA1, 11)) is True
    assert cong_check(named_group(NamedGroupId.SPLIT_CARTAN, 11)) is False
    trivial = subgroup_from_elements(11, [Mat2.identity(11)])
    assert cong_check(trivial) is True


def test_cong_check_rejects_nondiagonal():
    with pytest.raises(PreconditionError):
        cong_check(closure(11, [unipotent(11)]))


def test_classify_rejects_even_witness():
    borel = named_group(NamedGroupId.BOREL, 11)
    with pytest.raises(PreconditionError):
        classify_image(borel, ProjPoint(11, 0, 1))


def test_classify_borel_case():
    g = named_group(NamedGroupId.DELTA_U1, 11)
    verdict = classify_image(g, ProjPoint(11, 1, 0))  # index 55, odd
    assert verdict.target is ClassifyTarget.BOREL
    assert verdict.verify(g)


def test_classify_split_case():
    alpha = primitive_root(11)
    g = closure(11, [Mat2.diag(11, alpha, 1)])
    verdict = classify_image(g, ProjPoint(11, 0, 1))  # the fixed vector, index 1
    assert verdict.target is ClassifyTarget.NORM_SPLIT
    assert verdict.verify(g)


def test_classify_nonsplit_case():
    cns = named_group(NamedGroupId.NONSPLIT_CARTAN, 11)
    from gl2tors.modarith import element_order

    gen = next(x for x in cns.elements if element_order(x) == 120)
    t = Mat2(11, 2, 3, 1, 4)
    h = closure(11, [gen**8])  # order 15
    conj = subgroup_from_elements(
        11, [mat_mul(mat_mul(t, x), mat_inv(t)) for x in h.elements]
    )
    verdict = classify_image(conj, ProjPoint(11, 1, 0))
    assert verdict.target is ClassifyTarget.NORM_NONSPLIT
    assert verdict.verify(conj)


def test_stripped_diagonal_is_projection():
    g = named_group(NamedGroupId.DELTA_U1, 11)
    assert stripped_diagonal(g).elements == named_group(NamedGroupId.DELTA1, 11).elements


def test_derive_delta_examples():
    hyp = BlHypotheses(det_surjective=True)
    g1 = named_group(NamedGroupId.DELTA_U1, 11)
    v1 = derive_delta(g1, hyp)
    assert v1.delta_kind is NamedGroupId.DELTA1
    assert (v1.divisor, v1.congruence_ok, v1.mod36_class) == (5, True, 11)

    g2 = named_group(NamedGroupId.DELTA_U2, 11)
    v2 = derive_delta(g2, hyp)
    assert v2.delta_kind is NamedGroupId.DELTA2
    assert (v2.divisor, v2.congruence_ok, v2.mod36_class) == (5, True, 11)

    g3 = closure(23, named_group(NamedGroupId.DELTA1, 23).generators + (unipotent(23),))
    v3 = derive_delta(g3, hyp)
    assert v3.delta_kind is NamedGroupId.DELTA1
    assert (v3.divisor, v3.congruence_ok, v3.mod36_class) == (11, True, 23)


def test_derive_delta_rejects_small_prime():
    g = named_group(NamedGroupId.BOREL, 7)
    with pytest.raises(PreconditionError):
        derive_delta(g, BlHypotheses())


def test_derive_delta_rejects_cong_failure():
    g = named_group(NamedGroupId.BOREL, 11)
    with pytest.raises(PreconditionError):
        derive_delta(g, BlHypotheses())


def test_derive_delta_rejects_shearless_group_without_inertia_shape():
    # the diagonal group alone satisfies every surface-level hypothesis but
    # carries no plausible ramification datum, so it is rejected up front
    g = named_group(NamedGroupId.DELTA1, 11)
    with pytest.raises(PreconditionError):
        derive_delta(g, BlHypotheses())


def test_hypotheses_validate_witness():
    g = named_group(NamedGroupId.DELTA_U1, 11)
    BlHypotheses(odd_degree_witness=(1, 0)).validate_against(g)  # index 55
    with pytest.raises(PreconditionError):
        BlHypotheses(odd_degree_witness=(0, 1)).validate_against(g)  # index 10


def test_hypotheses_reject_bad_exponent():
    with pytest.raises(PreconditionError):
        BlHypotheses(inertia_exponent=5)


def test_not_bl_nonsplit_cartan_13():
    g = named_group(NamedGroupId.NONSPLIT_CARTAN, 13)
    report = not_bl_check(g, BlHypotheses(inertia_exponent=1))
    assert report.ambient == "NormNonsplit"
    assert {idx for idx, _ in report.table.values()} == {168}
    assert report.all_divisible


def test_not_bl_norm_split_11():
    g = named_group(NamedGroupId.NORM_SPLIT, 11)
    report = not_bl_check(g, BlHypotheses(inertia_exponent=1))
    assert report.table[(1, 0)] == (20, 2)
    assert report.all_divisible


def test_not_bl_norm_nonsplit_5():
    g = named_group(NamedGroupId.NORM_NONSPLIT, 5)
    report = not_bl_check(g, BlHypotheses(inertia_exponent=1))
    assert len(report.table) == 24
    assert all(idx % 2 == 0 for idx, _ in report.table.values())


def test_not_bl_rejects_group_outside_normalizers():
    g = named_group(NamedGroupId.BOREL, 11)
    with pytest.raises(PreconditionError):
        not_bl_check(g, BlHypotheses())


def test_not_bl_rejects_unrealizable_inertia():
    # index 25 would appear at (1,1) here; the precondition must exclude it
    cs = named_group(NamedGroupId.SPLIT_CARTAN, 11)
    flip = Mat2(11, 0, 1, 1, 0)
    squares = sorted({x**2 for x in cs.elements}, key=Mat2.entries)
    g = closure(11, tuple(squares) + (flip,))
    for e in (1, 2, 3, 4, 6):
        with pytest.raises(PreconditionError):
            not_bl_check(g, BlHypotheses(inertia_exponent=e))


def test_admissible_inertia_exponents_full_normalizer():
    g = named_group(NamedGroupId.NORM_SPLIT, 11)
    assert 1 in admissible_inertia_exponents(g)
