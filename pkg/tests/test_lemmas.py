import pytest

from gl2tors.errors import PreconditionError, ResourceLimitError
from gl2tors.modarith import Mat2, element_order, mat_inv, mat_mul, unipotent
from gl2tors.groups import NamedGroupId, Subgroup, named_group, subgroup_from_elements
from gl2tors.lemmas import (
    CartanTarget,
    NormalizerTarget,
    brute_force_cartan_conjugator,
    conjugate_into_cartan,
    conjugate_into_normalizer,
    cyclic_generator,
    decompose_sl2,
    normalizer_in_gl2,
)


def _cyclic(ell, x):
    elems = {Mat2.identity(ell)}
    y = x
    while not y.is_identity():
        elems.add(y)
        y = mat_mul(y, x)
    return Subgroup(ell, (x,), frozenset(elems))


def test_decompose_shear_is_single_letter():
    word = decompose_sl2(unipotent(7))
    assert word.letters == (("U", 1),)


def test_decompose_antidiagonal_example():
    word = decompose_sl2(Mat2(5, 0, -1, 1, 0))
    assert word.letters == (("U", 4), ("L", 1), ("U", 4))
    assert word.evaluate() == Mat2(5, 0, 4, 1, 0)


def test_decompose_rejects_wrong_det():
    with pytest.raises(PreconditionError):
        decompose_sl2(Mat2(5, 2, 0, 0, 1))


def test_decompose_exhaustive_mod7():
    sl2 = named_group(NamedGroupId.SL2, 7)
    for x in sl2.elements:
        word = decompose_sl2(x)
        assert word.evaluate() == x
        assert len(word) <= 12


def test_cartan_embedding_already_diagonal():
    h = _cyclic(5, Mat2.diag(5, 2, 3))
    emb = conjugate_into_cartan(h)
    assert emb.target is CartanTarget.SPLIT
    assert emb.verify(h)


def test_cartan_embedding_nonsplit():
    h = _cyclic(5, Mat2(5, 0, 2, 1, 0))
    emb = conjugate_into_cartan(h)
    assert emb.target is CartanTarget.NONSPLIT
    assert emb.verify(h)


def test_cartan_embedding_split_after_conjugation():
    h = _cyclic(5, Mat2(5, 0, 1, 4, 0))
    emb = conjugate_into_cartan(h)
    assert emb.target is CartanTarget.SPLIT
    assert emb.verify(h)


def test_cartan_embedding_rejects_nonabelian():
    g = named_group(NamedGroupId.NORM_SPLIT, 5)
    with pytest.raises(PreconditionError):
        conjugate_into_cartan(g)


def test_cartan_embedding_rejects_order_divisible_by_ell():
    h = _cyclic(5, unipotent(5))
    with pytest.raises(PreconditionError):
        conjugate_into_cartan(h)


def test_brute_force_agrees_on_sample():
    for x in (Mat2(7, 2, 1, 1, 3), Mat2(7, 0, 5, 1, 0), Mat2.diag(7, 3, 2)):
        if element_order(x) % 7 == 0:
            continue
        h = _cyclic(7, x)
        emb = conjugate_into_cartan(h)
        oracle = brute_force_cartan_conjugator(h)
        assert emb.verify(h)
        assert oracle is not None and oracle.verify(h)


def test_cyclic_generator_trivial():
    h = subgroup_from_elements(11, [Mat2.identity(11)])
    assert cyclic_generator(h).is_identity()


def test_cyclic_generator_diagonal_example():
    x = Mat2.diag(11, 4, 3)  # alpha^2, alpha^-2 for alpha = 2
    assert x.det() == 1
    h = _cyclic(11, x)
    assert h.order == 5
    gen = cyclic_generator(h)
    assert _cyclic(11, gen).elements == h.elements


def test_cyclic_generator_rejects_even_order():
    h = _cyclic(11, Mat2.diag(11, 10, 10))
    with pytest.raises(PreconditionError):
        cyclic_generator(h)


def test_normalizer_of_split_cartan():
    n = normalizer_in_gl2(named_group(NamedGroupId.SPLIT_CARTAN, 5))
    assert n.elements == named_group(NamedGroupId.NORM_SPLIT, 5).elements


def test_normalizer_of_nonsplit_cartan():
    n = normalizer_in_gl2(named_group(NamedGroupId.NONSPLIT_CARTAN, 5))
    assert n.elements == named_group(NamedGroupId.NORM_NONSPLIT, 5).elements


def test_normalizer_of_trivial_group():
    n = normalizer_in_gl2(subgroup_from_elements(5, [Mat2.identity(5)]))
    assert n.order == 480


def test_normalizer_scan_cap():
    with pytest.raises(ResourceLimitError):
        normalizer_in_gl2(subgroup_from_elements(17, [Mat2.identity(17)]))


def test_conjugate_into_normalizer_split():
    # a conjugated diagonal group whose determinant-1 part is trivial (odd)
    t = Mat2(7, 1, 1, 0, 1)
    g = subgroup_from_elements(
        7, [mat_mul(mat_mul(t, x), mat_inv(t)) for x in _cyclic(7, Mat2.diag(7, 3, 1)).elements]
    )
    emb = conjugate_into_normalizer(g)
    assert emb.target is NormalizerTarget.NORM_SPLIT
    assert emb.verify(g)


def test_conjugate_into_normalizer_nonsplit():
    h = _cyclic(5, Mat2(5, 0, 2, 1, 0))
    emb = conjugate_into_normalizer(h)
    assert emb.target is NormalizerTarget.NORM_NONSPLIT
    assert emb.verify(h)


def test_conjugate_into_normalizer_scalar():
    h = _cyclic(7, Mat2.diag(7, 3, 3))
    emb = conjugate_into_normalizer(h)
    assert emb.verify(h)


def test_conjugate_into_normalizer_rejects_even_sl_part():
    g = named_group(NamedGroupId.SL2, 5)
    with pytest.raises(PreconditionError):
        conjugate_into_normalizer(g)


def test_conjugated_image_matches_witness():
    # the witness is independently checkable: conjugate elementwise and test membership
    h = _cyclic(11, Mat2(11, 1, 3, 5, 9))
    if h.order % 11:
        emb = conjugate_into_cartan(h)
        target = named_group(
            NamedGroupId.SPLIT_CARTAN
            if emb.target is CartanTarget.SPLIT
            else NamedGroupId.NONSPLIT_CARTAN,
            11,
        )
        tinv = mat_inv(emb.conjugator)
        for x in h.elements:
            assert mat_mul(mat_mul(tinv, x), emb.conjugator) in target
