import pytest

from gl2tors.errors import PreconditionError
from gl2tors.modarith import Mat2, mat_inv, mat_mul, unipotent
from gl2tors.groups import NamedGroupId, closure, named_group, subgroup_from_elements
from gl2tors.stabilizers import (
    ProjPoint,
    UnipotentClass,
    act_row,
    degree_spectrum,
    exhaustive_spectrum,
    fixed_module,
    sl_part,
    stabilizer,
    unipotent_class,
    vector_stabilizer,
)


def _gl2(ell):
    return subgroup_from_elements(
        ell,
        [
            Mat2(ell, a, b, c, d)
            for a in range(ell)
            for b in range(ell)
            for c in range(ell)
            for d in range(ell)
            if (a * d - b * c) % ell != 0
        ],
    )


def test_proj_points_count():
    for ell in (5, 7, 11):
        pts = ProjPoint.all_points(ell)
        assert len(pts) == ell + 1
        assert len(set(pts)) == ell + 1


def test_proj_point_normalization():
    assert ProjPoint.from_vector(5, 2, 3) == ProjPoint(5, 1, 4)
    assert ProjPoint.from_vector(5, 0, 2) == ProjPoint(5, 0, 1)
    with pytest.raises(PreconditionError):
        ProjPoint.from_vector(5, 0, 0)


def test_borel_stabilizer_example():
    borel = named_group(NamedGroupId.BOREL, 5)
    stab = stabilizer(borel, ProjPoint(5, 0, 1))
    assert stab.order == 20
    assert all(x.d == 1 for x in stab.elements)
    assert borel.order // stab.order == 4


def test_stabilizer_fixes_vector_not_line():
    borel = named_group(NamedGroupId.BOREL, 5)
    stab = stabilizer(borel, ProjPoint(5, 0, 1))
    for x in stab.elements:
        assert act_row(0, 1, x) == (0, 1)


def test_trivial_group_stabilizer():
    g = subgroup_from_elements(7, [Mat2.identity(7)])
    for p in ProjPoint.all_points(7):
        assert stabilizer(g, p).order == 1


def test_sl_part_gl2():
    g = _gl2(5)
    part = sl_part(g)
    assert g.order // part.order == 4
    assert part.elements == named_group(NamedGroupId.SL2, 5).elements


def test_sl_part_shear():
    g = closure(7, [unipotent(7)])
    assert sl_part(g).elements == g.elements


def test_sl_part_nonsplit_normalizer():
    g = named_group(NamedGroupId.NORM_NONSPLIT, 5)
    assert g.order // sl_part(g).order == 4


def test_sl_index_equals_det_image_size():
    for gid in (NamedGroupId.BOREL, NamedGroupId.NORM_SPLIT, NamedGroupId.SL2):
        g = named_group(gid, 7)
        assert g.order // sl_part(g).order == len(g.det_image())


def test_unipotent_class_borel():
    borel = named_group(NamedGroupId.BOREL, 5)
    res = unipotent_class(borel, ProjPoint(5, 0, 1))
    assert res.kind is UnipotentClass.ORDER_ELL
    # conjugator witness really maps onto the shear
    t = res.conjugator
    stab_det1 = [
        x for x in stabilizer(borel, ProjPoint(5, 0, 1)).elements if x.det() == 1
    ]
    conj = {mat_mul(mat_mul(mat_inv(t), x), t) for x in stab_det1}
    assert conj == {unipotent(5) ** k for k in range(5)}


def test_unipotent_class_split_cartan():
    cs = named_group(NamedGroupId.SPLIT_CARTAN, 5)
    res = unipotent_class(cs, ProjPoint(5, 0, 1))
    assert res.kind is UnipotentClass.TRIVIAL


def test_degree_spectrum_gl2():
    spec = degree_spectrum(_gl2(5))
    assert set(spec.entries.values()) == {24}
    assert spec.sl_index == 4


def test_degree_spectrum_delta_u1():
    g = named_group(NamedGroupId.DELTA_U1, 11)
    spec = degree_spectrum(g)
    assert spec.entries[ProjPoint(11, 0, 1)] == 10
    for k in range(11):
        assert spec.entries[ProjPoint(11, 1, k)] == 55
    assert spec.sl_index == 10


def test_degree_spectrum_trivial():
    g = subgroup_from_elements(7, [Mat2.identity(7)])
    assert set(degree_spectrum(g).entries.values()) == {1}


def test_orbit_stabilizer_identity():
    for gid in (NamedGroupId.BOREL, NamedGroupId.NORM_NONSPLIT, NamedGroupId.DELTA_U1):
        g = named_group(gid, 11)
        for p in ProjPoint.all_points(11):
            stab = stabilizer(g, p)
            assert stab.order * (g.order // stab.order) == g.order


def test_exhaustive_spectrum_scaling_can_differ_from_representative():
    g = named_group(NamedGroupId.DELTA_U1, 11)
    spec = exhaustive_spectrum(g)
    assert len(spec) == 120
    assert spec[(0, 1)] == 10
    assert spec[(1, 0)] == 55


def test_exhaustive_spectrum_agrees_with_vector_stabilizer():
    g = named_group(NamedGroupId.NORM_SPLIT, 5)
    spec = exhaustive_spectrum(g)
    for (c, d), idx in spec.items():
        assert idx == g.order // vector_stabilizer(g, c, d).order


def test_fixed_module_identity():
    g = subgroup_from_elements(6, [Mat2.identity(6)])
    fm = fixed_module(g)
    assert (fm.m, fm.n) == (6, 6)


def test_fixed_module_shear():
    g = closure(5, [unipotent(5)])
    fm = fixed_module(g)
    assert (fm.m, fm.n) == (1, 5)


def test_fixed_module_minus_identity():
    g = closure(7, [Mat2.diag(7, -1, -1)])
    fm = fixed_module(g)
    assert (fm.m, fm.n) == (1, 1)


def test_fixed_module_composite_mixed():
    # mod 6: -I fixes only 2-torsion mod 3 part trivial ... check against scan
    g = closure(6, [Mat2(6, 1, 3, 0, 1)])
    fm = fixed_module(g)
    fixed = [
        (c, d)
        for c in range(6)
        for d in range(6)
        if all(act_row(c, d, x) == (c, d) for x in g.elements)
    ]
    assert fm.m * fm.n == len(fixed)
    assert fm.n % fm.m == 0 and 6 % fm.n == 0
