import pytest

from ihomology.filtered import builtin, cone, simplex_sphere
from ihomology.intersection import (allowable_indices, cohomology,
                                    comparison_map, gm_cohomology,
                                    intersection_homology, is_allowable,
                                    perverse_complex)
from ihomology.perversity import Perversity, clip, gm_lattice, top, zero
from ihomology.rings import QQ, ZZ, Zmod


def test_allowability_on_suspension(sigma_rp3):
    K = sigma_rp3
    cone_edge = next(s for s in K.simplices(1) if s[0] == 0)
    cone_tri = next(s for s in K.simplices(2) if s[0] == 0)
    body_tri = next(s for s in K.simplices(2) if K.stratum(s[0]) == 4)
    # an edge through an apex is never allowable at these perversities:
    # its apex part has dimension 0, far above k - 4 + p(4)
    assert not is_allowable(K, cone_edge, zero(4))
    assert not is_allowable(K, cone_edge, top(4))
    # a triangle through an apex needs p(4) = 2
    assert not is_allowable(K, cone_tri, zero(4))
    assert not is_allowable(K, cone_tri, clip(1, 4))
    assert is_allowable(K, cone_tri, top(4))
    # simplices away from the apexes are always allowable
    assert is_allowable(K, body_tri, zero(4))
    # top simplices meet the apex in dimension 0 = k - 4 + 0: allowable
    assert all(is_allowable(K, s, zero(4)) for s in K.simplices(4))


def test_allowable_counts(sigma_rp3):
    K = sigma_rp3
    # body simplices: 40, 232, 384, 192; cone simplices: two per body face
    assert len(allowable_indices(K, 0, zero(4))) == 40
    assert len(allowable_indices(K, 1, zero(4))) == 232
    assert len(allowable_indices(K, 2, top(4))) == 848
    assert len(allowable_indices(K, 1, top(4))) == 232
    assert len(allowable_indices(K, 4, zero(4))) == 384


def test_trivial_filtration_recovers_homology(s4):
    for p in gm_lattice(4):
        for k in range(5):
            ih = intersection_homology(s4, p, ZZ, k)
            assert ih.iso_type() == s4.homology(k, ZZ).iso_type()


def test_ih_sigma_rp3_integers(sigma_rp3):
    expect = [
        (zero(4), ["Z", "Z/2", "0", "0", "Z"]),
        (clip(1, 4), ["Z", "Z/2", "0", "0", "Z"]),
        (top(4), ["Z", "0", "Z/2", "0", "Z"]),
    ]
    for p, groups in expect:
        for k, g in enumerate(groups):
            ih = intersection_homology(sigma_rp3, p, ZZ, k)
            assert str(ih) == g, (str(p), k, str(ih))


def test_ih_sigma_rp3_rationals(sigma_rp3):
    for p in (zero(4), top(4)):
        for k, g in enumerate(["Q", "0", "0", "0", "Q"]):
            ih = intersection_homology(sigma_rp3, p, QQ, k)
            assert str(ih) == g, (str(p), k)


def test_ih_sigma_rp3_mod2(sigma_rp3):
    dims = [1, 1, 1, 0, 1]
    for k, d in enumerate(dims):
        ih = intersection_homology(sigma_rp3, zero(4), Zmod(2), k)
        assert ih.iso_type() == (d, ()), k


def test_ih_sigma_rp3_mod4(sigma_rp3):
    # composite coefficients exercise the lattice route; the suspension
    # formula over Z/4 uses H_*(rp3; Z/4) = (Z/4, Z/2, Z/2, Z/4)
    expect = [(1, ()), (0, (2,)), (0, (2,)), (0, ()), (1, ())]
    for k, t in enumerate(expect):
        ih = intersection_homology(sigma_rp3, zero(4), Zmod(4), k)
        assert ih.iso_type() == t, k


def test_rp3_homology_mod4(rp3):
    # sanity for the coefficients used above
    types = [rp3.homology(k, Zmod(4)).iso_type() for k in range(4)]
    assert types == [(1, ()), (0, (2,)), (0, (2,)), (1, ())]


def test_cone_formula(rp3):
    c = cone(rp3)
    for k, g in enumerate(["Z", "Z/2", "0", "0", "0"]):
        assert str(intersection_homology(c, zero(4), ZZ, k)) == g, k
    for k, g in enumerate(["Z", "0", "0", "0", "0"]):
        assert str(intersection_homology(c, top(4), ZZ, k)) == g, k


def test_comparison_map_zero_to_one(sigma_rp3):
    f = comparison_map(sigma_rp3, zero(4), clip(1, 4), ZZ, 1)
    assert f.source.iso_type() == (0, (2,))
    assert f.target.iso_type() == (0, (2,))
    assert f.is_isomorphism()


def test_comparison_map_zero_to_top_integers(sigma_rp3):
    f1 = comparison_map(sigma_rp3, zero(4), top(4), ZZ, 1)
    assert not f1.is_isomorphism()
    f2 = comparison_map(sigma_rp3, zero(4), top(4), ZZ, 2)
    assert not f2.is_isomorphism()
    for k in (0, 3, 4):
        assert comparison_map(sigma_rp3, zero(4), top(4), ZZ, k).is_isomorphism()


def test_comparison_map_zero_to_top_rationals(sigma_rp3):
    for k in range(5):
        f = comparison_map(sigma_rp3, zero(4), top(4), QQ, k)
        assert f.is_isomorphism(), k


def test_comparison_requires_order(sigma_rp3):
    with pytest.raises(ValueError):
        comparison_map(sigma_rp3, top(4), zero(4), ZZ, 1)


def test_rank_monotone_in_perversity(sigma_rp3):
    lat = gm_lattice(4)
    for p in lat:
        for q in lat:
            if p <= q:
                Cp = perverse_complex(sigma_rp3, p, ZZ)
                Cq = perverse_complex(sigma_rp3, q, ZZ)
                for k in range(5):
                    assert Cp.rank(k) <= Cq.rank(k)


def test_ordinary_cohomology(sigma_rp3):
    for k, g in enumerate(["Z", "0", "0", "Z/2", "Z"]):
        assert str(cohomology(sigma_rp3, ZZ, k)) == g, k


def test_gm_cohomology_degree3(sigma_rp3):
    assert str(gm_cohomology(sigma_rp3, clip(2, 4), ZZ, 3)) == "Z/2"
    assert gm_cohomology(sigma_rp3, clip(1, 4), ZZ, 3).is_trivial()
    assert gm_cohomology(sigma_rp3, zero(4), ZZ, 3).is_trivial()


def test_gm_cohomology_rejects_composite(sigma_rp3):
    from ihomology.intersection import gm_cochain_complex
    with pytest.raises(ValueError):
        gm_cochain_complex(sigma_rp3, zero(4), Zmod(4))


def test_class_coords_and_equality(sigma_rp3):
    P = perverse_complex(sigma_rp3, zero(4), ZZ)
    gens = P.generator_chains(1)
    assert len(gens) == 1
    g = gens[0]
    assert P.class_coords(1, g) == (1,)
    doubled = {i: 2 * v for i, v in g.items()}
    assert P.class_coords(1, doubled) == (0,)
    assert P.class_equal(1, doubled, {})
