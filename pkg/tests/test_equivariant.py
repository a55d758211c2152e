import pytest

from equihom.complexes import (
    COEFF_Z,
    COEFF_Z1,
    COEFF_Z2,
    builtin,
    constant_map,
    dim,
    fixed_inclusion,
    fixed_subcomplex,
    identity_map,
)
from equihom.equivariant import (
    EqClass,
    cap_with_eta,
    class_from_coords,
    edge_morphism,
    edge_morphism_cohomology,
    eq_cohomology,
    eq_homology,
    equivariant_degree,
    eta_cap,
    fundamental_class,
    graded_degree_mod2,
    group_cohomology,
    homology,
    les_coeff,
    les_edge,
    localize_cohomology,
    localize_homology,
    ordinary_degree,
    pushforward,
    represented_class,
    total_complex,
    total_complex_of,
)
from equihom.intlinalg import FGAbelianGroup, IntMatrix, LinAlgError

Z = FGAbelianGroup(1)
Z2G = FGAbelianGroup(0, (2,))
TRIVIAL = FGAbelianGroup(0)
ALL_COEFFS = (COEFF_Z2, COEFF_Z, COEFF_Z1)


class TestGroupCohomology:
    def test_integers_trivial_action_degree2(self):
        got = group_cohomology(Z, IntMatrix.identity(1), 2)
        assert got == Z2G

    def test_twisted_integers_degree1(self):
        got = group_cohomology(Z, IntMatrix.identity(1).scale(-1), 1)
        assert got == Z2G

    def test_twisted_integers_no_invariants(self):
        got = group_cohomology(Z, IntMatrix.identity(1).scale(-1), 0)
        assert got == TRIVIAL

    def test_rejects_non_involution(self):
        with pytest.raises(LinAlgError):
            group_cohomology(Z, IntMatrix.from_rows([[2]]), 1)

    def test_swap_module_is_acyclic(self):
        swap = IntMatrix.from_rows([[0, 1], [1, 0]])
        for p in (1, 2, 3):
            assert group_cohomology(FGAbelianGroup(2), swap, p) == TRIVIAL


class TestTotalComplex:
    def test_point_untwisted_maps(self):
        window = total_complex(builtin("point"), COEFF_Z, -2, 0)
        assert [window[p].data for p in (0, -1, -2)] == \
            [((0,),), ((2,),), ((0,),)]

    def test_point_twisted_maps(self):
        window = total_complex(builtin("point"), COEFF_Z1, -2, 0)
        assert [window[p].data for p in (0, -1, -2)] == \
            [((2,),), ((0,),), ((2,),)]

    def test_free_pair_degree_zero(self):
        tc = total_complex_of(builtin("free-pair"), COEFF_Z)
        d0 = tc.diff(0)
        assert d0.rows == 2 and d0.cols == 2
        # (1 - swap): the swap-difference matrix
        assert d0 == IntMatrix.from_rows([[1, -1], [-1, 1]])

    def test_window_independence(self):
        X = builtin("circle-reflection")
        small = total_complex(X, COEFF_Z, -1, 1)
        large = total_complex(X, COEFF_Z, -3, 2)
        for p in (-1, 0, 1):
            assert small[p] == large[p]

    def test_differential_squares_to_zero(self):
        for name in ("circle-antipodal", "sphere-octahedron-reflection",
                     "torus-reflection"):
            X = builtin(name)
            for coeff in ALL_COEFFS:
                tc = total_complex_of(X, coeff)
                for p in range(-2, dim(X) + 1):
                    sq = tc.diff(p) @ tc.diff(p + 1)
                    if coeff.mod:
                        sq = sq.mod(coeff.mod)
                    assert sq.is_zero(), (name, coeff, p)


class TestEqHomology:
    @pytest.mark.parametrize("coeff", ALL_COEFFS, ids=str)
    def test_point_matches_group_cohomology(self, coeff):
        pt = builtin("point")
        module = Z2G if coeff.ring == "Z2" else Z
        sigma = IntMatrix.from_rows(
            [[-1 if (coeff.ring == "Z" and coeff.k == 1) else 1]])
        for p in range(-6, 1):
            assert eq_homology(pt, coeff, p) == \
                group_cohomology(module, sigma, -p)

    def test_free_pair(self):
        fp = builtin("free-pair")
        assert eq_homology(fp, COEFF_Z, 0) == Z
        for p in (-3, -2, -1, 1, 2):
            assert eq_homology(fp, COEFF_Z, p) == TRIVIAL

    def test_circle_reflection_mod2_dims(self):
        cr = builtin("circle-reflection")
        for p, d in [(1, 1), (0, 2), (-1, 2), (-2, 2), (-3, 2)]:
            assert eq_homology(cr, COEFF_Z2, p) == \
                FGAbelianGroup(0, (2,) * d)

    def test_cohomology_vanishes_in_negative_degrees(self):
        X = builtin("circle-reflection")
        for p in (-1, -2):
            assert eq_cohomology(X, COEFF_Z, p) == TRIVIAL


class TestSubdivisionInvariance:
    @pytest.mark.parametrize("name", ["free-pair", "circle-reflection",
                                      "circle-antipodal"])
    def test_eq_homology_is_a_homeomorphism_invariant(self, name):
        from equihom.complexes import barycentric_subdivide
        X = builtin(name)
        Y = barycentric_subdivide(X)
        for coeff in ALL_COEFFS:
            for p in range(-2, dim(X) + 2):
                assert eq_homology(X, coeff, p) == eq_homology(Y, coeff, p), \
                    (name, str(coeff), p)

    def test_sphere_reflection_subdivided_spot_checks(self):
        from equihom.complexes import barycentric_subdivide
        X = builtin("sphere-octahedron-reflection")
        Y = barycentric_subdivide(X)
        for coeff, p in [(COEFF_Z1, 2), (COEFF_Z, 0), (COEFF_Z2, -1)]:
            assert eq_homology(X, coeff, p) == eq_homology(Y, coeff, p)


class TestDisjointUnionAdditivity:
    def test_groups_add_up(self):
        from equihom.complexes import disjoint_union
        A = builtin("circle-reflection")
        B = builtin("free-pair")
        U = disjoint_union(A, B)
        for coeff in ALL_COEFFS:
            for p in range(-3, 3):
                ga = eq_homology(A, coeff, p)
                gb = eq_homology(B, coeff, p)
                gu = eq_homology(U, coeff, p)
                assert gu.free_rank == ga.free_rank + gb.free_rank
                # all torsion here is 2-primary, so the invariant factors
                # of the direct sum are the merged sorted factor lists
                assert sorted(gu.torsion) == sorted(ga.torsion + gb.torsion)


class TestEdgeMorphism:
    def test_point_identity(self):
        e = edge_morphism(builtin("point"), COEFF_Z, 0)
        assert e.matrix == IntMatrix.identity(1)

    def test_circle_antipodal_degree1_exact_image(self):
        # the invariant fundamental cycle is itself equivariant, so the
        # edge map in degree one is onto (index 1 in H_1 = Z)
        e = edge_morphism(builtin("circle-antipodal"), COEFF_Z, 1)
        assert e.source == Z and e.target == Z
        assert e.matrix == IntMatrix.from_rows([[1]])

    def test_sphere_reflection_twisted_top_edge_surjective(self):
        e = edge_morphism(builtin("sphere-octahedron-reflection"),
                          COEFF_Z1, 2)
        assert e.source == Z and e.target == Z
        assert e.matrix == IntMatrix.from_rows([[1]])


class TestEtaCap:
    def test_point_untwisted_to_twisted(self):
        s = eta_cap(builtin("point"), COEFF_Z, 0)
        assert s.source == Z and s.target == Z2G
        assert s.matrix == IntMatrix.from_rows([[1]])

    def test_double_cap_is_composite(self):
        X = builtin("circle-reflection")
        for coeff in ALL_COEFFS:
            for p in (1, 0, -1):
                once = eta_cap(X, coeff, p)
                twice = eta_cap(X, coeff.shift(), p - 1).compose(once)
                spot = once.source
                for i in range(spot.ngens):
                    coords = tuple(1 if j == i else 0
                                   for j in range(spot.ngens))
                    cls = EqClass(X, coeff, p, spot.generators[i])
                    direct = cap_with_eta(cls, power=2)
                    assert direct.coords() == twice.apply(coords)

    def test_free_pair_cap_is_zero(self):
        fp = builtin("free-pair")
        for coeff in ALL_COEFFS:
            for p in (-1, 0, 1):
                assert eta_cap(fp, coeff, p).is_zero()


class TestLongExactSequences:
    def test_point_edge_sequence(self):
        assert les_edge(builtin("point"), COEFF_Z, -3, 0).ok

    def test_circle_reflection_edge_sequence(self):
        report = les_edge(builtin("circle-reflection"), COEFF_Z2, -3, 2)
        assert report.ok and len(report.nodes) == 18

    def test_torus_reflection_edge_sequence(self):
        assert les_edge(builtin("torus-reflection"), COEFF_Z, -4, 2).ok

    def test_point_coefficient_sequence(self):
        assert les_coeff(builtin("point"), 0, -3, 0).ok

    def test_sphere_antipodal_coefficient_sequence(self):
        assert les_coeff(builtin("sphere-octahedron-antipodal"),
                         0, -3, 3).ok

    def test_klein_bottle_bockstein_detects_torsion(self):
        from equihom.equivariant import _coefficient_bockstein
        K = builtin("klein-bottle-trivial")
        assert les_coeff(K, 0, -2, 3).ok
        # the connecting map out of mod-2 degree 1 is nonzero: it sees the
        # Z/2 torsion of the integral first homology
        delta = _coefficient_bockstein(K, COEFF_Z, 1)
        assert not delta.is_zero()


class TestLocalization:
    def test_empty_fixed_set_gives_zero_map(self):
        X = builtin("circle-antipodal")
        loc = localize_homology(X, COEFF_Z2, 1)
        assert all(img.is_zero() for img in loc.gen_images)

    def test_circle_reflection_degree_pattern(self):
        # each degree-zero generator localizes to a point class whose
        # mod-2 degree matches the equivariant degree
        X = builtin("circle-reflection")
        F = fixed_subcomplex(X)
        loc = localize_homology(X, COEFF_Z2, 0)
        spot = eq_homology(X, COEFF_Z2, 0)
        seen = set()
        for i in range(spot.ngens):
            coords = tuple(1 if j == i else 0 for j in range(spot.ngens))
            cls = class_from_coords(X, COEFF_Z2, 0, coords)
            image = loc.apply(coords)
            assert graded_degree_mod2(F, image) == \
                equivariant_degree(cls) % 2
            seen.add(image.entries)
        assert seen == {((0, (0, 1)),), ((0, (1, 0)),)}

    def test_sum_of_fixed_point_classes_has_degree_zero(self):
        X = builtin("circle-reflection")
        F = fixed_subcomplex(X)
        loc = localize_homology(X, COEFF_Z2, 0)
        total = loc.apply((1, 1))
        assert graded_degree_mod2(F, total) == 0

    def test_fundamental_class_localizes_to_equator(self):
        X = builtin("sphere-octahedron-reflection")
        mu = fundamental_class(X, "Z", expect_dim=2)
        assert mu.coeff == COEFF_Z1
        image = localize_homology(X, COEFF_Z1, 2).apply(mu)
        assert image.component(1) == (1,)


class TestRestrictionLocalization:
    def test_trivial_involution_top_component_is_edge_mod2(self):
        X = builtin("rp2-trivial")
        for n in range(0, 3):
            src = eq_cohomology(X, COEFF_Z2, n)
            beta = localize_cohomology(X, COEFF_Z2, n)
            edge = edge_morphism_cohomology(X, COEFF_Z2, n)
            for i in range(src.ngens):
                coords = tuple(1 if j == i else 0 for j in range(src.ngens))
                top = beta.apply(coords).component(n)
                img = edge.apply(coords)
                padded = top if top else (0,) * len(img)
                assert tuple(c % 2 for c in img) == padded

    def test_circle_reflection_degree_one(self):
        X = builtin("circle-reflection")
        beta = localize_cohomology(X, COEFF_Z2, 1)
        images = {img.entries for img in beta.gen_images}
        assert images == {((0, (0, 1)),), ((0, (1, 0)),)}

    def test_free_action_zero(self):
        X = builtin("sphere-octahedron-antipodal")
        beta = localize_cohomology(X, COEFF_Z2, 2)
        assert all(img.is_zero() for img in beta.gen_images)


class TestDegrees:
    def test_point_class(self):
        cls = class_from_coords(builtin("point"), COEFF_Z, 0, (1,))
        assert equivariant_degree(cls) == 1

    def test_free_pair_orbit_class(self):
        # the generator is the invariant sum of the two points; its
        # pushforward to the point has coefficient sum two
        fp = builtin("free-pair")
        cls = class_from_coords(fp, COEFF_Z, 0, (1,))
        assert equivariant_degree(cls) == 2
        e = edge_morphism(fp, COEFF_Z, 0)
        chain = homology(fp, COEFF_Z, 0).lift(e.apply((1,)))
        assert ordinary_degree(fp, COEFF_Z, chain) == 2

    def test_degree_needs_degree_zero(self):
        X = builtin("circle-reflection")
        mu = fundamental_class(X, "Z2")
        with pytest.raises(LinAlgError):
            equivariant_degree(mu)

    def test_degree_rejects_twisted_integers(self):
        fp = builtin("free-pair")
        cls = class_from_coords(fp, COEFF_Z1, 0, (1,))
        with pytest.raises(LinAlgError):
            equivariant_degree(cls)


class TestFundamentalClass:
    def test_circle_antipodal_untwisted(self):
        mu = fundamental_class(builtin("circle-antipodal"), "Z")
        assert mu.coeff == COEFF_Z and mu.p == 1

    def test_sphere_reflection_twisted(self):
        mu = fundamental_class(builtin("sphere-octahedron-reflection"), "Z")
        assert mu.coeff == COEFF_Z1 and mu.p == 2

    def test_rp2_mod2(self):
        mu = fundamental_class(builtin("rp2-trivial"), "Z2")
        assert mu.coeff == COEFF_Z2 and mu.p == 2
        assert not mu.is_zero_class()

    def test_nonorientable_has_no_integral_class(self):
        with pytest.raises(LinAlgError):
            fundamental_class(builtin("rp2-trivial"), "Z")

    def test_disconnected_rejected(self):
        with pytest.raises(LinAlgError):
            fundamental_class(builtin("free-pair"), "Z", expect_dim=0)


class TestPushforward:
    def test_identity(self):
        X = builtin("circle-reflection")
        mu = fundamental_class(X, "Z2")
        assert pushforward(identity_map(X), mu).same_class(mu)

    def test_equator_class_recorded(self):
        X = builtin("sphere-octahedron-reflection")
        j = fixed_inclusion(X)
        pushed = represented_class(j, "Z")
        assert eq_homology(X, COEFF_Z, 1) == Z2G
        assert pushed.coords() == (1,)

    def test_constant_map_gives_degree(self):
        X = builtin("circle-reflection")
        spot = eq_homology(X, COEFF_Z2, 0)
        for i in range(spot.ngens):
            coords = tuple(1 if j == i else 0 for j in range(spot.ngens))
            cls = class_from_coords(X, COEFF_Z2, 0, coords)
            pushed = pushforward(constant_map(X), cls)
            assert pushed.coords() == (equivariant_degree(cls) % 2,)
