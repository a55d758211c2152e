import pytest

from equihom.complexes import ComplexFormatError
from equihom.enriques import (
    ALL_COMPONENT_KINDS,
    EnriquesTypeError,
    SPHERE,
    TORUS,
    SurfaceComponent,
    brauer_group,
    classify,
    enumerate_types,
    gm_status,
    h1_dims,
    make_type,
    nonorientable,
    type_from_dict,
    validate_type,
)
from equihom.intlinalg import FGAbelianGroup


def elem2(n):
    return FGAbelianGroup(0, (2,) * n)


class TestValidation:
    def test_sphere_alone_ok(self):
        t = make_type([SPHERE], [])
        assert validate_type(t) is None

    def test_orientable_genus_two_rejected(self):
        t = make_type([], [])
        bad = SurfaceComponent(True, 2)
        assert bad.violation() is not None
        with pytest.raises(EnriquesTypeError):
            make_type([bad], [])

    def test_nonorientable_genus_twelve_rejected(self):
        with pytest.raises(EnriquesTypeError):
            make_type([], [SurfaceComponent(False, 12)])

    def test_euler_characteristics(self):
        assert SPHERE.euler_characteristic == 2
        assert TORUS.euler_characteristic == 0
        assert nonorientable(1).euler_characteristic == 1
        assert nonorientable(2).euler_characteristic == 0


class TestH1Dims:
    def test_two_tori_one_half(self):
        t = make_type([TORUS, TORUS], [])
        assert h1_dims(t) == (4, 4)

    def test_nonorientable_drops_one(self):
        t = make_type([nonorientable(3)], [SPHERE])
        assert h1_dims(t) == (3, 2)

    def test_empty(self):
        assert h1_dims(make_type([], [])) == (0, 0)


class TestGMStatus:
    def test_sphere_each_half(self):
        assert gm_status(make_type([SPHERE], [SPHERE])) == (True, False)

    def test_projective_plane_alone(self):
        assert gm_status(make_type([nonorientable(1)], [])) == (True, True)

    def test_klein_bottle_alone(self):
        assert gm_status(make_type([nonorientable(2)], [])) == (True, False)

    def test_two_tori_one_half(self):
        assert gm_status(make_type([TORUS, TORUS], [])) == (False, False)

    def test_empty_flagged(self):
        t = make_type([], [])
        assert gm_status(t) == (False, False)
        out = classify(t)
        assert out.empty_real_part
        assert "note" in out.to_json()


class TestBrauer:
    def test_nonorientable_pair(self):
        t = make_type([nonorientable(3)], [SPHERE])
        assert brauer_group(t) == elem2(3)

    def test_orientable_both_halves(self):
        t = make_type([SPHERE], [SPHERE])
        assert brauer_group(t) == FGAbelianGroup(0, (2, 2, 4))

    def test_orientable_one_half(self):
        t = make_type([TORUS, TORUS], [])
        assert brauer_group(t) == elem2(4)

    def test_empty(self):
        assert brauer_group(make_type([], [])) == elem2(1)


class TestClassify:
    def test_mixed_type_full_output(self):
        t = make_type([nonorientable(3)], [SPHERE])
        out = classify(t)
        assert (out.dim_h1, out.dim_h1_alg) == (3, 2)
        assert out.is_gm and out.is_zgm
        assert out.brauer == elem2(3)

    def test_alg_defect_range(self):
        for t, out in enumerate_types(2):
            assert out.dim_h1_alg in (out.dim_h1, out.dim_h1 - 1)

    def test_brauer_structure(self):
        for t, out in enumerate_types(2):
            assert all(d in (2, 4) for d in out.brauer.torsion)
            assert sum(1 for d in out.brauer.torsion if d == 4) <= 1


class TestEnumeration:
    def test_zero_components(self):
        table = enumerate_types(0)
        assert len(table) == 1
        assert table[0][0].is_empty

    def test_one_component(self):
        table = enumerate_types(1)
        # the empty type plus thirteen kinds, halves collapsed by swapping
        assert len(table) == 1 + len(ALL_COMPONENT_KINDS)

    def test_counts_up_to_three(self):
        table = enumerate_types(3)
        by_s = {}
        for t, _ in table:
            by_s[t.s] = by_s.get(t.s, 0) + 1
        # multisets of 13 kinds: 13 for (0|1); 91+91 for s=2; 455+1183 s=3
        assert by_s == {0: 1, 1: 13, 2: 182, 3: 1638}

    def test_deterministic(self):
        a = [(t.canonical_name(), out) for t, out in enumerate_types(2)]
        b = [(t.canonical_name(), out) for t, out in enumerate_types(2)]
        assert a == b

    def test_half_swap_collapsed(self):
        names = [t.canonical_name() for t, _ in enumerate_types(2)]
        assert len(names) == len(set(names))
        t1 = make_type([SPHERE], [TORUS])
        t2 = make_type([TORUS], [SPHERE])
        assert t1.canonical_name() == t2.canonical_name()

    def test_enumeration_cap(self):
        with pytest.raises(EnriquesTypeError):
            enumerate_types(7)
        with pytest.raises(EnriquesTypeError):
            enumerate_types(-1)


class TestTypeJson:
    def test_roundtrip(self):
        t = type_from_dict({
            "half1": [{"orientable": False, "genus": 3}],
            "half2": [{"orientable": True, "genus": 0}],
        })
        assert h1_dims(t) == (3, 2)

    @pytest.mark.parametrize("obj,needle", [
        ([], "top level"),
        ({"half1": []}, "half2"),
        ({"half1": {}, "half2": []}, "half1"),
        ({"half1": [{"orientable": True}], "half2": []}, "genus"),
        ({"half1": [{"orientable": True, "genus": 2}], "half2": []},
         "sphere"),
        ({"half1": [{"orientable": False, "genus": 12}], "half2": []},
         "genus"),
        ({"half1": [], "half2": [], "half3": []}, "half3"),
    ])
    def test_errors_name_fields(self, obj, needle):
        with pytest.raises(ComplexFormatError) as err:
            type_from_dict(obj)
        assert needle in str(err.value)
