import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latres import io
from latres.descent import descend, verify
from latres.koszul import GeneratedModule
from latres.linalg import GF
from latres.resolution import resolve_equivariant
from latres.simplicial import SimplicialComplex

from conftest import laplacian_k3


def test_lattice_round_trip(fixtures_dir):
    with open(f"{fixtures_dir}/twisted_cubic.json") as fh:
        obj = json.load(fh)
    L = io.lattice_from_json(obj)
    again = io.lattice_from_json(io.loads(io.dumps(io.lattice_to_json(L))))
    assert again == L
    assert L.grading == (1, 1, 1, 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=1, max_size=5))
def test_module_round_trip(gens):
    M = GeneratedModule(3, gens)
    assert io.module_from_json(io.loads(io.dumps(io.module_to_json(M)))) == M


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(1, 5), min_size=1, max_size=3, unique=True), max_size=5))
def test_complex_round_trip(facets):
    K = SimplicialComplex.from_facets(5, facets)
    assert io.complex_from_json(io.loads(io.dumps(io.complex_to_json(K)))) == K


def test_void_complex_round_trip():
    V = SimplicialComplex.void(3)
    assert io.complex_from_json(io.complex_to_json(V)) == V


def test_non_closed_face_list_rejected():
    with pytest.raises(io.SchemaError):
        io.complex_from_json({"n": 3, "faces": [[], [1], [1, 2]]})


def test_schema_errors_carry_paths():
    with pytest.raises(io.SchemaError) as exc:
        io.lattice_from_json({"n": 2, "basis": [[1, "x"]]})
    assert exc.value.path == "$.basis[0][1]"
    with pytest.raises(io.SchemaError) as exc:
        io.module_from_json({"n": 2, "gens": [[1, 0, 0]]})
    assert exc.value.path == "$.gens[0]"
    with pytest.raises(io.SchemaError) as exc:
        io.loads('{"n": 2,')
    assert "line 1" in exc.value.path


def test_resolution_round_trip_and_reverify(resolutions):
    for res in resolutions.values():
        text = io.dumps(io.resolution_to_json(res))
        back = io.resolution_from_json(io.loads(text))
        assert back.basis == res.basis and back.differentials == res.differentials
        assert back.module == res.module
        assert io.dumps(io.resolution_to_json(back)) == text
        r1, r2 = verify(descend(res), 4), verify(descend(back), 4)
        assert r1.passed and r2.passed
        assert io.report_to_json(r1) == io.report_to_json(r2)


def test_prime_field_resolution_round_trip():
    res = resolve_equivariant(laplacian_k3(), GF(7))
    back = io.resolution_from_json(io.loads(io.dumps(io.resolution_to_json(res))))
    assert back.field == GF(7) and back.differentials == res.differentials


def test_descended_round_trip(resolutions):
    for res in resolutions.values():
        desc = descend(res)
        back = io.descended_from_json(io.loads(io.dumps(io.descended_to_json(desc))))
        assert back.basis == desc.basis and back.matrices == desc.matrices


def test_report_round_trip(resolutions):
    rep = verify(descend(resolutions["k3"]), 4)
    data = io.report_to_json(rep)
    back = io.report_from_json(io.loads(io.dumps(data)))
    assert io.report_to_json(back) == data
    assert back.passed == rep.passed


def test_coefficients_are_strings(resolutions):
    data = io.descended_to_json(descend(resolutions["segment"]))
    assert data["matrices"][1][0][0] == [{"coeff": "-1", "exp": [0, 1]}, {"coeff": "1", "exp": [1, 0]}]
