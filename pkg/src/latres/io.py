"""JSON encodings of lattices, modules, complexes, resolutions and reports.

Coefficients travel as decimal strings ("-1", "3/4") so nothing is lost.
``dumps`` uses sorted keys and no incidental whitespace, which
makes it byte-for-byte reproducible.
"""
from __future__ import annotations

import json
from typing import Any

from .descent import DescendedElement, DescendedResolution
from .koszul import GeneratedModule, LatticeModule
from .lattice import Lattice, certify_lattice
from .linalg import parse_field
from .polynomial import Polynomial
from .resolution import BasisElement, EquivariantResolution, Term
from .simplicial import ComplexError, SimplicialComplex


class SchemaError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


def loads(text: str) -> Any:
    """json.loads, with malformed input reported as a SchemaError carrying the position."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"line {exc.lineno} column {exc.colno} (char {exc.pos})", exc.msg) from None


def dumps(obj: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# --------------------------------------------------------------------------
# Schema helpers
# --------------------------------------------------------------------------


def _get(obj, key, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing")
    return obj[key]


def _int(x, path) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(path, f"expected an integer, got {x!r}")
    return x


def _vec(x, n, path) -> tuple:
    if not isinstance(x, list):
        raise SchemaError(path, "expected a list of integers")
    if n is not None and len(x) != n:
        raise SchemaError(path, f"expected length {n}, got {len(x)}")
    return tuple(_int(a, f"{path}[{k}]") for k, a in enumerate(x))


def _vecs(x, n, path) -> tuple:
    if not isinstance(x, list):
        raise SchemaError(path, "expected a list of vectors")
    return tuple(_vec(v, n, f"{path}[{k}]") for k, v in enumerate(x))


def _dim(obj, path) -> int:
    n = _int(_get(obj, "n", path), f"{path}.n")
    if n < 1:
        raise SchemaError(f"{path}.n", "must be positive")
    return n


# --------------------------------------------------------------------------
# Inputs
# --------------------------------------------------------------------------


def lattice_to_json(L: Lattice) -> dict:
    return {"n": L.n, "basis": [list(v) for v in L.basis], "grading": list(L.grading)}


def lattice_from_json(obj, path: str = "$") -> Lattice:
    """Lattice from {"n", "basis"}; a stored grading is checked, otherwise one is certified."""
    n = _dim(obj, path)
    basis = _vecs(_get(obj, "basis", path), n, f"{path}.basis")
    L = certify_lattice(basis, n)
    if "grading" in obj:
        d = _vec(obj["grading"], n, f"{path}.grading")
        L = Lattice(n, L.basis, d)
    return L


def module_to_json(M) -> dict:
    if isinstance(M, GeneratedModule):
        return {"n": M.n, "gens": [list(g) for g in M.gens]}
    return lattice_to_json(M.lattice)


def module_from_json(obj, path: str = "$"):
    if isinstance(obj, dict) and "gens" in obj:
        n = _dim(obj, path)
        gens = _vecs(obj["gens"], n, f"{path}.gens")
        if not gens:
            raise SchemaError(f"{path}.gens", "needs at least one generator")
        return GeneratedModule(n, gens)
    if isinstance(obj, dict) and "basis" in obj:
        return LatticeModule(lattice_from_json(obj, path))
    raise SchemaError(path, 'expected a lattice ("basis") or a generated module ("gens")')


def complex_to_json(K: SimplicialComplex) -> dict:
    if K.is_void:
        return {"n": K.n, "facets": [], "void": True}
    return {"n": K.n, "facets": [list(f) for f in K.facets]}


def complex_from_json(obj, path: str = "$") -> SimplicialComplex:
    """Complex from {"n", "facets"} (closed downward) or {"n", "faces"} (checked for closure)."""
    n = _dim(obj, path)
    if obj.get("void"):
        return SimplicialComplex.void(n)
    try:
        if "faces" in obj:
            faces = _vecs(obj["faces"], None, f"{path}.faces")
            return SimplicialComplex(n, frozenset(faces))
        facets = _vecs(_get(obj, "facets", path), None, f"{path}.facets")
        return SimplicialComplex.from_facets(n, facets)
    except ComplexError as exc:
        raise SchemaError(path, str(exc)) from None


def input_kind(obj) -> str:
    if isinstance(obj, dict):
        if "facets" in obj or "faces" in obj:
            return "complex"
        if "gens" in obj:
            return "generated"
        if "basis" in obj:
            return "lattice"
    raise SchemaError("$", 'unrecognised input: expected "basis", "gens" or "facets"')


# --------------------------------------------------------------------------
# Resolutions
# --------------------------------------------------------------------------


def resolution_to_json(res: EquivariantResolution) -> dict:
    F = res.field
    return {
        "type": "equivariant-resolution",
        "field": F.spec(),
        "mode": res.mode,
        "module": module_to_json(res.module),
        "certified": res.certified,
        "radius": res.radius,
        "basis": [
            [{"i": u.i, "coset": list(u.coset), "lift": list(u.lift), "ordinal": u.ordinal} for u in level]
            for level in res.basis
        ],
        "differentials": [
            [[{"target": t.target, "translate": list(t.translate), "coeff": F.to_str(t.coeff)} for t in terms]
             for terms in level]
            for level in res.differentials
        ],
    }


def _field(obj, path):
    spec = _get(obj, "field", path)
    try:
        return parse_field(spec)
    except ValueError as exc:
        raise SchemaError(f"{path}.field", str(exc)) from None


def _coeff(F, s, path):
    if not isinstance(s, str):
        raise SchemaError(path, "coefficients are strings")
    try:
        return F.parse(s)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(path, f"bad coefficient {s!r}") from None


def resolution_from_json(obj, path: str = "$") -> EquivariantResolution:
    F = _field(obj, path)
    M = module_from_json(_get(obj, "module", path), f"{path}.module")
    n = M.n
    basis = []
    for i, level in enumerate(_get(obj, "basis", path)):
        row = []
        for k, u in enumerate(level):
            p = f"{path}.basis[{i}][{k}]"
            row.append(BasisElement(_int(_get(u, "i", p), f"{p}.i"), _vec(_get(u, "coset", p), None, f"{p}.coset"),
                                    _vec(_get(u, "lift", p), n, f"{p}.lift"),
                                    _int(_get(u, "ordinal", p), f"{p}.ordinal")))
        basis.append(row)
    diffs = []
    for i, level in enumerate(_get(obj, "differentials", path)):
        row = []
        for k, terms in enumerate(level):
            out = []
            for j, t in enumerate(terms):
                p = f"{path}.differentials[{i}][{k}][{j}]"
                out.append(Term(_int(_get(t, "target", p), f"{p}.target"),
                                _vec(_get(t, "translate", p), n, f"{p}.translate"),
                                _coeff(F, _get(t, "coeff", p), f"{p}.coeff")))
            row.append(tuple(out))
        diffs.append(row)
    if len(diffs) != len(basis) or any(len(a) != len(b) for a, b in zip(diffs, basis)):
        raise SchemaError(f"{path}.differentials", "shape does not match the basis")
    return EquivariantResolution(M, F, obj.get("mode", "canonical-basis"), basis, diffs,
                                 bool(obj.get("certified", True)), obj.get("radius"))


def polynomial_to_json(p: Polynomial, F) -> list:
    return [{"coeff": F.to_str(c), "exp": list(e)} for e, c in p.terms]


def polynomial_from_json(obj, n: int, F, path: str = "$") -> Polynomial:
    if not isinstance(obj, list):
        raise SchemaError(path, "expected a term list")
    coeffs: dict = {}
    for k, t in enumerate(obj):
        p = f"{path}[{k}]"
        e = _vec(_get(t, "exp", p), n, f"{p}.exp")
        coeffs[e] = F.add(coeffs.get(e, F.zero()), _coeff(F, _get(t, "coeff", p), f"{p}.coeff"))
    return Polynomial.from_dict(n, coeffs, F)


def descended_to_json(desc: DescendedResolution, rendered: bool = False) -> dict:
    F = desc.field
    out = {
        "type": "descended-resolution",
        "field": F.spec(),
        "module": module_to_json(desc.module),
        "certified": desc.certified,
        "ranks": list(desc.ranks()),
        "basis": [[{"i": u.i, "coset": list(u.coset), "lift": list(u.lift)} for u in level] for level in desc.basis],
        "matrices": [[[polynomial_to_json(p, F) for p in row] for row in m] for m in desc.matrices],
    }
    if rendered:
        out["rendered"] = [desc.rendered(i) for i in range(len(desc.matrices))]
    return out


def descended_from_json(obj, path: str = "$") -> DescendedResolution:
    F = _field(obj, path)
    M = module_from_json(_get(obj, "module", path), f"{path}.module")
    n = M.n
    basis = []
    for i, level in enumerate(_get(obj, "basis", path)):
        row = []
        for k, u in enumerate(level):
            p = f"{path}.basis[{i}][{k}]"
            row.append(DescendedElement(_int(_get(u, "i", p), f"{p}.i"), _vec(_get(u, "coset", p), None, f"{p}.coset"),
                                        _vec(_get(u, "lift", p), n, f"{p}.lift")))
        basis.append(row)
    mats = []
    for i, m in enumerate(_get(obj, "matrices", path)):
        mats.append([[polynomial_from_json(q, n, F, f"{path}.matrices[{i}][{r}][{c}]") for c, q in enumerate(row)]
                     for r, row in enumerate(m)])
    return DescendedResolution(M, F, basis, mats, bool(obj.get("certified", True)))


def report_to_json(report) -> dict:
    ex = report.exactness
    return {
        "type": "verification-report",
        "passed": report.passed,
        "certified": report.certified,
        "square_zero": {"passed": report.square_zero.passed, "witness": _jsonable(report.square_zero.witness)},
        "minimal": {"passed": report.minimal.passed, "witness": _jsonable(report.minimal.witness)},
        "betti": {"passed": report.betti.passed, "witness": _jsonable(report.betti.witness)},
        "exactness": {
            "passed": ex.passed,
            "bound": ex.bound,
            "degrees": [
                {"degree": list(d.degree), "grade": d.grade, "dims": list(d.dims),
                 "homology": list(d.homology), "expected_h0": d.expected_h0}
                for d in ex.degrees
            ],
        },
    }


def report_from_json(obj, path: str = "$"):
    from .descent import CheckResult, DegreeCheck, ExactnessReport, VerificationReport

    def check(name, key):
        c = _get(obj, key, path)
        return CheckResult(name, bool(_get(c, "passed", f"{path}.{key}")), c.get("witness"))

    ex = _get(obj, "exactness", path)
    degrees = [
        DegreeCheck(_vec(d["degree"], None, f"{path}.exactness.degrees[{k}].degree"), d["grade"],
                    tuple(d["dims"]), tuple(d["homology"]), d["expected_h0"])
        for k, d in enumerate(_get(ex, "degrees", f"{path}.exactness"))
    ]
    return VerificationReport(
        check("square-zero", "square_zero"), check("minimality", "minimal"),
        ExactnessReport(ex.get("bound"), degrees), check("betti", "betti"), bool(obj.get("certified", True)),
    )


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)
