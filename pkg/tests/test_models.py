import json

import pytest

from app.cyclotomic import get_field
from app.errors import StructuralError
from app.models import Certificate, CheckResult, Provenance, SubmoduleBasis
from app.weylrep import IndexShape, SparseVec

F5 = get_field(5)
A2 = IndexShape("A", 2, 5)


def test_check_result_validation():
    assert CheckResult.ok("relations").passed
    with pytest.raises(StructuralError):
        CheckResult("relations", "fail")
    with pytest.raises(StructuralError):
        CheckResult("relations", "maybe")
    bad = CheckResult.fail("highest_weight", "u0 has the wrong weight", {"m": [0, 0, 0]})
    assert not bad.passed
    assert CheckResult.from_dict(bad.to_dict()) == bad


def test_certificate_round_trip():
    cert = Certificate(spec={"type": "A", "rank": 2}, backend="exact", seed=3)
    cert.add(CheckResult.ok("relations", "all hold"))
    cert.add(CheckResult.fail("highest_weight", "mismatch", {"weight": [1, 2]}))
    cert.dims["span"] = 125
    cert.timings_ms["relation"] = 12.34567
    assert not cert.passed
    assert [c.name for c in cert.failures] == ["highest_weight"]
    data = cert.to_dict()
    assert data["timings_ms"] == {"relation": 12.346}
    back = Certificate.from_dict(json.loads(cert.to_json()))
    assert back.to_dict() == data
    assert cert.to_dict(normalize=True)["timings_ms"] == {}
    with pytest.raises(StructuralError):
        Certificate.from_dict(dict(data, schema=99))


def test_skipped_suites_are_recorded_apart_from_checks():
    cert = Certificate(spec={"type": "C", "rank": 2}, backend="exact")
    cert.add(CheckResult.ok("relations"))
    cert.skipped["steinberg"] = "l^N = 625 above the exhaustive bound 100"
    assert cert.passed
    assert [c.name for c in cert.checks] == ["relations"]
    back = Certificate.from_dict(json.loads(cert.to_json(normalize=True)))
    assert back.skipped == cert.skipped
    assert Certificate.from_dict({"schema": 1, "spec": {}, "backend": "exact", "checks": []}).skipped == {}


def test_provenance_extends_on_the_left():
    p = Provenance(0, ())
    q = p.extend("f1").extend("f2")
    assert q.word == ("f2", "f1")
    assert Provenance.from_dict(q.to_dict()) == q


def _basis(pivots):
    rows = [SparseVec.basis(A2, F5, p) for p in pivots]
    return SubmoduleBasis(A2, F5, rows, list(pivots), [None] * len(pivots))


def test_submodule_basis_validation():
    basis = _basis([(0, 0, 0), (0, 0, 1)])
    assert basis.dim == 2
    assert basis.contains(SparseVec.basis(A2, F5, (0, 0, 1)).scale(F5.eps_pow(3)))
    assert not basis.contains(SparseVec.basis(A2, F5, (1, 0, 0)))
    with pytest.raises(StructuralError):
        _basis([(0, 0, 1), (0, 0, 0)])
    with pytest.raises(StructuralError):
        SubmoduleBasis(A2, F5, [], [(0, 0, 0)], [])


def test_submodule_basis_ndjson():
    basis = _basis([(0, 0, 0), (1, 2, 3)])
    basis.provenance = [Provenance(0, ()), Provenance(0, ("f1", "f2"))]
    spec = {"type": "A", "rank": 2, "ell": 5}
    lines = basis.to_ndjson(spec)
    assert len(lines) == 3
    header, back = SubmoduleBasis.from_ndjson(lines, F5)
    assert header["dim"] == 2 and header["kind"] == "submodule_basis"
    assert back.pivots == basis.pivots
    assert back.rows == basis.rows
    assert back.provenance == basis.provenance
    with pytest.raises(StructuralError):
        SubmoduleBasis.from_ndjson(lines[:2], F5)
    with pytest.raises(StructuralError):
        SubmoduleBasis.from_ndjson([], F5)
