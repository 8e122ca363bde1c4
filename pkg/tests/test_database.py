import json

import pytest

from app.database import CertificateArchive, load_certificate, spec_echo
from app.errors import StructuralError
from app.models import Certificate, CheckResult

SPEC = {"type": "C", "rank": 2, "ell": 5, "lambda": [3, 1]}


def _cert(ok=True, seed=0):
    cert = Certificate(spec=dict(SPEC), backend="exact", seed=seed)
    cert.add(CheckResult.ok("relations", "all hold"))
    if not ok:
        cert.add(CheckResult.fail("primitive", "dim 2", {"dim": 2, "vector": None}))
    return cert


@pytest.fixture
def archive(tmp_path):
    return CertificateArchive(str(tmp_path / "runs.db"))


def test_add_and_get(archive):
    run_id = archive.add_certificate(_cert(seed=4))
    back = archive.get_certificate(run_id)
    assert back.seed == 4
    assert back.passed
    assert archive.get_certificate(run_id + 100) is None


def test_list_runs_and_failures(archive):
    archive.add_certificate(_cert())
    bad = archive.add_certificate(_cert(ok=False))
    runs = archive.list_runs()
    assert [r["status"] for r in runs] == ["pass", "fail"]
    assert runs[0]["lam"] == "3,1"
    assert [r["id"] for r in archive.list_runs("fail")] == [bad]
    failed = archive.failed_checks()
    assert failed == [{"run_id": bad, "name": "primitive", "detail": "dim 2"}]


def test_export_to_excel(archive, tmp_path):
    pd = pytest.importorskip("pandas")
    pytest.importorskip("openpyxl")
    archive.add_certificate(_cert(ok=False))
    target = tmp_path / "runs.xlsx"
    assert archive.export_to_excel(str(target))
    df = pd.read_excel(target, engine="openpyxl")
    assert len(df) == 2
    assert "检查项" in df.columns and "结果" in df.columns


def test_spec_echo():
    assert spec_echo(_cert()) == "C2 l=5 λ=(3,1)"


def test_load_certificate(tmp_path):
    path = tmp_path / "cert.json"
    path.write_text(_cert().to_json(), encoding="utf-8")
    assert load_certificate(str(path)).passed
    path.write_text(json.dumps({"schema": 0}), encoding="utf-8")
    with pytest.raises(StructuralError):
        load_certificate(str(path))
