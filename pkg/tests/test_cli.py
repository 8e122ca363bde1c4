import io
import json

import pytest

from app import cli
from app.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main, parse_args
from app.database import CertificateArchive, load_certificate
from app.errors import InternalConsistencyError, StructuralError

A2 = ["--type", "A", "--rank", "2", "--ell", "5", "--lambda", "2,1"]
C2 = ["--type", "C", "--rank", "2", "--ell", "5"]


def _run(argv):
    stream = io.StringIO()
    code = main(argv, stream=stream)
    events = [json.loads(line) for line in stream.getvalue().splitlines() if line.strip()]
    return code, events


def _events(events, name):
    return [e for e in events if e["event"] == name]


@pytest.mark.parametrize("argv", [
    ["certify", "--type", "C", "--rank", "2", "--ell", "4"],
    ["certify", "--type", "C", "--rank", "2", "--ell", "5", "--lambda", "1,2,3"],
    ["certify", "--type", "C", "--rank", "2"],
    ["certify"] + C2 + ["--suite", "everything"],
    ["frobnicate"] + C2,
    ["verify-relations"] + C2 + ["--backend", "float"],
    ["certify", "--type", "A", "--rank", "2", "--ell", "5", "--suite", "lowest"],
    ["certify"] + C2 + ["--suite", "steinberg", "--exhaustive-bound", "100"],
])
def test_usage_errors(argv):
    code, _ = _run(argv)
    assert code == EXIT_USAGE


def test_parse_args_maps_flags():
    config = parse_args(["certify"] + A2 + ["--suite", "highest", "--seed", "4", "--b-exp", "1.1:2", "--normalize"])
    assert config.command == "certify"
    assert config.suite == "highest"
    assert config.lam == (2, 1)
    assert config.seed == 4
    assert config.b == {(1, 1): 2}
    assert config.normalize is True


def test_trivial_submodule():
    code, events = _run(["submodule"] + C2 + ["--lambda", "0,0"])
    assert code == EXIT_OK
    assert _events(events, "start")[0]["spec"]["lambda"] == [0, 0]
    assert _events(events, "submodule")[0]["dim"] == 1
    cert = _events(events, "certificate")[0]["certificate"]
    assert cert["dims"]["span"] == 1
    assert events[-1]["event"] == "certificate"


def test_mutated_b_exits_with_failure():
    code, events = _run(["certify"] + A2 + ["--mutate-b", "1,1", "--suite", "highest"])
    assert code == EXIT_FAIL
    failed = [e for e in _events(events, "check") if e["status"] == "fail"]
    assert "highest_weight" in [e["name"] for e in failed]


def test_missing_basis_file(tmp_path):
    code, _ = _run(["submodule"] + C2 + ["--lambda", "3,1", "--basis-in", str(tmp_path / "none.ndjson")])
    assert code == EXIT_IO


def test_corrupt_basis_file(tmp_path):
    path = tmp_path / "broken.ndjson"
    path.write_text('{"kind": "something else"}\n', encoding="utf-8")
    code, _ = _run(["submodule"] + C2 + ["--lambda", "3,1", "--basis-in", str(path)])
    assert code == EXIT_IO


def test_normalized_certificates_are_reproducible(tmp_path):
    paths = [tmp_path / "one.json", tmp_path / "two.json"]
    for p in paths:
        code, _ = _run(["verify-relations"] + A2 + ["--seed", "5", "--normalize", "--out", str(p)])
        assert code == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    cert = load_certificate(str(paths[0]))
    assert cert.passed
    assert cert.timings_ms == {}


def test_basis_round_trip(tmp_path):
    path = tmp_path / "c2.ndjson"
    code, events = _run(["submodule"] + C2 + ["--lambda", "3,1", "--basis-out", str(path)])
    assert code == EXIT_OK
    written = _events(events, "basis_written")[0]
    dim = _events(events, "submodule")[0]["dim"]
    assert written["rows"] == dim
    code, events = _run(["submodule"] + C2 + ["--lambda", "3,1", "--basis-in", str(path)])
    assert code == EXIT_OK
    assert _events(events, "submodule")[0]["dim"] == dim


def test_rootvec():
    code, events = _run(["rootvec"] + A2)
    assert code == EXIT_OK
    assert _events(events, "w0_word")[0]["word"] == [1, 2, 1]
    roots = _events(events, "root_vector")
    assert [r["beta"] for r in roots] == [[1, 0], [1, 1], [0, 1]]
    assert all(r["degrees"] == [r["beta"]] for r in roots)


def test_rootvec_with_a_custom_word():
    code, events = _run(["rootvec"] + A2 + ["--w0-word", "2,1,2"])
    assert code == EXIT_OK
    assert [r["beta"] for r in _events(events, "root_vector")] == [[0, 1], [1, 1], [1, 0]]
    code, _ = _run(["rootvec"] + A2 + ["--w0-word", "1,1,2"])
    assert code == EXIT_USAGE


def test_dump_generators():
    code, events = _run(["dump-generators"] + C2 + ["--lambda", "3,1"])
    assert code == EXIT_OK
    names = {e["name"] for e in _events(events, "generator")}
    assert names == {"e1", "e2", "f1", "f2", "t1", "t2", "t1^-1", "t2^-1"}


def test_archive_and_export(tmp_path):
    db = tmp_path / "runs.db"
    xlsx = tmp_path / "runs.xlsx"
    code, events = _run(["certify"] + A2 + ["--suite", "highest", "--archive", str(db), "--xlsx", str(xlsx)])
    assert code == EXIT_OK
    run_id = _events(events, "archived")[0]["run_id"]
    assert _events(events, "exported")[0]["path"] == str(xlsx)
    assert xlsx.exists()
    archive = CertificateArchive(str(db))
    cert = archive.get_certificate(run_id)
    assert cert.passed
    assert archive.list_runs()[0]["type"] == "A"


def test_basis_for_another_module_is_an_io_error(tmp_path):
    path = tmp_path / "a2.ndjson"
    code, _ = _run(["submodule"] + A2 + ["--basis-out", str(path)])
    assert code == EXIT_OK
    code, _ = _run(["submodule"] + C2 + ["--lambda", "2,1", "--basis-in", str(path)])
    assert code == EXIT_IO


@pytest.mark.parametrize("error,expected", [
    (StructuralError("index of length 3 does not fit C2 (N=4)"), EXIT_USAGE),
    (InternalConsistencyError("brace parameter d = 3 not in {0, 1, 2}"), EXIT_FAIL),
])
def test_typed_errors_map_to_exit_codes(monkeypatch, error, expected):
    def fail(config, stream=None):
        raise error

    monkeypatch.setattr(cli, "run", fail)
    code, _ = _run(["certify"] + C2)
    assert code == expected
