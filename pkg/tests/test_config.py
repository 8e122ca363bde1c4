import pytest

from app.config import RunConfig, parse_int_list, parse_overrides, parse_position, read_config_file
from app.errors import UsageError


def test_parsers():
    assert parse_int_list("3, 1") == (3, 1)
    assert parse_int_list("") == ()
    assert parse_position("1.2") == (1, 2)
    assert parse_position("2,1") == (2, 1)
    assert parse_overrides("1.1:2, 2.1:0") == {(1, 1): 2, (2, 1): 0}
    assert parse_overrides("") == {}
    for bad in ("1.1", "1.1:x", "a.b:1"):
        with pytest.raises(UsageError):
            parse_overrides(bad)
    with pytest.raises(UsageError):
        parse_int_list("1,x")
    with pytest.raises(UsageError):
        parse_position("1")


def _config(**kw):
    base = dict(command="certify", kind="C", rank=2, ell=5)
    base.update(kw)
    return RunConfig(**base)


def test_validation():
    assert _config().lam == (0, 0)
    for kw in (
        {"ell": 4},
        {"ell": 3},
        {"kind": "E"},
        {"kind": "B", "rank": 2},
        {"lam": (1, 2, 3)},
        {"lam": (5, 0)},
        {"suite": "everything"},
        {"backend": "float"},
        {"sample": 0},
        {"threads": 0},
        {"scope": "nowhere"},
        {"xlsx": "out.xlsx"},
    ):
        with pytest.raises(UsageError):
            _config(**kw)
    assert _config(backend="modp:1000151").backend == "modp:1000151"


def test_threads_from_the_environment(monkeypatch):
    monkeypatch.setenv("QGR_THREADS", "3")
    assert _config().threads == 3
    monkeypatch.setenv("QGR_THREADS", "zero")
    assert _config().threads == 1
    assert _config(threads=2).threads == 2


def test_config_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# C2 at l = 5\ntype = c\nrank = 2\nell = 5\nlambda = 3,1\nb = 2.1:4\nnormalize = yes\n",
                    encoding="utf-8")
    values = read_config_file(str(path))
    assert values["lambda"] == "3,1"
    config = RunConfig.from_sources("certify", {"seed": "7", "lambda": None}, values)
    assert config.kind == "C"
    assert config.lam == (3, 1)
    assert config.seed == 7
    assert config.b == {(2, 1): 4}
    assert config.normalize is True


def test_flags_override_the_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("type = A\nrank = 2\nell = 5\nlambda = 1,1\nseed = 3\n", encoding="utf-8")
    config = RunConfig.from_sources("certify", {"lambda": "2,1"}, read_config_file(str(path)))
    assert config.lam == (2, 1)
    assert config.seed == 3


def test_bad_config_files(tmp_path):
    unknown = tmp_path / "unknown.conf"
    unknown.write_text("colour = blue\n", encoding="utf-8")
    with pytest.raises(UsageError):
        read_config_file(str(unknown))
    broken = tmp_path / "broken.conf"
    broken.write_text("type C\n", encoding="utf-8")
    with pytest.raises(UsageError):
        read_config_file(str(broken))
    with pytest.raises(OSError):
        read_config_file(str(tmp_path / "missing.conf"))
    with pytest.raises(UsageError):
        RunConfig.from_sources("certify", {"type": "A", "rank": "2"}, {})


def test_build_spec():
    spec, note = _config(lam=(3, 1), b={(2, 1): 4}).build_spec()
    assert spec.b[(2, 1)] == 4
    assert note == ""
    spec, _ = _config(lam=(3, 1), mutate_b=(1, 1)).build_spec()
    assert not spec.uses_default_params()
    with pytest.raises(UsageError):
        _config(b={(3, 3): 1}).build_spec()
    spec, note = RunConfig("certify", "B", 3, 5, (1, 0, 2)).build_spec()
    assert note == "corrected"
    assert spec.lam_variant == "corrected"
    spec, note = RunConfig("certify", "B", 3, 5, (1, 0, 2), lambda_variant="printed").build_spec()
    assert note == "printed"
