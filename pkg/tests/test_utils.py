import json

from app.utils import canonical_json, event_line, format_duration, stopwatch


def test_canonical_json():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    assert canonical_json({"λ": 1}) == '{"λ":1}'


def test_event_line():
    line = event_line("check", name="relations", status="pass")
    assert json.loads(line) == {"event": "check", "name": "relations", "status": "pass"}


def test_stopwatch_accumulates():
    timings = {}
    with stopwatch(timings, "relation"):
        pass
    first = timings["relation"]
    with stopwatch(timings, "relation"):
        pass
    assert timings["relation"] >= first >= 0


def test_format_duration():
    assert format_duration(850) == "850 ms"
    assert format_duration(12300) == "12.3 s"
    assert format_duration(245000) == "4 min 05 s"
