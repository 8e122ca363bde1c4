import threading

import pytest

from app.workers import SweepPool, chunk, default_threads


def test_chunk():
    assert chunk([], 3) == []
    assert chunk(list(range(7)), 3) == [[0, 1, 2], [3, 4], [5, 6]]
    assert chunk(list(range(2)), 5) == [[0], [1]]
    assert chunk(list(range(4)), 0) == [[0, 1, 2, 3]]


def test_default_threads(monkeypatch):
    monkeypatch.delenv("QGR_THREADS", raising=False)
    assert default_threads() == 1
    monkeypatch.setenv("QGR_THREADS", "6")
    assert default_threads() == 6
    monkeypatch.setenv("QGR_THREADS", "-2")
    assert default_threads() == 1


@pytest.mark.parametrize("threads", [1, 4])
def test_map_keeps_the_input_order(threads):
    items = list(range(50))
    assert SweepPool(threads).map(lambda x: x * x, items) == [x * x for x in items]


def test_sequential_pool_stays_on_the_calling_thread():
    seen = SweepPool(1).map(lambda _: threading.get_ident(), range(5))
    assert set(seen) == {threading.get_ident()}


@pytest.mark.parametrize("threads", [1, 3])
def test_errors_propagate(threads):
    def boom(x):
        if x == 7:
            raise ValueError("seven")
        return x

    with pytest.raises(ValueError):
        SweepPool(threads).map(boom, range(10))


def test_worker_reports_its_chunk_index():
    pytest.importorskip("PyQt6")
    from app.workers import Worker

    got = []
    worker = Worker(lambda m: m * 2, [1, 2, 3], 4)
    worker.signals.result.connect(lambda k, res: got.append((k, res)))
    worker.run()
    assert got == [(4, [2, 4, 6])]
