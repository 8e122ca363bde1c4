"""
工具函数模块
"""
import json
import time
from contextlib import contextmanager
from typing import Dict, Iterator


def canonical_json(obj) -> str:
    """
    规范化 JSON

    Args:
        obj: 可序列化对象

    Returns:
        键排序、无多余空白的单行字符串, 同一对象总得到同一字节串
    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def event_line(event: str, **data) -> str:
    """NDJSON 事件行: {"event": ..., ...}"""
    payload = dict(data)
    payload["event"] = event
    return canonical_json(payload)


@contextmanager
def stopwatch(timings: Dict[str, float], key: str) -> Iterator[None]:
    """把代码块耗时 (毫秒) 记入 timings[key]"""
    t0 = time.perf_counter()
    try:
        yield
    finally:
        timings[key] = timings.get(key, 0.0) + (time.perf_counter() - t0) * 1000.0


def format_duration(ms: float) -> str:
    """
    格式化耗时显示

    Args:
        ms: 毫秒

    Returns:
        如 "850 ms", "12.3 s", "4 min 05 s"
    """
    if ms < 1000:
        return f"{ms:.0f} ms"
    seconds = ms / 1000.0
    if seconds < 60:
        return f"{seconds:.1f} s"
    minutes, rest = divmod(int(round(seconds)), 60)
    return f"{minutes} min {rest:02d} s"
