"""
后台任务模块
把基向量扫描切成连续区间, 交给 QThreadPool 执行; 结果按区间顺序合并,
因此与线程数无关。线程数为 1 或 PyQt6 不可用时在调用线程内直接执行。
"""
import logging
import os
import sys
import traceback
from typing import Callable, List, Optional, Sequence, TypeVar

try:
    from PyQt6.QtCore import QObject, QRunnable, QThreadPool, Qt, pyqtSignal, pyqtSlot
    QT_AVAILABLE = True
except ImportError:
    QT_AVAILABLE = False

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "QGR_THREADS"


def default_threads() -> int:
    """QGR_THREADS 环境变量, 缺省为 1"""
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw.isdigit() and int(raw) > 0:
        return int(raw)
    return 1


def chunk(items: Sequence[T], parts: int) -> List[Sequence[T]]:
    """切成至多 parts 个连续区间"""
    if not items:
        return []
    parts = max(1, min(parts, len(items)))
    size, extra = divmod(len(items), parts)
    out, start = [], 0
    for k in range(parts):
        stop = start + size + (1 if k < extra else 0)
        out.append(items[start:stop])
        start = stop
    return out


if QT_AVAILABLE:

    class WorkerSignals(QObject):
        """一个扫描区间的回传: result 为 (区间序号, 结果列表), error 为 (类型, 异常, traceback)"""
        finished = pyqtSignal()
        error = pyqtSignal(tuple)
        result = pyqtSignal(int, object)

    class Worker(QRunnable):
        """
        在线程池中扫描一段连续的基向量指标

        :param fn: 单个指标上的检查函数
        :param part: 该 worker 负责的指标区间
        :param index: 区间序号, 合并时按它归位
        """

        def __init__(self, fn: Callable, part: Sequence, index: int):
            super().__init__()
            self.fn = fn
            self.part = part
            self.index = index
            self.signals = WorkerSignals()

        @pyqtSlot()
        def run(self):
            try:
                result = [self.fn(x) for x in self.part]
            except Exception:
                exctype, value = sys.exc_info()[:2]
                self.signals.error.emit((exctype, value, traceback.format_exc()))
            else:
                self.signals.result.emit(self.index, result)
            finally:
                self.signals.finished.emit()


class SweepPool:
    """按区间并行的 map"""

    def __init__(self, threads: Optional[int] = None):
        self.threads = threads if threads else default_threads()

    @property
    def parallel(self) -> bool:
        return QT_AVAILABLE and self.threads > 1

    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        items = list(items)
        if not self.parallel or len(items) < 2:
            return [fn(x) for x in items]
        parts = chunk(items, self.threads)
        results: List[Optional[list]] = [None] * len(parts)
        errors: List[tuple] = []
        pool = QThreadPool()
        pool.setMaxThreadCount(self.threads)
        direct = Qt.ConnectionType.DirectConnection
        workers = []
        for k, part in enumerate(parts):
            worker = Worker(fn, part, k)
            worker.setAutoDelete(False)
            worker.signals.result.connect(results.__setitem__, direct)
            worker.signals.error.connect(errors.append, direct)
            workers.append(worker)
            pool.start(worker)
        pool.waitForDone()
        if errors:
            exctype, value, tb = errors[0]
            logger.debug("worker failed:\n%s", tb)
            raise value
        logger.debug("sweep of %d items over %d threads done", len(items), self.threads)
        return [r for part in results for r in part]
