"""
精确线性代数

EchelonBasis: 以字典存储的稀疏简化行阶梯形 (RREF), 主元取行支撑中最小的键。
每行可以附带一个 "来源组合", 用于增量求核。
dense_nullspace: 基于 numpy object 数组的 Gauss-Jordan 消元, 作为独立的暴力校验。
"""
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import numpy as np

from .cyclotomic import BaseField

Row = Dict[Hashable, object]


def _axpy(target: Row, c, row: Row):
    """target -= c · row (原地)"""
    for k, x in row.items():
        prev = target.get(k)
        val = -(c * x) if prev is None else prev - c * x
        if val:
            target[k] = val
        else:
            target.pop(k, None)


class EchelonBasis:
    """
    稀疏 RREF

    不变量: 主元严格递增; 每行主元系数为 1; 任一行在其他行的主元列上为 0。
    因此结果只依赖所张成的子空间, 与插入顺序无关。
    """

    def __init__(self, field: BaseField, track: bool = False):
        self.field = field
        self.track = track
        self.rows: Dict[Hashable, Row] = {}
        self.combos: Dict[Hashable, Row] = {}
        self.tags: Dict[Hashable, object] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def pivots(self) -> List[Hashable]:
        return sorted(self.rows)

    def reduce(self, vec: Row, combo: Optional[Row] = None) -> Tuple[Row, Optional[Row]]:
        """返回 vec 对当前行的余项 (及同步变换后的组合)"""
        r = dict(vec)
        c = dict(combo) if combo is not None else None
        for p in [k for k in r if k in self.rows]:
            coef = r.get(p)
            if not coef:
                continue
            _axpy(r, coef, self.rows[p])
            if c is not None:
                _axpy(c, coef, self.combos[p])
        return r, c

    def contains(self, vec: Row) -> bool:
        r, _ = self.reduce(vec)
        return not r

    def insert(self, vec: Row, combo: Optional[Row] = None, tag=None):
        """
        插入一个向量

        Returns:
            新主元; 若 vec 已在张成空间中, 返回 None。
            track 模式下另返回化零时的组合 (即一个核向量)。
        """
        r, c = self.reduce(vec, combo if self.track else None)
        if not r:
            return (None, c) if self.track else None
        pivot = min(r)
        inv = r[pivot].inverse()
        r = {k: x * inv for k, x in r.items()}
        if c is not None:
            c = {k: x * inv for k, x in c.items()}
        for q, row in self.rows.items():
            coef = row.get(pivot)
            if coef:
                _axpy(row, coef, r)
                if self.track:
                    _axpy(self.combos[q], coef, c)
        self.rows[pivot] = r
        if self.track:
            self.combos[pivot] = c
        if tag is not None:
            self.tags[pivot] = tag
        return (pivot, None) if self.track else pivot

    def sorted_rows(self) -> List[Tuple[Hashable, Row]]:
        return [(p, self.rows[p]) for p in self.pivots()]


def block_kernel(field: BaseField, columns: Sequence[Tuple[Hashable, Row]]) -> List[Row]:
    """
    线性映射在一组基向量上的核

    Args:
        columns: [(基向量键, 像向量)], 像向量以字典给出

    Returns:
        核的一组基, 每个元素是基向量键上的组合
    """
    ech = EchelonBasis(field, track=True)
    kernel = []
    for key, image in columns:
        pivot, combo = ech.insert(image, {key: field.one})
        if pivot is None:
            kernel.append(combo)
    return kernel


# --- 稠密暴力消元 ---

def dense_rref(matrix, field: BaseField) -> Tuple[np.ndarray, List[int]]:
    """
    Gauss-Jordan 消元 (numpy object 数组)

    Returns:
        (RREF 矩阵, 主元列列表)
    """
    A = np.array(matrix, dtype=object)
    if A.ndim != 2:
        A = A.reshape(len(matrix), -1)
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pr = next((k for k in range(r, rows) if A[k, c]), None)
        if pr is None:
            continue
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
        inv = A[r, c].inverse()
        A[r, :] = np.array([x * inv for x in A[r, :]], dtype=object)
        for k in range(rows):
            if k != r and A[k, c]:
                f = A[k, c]
                A[k, :] = np.array([x - f * y for x, y in zip(A[k, :], A[r, :])], dtype=object)
        pivots.append(c)
        r += 1
    return A, pivots


def dense_nullspace(matrix, field: BaseField) -> List[List[object]]:
    """稠密矩阵的右零空间基 (每个基向量长度为列数)"""
    A, pivots = dense_rref(matrix, field)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [field.zero] * cols
        v[fc] = field.one
        for r, pc in enumerate(pivots):
            v[pc] = -A[r, fc]
        basis.append(v)
    return basis


def dense_rank(matrix, field: BaseField) -> int:
    _, pivots = dense_rref(matrix, field)
    return len(pivots)
