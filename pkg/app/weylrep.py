"""
Weyl 代数表示模块

指标集 M、基向量编码、稀疏向量, 以及算子 X_ij (循环平移) 与 Z_ij (对角 ε 幂)。
生成元公式里的每一项都写成 "brace 系数 × x 单项式" 的形式, 由本模块求值。

约定: 一项 {g} X 作用在 u(m) 上时, 先做 x 平移得到 m' = m - shift,
再在 m' 处计算 g 的指数。
"""
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from .cyclotomic import BaseField
from .errors import DomainError, StructuralError

Pos = Tuple[int, int]
MultiIndex = Tuple[int, ...]

# 各型最小秩
MIN_RANK = {"A": 1, "B": 3, "C": 2, "D": 4}


def grid_positions(kind: str, n: int) -> List[Pos]:
    """按行优先列出网格位置"""
    if kind not in MIN_RANK:
        raise DomainError(f"unknown algebra type {kind!r}")
    if n < MIN_RANK[kind]:
        raise DomainError(f"type {kind} needs rank >= {MIN_RANK[kind]}, got {n}")
    if kind == "A":
        return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    if kind in ("B", "C"):
        return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return [(i, j) for i in range(1, n) for j in range(1, n + 1)]


class IndexShape:
    """
    指标集 M 的形状

    slot 0 为 (1,1), 行优先; 编码为混合进制, slot 0 位权最高,
    因此元组的字典序与编码的数值序一致。
    """

    def __init__(self, kind: str, n: int, l: int):
        self.kind = kind
        self.n = n
        self.l = l
        self.positions: List[Pos] = grid_positions(kind, n)
        self.slot: Dict[Pos, int] = {p: s for s, p in enumerate(self.positions)}
        self.N = len(self.positions)
        self.radix: Tuple[int, ...] = tuple(l ** (self.N - 1 - s) for s in range(self.N))

    @property
    def label(self) -> str:
        return f"{self.kind}{self.n}"

    @property
    def size(self) -> int:
        return self.l ** self.N

    def __contains__(self, pos) -> bool:
        return pos in self.slot

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IndexShape)
            and (self.kind, self.n, self.l) == (other.kind, other.n, other.l)
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.n, self.l))

    def __repr__(self) -> str:
        return f"IndexShape({self.label}, l={self.l})"

    def check(self, m) -> MultiIndex:
        """校验多重指标并返回元组形式"""
        m = tuple(m)
        if len(m) != self.N:
            raise StructuralError(f"index of length {len(m)} does not fit {self.label} (N={self.N})")
        for v in m:
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < self.l:
                raise StructuralError(f"index entry {v!r} outside [0, {self.l - 1}]")
        return m

    def zero(self) -> MultiIndex:
        return (0,) * self.N

    def unit(self, pos: Pos, k: int = 1) -> MultiIndex:
        """k·ε_pos (模 l)"""
        if pos not in self.slot:
            raise StructuralError(f"position {pos} not in {self.label}")
        m = [0] * self.N
        m[self.slot[pos]] = k % self.l
        return tuple(m)

    def from_entries(self, entries: Mapping[Pos, int]) -> MultiIndex:
        m = [0] * self.N
        for pos, v in entries.items():
            if pos not in self.slot:
                raise StructuralError(f"position {pos} not in {self.label}")
            m[self.slot[pos]] = v % self.l
        return tuple(m)

    def entry(self, m: MultiIndex, pos: Pos) -> int:
        """m_pos, 越界位置视为 0"""
        s = self.slot.get(pos)
        return 0 if s is None else m[s]

    def shift(self, m: MultiIndex, delta: Mapping[Pos, int]) -> MultiIndex:
        """m + delta, 分量模 l"""
        mm = list(m)
        for pos, k in delta.items():
            s = self.slot[pos]
            mm[s] = (mm[s] + k) % self.l
        return tuple(mm)

    def encode(self, m) -> int:
        m = self.check(m)
        idx = 0
        for v in m:
            idx = idx * self.l + v
        return idx

    def decode(self, idx: int) -> MultiIndex:
        if not 0 <= idx < self.size:
            raise StructuralError(f"code {idx} outside [0, {self.size})")
        out = [0] * self.N
        for s in range(self.N - 1, -1, -1):
            idx, out[s] = divmod(idx, self.l)
        return tuple(out)

    def all_indices(self) -> Iterator[MultiIndex]:
        for idx in range(self.size):
            yield self.decode(idx)


def index_encode(shape: IndexShape, m) -> int:
    return shape.encode(m)


def index_decode(shape: IndexShape, idx: int) -> MultiIndex:
    return shape.decode(idx)


def _merge(items: Iterable[Tuple[Pos, int]]) -> Tuple[Tuple[Pos, int], ...]:
    acc: Dict[Pos, int] = {}
    for pos, e in items:
        acc[pos] = acc.get(pos, 0) + e
    return tuple(sorted((p, e) for p, e in acc.items() if e))


@dataclass(frozen=True)
class XWord:
    """x 的 Laurent 单项式"""
    exps: Tuple[Tuple[Pos, int], ...] = ()

    @classmethod
    def of(cls, entries: Optional[Mapping[Pos, int]] = None) -> "XWord":
        return cls(_merge((entries or {}).items()))

    def __mul__(self, other: "XWord") -> "XWord":
        return XWord(_merge(self.exps + other.exps))

    def inverse(self) -> "XWord":
        return XWord(tuple((p, -e) for p, e in self.exps))

    def as_dict(self) -> Dict[Pos, int]:
        return dict(self.exps)

    def delta(self) -> Dict[Pos, int]:
        """作用在指标上的位移: x^k 使 m_pos 减 k"""
        return {p: -e for p, e in self.exps}

    def pairing(self, z: "ZWord") -> int:
        """Σ k_p e_p, 即 X z X^{-1} 带出的 ε 幂"""
        zd = dict(z.exps)
        return sum(k * zd.get(p, 0) for p, k in self.exps)


@dataclass(frozen=True)
class ZWord:
    """
    z 的 Laurent 单项式, 附带 ε 幂偏移 offset 与 brace 参数 d

    d = 0 表示不取 brace, 直接求 ε^E。
    """
    exps: Tuple[Tuple[Pos, int], ...] = ()
    offset: int = 0
    d: int = 0

    def __post_init__(self):
        if self.d not in (0, 1, 2):
            raise StructuralError(f"brace parameter d = {self.d} not in {{0, 1, 2}}")

    @classmethod
    def of(cls, entries: Optional[Mapping[Pos, int]] = None, offset: int = 0, d: int = 0) -> "ZWord":
        return cls(_merge((entries or {}).items()), offset, d)

    def __mul__(self, other: "ZWord") -> "ZWord":
        return ZWord(_merge(self.exps + other.exps), self.offset + other.offset, max(self.d, other.d))

    def inverse(self) -> "ZWord":
        return ZWord(tuple((p, -e) for p, e in self.exps), -self.offset, self.d)

    def braced(self, d: int) -> "ZWord":
        return ZWord(self.exps, self.offset, d)

    def shifted(self, c: int) -> "ZWord":
        return ZWord(self.exps, self.offset + c, self.d)

    def as_dict(self) -> Dict[Pos, int]:
        return dict(self.exps)


@dataclass(frozen=True)
class Term:
    """一项 {brace} · shift"""
    brace: ZWord = dc_field(default_factory=ZWord)
    shift: XWord = dc_field(default_factory=XWord)

    def left_x(self, x: XWord) -> "Term":
        """左乘纯 x 单项式: X {g} Y = {X g X^{-1}} X Y"""
        return Term(self.brace.shifted(x.pairing(self.brace)), x * self.shift)

    def to_json(self) -> dict:
        return {
            "brace_d": self.brace.d,
            "z_exponents": [[i, j, e] for (i, j), e in self.brace.exps],
            "eps_offset": self.brace.offset,
            "x_shift": [[i, j, k] for (i, j), k in self.shift.exps],
        }


class SparseVec:
    """
    有限支撑的 Σ c_m u(m)

    视为不可变; 零系数在构造时丢弃。
    """

    __slots__ = ("shape", "field", "_d")

    def __init__(self, shape: IndexShape, field: BaseField, terms: Optional[Mapping] = None):
        self.shape = shape
        self.field = field
        self._d: Dict[MultiIndex, object] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def basis(cls, shape: IndexShape, field: BaseField, m) -> "SparseVec":
        return cls(shape, field, {shape.check(m): field.one})

    @classmethod
    def trusted(cls, shape: IndexShape, field: BaseField, terms: Dict) -> "SparseVec":
        """调用方保证无零系数时使用, 省去过滤"""
        v = cls.__new__(cls)
        v.shape = shape
        v.field = field
        v._d = terms
        return v

    def items(self):
        return self._d.items()

    def support(self) -> List[MultiIndex]:
        return sorted(self._d)

    def coeff(self, m):
        return self._d.get(tuple(m), self.field.zero)

    def __len__(self) -> int:
        return len(self._d)

    def __iter__(self):
        return iter(self._d)

    def __contains__(self, m) -> bool:
        return m in self._d

    def is_zero(self) -> bool:
        return not self._d

    def __bool__(self) -> bool:
        return bool(self._d)

    def _check(self, other: "SparseVec"):
        if self.shape != other.shape:
            raise StructuralError(f"shape mismatch: {self.shape} vs {other.shape}")
        self.field.check_same(other.field)

    def __add__(self, other: "SparseVec") -> "SparseVec":
        self._check(other)
        acc = dict(self._d)
        for m, c in other._d.items():
            prev = acc.get(m)
            acc[m] = c if prev is None else prev + c
        return SparseVec(self.shape, self.field, acc)

    def __neg__(self) -> "SparseVec":
        return SparseVec.trusted(self.shape, self.field, {m: -c for m, c in self._d.items()})

    def __sub__(self, other: "SparseVec") -> "SparseVec":
        return self + (-other)

    def scale(self, c) -> "SparseVec":
        if not c:
            return SparseVec(self.shape, self.field)
        return SparseVec(self.shape, self.field, {m: x * c for m, x in self._d.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVec):
            return NotImplemented
        return self.shape == other.shape and self._d == other._d

    def __hash__(self):
        return hash((self.shape, frozenset(self._d.items())))

    def __repr__(self) -> str:
        head = ", ".join(f"{c.text()}*u{list(m)}" for m, c in sorted(self._d.items())[:4])
        more = " …" if len(self._d) > 4 else ""
        return f"SparseVec[{self.shape.label}]({head}{more})"

    def to_json(self) -> dict:
        return {
            "l": self.shape.l,
            "shape": self.shape.label,
            "terms": [{"m": list(m), "c": c.text()} for m, c in sorted(self._d.items())],
        }

    @classmethod
    def from_json(cls, data: dict, field: BaseField) -> "SparseVec":
        label = data["shape"]
        shape = IndexShape(label[0], int(label[1:]), int(data["l"]))
        if shape.l != field.l:
            raise StructuralError(f"vector over l = {shape.l} loaded into field with l = {field.l}")
        terms = {shape.check(t["m"]): field.parse(t["c"]) for t in data["terms"]}
        return cls(shape, field, terms)


def x_apply(shape: IndexShape, positions: XWord, v: SparseVec) -> SparseVec:
    """x 单项式作用: u(m) ↦ u(m - Σ k_p ε_p), 循环回绕"""
    if not positions.exps:
        return v
    delta = positions.delta()
    for pos in delta:
        if pos not in shape:
            raise StructuralError(f"position {pos} not in {shape.label}")
    return SparseVec.trusted(shape, v.field, {shape.shift(m, delta): c for m, c in v.items()})


def z_exponent(shape: IndexShape, w: ZWord, b: Mapping[Pos, int], lam_term: int, m: MultiIndex) -> int:
    """E = λterm + offset + Σ e·(m_pos + β_pos)"""
    e_total = lam_term + w.offset
    for pos, e in w.exps:
        e_total += e * (shape.entry(m, pos) + b.get(pos, 0))
    return e_total


def z_eval(shape: IndexShape, w: ZWord, b: Mapping[Pos, int], lam_term: int, m: MultiIndex, field: BaseField):
    """在 u(m) 上计算 z 单项式 (及其 brace) 的本征值"""
    return field.brace(z_exponent(shape, w, b, lam_term, m), w.d)


def term_apply(
    shape: IndexShape,
    term: Term,
    b: Mapping[Pos, int],
    v: SparseVec,
    a: Optional[Mapping[Pos, int]] = None,
) -> SparseVec:
    """
    一项作用在向量上: 先平移, 再在平移后的指标处求 brace 系数

    a 给出时乘上 x 参数化带来的常数 ε^{Σ k_p α_p}。
    """
    field = v.field
    delta = term.shift.delta()
    scale = field.one
    if a:
        scale = field.eps_pow(sum(k * a.get(p, 0) for p, k in term.shift.exps))
    acc = {}
    for m, c in v.items():
        mm = shape.shift(m, delta)
        coef = z_eval(shape, term.brace, b, 0, mm, field)
        if coef:
            acc[mm] = c * coef * scale
    return SparseVec(shape, field, acc)
