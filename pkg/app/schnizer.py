"""
Schnizer 模块的生成元构造

ModuleSpec 描述一个模 V(λ): 型、秩、l、最高权 λ、参数表 a, b (均为 ε 的指数)。
build_generators 把构造定理中的 Weyl 代数词编译成可以直接作用在稀疏向量上的 GenOp。
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from .cyclotomic import BaseField, RootOrder, get_field
from .errors import DomainError, UnsupportedConfiguration
from .rootdata import symmetrizer
from .weyl_words import WORD_TABLES
from .weylrep import IndexShape, MultiIndex, Pos, SparseVec, Term, XWord, ZWord, grid_positions

logger = logging.getLogger(__name__)

LAMBDA_VARIANTS = ("printed", "corrected")


def default_params(kind: str, n: int) -> Tuple[Dict[Pos, int], Dict[Pos, int]]:
    """
    默认参数表 a^{(0)}, b^{(0)} (ε 指数)

    Returns:
        (a, b): a 全为 0 (即 a_ij = 1), b 按型给出
    """
    positions = grid_positions(kind, n)
    a = {p: 0 for p in positions}
    b = {}
    for i, j in positions:
        if kind == "A":
            b[(i, j)] = i
        elif kind == "C":
            b[(i, j)] = 1 - i + j if i <= j else 2 * n + 2 - i - j
        elif kind == "B":
            if j == n:
                b[(i, j)] = 2 * n + 1 - 2 * i if i < n else 1
            elif i <= j:
                b[(i, j)] = 1 - i + j
            else:
                b[(i, j)] = 2 * n + 1 - i - j
        else:
            if j == n:
                b[(i, j)] = n - i
            elif i <= j:
                b[(i, j)] = 1 - i + j
            else:
                b[(i, j)] = 2 * n - i - j
    return a, b


def lambda_shift(kind: str, lam: Sequence[int], variant: str = "printed") -> Tuple[int, ...]:
    """
    λ ↦ λ′

    B 型的 j < n 分量有两种读法: printed = -2(λ_j - 2), corrected = -2(λ_j + 2)。
    """
    n = len(lam)
    if kind == "A":
        return tuple(x + 2 for x in lam)
    if kind == "C":
        return tuple(-x - 2 for x in lam[:-1]) + (-2 * (lam[-1] + 2),)
    if kind == "B":
        if variant not in LAMBDA_VARIANTS:
            raise DomainError(f"unknown lambda variant {variant!r}")
        sign = -1 if variant == "printed" else 1
        return tuple(-2 * (x + 2 * sign) for x in lam[:n - 1]) + (-lam[-1] - 2,)
    if kind == "D":
        return tuple(-x - 2 for x in lam)
    raise DomainError(f"unknown algebra type {kind!r}")


@dataclass
class ModuleSpec:
    """一个 Schnizer 模的完整描述"""
    kind: str  # 型 A|B|C|D
    n: int  # 秩
    l: int  # 单位根阶数
    lam: Tuple[int, ...]  # 最高权, 分量在 [0, l-1]
    a: Optional[Dict[Pos, int]] = None  # x 参数 (ε 指数)
    b: Optional[Dict[Pos, int]] = None  # z 参数 (ε 指数)
    lam_variant: str = "printed"  # 仅 B 型有意义
    lam_shift: Tuple[int, ...] = field(init=False)

    def __post_init__(self):
        RootOrder(self.l)
        positions = grid_positions(self.kind, self.n)
        self.lam = tuple(int(x) for x in self.lam)
        if len(self.lam) != self.n:
            raise DomainError(f"lambda has {len(self.lam)} entries, rank is {self.n}")
        for x in self.lam:
            if not 0 <= x < self.l:
                raise DomainError(f"lambda entry {x} outside [0, {self.l - 1}]")
        if self.lam_variant not in LAMBDA_VARIANTS:
            raise DomainError(f"unknown lambda variant {self.lam_variant!r}")
        a0, b0 = default_params(self.kind, self.n)
        self.a = dict(a0 if self.a is None else self.a)
        self.b = dict(b0 if self.b is None else self.b)
        for name, table in (("a", self.a), ("b", self.b)):
            extra = set(table) - set(positions)
            if extra:
                raise DomainError(f"{name}-table has positions outside the grid: {sorted(extra)}")
            for p in positions:
                table.setdefault(p, 0)
        self.lam_shift = lambda_shift(self.kind, self.lam, self.lam_variant)

    @property
    def shape(self) -> IndexShape:
        return IndexShape(self.kind, self.n, self.l)

    @property
    def d(self) -> Tuple[int, ...]:
        return symmetrizer(self.kind, self.n)

    @property
    def label(self) -> str:
        return f"{self.kind}{self.n}"

    def uses_default_params(self) -> bool:
        a0, b0 = default_params(self.kind, self.n)
        return self.a == a0 and self.b == b0

    def with_lambda(self, lam: Sequence[int]) -> "ModuleSpec":
        return ModuleSpec(self.kind, self.n, self.l, tuple(lam), dict(self.a), dict(self.b), self.lam_variant)

    def with_variant(self, variant: str) -> "ModuleSpec":
        return ModuleSpec(self.kind, self.n, self.l, self.lam, dict(self.a), dict(self.b), variant)

    def mutated_b(self, pos: Pos, delta: int = 1) -> "ModuleSpec":
        """把 b 表某一位置加 delta, 用于变异测试"""
        if pos not in self.b:
            raise DomainError(f"position {pos} not in the {self.label} grid")
        b = dict(self.b)
        b[pos] += delta
        return ModuleSpec(self.kind, self.n, self.l, self.lam, dict(self.a), b, self.lam_variant)

    def to_dict(self) -> dict:
        a0, b0 = default_params(self.kind, self.n)
        return {
            "type": self.kind,
            "rank": self.n,
            "ell": self.l,
            "lambda": list(self.lam),
            "lambda_shift": list(self.lam_shift),
            "lambda_variant": self.lam_variant if self.kind == "B" else None,
            "a_overrides": {f"{i}.{j}": e for (i, j), e in sorted(self.a.items()) if e != a0[(i, j)]},
            "b_overrides": {f"{i}.{j}": e for (i, j), e in sorted(self.b.items()) if e != b0[(i, j)]},
        }


# --- A 型: 直接公式 ---

class SlWords:
    """A_n 的 Φ(e_i), Φ(f_i), Φ(t_i); 越界位置 (含 (0,0)) 省略, 即 b = m = 0"""

    def __init__(self, n: int, lam_shift: Sequence[int]):
        self.n = n
        self.lp = list(lam_shift)
        self.grid = set(grid_positions("A", n))

    def _valid(self, pos: Pos) -> bool:
        return pos in self.grid

    def mu(self, i: int, j: int) -> ZWord:
        """μ_{i,j} = λ′_i + M_{i-1,i-1} + Σ_{p=i}^{j} (M_{i-1,p} - 2M_{i,p} + M_{i+1,p})"""
        z: Dict[Pos, int] = {}

        def add(pos, e):
            if self._valid(pos):
                z[pos] = z.get(pos, 0) + e

        add((i - 1, i - 1), 1)
        for p in range(i, j + 1):
            add((i - 1, p), 1)
            add((i, p), -2)
            add((i + 1, p), 1)
        return ZWord.of(z, self.lp[i - 1])

    def e(self, i: int) -> List[Term]:
        n = self.n
        terms = []
        for k in range(1, i + 1):
            col = lambda p: n - i + p
            z = {}
            if self._valid((k - 1, col(k))):
                z[(k - 1, col(k))] = 1
            z[(k, col(k))] = -1
            x = {(k, col(k)): 1}
            for p in range(k + 1, i + 1):
                x[(p - 1, col(p))] = x.get((p - 1, col(p)), 0) - 1
                x[(p, col(p))] = x.get((p, col(p)), 0) + 1
            terms.append(Term(ZWord.of(z, 0, 1), XWord.of(x)))
        return terms

    def f(self, i: int) -> List[Term]:
        terms = []
        for k in range(i, self.n + 1):
            z = {(i, k): 1}
            if self._valid((i + 1, k)):
                z[(i + 1, k)] = -1
            # k = i 时求和为空, μ_{i,i-1} = λ′_i + M_{i-1,i-1}
            mu = self.mu(i, k - 1)
            brace = (ZWord.of(z) * mu.inverse()).braced(1)
            terms.append(Term(brace, XWord.of({(i, k): -1})))
        return terms

    def t(self, i: int) -> ZWord:
        return self.mu(i, self.n)


# --- 编译后的算子 ---

class GenOp:
    """
    一个生成元在 V 上的作用

    每项编译为 (位移槽位, z 槽位与指数, 常数指数, brace 参数, a 比例指数)。
    b 参数已折叠进常数, 求值时只需读取平移后的指标。
    """

    def __init__(self, name: str, terms: Sequence[Term], spec: ModuleSpec):
        self.name = name
        self.terms = tuple(terms)
        self.shape = spec.shape
        self.l = spec.l
        slot = self.shape.slot
        compiled = []
        for t in self.terms:
            shifts = tuple((slot[p], -k) for p, k in t.shift.exps)
            zs = tuple((slot[p], e) for p, e in t.brace.exps)
            const = t.brace.offset + sum(e * spec.b[p] for p, e in t.brace.exps)
            scale = sum(k * spec.a[p] for p, k in t.shift.exps)
            compiled.append((shifts, zs, const, t.brace.d, scale))
        self._compiled = tuple(compiled)

    @property
    def is_diagonal(self) -> bool:
        return all(not c[0] for c in self._compiled)

    def diagonal_exponent(self, m: MultiIndex) -> int:
        """对角算子 (t_i^{±1}) 在 u(m) 上的 ε 指数"""
        (_, zs, const, _, _), = self._compiled
        return const + sum(w * m[s] for s, w in zs)

    def apply(self, v: SparseVec) -> SparseVec:
        l = self.l
        field_ = v.field
        brace = field_.brace
        eps = field_.eps_pow
        acc: Dict[MultiIndex, object] = {}
        for m, c in v.items():
            for shifts, zs, const, d, scale in self._compiled:
                if shifts:
                    mm = list(m)
                    for s, k in shifts:
                        mm[s] = (mm[s] + k) % l
                    mm = tuple(mm)
                else:
                    mm = m
                e = const
                for s, w in zs:
                    e += w * mm[s]
                coef = brace(e, d)
                if not coef:
                    continue
                if scale % l:
                    coef = coef * eps(scale)
                val = c * coef
                prev = acc.get(mm)
                acc[mm] = val if prev is None else prev + val
        return SparseVec(self.shape, field_, acc)

    __call__ = apply

    def to_json(self) -> List[dict]:
        return [t.to_json() for t in self.terms]


class Generators:
    """e_i, f_i, t_i, t_i^{-1} 的族, 按符号名索引"""

    def __init__(self, spec: ModuleSpec, ops: Dict[str, GenOp], field_: Optional[BaseField] = None):
        self.spec = spec
        self.shape = spec.shape
        self.field = field_ or get_field(spec.l)
        self.ops = ops

    def __getitem__(self, symbol: str) -> GenOp:
        return self.ops[symbol]

    def __iter__(self) -> Iterator[str]:
        return iter(self.ops)

    def e(self, i: int) -> GenOp:
        return self.ops[f"e{i}"]

    def f(self, i: int) -> GenOp:
        return self.ops[f"f{i}"]

    def t(self, i: int) -> GenOp:
        return self.ops[f"t{i}"]

    def tinv(self, i: int) -> GenOp:
        return self.ops[f"t{i}^-1"]

    def apply(self, symbol: str, v: SparseVec) -> SparseVec:
        return self.ops[symbol].apply(v)

    def basis(self, m) -> SparseVec:
        return SparseVec.basis(self.shape, self.field, m)


def _word_table(spec: ModuleSpec):
    if spec.kind == "A":
        return SlWords(spec.n, spec.lam_shift)
    return WORD_TABLES[spec.kind](spec.n, spec.lam_shift)


def build_generators(spec: ModuleSpec, field_: Optional[BaseField] = None) -> Generators:
    """由构造定理的 Weyl 代数词编译全部生成元"""
    words = _word_table(spec)
    ops: Dict[str, GenOp] = {}
    for i in range(1, spec.n + 1):
        ops[f"e{i}"] = GenOp(f"e{i}", words.e(i), spec)
        ops[f"f{i}"] = GenOp(f"f{i}", words.f(i), spec)
        tz = words.t(i)
        ops[f"t{i}"] = GenOp(f"t{i}", [Term(tz, XWord())], spec)
        ops[f"t{i}^-1"] = GenOp(f"t{i}^-1", [Term(tz.inverse(), XWord())], spec)
    logger.debug("built %d generator operators for %s (l=%d)", len(ops), spec.label, spec.l)
    return Generators(spec, ops, field_)


def dump_generators(spec: ModuleSpec) -> Dict[str, List[dict]]:
    """GenOp 的 JSON 形式, 便于逐项比对"""
    gens = build_generators(spec)
    return {name: op.to_json() for name, op in gens.ops.items()}


def lowest_index(kind: str, lam: Sequence[int], l: Optional[int] = None) -> MultiIndex:
    """
    最低指标 m^λ (分量模 l)

    A 型没有对应的构造, 抛出 UnsupportedConfiguration。
    """
    n = len(lam)
    if kind == "A":
        raise UnsupportedConfiguration("m^lambda is defined for types B, C, D only")
    positions = grid_positions(kind, n)
    lam1 = (0,) + tuple(lam)  # 1 起始

    def s(lo, hi, weight=1):
        return weight * sum(lam1[lo:hi + 1]) if lo <= hi else 0

    m: Dict[Pos, int] = {}
    for i, j in positions:
        if i == j:
            m[(i, j)] = lam1[i]
        elif kind == "C":
            m[(i, j)] = s(i, j) if i < j else s(j, i - 1) + s(i, n, 2)
        elif kind == "B":
            if i < j < n:
                m[(i, j)] = s(i, j)
            elif j == n:
                m[(i, j)] = s(i, n - 1, 2) + lam1[n]
            elif i == n:
                m[(i, j)] = s(j, n)
            else:
                m[(i, j)] = s(j, i - 1) + s(i, n - 1, 2) + lam1[n]
        else:
            if (i, j) == (n - 1, n):
                m[(i, j)] = lam1[n]
            elif i < j <= n - 2:
                m[(i, j)] = s(i, j)
            elif j == n - 1:
                m[(i, j)] = s(i, n - 2) + lam1[n]
            elif j == n:
                m[(i, j)] = s(i, n - 1)
            elif i == n - 1:
                m[(i, j)] = s(j, n)
            else:
                m[(i, j)] = s(j, i - 1) + s(i, n - 2, 2) + lam1[n - 1] + lam1[n]
    out = tuple(m[p] for p in positions)
    if l is not None:
        out = tuple(x % l for x in out)
    return out
