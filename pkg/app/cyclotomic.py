"""
分圆域精确算术模块

在 Q(ε) 中做精确运算, ε 为 l 次本原单位根 (l 为 >= 5 的奇数)。
元素在幂基 1, ε, ε², … 下以 "整数分子向量 + 公分母" 存储, 始终模 Φ_l 约化,
因而相等判定就是系数比较。

另提供模 p 同态像 F_p (l | p-1) 作为快速后端, 接口与精确域一致。
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import List, Sequence, Tuple

from sympy import Poly, QQ, Rational, cyclotomic_poly, isprime, primefactors, symbols

from .errors import DivisionByZeroError, DomainError, InternalConsistencyError, StructuralError

_X = symbols("x")

@dataclass(frozen=True)
class RootOrder:
    """单位根的阶 l"""
    l: int

    def __post_init__(self):
        if isinstance(self.l, bool) or not isinstance(self.l, int):
            raise DomainError(f"l must be an integer, got {self.l!r}")
        if self.l % 2 == 0:
            raise DomainError(f"l must be odd, got {self.l}")
        if self.l < 5:
            raise DomainError(f"l must be at least 5, got {self.l}")
        for d in (1, 2):
            # ε^{2d} ≠ 1
            if (2 * d) % self.l == 0:
                raise DomainError(f"eps^{2 * d} = 1 for l = {self.l}")


class BaseField:
    """精确域与模 p 域共用的部分: ε 幂表、量子整数与 brace 缓存"""

    backend = "exact"

    def __init__(self, order: RootOrder):
        self.order = order
        self.l = order.l
        self._eps: List = []
        self._qint_cache = {}
        self._brace_cache = {}

    # 子类实现
    def from_int(self, n: int):
        raise NotImplementedError

    @property
    def zero(self):
        return self._zero

    @property
    def one(self):
        return self._one

    def eps_pow(self, k: int):
        """ε^{k mod l}"""
        return self._eps[k % self.l]

    def quantum_int(self, a: int, d: int = 1):
        """
        量子整数 [a]_{ε^d}

        a >= 0 时按 Laurent 和 ε^{d(a-1)} + ε^{d(a-3)} + … + ε^{-d(a-1)} 计算,
        负数取相反数。该值只依赖 a mod l, 按此缓存。
        """
        if d <= 0:
            raise DomainError(f"quantum integer needs d >= 1, got {d}")
        if a < 0:
            return -self.quantum_int(-a, d)
        key = (a % self.l, d)
        hit = self._qint_cache.get(key)
        if hit is None:
            a0 = key[0]
            acc = self._zero
            for k in range(a0):
                acc = acc + self.eps_pow(d * (a0 - 1 - 2 * k))
            self._qint_cache[key] = hit = acc
        return hit

    def quantum_factorial(self, k: int, d: int = 1):
        """[k]_{ε^d}!, 要求 0 <= k < l"""
        if k < 0:
            raise DomainError(f"factorial of negative k = {k}")
        if k >= self.l:
            raise DomainError(f"[{k}]! vanishes for l = {self.l}")
        acc = self._one
        for j in range(1, k + 1):
            acc = acc * self.quantum_int(j, d)
        return acc

    def brace(self, exponent: int, d: int):
        """
        对角系数 {ε^E}_{ε^d}

        d = 0 时即 ε^E; d ∈ {1, 2} 时为 (ε^E - ε^{-E}) / (ε^d - ε^{-d}),
        取 d·a ≡ E (mod l) 后等于 [a]_{ε^d}。l 为奇数, a 总存在。
        """
        key = (exponent % self.l, d)
        hit = self._brace_cache.get(key)
        if hit is not None:
            return hit
        if d == 0:
            hit = self.eps_pow(exponent)
        elif d in (1, 2):
            e = key[0]
            a = e // d if e % d == 0 else (e * pow(d, -1, self.l)) % self.l
            hit = self.quantum_int(a, d)
        else:
            raise InternalConsistencyError(f"brace parameter d = {d} not in {{0, 1, 2}}")
        self._brace_cache[key] = hit
        return hit

    def check_same(self, other: "BaseField"):
        if self is not other and self.key != other.key:
            raise StructuralError(f"field mismatch: {self.label} vs {other.label}")

    @property
    def key(self) -> tuple:
        return ("exact", self.l)

    @property
    def label(self) -> str:
        return f"Q(eps_{self.l})"


class CyclotomicField(BaseField):
    """Q(ε), ε 为 l 次本原单位根, 模 Φ_l 表示"""

    def __init__(self, order: RootOrder):
        super().__init__(order)
        phi = [int(c) for c in cyclotomic_poly(order.l, _X, polys=True).all_coeffs()]
        phi.reverse()  # 低次在前, 首一
        self.degree = len(phi) - 1
        self._phi_poly = Poly(list(reversed(phi)), _X, domain=QQ)
        # x^k 在幂基下的整数系数, k 覆盖乘法卷积与 ε 幂表的全部需要
        top = max(2 * self.degree - 1, self.l)
        table = []
        cur = [0] * self.degree
        cur[0] = 1
        for _ in range(top):
            table.append(tuple(cur))
            lead = cur[-1]
            cur = [0] + cur[:-1]
            if lead:
                for j in range(self.degree):
                    cur[j] -= lead * phi[j]
        self._power_table = table
        self._zero = FieldElem(self, (0,) * self.degree, 1)
        self._one = FieldElem(self, table[0], 1)
        self._eps = [FieldElem(self, table[k], 1) for k in range(self.l)]

    def from_int(self, n: int) -> "FieldElem":
        return FieldElem(self, (int(n),) + (0,) * (self.degree - 1), 1)

    def from_fractions(self, coeffs: Sequence) -> "FieldElem":
        """由有理系数列表构造 (低次在前), 长度不足补零"""
        fr = [Fraction(c) for c in coeffs]
        if len(fr) > self.degree:
            raise StructuralError(
                f"{len(fr)} coefficients given, field degree is {self.degree}"
            )
        fr += [Fraction(0)] * (self.degree - len(fr))
        den = reduce(lcm, (c.denominator for c in fr), 1)
        return FieldElem.make(self, tuple(int(c * den) for c in fr), den)

    def parse(self, text: str) -> "FieldElem":
        """解析规范文本形式 "[-1/2, 0, 1]" """
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")):
            raise StructuralError(f"bad field element text: {text!r}")
        parts = [p.strip() for p in body[1:-1].split(",") if p.strip()]
        try:
            return self.from_fractions([Fraction(p) for p in parts])
        except (ValueError, ZeroDivisionError) as e:
            raise StructuralError(f"bad field element text: {text!r}") from e

    def _mul_raw(self, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
        deg = self.degree
        conv = [0] * (2 * deg - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = conv[:deg]
        table = self._power_table
        for k in range(deg, 2 * deg - 1):
            c = conv[k]
            if c:
                for j, r in enumerate(table[k]):
                    if r:
                        out[j] += c * r
        return tuple(out)

    def _inverse_raw(self, num: Tuple[int, ...], den: int) -> "FieldElem":
        f = Poly([Rational(c, den) for c in reversed(num)], _X, domain=QQ)
        g = f.invert(self._phi_poly)
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())]
        return self.from_fractions(coeffs)


class FieldElem:
    """Q(ε) 中的不可变元素: num / den, den > 0 且 gcd(num, den) = 1"""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: CyclotomicField, num: Tuple[int, ...], den: int = 1):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def make(cls, field: CyclotomicField, num: Tuple[int, ...], den: int) -> "FieldElem":
        """规范化构造"""
        if den == 0:
            raise DivisionByZeroError("zero denominator")
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        if den != 1:
            g = reduce(gcd, num, den)
            if g > 1:
                num = tuple(c // g for c in num)
                den //= g
            if not any(num):
                den = 1
        return cls(field, num, den)

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            self.field.check_same(other.field)
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        if isinstance(other, Fraction):
            return self.field.from_fractions([other])
        raise StructuralError(f"cannot combine FieldElem with {type(other).__name__}")

    def __add__(self, other) -> "FieldElem":
        o = self._coerce(other)
        if self.den == o.den:
            num = tuple(x + y for x, y in zip(self.num, o.num))
            if self.den == 1:
                return FieldElem(self.field, num, 1)
            return FieldElem.make(self.field, num, self.den)
        num = tuple(x * o.den + y * self.den for x, y in zip(self.num, o.num))
        return FieldElem.make(self.field, num, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        return FieldElem(self.field, tuple(-x for x in self.num), self.den)

    def __sub__(self, other) -> "FieldElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FieldElem":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "FieldElem":
        if isinstance(other, int):
            if other == 1:
                return self
            return FieldElem.make(self.field, tuple(x * other for x in self.num), self.den)
        o = self._coerce(other)
        num = self.field._mul_raw(self.num, o.num)
        den = self.den * o.den
        if den == 1:
            return FieldElem(self.field, num, 1)
        return FieldElem.make(self.field, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if not any(self.num):
            raise DivisionByZeroError("inverse of zero in Q(eps)")
        return self.field._inverse_raw(self.num, self.den)

    def __truediv__(self, other) -> "FieldElem":
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int) -> "FieldElem":
        if k < 0:
            return self.inverse() ** (-k)
        acc = self.field.one
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return any(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self._coerce(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field.l == other.field.l and self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        return hash((self.field.l, self.num, self.den))

    def coefficients(self) -> List[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def text(self) -> str:
        """规范文本: 低次在前的有理系数列表"""
        return "[" + ", ".join(str(c) for c in self.coefficients()) + "]"

    def __repr__(self) -> str:
        return f"FieldElem({self.text()})"


class ModularField(BaseField):
    """
    F_p 中的同态像: ε 映为 F_p^* 中一个 l 阶元

    要求 p 为素数且 l | p-1。
    """

    backend = "modp"

    def __init__(self, order: RootOrder, p: int):
        super().__init__(order)
        if not isprime(p):
            raise DomainError(f"modulus {p} is not prime")
        if (p - 1) % order.l:
            raise DomainError(f"l = {order.l} does not divide p - 1 = {p - 1}")
        self.p = p
        self.degree = 1
        self.root = self._find_root()
        self._zero = ModElem(self, 0)
        self._one = ModElem(self, 1)
        self._eps = [ModElem(self, pow(self.root, k, p)) for k in range(self.l)]

    def _find_root(self) -> int:
        p, l = self.p, self.l
        factors = primefactors(l)
        for g in range(2, p):
            h = pow(g, (p - 1) // l, p)
            if all(pow(h, l // q, p) != 1 for q in factors):
                return h
        raise DomainError(f"no element of order {l} in F_{p}")

    @property
    def key(self) -> tuple:
        return ("modp", self.l, self.p)

    @property
    def label(self) -> str:
        return f"F_{self.p}(eps_{self.l})"

    def from_int(self, n: int) -> "ModElem":
        return ModElem(self, int(n) % self.p)

    def from_fractions(self, coeffs: Sequence) -> "ModElem":
        # 幂基系数直接代入 ε 的像
        acc = 0
        for k, c in enumerate(coeffs):
            fr = Fraction(c)
            acc += fr.numerator * pow(fr.denominator, -1, self.p) * pow(self.root, k, self.p)
        return ModElem(self, acc % self.p)

    def parse(self, text: str) -> "ModElem":
        try:
            return ModElem(self, int(text.strip()) % self.p)
        except ValueError as e:
            raise StructuralError(f"bad F_p element text: {text!r}") from e


class ModElem:
    """F_p 中的不可变元素"""

    __slots__ = ("field", "v")

    def __init__(self, field: ModularField, v: int):
        self.field = field
        self.v = v

    def _coerce(self, other) -> "ModElem":
        if isinstance(other, ModElem):
            self.field.check_same(other.field)
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        raise StructuralError(f"cannot combine ModElem with {type(other).__name__}")

    def __add__(self, other) -> "ModElem":
        return ModElem(self.field, (self.v + self._coerce(other).v) % self.field.p)

    __radd__ = __add__

    def __neg__(self) -> "ModElem":
        return ModElem(self.field, (-self.v) % self.field.p)

    def __sub__(self, other) -> "ModElem":
        return ModElem(self.field, (self.v - self._coerce(other).v) % self.field.p)

    def __rsub__(self, other) -> "ModElem":
        return ModElem(self.field, (self._coerce(other).v - self.v) % self.field.p)

    def __mul__(self, other) -> "ModElem":
        return ModElem(self.field, (self.v * self._coerce(other).v) % self.field.p)

    __rmul__ = __mul__

    def inverse(self) -> "ModElem":
        if self.v == 0:
            raise DivisionByZeroError(f"inverse of zero in F_{self.field.p}")
        return ModElem(self.field, pow(self.v, self.field.p - 2, self.field.p))

    def __truediv__(self, other) -> "ModElem":
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int) -> "ModElem":
        if k < 0:
            return self.inverse() ** (-k)
        return ModElem(self.field, pow(self.v, k, self.field.p))

    def is_zero(self) -> bool:
        return self.v == 0

    def __bool__(self) -> bool:
        return self.v != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.v == other % self.field.p
        if not isinstance(other, ModElem):
            return NotImplemented
        return self.field.key == other.field.key and self.v == other.v

    def __hash__(self) -> int:
        return hash((self.field.p, self.v))

    def text(self) -> str:
        return str(self.v)

    def __repr__(self) -> str:
        return f"ModElem({self.v} mod {self.field.p})"


@lru_cache(maxsize=None)
def get_field(l: int) -> CyclotomicField:
    """按 l 缓存的精确域单例"""
    return CyclotomicField(RootOrder(l))


@lru_cache(maxsize=None)
def get_modular_field(l: int, p: int) -> ModularField:
    """按 (l, p) 缓存的模 p 域单例"""
    return ModularField(RootOrder(l), p)


def smallest_modulus(l: int, lower: int = 10 ** 6) -> int:
    """大于 lower 且满足 l | p-1 的最小素数"""
    p = lower - (lower % l) + 1
    while p <= lower or not isprime(p):
        p += l
    return p


def resolve_field(l: int, backend: str = "exact") -> BaseField:
    """
    解析后端描述

    Args:
        l: 单位根阶数
        backend: "exact" 或 "modp:P" (P 可省略, 自动选取)

    Returns:
        对应的域对象
    """
    if backend == "exact":
        return get_field(l)
    if backend.startswith("modp"):
        _, _, tail = backend.partition(":")
        p = int(tail) if tail else smallest_modulus(l)
        return get_modular_field(l, p)
    raise DomainError(f"unknown backend {backend!r}")


# --- 函数式接口 ---

def field_arith(op: str, x, y=None):
    """
    域运算分派

    Args:
        op: add | sub | mul | neg
        x, y: 同一域上的元素 (neg 时 y 省略)
    """
    if op == "neg":
        return -x
    if y is None:
        raise StructuralError(f"operation {op!r} needs two operands")
    x.field.check_same(y.field)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise StructuralError(f"unknown field operation {op!r}")


def field_inv(x):
    return x.inverse()


def eps_pow(l: int, k: int) -> FieldElem:
    return get_field(l).eps_pow(k)


def quantum_int(l: int, a: int, d: int = 1) -> FieldElem:
    return get_field(l).quantum_int(a, d)


def quantum_factorial(l: int, k: int, d: int = 1) -> FieldElem:
    return get_field(l).quantum_factorial(k, d)

