"""
自由代数模块

FreeElem 是生成元 e_i, f_i, t_i, t_i^{-1} 上的非交换 Laurent 多项式, 只合并相同的词,
不做任何关系改写 (除相邻 t_i t_i^{-1} 相消)。所有恒等式都通过在模 V 上求值来检验。
"""
import logging
import threading
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .cyclotomic import BaseField
from .errors import ExpressionSwellError, StructuralError
from .rootdata import cartan_matrix, default_w0_word, positive_root_sequence, symmetrizer, validate_reduced_word
from .schnizer import Generators
from .weylrep import SparseVec

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]

# 根向量展开允许的最大词数
DEFAULT_MAX_WORDS = 50000


def parse_symbol(sym: str) -> Tuple[str, int, bool]:
    """'t2^-1' -> ('t', 2, True)"""
    inverse = sym.endswith("^-1")
    core = sym[:-3] if inverse else sym
    letter, idx = core[:1], core[1:]
    if letter not in ("e", "f", "t") or not idx.isdigit() or (inverse and letter != "t"):
        raise StructuralError(f"bad generator symbol {sym!r}")
    return letter, int(idx), inverse


def _inverse_symbol(sym: str) -> Optional[str]:
    if sym.startswith("t"):
        return sym[:-3] if sym.endswith("^-1") else sym + "^-1"
    return None


def reduce_word(word: Iterable[str]) -> Word:
    """相邻的 t_i, t_i^{-1} 相消"""
    out: List[str] = []
    for sym in word:
        if out and _inverse_symbol(sym) == out[-1]:
            out.pop()
        else:
            out.append(sym)
    return tuple(out)


class FreeElem:
    """Σ c_w · w, w 为生成元符号的元组; 空元组表示 1"""

    __slots__ = ("field", "_terms")

    def __init__(self, field: BaseField, terms: Optional[Dict] = None):
        self.field = field
        acc: Dict[Word, object] = {}
        for w, c in (terms or {}).items():
            w = reduce_word(w)
            prev = acc.get(w)
            acc[w] = c if prev is None else prev + c
        self._terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def _raw(cls, field: BaseField, terms: Dict[Word, object]) -> "FreeElem":
        x = cls.__new__(cls)
        x.field = field
        x._terms = terms
        return x

    @classmethod
    def one(cls, field: BaseField) -> "FreeElem":
        return cls._raw(field, {(): field.one})

    @classmethod
    def zero(cls, field: BaseField) -> "FreeElem":
        return cls._raw(field, {})

    @classmethod
    def gen(cls, field: BaseField, sym: str, coeff=None) -> "FreeElem":
        parse_symbol(sym)
        return cls(field, {(sym,): field.one if coeff is None else coeff})

    @classmethod
    def word(cls, field: BaseField, word: Sequence[str], coeff=None) -> "FreeElem":
        for sym in word:
            parse_symbol(sym)
        return cls(field, {tuple(word): field.one if coeff is None else coeff})

    def items(self):
        return self._terms.items()

    def words(self) -> List[Word]:
        return list(self._terms)

    def coeff(self, word: Sequence[str]):
        return self._terms.get(tuple(word), self.field.zero)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __add__(self, other: "FreeElem") -> "FreeElem":
        self.field.check_same(other.field)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            prev = acc.get(w)
            acc[w] = c if prev is None else prev + c
        return FreeElem._raw(self.field, {w: c for w, c in acc.items() if c})

    def __neg__(self) -> "FreeElem":
        return FreeElem._raw(self.field, {w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "FreeElem") -> "FreeElem":
        return self + (-other)

    def scale(self, c) -> "FreeElem":
        if not c:
            return FreeElem.zero(self.field)
        return FreeElem._raw(self.field, {w: x * c for w, x in self._terms.items()})

    def __mul__(self, other) -> "FreeElem":
        if not isinstance(other, FreeElem):
            return self.scale(other)
        self.field.check_same(other.field)
        acc: Dict[Word, object] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = reduce_word(w1 + w2)
                val = c1 * c2
                prev = acc.get(w)
                acc[w] = val if prev is None else prev + val
        return FreeElem._raw(self.field, {w: c for w, c in acc.items() if c})

    def __pow__(self, k: int) -> "FreeElem":
        if k < 0:
            raise StructuralError("negative powers of free elements are not defined")
        out = FreeElem.one(self.field)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElem):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def degrees(self, n: int) -> set:
        """各词的次数 (单根坐标): deg e_i = α_i, deg f_i = -α_i, deg t = 0"""
        out = set()
        for w in self._terms:
            deg = [0] * n
            for sym in w:
                letter, i, _ = parse_symbol(sym)
                if letter == "e":
                    deg[i - 1] += 1
                elif letter == "f":
                    deg[i - 1] -= 1
            out.add(tuple(deg))
        return out

    def text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0])):
            parts.append(f"{c.text()}*{'.'.join(w) if w else '1'}")
        return " + ".join(parts)

    @classmethod
    def parse(cls, text: str, field: BaseField) -> "FreeElem":
        text = text.strip()
        if text == "0":
            return cls.zero(field)
        terms = {}
        for part in text.split(" + "):
            coeff, _, word = part.rpartition("*")
            w = () if word == "1" else tuple(word.split("."))
            for sym in w:
                parse_symbol(sym)
            terms[w] = field.parse(coeff)
        return cls(field, terms)

    def __repr__(self) -> str:
        return f"FreeElem({self.text()})"


# --- Lusztig 辫群自同构 T_i ---

class BraidAction:
    """
    T_i 在生成元上的像, 按 (i, 符号) 缓存

    t_i e_j t_i^{-1} = ε^{d_i a_ij} e_j 的约定下:
    T_i(e_i) = -f_i t_i, T_i(f_i) = -t_i^{-1} e_i,
    T_i(e_j) = Σ_{s=0}^{-a} (-1)^{s-a} ε_i^{-s} e_i^{(-a-s)} e_j e_i^{(s)},
    T_i(f_j) = Σ_{s=0}^{-a} (-1)^{s-a} ε_i^{s} f_i^{(s)} f_j f_i^{(-a-s)},
    T_i(t_j) = t_j t_i^{-a_ij}.
    """

    def __init__(self, kind: str, n: int, field: BaseField):
        self.kind = kind
        self.n = n
        self.field = field
        self.cartan = cartan_matrix(kind, n)
        self.d = symmetrizer(kind, n)
        self._cache: Dict[Tuple[int, str], FreeElem] = {}
        self._lock = threading.Lock()

    def _divided(self, letter: str, i: int, k: int) -> Tuple[Word, object]:
        """x_i^{(k)} = x_i^k / [k]_{ε_i}!"""
        c = self.field.quantum_factorial(k, self.d[i - 1]).inverse()
        return (f"{letter}{i}",) * k, c

    def generator_image(self, i: int, sym: str) -> FreeElem:
        key = (i, sym)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        image = self._compute(i, sym)
        with self._lock:
            self._cache.setdefault(key, image)
        return image

    def _compute(self, i: int, sym: str) -> FreeElem:
        field = self.field
        letter, j, inverse = parse_symbol(sym)
        a = self.cartan[i - 1][j - 1]
        di = self.d[i - 1]
        if letter == "t":
            if not inverse:
                tail = (f"t{i}",) * (-a) if a < 0 else (f"t{i}^-1",) * a
                return FreeElem.word(field, (f"t{j}",) + tail)
            head = (f"t{i}",) * a if a > 0 else (f"t{i}^-1",) * (-a)
            return FreeElem.word(field, head + (f"t{j}^-1",))
        minus_one = -field.one
        if i == j:
            if letter == "e":
                return FreeElem.word(field, (f"f{i}", f"t{i}"), minus_one)
            return FreeElem.word(field, (f"t{i}^-1", f"e{i}"), minus_one)
        r = -a
        terms: Dict[Word, object] = {}
        for s in range(r + 1):
            sign = field.one if (s + r) % 2 == 0 else minus_one
            if letter == "e":
                left, cl = self._divided("e", i, r - s)
                right, cr = self._divided("e", i, s)
                coef = sign * field.eps_pow(-s * di) * cl * cr
                w = left + (sym,) + right
            else:
                left, cl = self._divided("f", i, s)
                right, cr = self._divided("f", i, r - s)
                coef = sign * field.eps_pow(s * di) * cl * cr
                w = left + (sym,) + right
            terms[w] = coef
        return FreeElem(field, terms)

    def apply(self, i: int, x: FreeElem, max_words: int = DEFAULT_MAX_WORDS) -> FreeElem:
        """T_i 按同态延拓到 x"""
        return substitute(x, lambda sym: self.generator_image(i, sym), max_words)


def substitute(x: FreeElem, image, max_words: int = DEFAULT_MAX_WORDS) -> FreeElem:
    """把 x 中每个生成元替换为 image(sym) 后展开"""
    field = x.field
    acc: Dict[Word, object] = {}
    for w, c in x.items():
        prod = {(): c}
        for sym in w:
            img = image(sym)
            nxt: Dict[Word, object] = {}
            for w1, c1 in prod.items():
                for w2, c2 in img.items():
                    ww = reduce_word(w1 + w2)
                    val = c1 * c2
                    prev = nxt.get(ww)
                    nxt[ww] = val if prev is None else prev + val
            prod = {k: v for k, v in nxt.items() if v}
            if len(prod) > max_words:
                raise ExpressionSwellError(f"expansion exceeded {max_words} words")
        for ww, cc in prod.items():
            prev = acc.get(ww)
            acc[ww] = cc if prev is None else prev + cc
        if len(acc) > max_words:
            raise ExpressionSwellError(f"expansion exceeded {max_words} words")
    return FreeElem._raw(field, {w: c for w, c in acc.items() if c})


def braid_T(i: int, x: FreeElem, kind: str, n: int) -> FreeElem:
    """T_i(x); 单次调用使用临时缓存"""
    return BraidAction(kind, n, x.field).apply(i, x)


class RootVectorBuilder:
    """
    沿约化词计算 e_{β_k} = T_{i_1} … T_{i_{k-1}}(e_{i_k})

    Φ_k = T_{i_1} ∘ … ∘ T_{i_k} 在生成元上的像按前缀长度缓存,
    Φ_k(g) = Φ_{k-1}(T_{i_k}(g))。
    """

    def __init__(self, kind: str, n: int, field: BaseField, word: Optional[Sequence[int]] = None,
                 max_words: int = DEFAULT_MAX_WORDS):
        self.kind = kind
        self.n = n
        self.field = field
        self.word = validate_reduced_word(kind, n, word) if word is not None else default_w0_word(kind, n)
        self.max_words = max_words
        self.braid = BraidAction(kind, n, field)
        self._images: Dict[Tuple[int, str], FreeElem] = {}
        self._lock = threading.Lock()

    def image(self, k: int, sym: str) -> FreeElem:
        """Φ_k(sym)"""
        if k == 0:
            return FreeElem.gen(self.field, sym)
        key = (k, sym)
        cached = self._images.get(key)
        if cached is not None:
            return cached
        inner = self.braid.generator_image(self.word[k - 1], sym)
        result = substitute(inner, lambda s: self.image(k - 1, s), self.max_words)
        with self._lock:
            self._images.setdefault(key, result)
        return result

    def roots(self) -> List[Tuple[int, ...]]:
        return positive_root_sequence(self.kind, self.n, self.word)

    def e_root(self, k: int) -> FreeElem:
        """e_{β_k}, k 从 1 开始"""
        return self.image(k - 1, f"e{self.word[k - 1]}")

    def f_root(self, k: int) -> FreeElem:
        return self.image(k - 1, f"f{self.word[k - 1]}")


def root_vectors(kind: str, n: int, field: BaseField, word: Optional[Sequence[int]] = None,
                 max_words: int = DEFAULT_MAX_WORDS) -> Tuple[List[FreeElem], List[FreeElem]]:
    """(e_β 列表, f_β 列表), 长度为正根个数"""
    builder = RootVectorBuilder(kind, n, field, word, max_words)
    es = [builder.e_root(k) for k in range(1, len(builder.word) + 1)]
    fs = [builder.f_root(k) for k in range(1, len(builder.word) + 1)]
    logger.debug("root vectors for %s%d along %s: %s words", kind, n, builder.word, [len(e) for e in es])
    return es, fs


# --- 在模上求值 ---

def evaluate(x: FreeElem, gens: Generators, v: SparseVec, memo: Optional[Dict[Word, SparseVec]] = None) -> SparseVec:
    """
    x·v, 词从右往左作用

    公共后缀只计算一次; 对同一个 v 求多个元素时可传入共享的 memo。
    """
    if memo is None:
        memo = {}
    memo[()] = v

    def suffix(w: Word) -> SparseVec:
        k = len(w)
        while w[len(w) - k:] not in memo:
            k -= 1
        out = memo[w[len(w) - k:]]
        for pos in range(len(w) - k - 1, -1, -1):
            out = gens.apply(w[pos], out)
            memo[w[pos:]] = out
        return out

    acc = SparseVec(v.shape, v.field)
    for w, c in x.items():
        out = suffix(w)
        if out:
            acc = acc + out.scale(c)
    return acc


class BraidOperators:
    """
    Φ_k(g) = T_{i_1} … T_{i_k}(g) 作为 V 上的算子, 逐列递推

    Φ_k(g) = Φ_{k-1}(T_{i_k}(g)), 而 T_{i_k}(g) 只有至多三项,
    所以按 (k, 符号, m) 记忆化各列即可, 不必展开 Φ_k(g)。
    """

    def __init__(self, gens: Generators, word: Sequence[int]):
        spec = gens.spec
        self.gens = gens
        self.word = validate_reduced_word(spec.kind, spec.n, word)
        self.braid = BraidAction(spec.kind, spec.n, gens.field)
        self._cols: Dict[Tuple[int, str, Tuple[int, ...]], SparseVec] = {}

    def apply(self, k: int, sym: str, v: SparseVec) -> SparseVec:
        acc = SparseVec(v.shape, v.field)
        for m, c in v.items():
            col = self.column(k, sym, m)
            if col:
                acc = acc + col.scale(c)
        return acc

    def column(self, k: int, sym: str, m) -> SparseVec:
        """Φ_k(sym) u(m)"""
        key = (k, sym, m)
        hit = self._cols.get(key)
        if hit is not None:
            return hit
        u = self.gens.basis(m)
        if k == 0:
            out = self.gens.apply(sym, u)
        else:
            out = SparseVec(u.shape, u.field)
            for w, c in self.braid.generator_image(self.word[k - 1], sym).items():
                vec = u
                for s in reversed(w):
                    vec = self.apply(k - 1, s, vec)
                    if not vec:
                        break
                if vec:
                    out = out + vec.scale(c)
        return self._cols.setdefault(key, out)

    def longest(self, sym: str, m) -> SparseVec:
        """T_{w0}(sym) u(m), 沿整个约化词"""
        return self.column(len(self.word), sym, m)


def evaluate_power(x: FreeElem, k: int, gens: Generators, v: SparseVec) -> SparseVec:
    """x^k·v, 逐次作用而不展开 x^k"""
    out = v
    for _ in range(k):
        if not out:
            break
        out = evaluate(x, gens, out)
    return out


# --- 定义关系 ---

def quantum_bracket(field: BaseField, i: int, d: int) -> FreeElem:
    """{t_i} = (t_i - t_i^{-1}) / (ε_i - ε_i^{-1})"""
    denom = (field.eps_pow(d) - field.eps_pow(-d)).inverse()
    return FreeElem(field, {(f"t{i}",): denom, (f"t{i}^-1",): -denom})


def relations(kind: str, n: int, field: BaseField) -> List[Tuple[str, FreeElem]]:
    """
    U_ε 的全部定义关系, 每条写成应在 V 上为零的元素

    Returns:
        [(关系名, 元素)], 名称形如 "t1e2t1^-1", "[e1,f1]", "serre_e(1,2)"
    """
    a = cartan_matrix(kind, n)
    d = symmetrizer(kind, n)
    g = lambda sym: FreeElem.gen(field, sym)
    out: List[Tuple[str, FreeElem]] = []
    for i in range(1, n + 1):
        ti, tinv = g(f"t{i}"), g(f"t{i}^-1")
        for j in range(1, n + 1):
            if i < j:
                out.append((f"t{i}t{j}", ti * g(f"t{j}") - g(f"t{j}") * ti))
            k = d[i - 1] * a[i - 1][j - 1]
            out.append((f"t{i}e{j}t{i}^-1", ti * g(f"e{j}") * tinv - g(f"e{j}").scale(field.eps_pow(k))))
            out.append((f"t{i}f{j}t{i}^-1", ti * g(f"f{j}") * tinv - g(f"f{j}").scale(field.eps_pow(-k))))
            comm = g(f"e{i}") * g(f"f{j}") - g(f"f{j}") * g(f"e{i}")
            if i == j:
                comm = comm - quantum_bracket(field, i, d[i - 1])
            out.append((f"[e{i},f{j}]", comm))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            for letter in ("e", "f"):
                out.append((f"serre_{letter}({i},{j})", serre_element(field, letter, i, j, a[i - 1][j - 1], d[i - 1])))
    return out


def serre_element(field: BaseField, letter: str, i: int, j: int, aij: int, di: int) -> FreeElem:
    """Σ_k (-1)^k [1-a]! / ([k]! [1-a-k]!) x_i^{1-a-k} x_j x_i^k, 系数取 ε_i = ε^{d_i}"""
    top = 1 - aij
    fact = field.quantum_factorial
    terms: Dict[Word, object] = {}
    for k in range(top + 1):
        c = fact(top, di) * (fact(k, di) * fact(top - k, di)).inverse()
        if k % 2:
            c = -c
        w = (f"{letter}{i}",) * (top - k) + (f"{letter}{j}",) + (f"{letter}{i}",) * k
        terms[w] = c
    return FreeElem(field, terms)


def power_identity(field: BaseField, sym: str, k: int) -> FreeElem:
    """sym^k - 1, 用于 t_i^l = 1 与 t_i^{2l} = 1"""
    return FreeElem._raw(field, {(sym,) * k: field.one, (): -field.one})


__all__ = [
    "FreeElem",
    "BraidAction",
    "BraidOperators",
    "RootVectorBuilder",
    "braid_T",
    "default_w0_word",
    "evaluate",
    "evaluate_power",
    "parse_symbol",
    "power_identity",
    "quantum_bracket",
    "reduce_word",
    "relations",
    "root_vectors",
    "serre_element",
    "substitute",
    "validate_reduced_word",
]
