"""
e_i, f_i 的显式作用公式

每个生成元写成若干条规则 [E(m)]_{ε^d} u(m + δ), 其中 E 是 m (平移前) 的线性式。
这些公式只对默认参数 a^{(0)}, b^{(0)} 成立, b 已经代入常数。
它们与 schnizer.build_generators 的词求值结果应逐项相等, 用作交叉校验。
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Tuple

from .errors import UnsupportedConfiguration
from .schnizer import ModuleSpec, default_params
from .weylrep import MultiIndex, Pos, SparseVec

logger = logging.getLogger(__name__)

Form = Dict[Pos, int]


def _add(*parts: Mapping[Pos, int], scale: int = 1) -> Form:
    out: Form = {}
    for part in parts:
        for p, c in part.items():
            out[p] = out.get(p, 0) + scale * c
    return {p: c for p, c in out.items() if c}


@dataclass(frozen=True)
class ActionRule:
    """[const + Σ w_p m_p]_{ε^d} u(m + δ)"""
    form: Tuple[Tuple[Pos, int], ...]
    const: int
    d: int
    delta: Tuple[Tuple[Pos, int], ...]

    @classmethod
    def of(cls, form: Mapping[Pos, int], delta: Mapping[Pos, int], d: int = 1, const: int = 0) -> "ActionRule":
        return cls(
            tuple(sorted(_add(form).items())),
            const,
            d,
            tuple(sorted(_add(delta).items())),
        )


class ClosedFormOp:
    """一组 ActionRule, 接口与 GenOp.apply 相同"""

    def __init__(self, name: str, rules: List[ActionRule], spec: ModuleSpec):
        self.name = name
        self.rules = tuple(rules)
        self.shape = spec.shape
        slot = self.shape.slot
        self._compiled = tuple(
            (
                tuple((slot[p], w) for p, w in r.form),
                r.const,
                r.d,
                tuple((slot[p], k) for p, k in r.delta),
            )
            for r in self.rules
        )

    def apply(self, v: SparseVec) -> SparseVec:
        l = self.shape.l
        brace = v.field.brace
        acc: Dict[MultiIndex, object] = {}
        for m, c in v.items():
            for form, const, d, delta in self._compiled:
                e = const
                for s, w in form:
                    e += w * m[s]
                coef = brace(e, d)
                if not coef:
                    continue
                mm = list(m)
                for s, k in delta:
                    mm[s] = (mm[s] + k) % l
                mm = tuple(mm)
                val = c * coef
                prev = acc.get(mm)
                acc[mm] = val if prev is None else prev + val
        return SparseVec(self.shape, v.field, acc)

    __call__ = apply


# --- A 型 ---

class _SlForms:
    """A_n 的公式以 M = m + b 表示, 越界位置的 M 为 0"""

    def __init__(self, spec: ModuleSpec):
        self.spec = spec
        self.n = spec.n
        _, self.b = default_params("A", spec.n)

    def M(self, form: Mapping[Pos, int]) -> Tuple[Form, int]:
        """把 M 的线性式转换成 (m 的线性式, 常数)"""
        m_form = {p: c for p, c in form.items() if p in self.b and c}
        const = sum(c * self.b[p] for p, c in m_form.items())
        return m_form, const

    def mu(self, i: int, j: int) -> Tuple[Form, int]:
        terms: Form = {(i - 1, i - 1): 1}
        for p in range(i, j + 1):
            terms = _add(terms, {(i - 1, p): 1, (i, p): -2, (i + 1, p): 1})
        form, const = self.M(terms)
        return form, const + self.spec.lam_shift[i - 1]

    def e(self, i: int) -> List[ActionRule]:
        n = self.n
        rules = []
        for k in range(1, i + 1):
            c = n - i + k
            form, const = self.M({(k - 1, c): 1, (k, c): -1})
            delta: Form = {(k, c): -1}
            for p in range(k + 1, i + 1):
                cp = n - i + p
                delta = _add(delta, {(p - 1, cp): 1, (p, cp): -1})
            rules.append(ActionRule.of(form, delta, 1, const + 1))
        return rules

    def f(self, i: int) -> List[ActionRule]:
        rules = []
        for k in range(i, self.n + 1):
            form, const = self.M({(i, k): 1, (i + 1, k): -1})
            mu_form, mu_const = self.mu(i, k - 1)
            rules.append(ActionRule.of(_add(form, _add(mu_form, scale=-1)), {(i, k): 1}, 1, const - mu_const + 1))
        return rules


# --- C, B, D 型的 e ---

def _inner_e(j: int, scale: int, d: int) -> List[ActionRule]:
    """C, B (j < n) 与 D (j <= n-2) 共用的结构"""

    def D(p):
        return {(p, j - 1): 1, (p, j): -1, (j + 1, p): 1, (j, p): -1}

    full = _add(*[D(k) for k in range(1, j)])
    rules = [ActionRule.of({(j, j): -scale}, _add(full, {(j, j): -1}), d)]
    pre: Form = {}
    for q in range(1, j):
        rules.append(ActionRule.of({(q, j - 1): scale, (q, j): -scale}, _add(pre, {(q, j): -1}), d))
        rules.append(ActionRule.of(
            {(j + 1, q): scale, (j, q): -scale},
            _add(pre, {(q, j - 1): 1, (q, j): -1, (j, q): -1}),
            d,
        ))
        pre = _add(pre, D(q))
    return rules


def _sp_last_e(n: int) -> List[ActionRule]:
    def D(p):
        return {(p, n - 1): 2, (n, p): -2}

    full = _add(*[D(k) for k in range(1, n)])
    rules = [ActionRule.of({(n, n): -2}, _add(full, {(n, n): -1}), 2)]
    pre: Form = {}
    for q in range(1, n):
        rules.append(ActionRule.of({(q, n - 1): 2, (q, n): -2}, _add(pre, {(q, n): -1}), 2))
        rules.append(ActionRule.of(
            {(q, n - 1): 1, (n, q): -1},
            _add(pre, {(q, n - 1): 1, (q, n): -1, (n, q): -1}),
            1,
        ))
        rules.append(ActionRule.of(
            {(q, n): 2, (n, q): -2},
            _add(pre, {(q, n - 1): 2, (q, n): -1, (n, q): -2}),
            2,
        ))
        pre = _add(pre, D(q))
    return rules


def _so_odd_last_e(n: int) -> List[ActionRule]:
    def D(p):
        return {(p, n - 1): 1, (n, p): -1}

    full = _add(*[D(k) for k in range(1, n)])
    rules = [ActionRule.of({(n, n): -1}, _add(full, {(n, n): -1}), 1)]
    pre: Form = {}
    for q in range(1, n):
        rules.append(ActionRule.of({(q, n - 1): 2, (q, n): -1}, _add(pre, {(q, n): -1}), 1))
        rules.append(ActionRule.of(
            {(q, n): 1, (n, q): -2},
            _add(pre, {(q, n - 1): 1, (q, n): -1, (n, q): -1}),
            1,
        ))
        pre = _add(pre, D(q))
    return rules


def _so_even_column(n: int, j: int, p: int) -> int:
    """e_{n-1} 在奇数行用第 n-1 列, e_n 在奇数行用第 n 列, 偶数行相反"""
    odd = p % 2 == 1
    if j == n - 1:
        return n - 1 if odd else n
    return n if odd else n - 1


def _so_even_last_e(n: int, j: int) -> List[ActionRule]:
    def D(p, col):
        other = n if col == n - 1 else n - 1
        return {(p, n - 2): 1, (p, col): -1, (p, other): 1, (n - 1, p): -1}

    rows = range(1, n - 1)
    prefix = [D(p, _so_even_column(n, j, p)) for p in rows]
    lead_col = _so_even_column(n, j, n - 1)
    rules = [ActionRule.of({(n - 1, lead_col): -1}, _add(*prefix, {(n - 1, lead_col): -1}), 1)]
    pre: Form = {}
    for q in rows:
        col = _so_even_column(n, j, q)
        other = n if col == n - 1 else n - 1
        rules.append(ActionRule.of({(q, n - 2): 1, (q, col): -1}, _add(pre, {(q, col): -1}), 1))
        rules.append(ActionRule.of(
            {(q, other): 1, (n - 1, q): -1},
            _add(pre, {(q, n - 2): 1, (q, col): -1, (n - 1, q): -1}),
            1,
        ))
        pre = _add(pre, prefix[q - 1])
    return rules


# --- C 型的 f ---

class _SpFForms:
    def __init__(self, spec: ModuleSpec):
        self.n = spec.n
        self.lam = spec.lam

    def nu(self, k: int, j: int) -> Tuple[Form, int]:
        n = self.n
        lam = self.lam
        if k == j:
            if j <= n - 2:
                return {(j, j): 2, (j, j + 1): -1, (j + 2, j): -1, (j + 1, j): 2, (j + 1, j + 1): -1,
                        (j + 2, j + 1): -1}, -lam[j - 1]
            if j == n - 1:
                return {(n - 1, n - 1): 2, (n - 1, n): -2, (n, n - 1): 2, (n, n): -2}, -lam[n - 2]
            return {(n, n): 2}, -lam[n - 1]
        if j <= n - 2:
            return {(k, j - 1): -1, (k, j): 2, (k, j + 1): -1, (j + 2, k): -1, (j + 1, k): 2, (j, k): -1}, 0
        if j == n - 1:
            return {(k, n - 2): -1, (k, n - 1): 2, (k, n): -2, (n, k): 2, (n - 1, k): -1}, 0
        return {(k, n - 1): -1, (k, n): 2, (n, k): -1}, 0

    def mu(self, i: int, j: int) -> Tuple[Form, int]:
        form: Form = {}
        const = 0
        for k in range(i, j + 1):
            f, c = self.nu(k, j)
            form = _add(form, f)
            const += c
        return form, const

    def f(self, j: int) -> List[ActionRule]:
        n = self.n
        lam_j = self.lam[j - 1]
        rules = []
        if j <= n - 2:
            rules.append(ActionRule.of(
                {(j, j): 1, (j, j + 1): -1, (j + 2, j): -1, (j + 1, j): 2, (j + 1, j + 1): -1, (j + 2, j + 1): -1},
                {(j, j): 1}, 1, -lam_j))
            rules.append(ActionRule.of(
                {(j + 1, j): 1, (j + 1, j + 1): -1, (j + 2, j + 1): -1}, {(j + 1, j): 1}, 1, -lam_j))
            for i in range(1, j):
                mu, c = self.mu(i + 1, j)
                rules.append(ActionRule.of(
                    _add(mu, {(i, j): 1, (i, j + 1): -1, (j + 2, i): -1, (j + 1, i): 2, (j, i): -1}),
                    {(i, j): 1}, 1, c))
                rules.append(ActionRule.of(_add(mu, {(j + 1, i): 1, (j, i): -1}), {(j + 1, i): 1}, 1, c))
        elif j == n - 1:
            rules.append(ActionRule.of(
                {(n - 1, n - 1): 1, (n - 1, n): -2, (n, n - 1): 2, (n, n): -2}, {(n - 1, n - 1): 1}, 1, -lam_j))
            rules.append(ActionRule.of({(n, n - 1): 1, (n, n): -2}, {(n, n - 1): 1}, 1, -lam_j))
            for i in range(1, n - 1):
                mu, c = self.mu(i + 1, n - 1)
                rules.append(ActionRule.of(
                    _add(mu, {(i, n - 1): 1, (i, n): -2, (n, i): 2, (n - 1, i): -1}), {(i, n - 1): 1}, 1, c))
                rules.append(ActionRule.of(_add(mu, {(n, i): 1, (n - 1, i): -1}), {(n, i): 1}, 1, c))
        else:
            rules.append(ActionRule.of({(n, n): 2}, {(n, n): 1}, 2, -2 * lam_j))
            for i in range(1, n):
                mu, c = self.mu(i + 1, n)
                rules.append(ActionRule.of(_add({(i, n): 1, (n, i): -1}, mu, scale=2), {(i, n): 1}, 2, 2 * c))
        return rules


def _require_default(spec: ModuleSpec):
    if not spec.uses_default_params():
        raise UnsupportedConfiguration(
            f"closed-form actions need the default a/b tables; {spec.label} was built with overrides"
        )


def closed_form_e(spec: ModuleSpec) -> Dict[int, ClosedFormOp]:
    """按显式公式构造全部 e_i"""
    _require_default(spec)
    n = spec.n
    ops = {}
    for j in range(1, n + 1):
        if spec.kind == "A":
            rules = _SlForms(spec).e(j)
        elif spec.kind == "C":
            rules = _inner_e(j, 1, 1) if j < n else _sp_last_e(n)
        elif spec.kind == "B":
            rules = _inner_e(j, 2, 2) if j < n else _so_odd_last_e(n)
        else:
            rules = _inner_e(j, 1, 1) if j <= n - 2 else _so_even_last_e(n, j)
        ops[j] = ClosedFormOp(f"e{j}", rules, spec)
    logger.debug("closed-form e operators ready for %s", spec.label)
    return ops


def closed_form_f(spec: ModuleSpec) -> Dict[int, ClosedFormOp]:
    """
    按显式公式构造全部 f_i

    只有 A, C 型有 f 的显式公式; B, D 型只能走 Weyl 词路线。
    """
    _require_default(spec)
    if spec.kind not in ("A", "C"):
        raise UnsupportedConfiguration(f"no closed-form f action for type {spec.kind}")
    forms = _SlForms(spec) if spec.kind == "A" else _SpFForms(spec)
    return {j: ClosedFormOp(f"f{j}", forms.f(j), spec) for j in range(1, spec.n + 1)}
