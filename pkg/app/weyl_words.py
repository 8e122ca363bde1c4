"""
B, C, D 型生成元的 Weyl 代数词

逐项抄录构造定理中的 F, C, D, B, E, T, A 各因子, 组装成 e_j, f_j, t_j 的项列表。
所有位置均为 (行, 列), 1 起始。λ′ 以 ε 幂偏移的形式进入 T 与 E。

与原始公式的差异 (已由权与交换子核对):
- sp: C_{i,n} 前两项 x 指数、第三项 z 指数; 范围取 1 <= i < n
- so(2n+1): B_{i,j} 第二项为 x_{j+1,i}^{-1}; E_{n-1,n-1} 第二项取 ε² brace
- so(2n): F_{j,j} 中 x 位于 brace 之外
"""
from typing import Callable, Dict, List, Sequence

from .weylrep import Pos, Term, XWord, ZWord

TermList = List[Term]


def _t(z: Dict[Pos, int], x: Dict[Pos, int], d: int = 1, offset: int = 0) -> Term:
    return Term(ZWord.of(z, offset, d), XWord.of(x))


def _tz(z: ZWord, extra: Dict[Pos, int], x: Dict[Pos, int], d: int) -> Term:
    """{extra · z}_d · x, z 为已带 λ′ 偏移的 T 因子"""
    return Term((ZWord.of(extra) * z).braced(d), XWord.of(x))


def _assemble_e(
    lead: Term,
    prefix: Sequence[XWord],
    c_terms: Sequence[TermList],
) -> TermList:
    """
    e = (Π D) F + Σ_q (Π_{p<q} D) C_q

    prefix[q-1] 是第 q 行的 D 因子, c_terms[q-1] 是 C_q 的项。
    """
    terms: TermList = []
    full = XWord()
    for dx in prefix:
        full = full * dx
    terms.append(lead.left_x(full))
    running = XWord()
    for q, ct in enumerate(c_terms):
        for t in ct:
            terms.append(t.left_x(running))
        running = running * prefix[q]
    return terms


# --- sp(2n) ---

class SpWords:
    """C_n (n >= 2)"""

    def __init__(self, n: int, lam_shift: Sequence[int]):
        self.n = n
        self.lp = list(lam_shift)

    def A(self, i: int, j: int) -> Dict[Pos, int]:
        n = self.n
        if j <= n - 2:
            return {(i, j - 1): -1, (i, j): 2, (i, j + 1): -1, (j + 2, i): -1, (j + 1, i): 2, (j, i): -1}
        if j == n - 1:
            return {(i, n - 2): -1, (i, n - 1): 2, (i, n): -2, (n, i): 2, (n - 1, i): -1}
        return {(i, n - 1): -2, (i, n): 4, (n, i): -2}

    def Tjj(self, j: int) -> ZWord:
        n = self.n
        if j <= n - 2:
            z = {(j, j): 2, (j, j + 1): -1, (j + 2, j): -1, (j + 1, j): 2, (j + 1, j + 1): -1, (j + 2, j + 1): -1}
        elif j == n - 1:
            z = {(n - 1, n - 1): 2, (n - 1, n): -2, (n, n - 1): 2, (n, n): -2}
        else:
            z = {(n, n): 4}
        return ZWord.of(z, self.lp[j - 1])

    def T(self, i: int, j: int) -> ZWord:
        w = self.Tjj(j)
        for k in range(i, j):
            w = ZWord.of(self.A(k, j)) * w
        return w

    def D(self, i: int, j: int) -> XWord:
        if i <= 0:
            return XWord()
        if j < self.n:
            return XWord.of({(i, j - 1): -1, (i, j): 1, (j + 1, i): -1, (j, i): 1})
        n = self.n
        return XWord.of({(i, n - 1): -2, (n, i): 2})

    def F(self, j: int) -> Term:
        if j < self.n:
            return _t({(j, j): -1}, {(j, j): 1})
        return _t({(j, j): -2}, {(j, j): 1}, d=2)

    def C(self, i: int, j: int) -> TermList:
        n = self.n
        if j < n:
            return [
                _t({(i, j): -1, (i, j - 1): 1}, {(i, j): 1}),
                _t({(j, i): -1, (j + 1, i): 1}, {(i, j): 1, (j, i): 1, (i, j - 1): -1}),
            ]
        return [
            _t({(i, n): 2, (n, i): -2}, {(i, n - 1): -2, (i, n): 1, (n, i): 2}, d=2),
            _t({(i, n - 1): 1, (n, i): -1}, {(i, n - 1): -1, (i, n): 1, (n, i): 1}),
            _t({(i, n - 1): 2, (i, n): -2}, {(i, n): 1}, d=2),
        ]

    def B(self, i: int, j: int) -> TermList:
        n = self.n
        T = self.T(i + 1, j)
        if j <= n - 2:
            return [
                _tz(T, {(i, j + 1): -1, (j + 2, i): -1, (j + 1, i): 2, (j, i): -1, (i, j): 1}, {(i, j): -1}, 1),
                _tz(T, {(j, i): -1, (j + 1, i): 1}, {(j + 1, i): -1}, 1),
            ]
        if j == n - 1:
            return [
                _tz(T, {(i, n): -2, (i, n - 1): 1, (n, i): 2, (n - 1, i): -1}, {(i, n - 1): -1}, 1),
                _tz(T, {(n - 1, i): -1, (n, i): 1}, {(n, i): -1}, 1),
            ]
        return [_tz(T, {(i, n): 2, (n, i): -2}, {(i, n): -1}, 2)]

    def E(self, j: int) -> TermList:
        n = self.n
        c = self.lp[j - 1]
        if j <= n - 2:
            return [
                _t({(j, j): 1, (j, j + 1): -1, (j + 2, j): -1, (j + 1, j): 2, (j + 1, j + 1): -1,
                    (j + 2, j + 1): -1}, {(j, j): -1}, offset=c),
                _t({(j + 1, j): 1, (j + 1, j + 1): -1, (j + 2, j + 1): -1}, {(j + 1, j): -1}, offset=c),
            ]
        if j == n - 1:
            return [
                _t({(n - 1, n - 1): 1, (n - 1, n): -2, (n, n - 1): 2, (n, n): -2}, {(n - 1, n - 1): -1}, offset=c),
                _t({(n, n - 1): 1, (n, n): -2}, {(n, n - 1): -1}, offset=c),
            ]
        return [_t({(n, n): 2}, {(n, n): -1}, d=2, offset=c)]

    def e(self, j: int) -> TermList:
        return _assemble_e(self.F(j), [self.D(k, j) for k in range(1, j)], [self.C(q, j) for q in range(1, j)])

    def f(self, j: int) -> TermList:
        terms = list(self.E(j))
        for i in range(1, j):
            terms.extend(self.B(i, j))
        return terms

    def t(self, j: int) -> ZWord:
        return self.T(1, j).inverse()


# --- so(2n+1) ---

class SoOddWords(SpWords):
    """B_n (n >= 3); 结构同 sp, 但 ε² brace 出现在 j <= n-1"""

    def A(self, i: int, j: int) -> Dict[Pos, int]:
        n = self.n
        if j <= n - 2:
            return {p: 2 * e for p, e in super().A(i, j).items()}
        if j == n - 1:
            return {(i, n - 2): -2, (i, n - 1): 4, (i, n): -2, (n, i): 4, (n - 1, i): -2}
        return {(i, n - 1): -2, (i, n): 2, (n, i): -2}

    def Tjj(self, j: int) -> ZWord:
        n = self.n
        if j <= n - 2:
            base = super().Tjj(j)
            return ZWord.of({p: 2 * e for p, e in base.exps}, self.lp[j - 1])
        if j == n - 1:
            z = {(n - 1, n - 1): 4, (n - 1, n): -2, (n, n - 1): 4, (n, n): -2}
        else:
            z = {(n, n): 2}
        return ZWord.of(z, self.lp[j - 1])

    def D(self, i: int, j: int) -> XWord:
        if i <= 0:
            return XWord()
        if j < self.n:
            return super().D(i, j)
        n = self.n
        return XWord.of({(i, n - 1): -1, (n, i): 1})

    def F(self, j: int) -> Term:
        if j < self.n:
            return _t({(j, j): -2}, {(j, j): 1}, d=2)
        return _t({(j, j): -1}, {(j, j): 1})

    def C(self, i: int, j: int) -> TermList:
        n = self.n
        if j < n:
            return [
                _t({(i, j - 1): 2, (i, j): -2}, {(i, j): 1}, d=2),
                _t({(j + 1, i): 2, (j, i): -2}, {(i, j - 1): -1, (i, j): 1, (j, i): 1}, d=2),
            ]
        return [
            _t({(i, n - 1): 2, (i, n): -1}, {(i, n): 1}),
            _t({(n, i): -2, (i, n): 1}, {(i, n - 1): -1, (i, n): 1, (n, i): 1}),
        ]

    def B(self, i: int, j: int) -> TermList:
        n = self.n
        T = self.T(i + 1, j)
        if j <= n - 2:
            return [
                _tz(T, {(i, j): 2, (i, j + 1): -2, (j + 2, i): -2, (j + 1, i): 4, (j, i): -2}, {(i, j): -1}, 2),
                _tz(T, {(j + 1, i): 2, (j, i): -2}, {(j + 1, i): -1}, 2),
            ]
        if j == n - 1:
            return [
                _tz(T, {(i, n - 1): 2, (i, n): -2, (n, i): 4, (n - 1, i): -2}, {(i, n - 1): -1}, 2),
                _tz(T, {(n, i): 2, (n - 1, i): -2}, {(n, i): -1}, 2),
            ]
        return [_tz(T, {(i, n): 1, (n, i): -2}, {(i, n): -1}, 1)]

    def E(self, j: int) -> TermList:
        n = self.n
        c = self.lp[j - 1]
        if j <= n - 2:
            return [
                Term(ZWord.of({p: 2 * e for p, e in t.brace.exps}, c, 2), t.shift)
                for t in super().E(j)
            ]
        if j == n - 1:
            return [
                _t({(n - 1, n - 1): 2, (n - 1, n): -2, (n, n - 1): 4, (n, n): -2}, {(n - 1, n - 1): -1},
                   d=2, offset=c),
                _t({(n, n - 1): 2, (n, n): -2}, {(n, n - 1): -1}, d=2, offset=c),
            ]
        return [_t({(n, n): 1}, {(n, n): -1}, offset=c)]


# --- so(2n) ---

class SoEvenWords:
    """D_n (n >= 4), 行 1..n-1"""

    def __init__(self, n: int, lam_shift: Sequence[int]):
        self.n = n
        self.lp = list(lam_shift)

    def A(self, i: int, j: int) -> Dict[Pos, int]:
        n = self.n
        if j <= n - 3:
            return {(i, j - 1): -1, (i, j): 2, (i, j + 1): -1, (j + 2, i): -1, (j + 1, i): 2, (j, i): -1}
        if j == n - 2:
            return {(i, n - 3): -1, (i, n - 2): 2, (i, n - 1): -1, (i, n): -1, (n - 1, i): 2, (n - 2, i): -1}
        if j == n - 1:
            return {(i, n - 2): -1, (i, n - 1): 2, (n - 1, i): -1}
        return {(i, n - 2): -1, (i, n): 2, (n - 1, i): -1}

    def Tjj(self, j: int) -> ZWord:
        n = self.n
        if j <= n - 3:
            z = {(j, j): 2, (j, j + 1): -1, (j + 2, j): -1, (j + 1, j): 2, (j + 1, j + 1): -1, (j + 2, j + 1): -1}
        elif j == n - 2:
            z = {(n - 2, n - 2): 2, (n - 2, n - 1): -1, (n - 2, n): -1, (n - 1, n - 2): 2,
                 (n - 1, n - 1): -1, (n - 1, n): -1}
        elif j == n - 1:
            z = {(n - 1, n - 1): 2}
        else:
            z = {(n - 1, n): 2}
        return ZWord.of(z, self.lp[j - 1])

    def T(self, i: int, j: int) -> ZWord:
        w = self.Tjj(j)
        top = j - 1 if j <= self.n - 1 else self.n - 2
        for k in range(i, top + 1):
            w = ZWord.of(self.A(k, j)) * w
        return w

    def D(self, i: int, j: int) -> XWord:
        n = self.n
        if i <= 0:
            return XWord()
        if j <= n - 2:
            return XWord.of({(i, j - 1): -1, (i, j): 1, (j + 1, i): -1, (j, i): 1})
        if j == n - 1:
            return XWord.of({(i, n - 2): -1, (i, n - 1): 1, (i, n): -1, (n - 1, i): 1})
        return XWord.of({(i, n - 2): -1, (i, n): 1, (i, n - 1): -1, (n - 1, i): 1})

    def F(self, col: int) -> Term:
        """F_{j,j} (col <= n-1 时行为 col) 或 F_{n-1,n}"""
        row = min(col, self.n - 1)
        return _t({(row, col): -1}, {(row, col): 1})

    def C(self, i: int, j: int) -> TermList:
        n = self.n
        if j <= n - 2:
            return [
                _t({(i, j - 1): 1, (i, j): -1}, {(i, j): 1}),
                _t({(j + 1, i): 1, (j, i): -1}, {(i, j - 1): -1, (i, j): 1, (j, i): 1}),
            ]
        if j == n - 1:
            return [
                _t({(i, n - 2): 1, (i, n - 1): -1}, {(i, n - 1): 1}),
                _t({(i, n): 1, (n - 1, i): -1}, {(i, n - 2): -1, (i, n - 1): 1, (n - 1, i): 1}),
            ]
        return [
            _t({(i, n - 2): 1, (i, n): -1}, {(i, n): 1}),
            _t({(i, n - 1): 1, (n - 1, i): -1}, {(i, n - 2): -1, (i, n): 1, (n - 1, i): 1}),
        ]

    def B(self, i: int, j: int) -> TermList:
        n = self.n
        T = self.T(i + 1, j)
        if j <= n - 3:
            return [
                _tz(T, {(i, j): 1, (i, j + 1): -1, (j + 2, i): -1, (j + 1, i): 2, (j, i): -1}, {(i, j): -1}, 1),
                _tz(T, {(j + 1, i): 1, (j, i): -1}, {(j + 1, i): -1}, 1),
            ]
        if j == n - 2:
            return [
                _tz(T, {(i, n - 2): 1, (i, n - 1): -1, (i, n): -1, (n - 1, i): 2, (n - 2, i): -1},
                    {(i, n - 2): -1}, 1),
                _tz(T, {(n - 1, i): 1, (n - 2, i): -1}, {(n - 1, i): -1}, 1),
            ]
        return [_tz(T, {(i, j): 1, (n - 1, i): -1}, {(i, j): -1}, 1)]

    def E(self, j: int) -> TermList:
        n = self.n
        c = self.lp[j - 1]
        if j <= n - 3:
            return [
                _t({(j, j): 1, (j, j + 1): -1, (j + 2, j): -1, (j + 1, j): 2, (j + 1, j + 1): -1,
                    (j + 2, j + 1): -1}, {(j, j): -1}, offset=c),
                _t({(j + 1, j): 1, (j + 1, j + 1): -1, (j + 2, j + 1): -1}, {(j + 1, j): -1}, offset=c),
            ]
        if j == n - 2:
            return [
                _t({(n - 2, n - 2): 1, (n - 2, n - 1): -1, (n - 2, n): -1, (n - 1, n - 2): 2,
                    (n - 1, n - 1): -1, (n - 1, n): -1}, {(n - 2, n - 2): -1}, offset=c),
                _t({(n - 1, n - 2): 1, (n - 1, n - 1): -1, (n - 1, n): -1}, {(n - 1, n - 2): -1}, offset=c),
            ]
        row = n - 1
        return [_t({(row, j): 1}, {(row, j): -1}, offset=c)]

    def branch_column(self, target: int) -> Callable[[int], int]:
        """
        e_{n-1}, e_n 中第 p 行所用的列

        e_{n-1}: 奇数行取 n-1, 偶数行取 n; e_n 相反。
        n 的奇偶决定第 n-1 行 (F 项) 落在哪一列。
        """
        n = self.n
        if target == n - 1:
            return lambda p: n - 1 if p % 2 == 1 else n
        return lambda p: n if p % 2 == 1 else n - 1

    def e(self, j: int) -> TermList:
        n = self.n
        if j <= n - 2:
            return _assemble_e(self.F(j), [self.D(k, j) for k in range(1, j)], [self.C(q, j) for q in range(1, j)])
        col = self.branch_column(j)
        rows = range(1, n - 1)
        return _assemble_e(
            self.F(col(n - 1)),
            [self.D(p, col(p)) for p in rows],
            [self.C(q, col(q)) for q in rows],
        )

    def f(self, j: int) -> TermList:
        terms = list(self.E(j))
        for i in range(1, min(j, self.n - 1)):
            terms.extend(self.B(i, j))
        return terms

    def t(self, j: int) -> ZWord:
        return self.T(1, j).inverse()


WORD_TABLES = {"C": SpWords, "B": SoOddWords, "D": SoEvenWords}
