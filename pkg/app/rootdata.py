"""
根系数据模块

Cartan 矩阵、对称化向量 d、单反射、正根序列, 以及用 (带符号) 置换模型
校验约化词。约定: t_i e_j t_i^{-1} = ε^{d_i a_ij} e_j, 且 d_i a_ij = d_j a_ji。
"""
from typing import List, Optional, Sequence, Tuple

from .errors import DomainError
from .weylrep import MIN_RANK

ReducedWord = Tuple[int, ...]


def _check(kind: str, n: int):
    if kind not in MIN_RANK:
        raise DomainError(f"unknown algebra type {kind!r}")
    if n < MIN_RANK[kind]:
        raise DomainError(f"type {kind} needs rank >= {MIN_RANK[kind]}, got {n}")


def symmetrizer(kind: str, n: int) -> Tuple[int, ...]:
    """d 向量: A, D 全 1; C 为 (1,…,1,2); B 为 (2,…,2,1)"""
    _check(kind, n)
    if kind == "C":
        return (1,) * (n - 1) + (2,)
    if kind == "B":
        return (2,) * (n - 1) + (1,)
    return (1,) * n


def cartan_matrix(kind: str, n: int) -> List[List[int]]:
    """a_ij, 下标从 0 开始存储"""
    _check(kind, n)
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    if kind == "D":
        for i in range(n - 3):
            a[i][i + 1] = a[i + 1][i] = -1
        a[n - 3][n - 2] = a[n - 2][n - 3] = -1
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    if kind == "C":
        a[n - 2][n - 1] = -2
    elif kind == "B":
        a[n - 1][n - 2] = -2
    return a


def num_positive_roots(kind: str, n: int) -> int:
    _check(kind, n)
    return {"A": n * (n + 1) // 2, "B": n * n, "C": n * n, "D": n * (n - 1)}[kind]


def reflect(kind: str, n: int, i: int, beta: Sequence[int]) -> Tuple[int, ...]:
    """s_i(β) = β - (Σ_j a_ij β_j) α_i, 单根坐标"""
    a = cartan_matrix(kind, n)
    out = list(beta)
    out[i - 1] -= sum(a[i - 1][j] * beta[j] for j in range(n))
    return tuple(out)


def positive_root_sequence(kind: str, n: int, word: Sequence[int]) -> List[Tuple[int, ...]]:
    """β_k = s_{i_1} … s_{i_{k-1}}(α_{i_k})"""
    roots = []
    for k, ik in enumerate(word):
        beta = [0] * n
        beta[ik - 1] = 1
        for i in reversed(word[:k]):
            beta = list(reflect(kind, n, i, beta))
        roots.append(tuple(beta))
    return roots


def weight_shift(kind: str, n: int, beta: Sequence[int]) -> Tuple[int, ...]:
    """e_β 对 t_j 本征指数的改变量: Σ_i c_i d_j a_ji"""
    a = cartan_matrix(kind, n)
    d = symmetrizer(kind, n)
    return tuple(sum(beta[i] * d[j] * a[j][i] for i in range(n)) for j in range(n))


# --- Weyl 群的置换模型 ---

def _inversions(w: Sequence[int]) -> int:
    return sum(1 for x in range(len(w)) for y in range(x + 1, len(w)) if w[x] > w[y])


def _apply_letter(kind: str, n: int, w: List[int], i: int):
    """右乘单反射 s_i, 原地修改窗口表示"""
    if kind == "A":
        w[i - 1], w[i] = w[i], w[i - 1]
        return
    if kind in ("B", "C"):
        # i < n 对应相邻对换 s_{n-i}; i = n 对应把第一个坐标取负
        if i == n:
            w[0] = -w[0]
        else:
            p = n - i
            w[p - 1], w[p] = w[p], w[p - 1]
        return
    # D: i <= n-2 对应 s_{n-i}; n-1 对应 s_1; n 对应交换前两位并取负
    if i == n:
        w[0], w[1] = -w[1], -w[0]
    elif i == n - 1:
        w[0], w[1] = w[1], w[0]
    else:
        p = n - i
        w[p - 1], w[p] = w[p], w[p - 1]


def word_length(kind: str, n: int, word: Sequence[int]) -> int:
    """词所表示的 Weyl 群元素的长度"""
    _check(kind, n)
    for i in word:
        if not 1 <= i <= n:
            raise DomainError(f"simple reflection index {i} outside 1..{n}")
    size = n + 1 if kind == "A" else n
    w = list(range(1, size + 1))
    for i in word:
        _apply_letter(kind, n, w, i)
    inv = _inversions(w)
    if kind == "A":
        return inv
    neg = [x for x in w if x < 0]
    if kind in ("B", "C"):
        return inv - sum(neg)
    return inv - sum(neg) - len(neg)


def validate_reduced_word(kind: str, n: int, word: Sequence[int]) -> ReducedWord:
    """检查 word 是最长元 w_0 的约化表达"""
    word = tuple(int(i) for i in word)
    total = num_positive_roots(kind, n)
    if len(word) != total:
        raise DomainError(f"reduced word for w0 of {kind}{n} has length {total}, got {len(word)}")
    if word_length(kind, n, word) != len(word):
        raise DomainError(f"word {word} is not reduced")
    return word


def default_w0_word(kind: str, n: int) -> ReducedWord:
    """
    标准约化词 (约定而非唯一选择)

    A_n: 1, 2 1, 3 2 1, …; B_n, C_n: (1 … n)^n; D_n: 每步取最小的上升反射。
    """
    _check(kind, n)
    if kind == "A":
        word = [i for top in range(1, n + 1) for i in range(top, 0, -1)]
    elif kind in ("B", "C"):
        word = list(range(1, n + 1)) * n
    else:
        total = num_positive_roots(kind, n)
        word = []
        while len(word) < total:
            for i in range(1, n + 1):
                if word_length(kind, n, word + [i]) > len(word):
                    word.append(i)
                    break
    return validate_reduced_word(kind, n, word)


def alternate_w0_word(kind: str, n: int) -> Optional[ReducedWord]:
    """秩 2 时 w0 的另一个约化词 (从 2 开始交替); 其它秩为 None"""
    _check(kind, n)
    if n != 2:
        return None
    total = num_positive_roots(kind, n)
    return validate_reduced_word(kind, n, [2 - k % 2 for k in range(total)])


def height_sum(kind: str, n: int) -> int:
    """Σ_{β>0} ht(β)"""
    roots = positive_root_sequence(kind, n, default_w0_word(kind, n))
    return sum(sum(beta) for beta in roots)
