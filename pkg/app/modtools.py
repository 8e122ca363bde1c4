"""
模层面的分析工具

权分解、按权分块的精确核 (本原向量)、子模张成 (带来源词)、
不可约性探针, 以及基的 NDJSON 导出/导入与精确域复核。

唯一性由直接求核来证明, 不复现按 r_1 = (1,1), r_2, … 排序的归纳论证。
"""
import logging
import random
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .cyclotomic import get_field
from .errors import ExhaustiveBoundError, StructuralError
from .linalg import EchelonBasis, block_kernel
from .models import Provenance, SubmoduleBasis
from .rootdata import cartan_matrix, height_sum, symmetrizer
from .schnizer import Generators, ModuleSpec, build_generators
from .weylrep import MultiIndex, SparseVec
from .workers import SweepPool

logger = logging.getLogger(__name__)

Weight = Tuple[int, ...]

DEFAULT_EXHAUSTIVE_BOUND = 10 ** 4


def weight_of(gens: Generators, m: MultiIndex) -> Weight:
    """
    t_i u(m) = ε^{w_i} u(m) 中的 (w_1, …, w_n), 取模 l

    注意这是 ε 的指数: C 型 u(0) 的第 n 个分量为 2λ_n (ε_n = ε²)。
    """
    l = gens.spec.l
    return tuple(gens.t(i).diagonal_exponent(m) % l for i in range(1, gens.spec.n + 1))


def highest_weight(spec: ModuleSpec) -> Weight:
    """u(0) 应有的权: (d_i λ_i mod l)"""
    return tuple((d * x) % spec.l for d, x in zip(spec.d, spec.lam))


def e_weight_shift(spec: ModuleSpec, i: int) -> Weight:
    """e_i 对权的改变量: 第 j 个分量为 d_j a_ji"""
    a = cartan_matrix(spec.kind, spec.n)
    d = symmetrizer(spec.kind, spec.n)
    return tuple((d[j] * a[j][i - 1]) % spec.l for j in range(spec.n))


def split_by_weight(gens: Generators, v: SparseVec) -> Dict[Weight, SparseVec]:
    """向量的权分量"""
    parts: Dict[Weight, dict] = defaultdict(dict)
    for m, c in v.items():
        parts[weight_of(gens, m)][m] = c
    return {w: SparseVec.trusted(v.shape, v.field, d) for w, d in sorted(parts.items())}


def weight_blocks(gens: Generators, indices: Iterable[MultiIndex]) -> Dict[Weight, List[MultiIndex]]:
    blocks: Dict[Weight, List[MultiIndex]] = defaultdict(list)
    for m in indices:
        blocks[weight_of(gens, m)].append(m)
    return dict(blocks)


def _e_image(gens: Generators, v: SparseVec) -> dict:
    """(e_1 v, …, e_n v) 拼接成一个以 (i, m) 为键的字典"""
    out = {}
    for i in range(1, gens.spec.n + 1):
        for m, c in gens.e(i).apply(v).items():
            out[(i, m)] = c
    return out


def _vectors_from_combos(gens: Generators, combos: List[dict], members: Dict) -> List[SparseVec]:
    out = []
    zero = SparseVec(gens.shape, gens.field)
    for combo in combos:
        acc = zero
        for key, c in combo.items():
            acc = acc + members[key].scale(c)
        out.append(acc)
    return out


def _as_basis(gens: Generators, vectors: List[SparseVec]) -> SubmoduleBasis:
    ech = EchelonBasis(gens.field)
    for v in vectors:
        ech.insert(dict(v.items()))
    rows = ech.sorted_rows()
    return SubmoduleBasis(
        gens.shape,
        gens.field,
        [SparseVec(gens.shape, gens.field, r) for _, r in rows],
        [p for p, _ in rows],
        [None] * len(rows),
        complete=False,
    )


def primitive_space(
    gens: Generators,
    within: Optional[SubmoduleBasis] = None,
    bound: int = DEFAULT_EXHAUSTIVE_BOUND,
    pool: Optional[SweepPool] = None,
) -> SubmoduleBasis:
    """
    ∩_i ker(e_i) 的一组基

    within 为 None 时在整个 V 上按权分块穷举 (要求 l^N <= bound);
    否则只在给定子模内求解。每个 e_i 把一个权块映到另一个权块, 核是各块核的直和。
    """
    pool = pool or SweepPool(1)
    if within is None:
        size = gens.shape.size
        if size > bound:
            raise ExhaustiveBoundError(size, bound)
        blocks = weight_blocks(gens, gens.shape.all_indices())
        members = {}

        def solve(block: List[MultiIndex]) -> List[dict]:
            cols = []
            for m in block:
                u = gens.basis(m)
                cols.append((m, _e_image(gens, u)))
            return block_kernel(gens.field, cols)

        for block in blocks.values():
            for m in block:
                members[m] = gens.basis(m)
    else:
        grouped: Dict[Weight, List[int]] = defaultdict(list)
        for k, p in enumerate(within.pivots):
            grouped[weight_of(gens, p)].append(k)
        blocks = dict(grouped)
        members = dict(enumerate(within.rows))

        def solve(block: List[int]) -> List[dict]:
            cols = [(k, _e_image(gens, within.rows[k])) for k in block]
            return block_kernel(gens.field, cols)

    ordered = [blocks[w] for w in sorted(blocks)]
    combos = [c for part in pool.map(solve, ordered) for c in part]
    vectors = _vectors_from_combos(gens, combos, members)
    logger.info("primitive space: %d vectors over %d weight blocks", len(vectors), len(blocks))
    return _as_basis(gens, vectors)


def dense_primitive_dimension(gens: Generators) -> int:
    """
    不分块的稠密暴力求核, 作为 primitive_space 的独立校验

    只用于 l^N 很小的情形 (A_1, A_2)。
    """
    from .linalg import dense_nullspace

    indices = list(gens.shape.all_indices())
    col_of = {m: k for k, m in enumerate(indices)}
    n = gens.spec.n
    field = gens.field
    matrix = [[field.zero] * len(indices) for _ in range(n * len(indices))]
    for k, m in enumerate(indices):
        u = gens.basis(m)
        for i in range(1, n + 1):
            for mm, c in gens.e(i).apply(u).items():
                matrix[(i - 1) * len(indices) + col_of[mm]][k] = c
    return len(dense_nullspace(matrix, field))


# --- 子模张成 ---

class SpanBuilder:
    """
    广度优先地对生成元封闭, 每个权块一个 RREF

    入队的是生成元作用后的原始像, 因此来源词精确描述了该向量。
    """

    def __init__(self, gens: Generators, progress: Optional[Callable[[int], None]] = None):
        self.gens = gens
        self.blocks: Dict[Weight, EchelonBasis] = {}
        self.raw: Dict[MultiIndex, SparseVec] = {}
        self.queue: deque = deque()
        self.progress = progress
        self._last_report = 0

    @property
    def dim(self) -> int:
        return sum(len(b) for b in self.blocks.values())

    def _block(self, w: Weight) -> EchelonBasis:
        b = self.blocks.get(w)
        if b is None:
            b = self.blocks[w] = EchelonBasis(self.gens.field)
        return b

    def offer(self, v: SparseVec, prov: Provenance) -> bool:
        """v 必须是权齐次的; 若扩大了张成空间则入队"""
        if not v:
            return False
        w = weight_of(self.gens, next(iter(v)))
        pivot = self._block(w).insert(dict(v.items()), tag=prov)
        if pivot is None:
            return False
        self.raw[pivot] = v
        self.queue.append((v, prov))
        if self.dim - self._last_report >= 1000:
            self._last_report = self.dim
            logger.info("span reached dimension %d", self.dim)
            if self.progress:
                self.progress(self.dim)
        return True

    def run(self, symbols: Sequence[str]):
        while self.queue:
            v, prov = self.queue.popleft()
            for sym in symbols:
                self.offer(self.gens.apply(sym, v), prov.extend(sym))

    def rows(self) -> List[Tuple[MultiIndex, dict, Provenance]]:
        out = []
        for b in self.blocks.values():
            for p, r in b.rows.items():
                out.append((p, r, b.tags.get(p)))
        out.sort(key=lambda t: t[0])
        return out

    def to_basis(self, complete: bool) -> SubmoduleBasis:
        rows = self.rows()
        return SubmoduleBasis(
            self.gens.shape,
            self.gens.field,
            [SparseVec(self.gens.shape, self.gens.field, r) for _, r, _ in rows],
            [p for p, _, _ in rows],
            [prov for _, _, prov in rows],
            complete=complete,
        )


def submodule_span(
    gens: Generators,
    seed: SparseVec,
    progress: Optional[Callable[[int], None]] = None,
    reverse_order: bool = False,
) -> SubmoduleBasis:
    """
    U_ε·seed

    先对 f_i 做广度优先闭包, 再核对 e_i 的封闭性; 若不封闭, 把新向量
    继续对全部 e_i, f_i 闭包, 直到稳定。t_i^{±1} 在权块上是数乘, 自动封闭。
    reverse_order 按 f_n, …, f_1 的顺序扩展; 阶梯形基与顺序无关。
    """
    if not seed:
        raise StructuralError("cannot span from the zero vector")
    n = gens.spec.n
    fs = [f"f{i}" for i in range(1, n + 1)]
    es = [f"e{i}" for i in range(1, n + 1)]
    if reverse_order:
        fs.reverse()
        es.reverse()
    builder = SpanBuilder(gens, progress)
    for k, (_, part) in enumerate(split_by_weight(gens, seed).items()):
        builder.offer(part, Provenance(k, ()))
    builder.run(fs)
    rounds = 0
    while True:
        grew = False
        for p, v in sorted(builder.raw.items()):
            prov = builder._block(weight_of(gens, p)).tags[p]
            for sym in es:
                if builder.offer(gens.apply(sym, v), prov.extend(sym)):
                    grew = True
        if not grew:
            break
        rounds += 1
        builder.run(es + fs)
    if rounds:
        logger.info("span needed %d extra e-closure rounds", rounds)
    basis = builder.to_basis(complete=True)
    logger.info("span of %s has dimension %d", gens.spec.label, basis.dim)
    return basis


def closure_defects(gens: Generators, basis: SubmoduleBasis, limit: int = 1) -> List[Tuple[str, int, SparseVec]]:
    """
    对全部生成元的封闭性复核

    Returns:
        [(生成元, 行号, 不在子模中的像)], 至多 limit 个
    """
    ech = basis.echelon()
    out = []
    for k, row in enumerate(basis.rows):
        for sym in gens:
            img = gens.apply(sym, row)
            if img and not ech.contains(dict(img.items())):
                out.append((sym, k, img))
                if len(out) >= limit:
                    return out
    return out


def replay_words(gens: Generators, seed: SparseVec, provenance: Sequence[Optional[Provenance]]) -> List[SparseVec]:
    """按来源词从种子重放每一行"""
    parts = list(split_by_weight(gens, seed).values())
    out = []
    for prov in provenance:
        if prov is None:
            raise StructuralError("row without provenance cannot be replayed")
        v = parts[prov.seed]
        for sym in reversed(prov.word):
            v = gens.apply(sym, v)
        out.append(v)
    return out


def reverify_exact(spec: ModuleSpec, basis: SubmoduleBasis, seed_m: Optional[MultiIndex] = None) -> Tuple[int, SubmoduleBasis, list]:
    """
    在 Q(ε) 上复核模 p 后端得到的子模

    重放来源词得到精确向量并求秩, 再核对精确基对全部生成元封闭。

    Returns:
        (精确秩, 精确基, 封闭性缺陷)
    """
    gens = build_generators(spec, get_field(spec.l))
    seed = gens.basis(seed_m if seed_m is not None else spec.shape.zero())
    vectors = replay_words(gens, seed, basis.provenance)
    ech = EchelonBasis(gens.field)
    for v, prov in zip(vectors, basis.provenance):
        ech.insert(dict(v.items()), tag=prov)
    rows = ech.sorted_rows()
    exact = SubmoduleBasis(
        gens.shape,
        gens.field,
        [SparseVec(gens.shape, gens.field, r) for _, r in rows],
        [p for p, _ in rows],
        [ech.tags.get(p) for p, _ in rows],
    )
    defects = closure_defects(gens, exact)
    exact.complete = not defects
    return exact.dim, exact, defects


# --- 不可约性探针 ---

@dataclass
class ProbeResult:
    ok: bool
    steps: int
    start: SparseVec
    end: SparseVec
    word: Tuple[str, ...]


def ascent_bound(spec: ModuleSpec) -> int:
    """(l-1)·Σ_{β>0} ht(β)"""
    return (spec.l - 1) * height_sum(spec.kind, spec.n)


def random_span_vector(gens: Generators, basis: SubmoduleBasis, rng: random.Random) -> SparseVec:
    """在随机一个权块内取子模中的随机非零向量"""
    grouped: Dict[Weight, List[int]] = defaultdict(list)
    for k, p in enumerate(basis.pivots):
        grouped[weight_of(gens, p)].append(k)
    block = grouped[rng.choice(sorted(grouped))]
    field = gens.field
    acc = SparseVec(gens.shape, field)
    while not acc:
        for k in block:
            c = rng.randint(-3, 3)
            if c:
                acc = acc + basis.rows[k].scale(field.from_int(c))
    return acc


def ascend(gens: Generators, v: SparseVec, bound: int) -> ProbeResult:
    """
    贪心上升: 每步取像非零的最小 e_i, 直到得到本原向量

    结果应为 u(0) 的非零倍数。
    """
    n = gens.spec.n
    start = v
    word: List[str] = []
    for step in range(bound + 1):
        for i in range(1, n + 1):
            img = gens.e(i).apply(v)
            if img:
                v = img
                word.insert(0, f"e{i}")
                break
        else:
            ok = v.support() == [gens.shape.zero()]
            return ProbeResult(ok, step, start, v, tuple(word))
    return ProbeResult(False, bound, start, v, tuple(word))


def probe_irreducible(gens: Generators, basis: SubmoduleBasis, trials: int, rng: random.Random) -> List[ProbeResult]:
    bound = ascent_bound(gens.spec)
    results = []
    for _ in range(trials):
        v = random_span_vector(gens, basis, rng)
        results.append(ascend(gens, v, bound))
    bad = sum(1 for r in results if not r.ok)
    logger.info("irreducibility probe: %d/%d ascents reached u(0)", trials - bad, trials)
    return results


# --- 基的导出/导入 ---

def dump_basis(path: str, spec: ModuleSpec, basis: SubmoduleBasis):
    with open(path, "w", encoding="utf-8") as fh:
        for line in basis.to_ndjson(spec.to_dict()):
            fh.write(line + "\n")


def load_basis(path: str, gens: Generators) -> Tuple[dict, SubmoduleBasis]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    header, basis = SubmoduleBasis.from_ndjson(lines, gens.field)
    if basis.shape != gens.shape:
        raise StructuralError(f"dump is for {basis.shape}, generators act on {gens.shape}")
    return header, basis
