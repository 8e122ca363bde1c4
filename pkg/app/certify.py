"""
认证套件

每个套件返回若干 CheckResult; Certifier.run 汇总成 Certificate。
套件: relation, primitive, highest, nilpotent, steinberg, lowest, central, all。
"""
import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from .closed_form import closed_form_e, closed_form_f
from .cyclotomic import BaseField, resolve_field
from .errors import ExhaustiveBoundError, ExpressionSwellError, StructuralError, UnsupportedConfiguration, UsageError
from .freealg import (
    DEFAULT_MAX_WORDS,
    BraidOperators,
    FreeElem,
    RootVectorBuilder,
    evaluate,
    evaluate_power,
    power_identity,
    relations,
)
from .models import Certificate, CheckResult, SubmoduleBasis
from .modtools import (
    DEFAULT_EXHAUSTIVE_BOUND,
    closure_defects,
    dense_primitive_dimension,
    e_weight_shift,
    highest_weight,
    primitive_space,
    probe_irreducible,
    reverify_exact,
    submodule_span,
    weight_of,
)
from .rootdata import alternate_w0_word, default_w0_word, weight_shift
from .schnizer import Generators, ModuleSpec, build_generators, lowest_index
from .utils import stopwatch
from .weylrep import MultiIndex, SparseVec
from .workers import SweepPool

logger = logging.getLogger(__name__)

SUITES = ("relation", "primitive", "highest", "nilpotent", "steinberg", "lowest", "central")
# 不属于 all 的单项套件
EXTRA_SUITES = ("submodule",)
DEFAULT_SAMPLE = 1000
# 稠密暴力核只在这个规模以下运行 (覆盖 A2 的 125 与 C2 的 625)
DENSE_CHECK_LIMIT = 625


def witness_for(v: SparseVec, **context) -> dict:
    out = dict(context)
    out["vector"] = v.to_json()
    return out


def resolve_lambda_variant(spec: ModuleSpec, variant: str = "auto") -> Tuple[ModuleSpec, str]:
    """
    B 型 λ′ 的读法

    auto: 先用 printed, 若 u(0) 的 t 本征值不等于最高权则改用 corrected。
    """
    if spec.kind != "B":
        return spec, spec.lam_variant
    if variant != "auto":
        return spec.with_variant(variant), variant
    for candidate in ("printed", "corrected"):
        trial = spec.with_variant(candidate)
        gens = build_generators(trial)
        if weight_of(gens, trial.shape.zero()) == highest_weight(trial):
            if candidate != "printed":
                logger.info("type B: printed lambda shift fails the highest-weight test, using corrected")
            return trial, candidate
    logger.warning("type B: neither lambda shift passes the highest-weight test")
    return spec.with_variant("printed"), "printed"


class Certifier:
    """对一个 ModuleSpec 运行认证套件"""

    def __init__(
        self,
        spec: ModuleSpec,
        backend: str = "exact",
        sample: Optional[int] = None,
        seed: int = 0,
        bound: int = DEFAULT_EXHAUSTIVE_BOUND,
        w0_word: Optional[Sequence[int]] = None,
        pool: Optional[SweepPool] = None,
        variant_note: str = "",
        max_words: int = DEFAULT_MAX_WORDS,
        scope: str = "auto",
    ):
        self.spec = spec
        self.backend = backend
        self.field: BaseField = resolve_field(spec.l, backend)
        self.gens: Generators = build_generators(spec, self.field)
        self.sample = sample
        self.seed = seed
        self.bound = bound
        self.w0_word = tuple(w0_word) if w0_word else None
        self.pool = pool or SweepPool(1)
        self.variant_note = variant_note
        self.max_words = max_words
        self.scope = scope
        self.rng = random.Random(seed)
        self.dims: Dict[str, int] = {"V": spec.shape.size}
        self._span: Optional[SubmoduleBasis] = None
        self._span_loaded = False
        self._roots: Optional[RootVectorBuilder] = None

    # --- 公共工具 ---

    @property
    def exhaustive(self) -> bool:
        return self.sample is None and self.spec.shape.size <= self.bound

    def sample_indices(self, count: Optional[int] = None) -> List[MultiIndex]:
        """穷举或按种子抽样的基向量指标"""
        shape = self.spec.shape
        if count is None and self.exhaustive:
            return list(shape.all_indices())
        count = count or self.sample or DEFAULT_SAMPLE
        if count >= shape.size:
            return list(shape.all_indices())
        return [tuple(self.rng.randrange(shape.l) for _ in range(shape.N)) for _ in range(count)]

    def span(self) -> SubmoduleBasis:
        """U_ε u(0), 只计算一次"""
        if self._span is None:
            self._span = submodule_span(self.gens, self.gens.basis(self.spec.shape.zero()))
            self.dims["span"] = self._span.dim
            if self.field.backend != "exact":
                exact_dim, exact_basis, _ = reverify_exact(self.spec, self._span)
                self.dims["span_exact"] = exact_dim
        return self._span

    @property
    def current_span(self) -> Optional[SubmoduleBasis]:
        """已计算 (或已导入) 的子模, 未计算时为 None"""
        return self._span

    def roots(self) -> RootVectorBuilder:
        if self._roots is None:
            self._roots = RootVectorBuilder(self.spec.kind, self.spec.n, self.field, self.w0_word, self.max_words)
        return self._roots

    def _sweep(self, fn, indices: List[MultiIndex]) -> Optional[dict]:
        """对每个指标运行 fn; 返回第一个 (按指标顺序) 非空的反例"""
        found = [w for w in self.pool.map(fn, indices) if w is not None]
        return found[0] if found else None

    # --- 套件 ---

    def check_relation(self) -> List[CheckResult]:
        gens = self.gens
        rels = relations(self.spec.kind, self.spec.n, self.field)
        indices = self.sample_indices()

        def one(m):
            u = gens.basis(m)
            memo = {}
            for name, x in rels:
                out = evaluate(x, gens, u, memo)
                if out:
                    return witness_for(out, relation=name, m=list(m))
            return None

        results = []
        scope = f"{len(indices)} basis vectors" + (" (exhaustive)" if self.exhaustive else f" (seed {self.seed})")
        bad = self._sweep(one, indices)
        if bad:
            results.append(CheckResult.fail("relations", f"relation {bad['relation']} fails at m={bad['m']}", bad))
        else:
            results.append(CheckResult.ok("relations", f"{len(rels)} relations hold on {scope}"))
        results.append(self._check_weight_blocks(indices))
        results.extend(self._check_routes(indices))
        return results

    def _check_weight_blocks(self, indices: List[MultiIndex]) -> CheckResult:
        gens = self.gens
        spec = self.spec
        l = spec.l
        shifts = {i: e_weight_shift(spec, i) for i in range(1, spec.n + 1)}

        def one(m):
            w = weight_of(gens, m)
            u = gens.basis(m)
            for i in range(1, spec.n + 1):
                want = tuple((a + b) % l for a, b in zip(w, shifts[i]))
                for mm in gens.e(i).apply(u):
                    if weight_of(gens, mm) != want:
                        return witness_for(u, generator=f"e{i}", m=list(m), target=list(mm))
            return None

        bad = self._sweep(one, indices)
        if bad:
            return CheckResult.fail("weight_blocks", f"{bad['generator']} leaves its weight block at m={bad['m']}", bad)
        return CheckResult.ok("weight_blocks", "each e_i shifts weights by a constant")

    def _check_routes(self, indices: List[MultiIndex]) -> List[CheckResult]:
        """闭式公式与 Weyl 词两条路线逐向量比较"""
        if not self.spec.uses_default_params():
            return []
        gens = self.gens
        out = []
        families = [("e", closed_form_e(self.spec))]
        try:
            families.append(("f", closed_form_f(self.spec)))
        except UnsupportedConfiguration:
            pass
        for letter, ops in families:
            def one(m, letter=letter, ops=ops):
                u = gens.basis(m)
                for i, op in ops.items():
                    a = op.apply(u)
                    b = gens.apply(f"{letter}{i}", u)
                    if a != b:
                        return witness_for(a - b, generator=f"{letter}{i}", m=list(m))
                return None

            bad = self._sweep(one, indices)
            name = f"route_{letter}"
            if bad:
                out.append(CheckResult.fail(name, f"closed form of {bad['generator']} differs at m={bad['m']}", bad))
            else:
                out.append(CheckResult.ok(name, f"closed-form {letter}_i agree with the Weyl-word operators"))
        return out

    def check_primitive(self, probes: int = 20) -> List[CheckResult]:
        gens = self.gens
        zero = self.spec.shape.zero()
        results = []
        exhaustive = self.spec.shape.size <= self.bound if self.scope == "auto" else self.scope == "exhaustive"
        if exhaustive:
            prim = primitive_space(gens, bound=self.bound, pool=self.pool)
            scope = "exhaustive"
        else:
            prim = primitive_space(gens, within=self.span(), pool=self.pool)
            scope = "within U u(0)"
        self.dims["primitive"] = prim.dim
        if prim.dim == 1 and prim.rows[0].support() == [zero]:
            results.append(CheckResult.ok("primitive", f"dim of common e-kernel is 1, spanned by u(0) ({scope})"))
        else:
            other = next((r for r in prim.rows if r.support() != [zero]), prim.rows[0] if prim.rows else None)
            wit = witness_for(other, dim=prim.dim) if other is not None else {"dim": prim.dim, "vector": None}
            results.append(CheckResult.fail("primitive", f"common e-kernel has dim {prim.dim} ({scope})", wit))
        if self.spec.shape.size <= min(DENSE_CHECK_LIMIT, self.bound):
            dense = dense_primitive_dimension(gens)
            if dense == prim.dim:
                results.append(CheckResult.ok("primitive_dense", f"dense elimination agrees (dim {dense})"))
            else:
                results.append(CheckResult.fail(
                    "primitive_dense", f"blocked dim {prim.dim}, dense dim {dense}",
                    {"blocked": prim.dim, "dense": dense},
                ))
        span = self.span()
        probe = probe_irreducible(gens, span, probes, self.rng)
        bad = next((p for p in probe if not p.ok), None)
        if bad:
            results.append(CheckResult.fail(
                "irreducibility_probe", f"ascent did not reach u(0) after {bad.steps} steps",
                witness_for(bad.start, ended=bad.end.to_json(), word=list(bad.word)),
            ))
        else:
            results.append(CheckResult.ok("irreducibility_probe", f"{len(probe)} random span vectors ascend to u(0)"))
        return results

    def check_highest(self) -> List[CheckResult]:
        gens = self.gens
        zero = self.spec.shape.zero()
        got = weight_of(gens, zero)
        want = highest_weight(self.spec)
        note = f"; lambda shift {self.variant_note}" if self.variant_note else ""
        results = []
        if got == want:
            results.append(CheckResult.ok("highest_weight", f"t_i u(0) = eps^{list(want)} u(0){note}"))
        else:
            results.append(CheckResult.fail(
                "highest_weight", f"t-exponents of u(0) are {list(got)}, expected {list(want)}{note}",
                witness_for(gens.basis(zero), got=list(got), expected=list(want)),
            ))
        u = gens.basis(zero)
        for i in range(1, self.spec.n + 1):
            img = gens.e(i).apply(u)
            if img:
                results.append(CheckResult.fail("e_kills_u0", f"e{i} u(0) != 0", witness_for(img, generator=f"e{i}")))
                break
        else:
            results.append(CheckResult.ok("e_kills_u0", "e_i u(0) = 0 for every i"))
        return results

    def check_nilpotent(self, count: int = 100) -> List[CheckResult]:
        gens = self.gens
        field = self.field
        l = self.spec.l
        n = self.spec.n
        zero = gens.basis(self.spec.shape.zero())
        indices = self.sample_indices(count)
        results = []

        bad = None
        for i in range(1, n + 1):
            for k in (l, 2 * l):
                x = power_identity(field, f"t{i}", k)
                for m in indices:
                    out = evaluate(x, gens, gens.basis(m))
                    if out:
                        bad = witness_for(out, element=f"t{i}^{k}", m=list(m))
                        break
                if bad:
                    break
            if bad:
                break
        results.append(
            CheckResult.fail("torus_order", f"{bad['element']} != 1 at m={bad['m']}", bad) if bad
            else CheckResult.ok("torus_order", "t_i^l = t_i^{2l} = 1")
        )

        try:
            builder = self.roots()
            roots = builder.roots()
            e_roots = [builder.e_root(k) for k in range(1, len(roots) + 1)]
            f_roots = [builder.f_root(k) for k in range(1, len(roots) + 1)]
        except ExpressionSwellError as e:
            results.append(CheckResult.fail("root_vectors", str(e), {"word": list(self.roots().word)}))
            return results
        self.dims["positive_roots"] = len(roots)

        bad = None
        for k, (beta, eb) in enumerate(zip(roots, e_roots), start=1):
            if eb.degrees(n) != {tuple(beta)}:
                bad = {"k": k, "beta": list(beta), "degrees": sorted(list(d) for d in eb.degrees(n)), "vector": None}
                break
            shift = weight_shift(self.spec.kind, n, beta)
            for m in indices[:20]:
                w = weight_of(gens, m)
                want = tuple((a + b) % l for a, b in zip(w, shift))
                img = evaluate(eb, gens, gens.basis(m))
                if any(weight_of(gens, mm) != want for mm in img):
                    bad = witness_for(img, k=k, beta=list(beta), m=list(m))
                    break
            if bad:
                break
        results.append(
            CheckResult.fail("root_degrees", f"e_beta_{bad['k']} has the wrong degree", bad) if bad
            else CheckResult.ok("root_degrees", f"{len(roots)} root vectors have degree beta_k")
        )

        bad = None
        for k, fb in enumerate(f_roots, start=1):
            out = evaluate_power(fb, l, gens, zero)
            if out:
                bad = witness_for(out, element=f"f_beta_{k}^l", m=list(self.spec.shape.zero()))
                break
        if not bad:
            for k, eb in enumerate(e_roots, start=1):
                for m in indices:
                    out = evaluate_power(eb, l, gens, gens.basis(m))
                    if out:
                        bad = witness_for(out, element=f"e_beta_{k}^l", m=list(m))
                        break
                if bad:
                    break
        results.append(
            CheckResult.fail("root_nilpotent", f"{bad['element']} does not vanish at m={bad['m']}", bad) if bad
            else CheckResult.ok("root_nilpotent",
                                f"f_beta^l u(0) = 0 and e_beta^l v = 0 on {len(indices)} vectors, {len(roots)} roots")
        )
        word_check = self._check_word_independence()
        if word_check is not None:
            results.append(word_check)
        return results

    def _check_word_independence(self) -> Optional[CheckResult]:
        """秩 2 时沿 w0 的两个约化词求 T_{w0}(g), 作为 V 上的算子逐列比较"""
        spec = self.spec
        word = self.roots().word
        default = default_w0_word(spec.kind, spec.n)
        other = default if word != default else alternate_w0_word(spec.kind, spec.n)
        if other is None:
            return None
        first = BraidOperators(self.gens, word)
        second = BraidOperators(self.gens, other)
        symbols = list(self.gens)

        def one(m):
            for sym in symbols:
                a = first.longest(sym, m)
                b = second.longest(sym, m)
                if a != b:
                    return witness_for(a - b, generator=sym, m=list(m))
            return None

        indices = self.sample_indices()
        bad = self._sweep(one, indices)
        label = f"{list(word)} vs {list(other)}"
        if bad:
            return CheckResult.fail(
                "word_independence", f"T_w0({bad['generator']}) differs along {label} at m={bad['m']}", bad)
        return CheckResult.ok("word_independence", f"T_w0 of every generator agrees along {label} on {len(indices)} vectors")

    def check_steinberg(self) -> List[CheckResult]:
        spec = self.spec.with_lambda((self.spec.l - 1,) * self.spec.n)
        size = spec.shape.size
        if size > self.bound:
            raise ExhaustiveBoundError(size, self.bound, "the Steinberg span has no within-submodule scope")
        gens = build_generators(spec, self.field)
        basis = submodule_span(gens, gens.basis(spec.shape.zero()))
        self.dims["steinberg_span"] = basis.dim
        if self.field.backend != "exact":
            self.dims["steinberg_span_exact"] = reverify_exact(spec, basis)[0]
        if basis.dim == size:
            return [CheckResult.ok("steinberg", f"U u(0) is all of V (dim {size})")]
        missing = next(m for m in spec.shape.all_indices() if not basis.contains(gens.basis(m)))
        return [CheckResult.fail(
            "steinberg", f"span has dim {basis.dim}, expected {size}",
            witness_for(gens.basis(missing), m=list(missing)),
        )]

    def check_lowest(self, count: int = 100) -> List[CheckResult]:
        spec = self.spec
        if spec.kind == "A":
            raise UnsupportedConfiguration("the lowest-vector suite needs type B, C or D")
        gens = self.gens
        m_low = lowest_index(spec.kind, spec.lam, spec.l)
        u = gens.basis(m_low)
        results = []
        for i in range(1, spec.n + 1):
            img = gens.f(i).apply(u)
            if img:
                results.append(CheckResult.fail(
                    "lowest_vector", f"f{i} u(m^lambda) != 0", witness_for(img, generator=f"f{i}", m=list(m_low))))
                break
        else:
            results.append(CheckResult.ok("lowest_vector", f"f_i u(m^lambda) = 0, m^lambda = {list(m_low)}"))
        if spec.kind == "C":
            top = spec.with_lambda((spec.l - 1,) * spec.n)
            tg = build_generators(top, self.field)
            zero = top.shape.zero()
            bad = None
            for m in self.sample_indices(count):
                for i in range(1, spec.n + 1):
                    img = tg.f(i).apply(tg.basis(m))
                    if zero in img:
                        bad = witness_for(img, generator=f"f{i}", m=list(m))
                        break
                if bad:
                    break
            results.append(
                CheckResult.fail("u0_never_reached", f"{bad['generator']} reaches u(0) from m={bad['m']}", bad)
                if bad else CheckResult.ok("u0_never_reached", "no f_i hits u(0) at lambda = (l-1,...,l-1)")
            )
        return results

    def check_central(self, count: int = 50) -> List[CheckResult]:
        gens = self.gens
        field = self.field
        l = self.spec.l
        n = self.spec.n
        elements: List[Tuple[str, FreeElem, int]] = [
            (f"t{i}^l", FreeElem.gen(field, f"t{i}"), l) for i in range(1, n + 1)
        ]
        try:
            builder = self.roots()
            for k in range(1, len(builder.word) + 1):
                elements.append((f"e_beta_{k}^l", builder.e_root(k), l))
                elements.append((f"f_beta_{k}^l", builder.f_root(k), l))
        except ExpressionSwellError as e:
            return [CheckResult.fail("central", str(e), {"word": list(self.roots().word)})]
        indices = self.sample_indices(count)
        for name, x, k in elements:
            for m in indices:
                u = gens.basis(m)
                xu = evaluate_power(x, k, gens, u)
                for sym in gens:
                    lhs = gens.apply(sym, xu)
                    rhs = evaluate_power(x, k, gens, gens.apply(sym, u))
                    if lhs != rhs:
                        return [CheckResult.fail(
                            "central", f"{name} does not commute with {sym} at m={list(m)}",
                            witness_for(lhs - rhs, element=name, generator=sym, m=list(m)),
                        )]
        return [CheckResult.ok("central", f"{len(elements)} l-th powers commute with all generators")]

    def load_span(self, basis: SubmoduleBasis):
        """用导入的基代替重新张成"""
        if basis.shape != self.spec.shape:
            raise StructuralError(f"basis is for {basis.shape}, module is {self.spec.shape}")
        self._span = basis
        self._span_loaded = True
        self.dims["span"] = basis.dim

    def check_submodule(self) -> List[CheckResult]:
        span = self.span()
        results = []
        defects = closure_defects(self.gens, span)
        if defects:
            sym, k, img = defects[0]
            results.append(CheckResult.fail(
                "closure", f"{sym} maps row {k} out of the submodule", witness_for(img, generator=sym, row=k)))
        else:
            results.append(CheckResult.ok("closure", f"dim {span.dim} subspace is closed under all generators"))
        if not self._span_loaded:
            results.append(self._check_span_order(span))
        if self.field.backend != "exact" and "span_exact" not in self.dims:
            self.dims["span_exact"] = reverify_exact(self.spec, span)[0]
        if "span_exact" in self.dims:
            exact = self.dims["span_exact"]
            if exact == span.dim:
                results.append(CheckResult.ok("exact_rank", f"replayed over Q(eps): rank {exact}"))
            else:
                results.append(CheckResult.fail(
                    "exact_rank", f"rank {span.dim} mod p, {exact} over Q(eps)",
                    {"modular": span.dim, "exact": exact, "vector": None},
                ))
        return results

    def _check_span_order(self, span: SubmoduleBasis) -> CheckResult:
        """按相反的生成元顺序重新张成, 阶梯形基应逐行一致"""
        again = submodule_span(self.gens, self.gens.basis(self.spec.shape.zero()), reverse_order=True)
        if again.pivots == span.pivots and again.rows == span.rows:
            return CheckResult.ok("span_order", "reversed generator order gives the same echelon basis")
        k = next((k for k, (a, b) in enumerate(zip(span.rows, again.rows)) if a != b), min(span.dim, again.dim))
        row = again.rows[k] if k < again.dim else span.rows[k]
        return CheckResult.fail(
            "span_order", f"reversed order gives dim {again.dim} (vs {span.dim}), first difference at row {k}",
            witness_for(row, row=k, dims=[span.dim, again.dim]),
        )

    # --- 汇总 ---

    def suite_plan(self, suite: str) -> List[str]:
        if suite not in SUITES + EXTRA_SUITES + ("all",):
            raise UsageError(f"unknown suite {suite!r}")
        if suite == "all":
            return [s for s in SUITES if self.skip_reason(s) is None]
        return [suite]

    def skip_reason(self, suite: str) -> Optional[str]:
        """all 中不运行该套件的原因; 适用时为 None"""
        if suite == "lowest" and self.spec.kind == "A":
            return "type A has no lowest vector construction"
        size = self.spec.shape.size
        if suite == "steinberg" and size > self.bound:
            return f"l^N = {size} above the exhaustive bound {self.bound}"
        return None

    def run(self, suite: str = "all") -> Certificate:
        cert = Certificate(spec=self.spec.to_dict(), backend=self.field.backend, seed=self.seed)
        cert.spec["w0_word"] = list(self.roots().word) if suite in ("all", "nilpotent", "central") else None
        plan = self.suite_plan(suite)
        if suite == "all":
            for name in SUITES:
                if name not in plan:
                    cert.skipped[name] = self.skip_reason(name)
                    logger.warning("suite %s not run: %s", name, cert.skipped[name])
        for name in plan:
            logger.info("suite %s on %s (l=%d) started", name, self.spec.label, self.spec.l)
            with stopwatch(cert.timings_ms, name):
                for result in getattr(self, f"check_{name}")():
                    cert.add(result)
                    if not result.passed:
                        logger.warning("check %s failed: %s", result.name, result.detail)
        cert.dims.update(self.dims)
        logger.info("certificate for %s: %s", self.spec.label, "pass" if cert.passed else "FAIL")
        return cert
