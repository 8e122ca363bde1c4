"""
数据模型定义
"""
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .cyclotomic import BaseField
from .errors import StructuralError
from .linalg import EchelonBasis
from .weylrep import IndexShape, MultiIndex, SparseVec

CERTIFICATE_SCHEMA = 1
CHECK_STATUSES = ("pass", "fail")


@dataclass
class CheckResult:
    """单项检查结果"""
    name: str  # 检查名, 如 "relations", "highest_weight"
    status: str  # pass | fail
    detail: str = ""  # 说明
    witness: Optional[dict] = None  # 失败时的反例 (含序列化向量)

    def __post_init__(self):
        """数据验证"""
        if self.status not in CHECK_STATUSES:
            raise StructuralError(f"check status must be pass/fail, got {self.status!r}")
        if self.status == "fail" and self.witness is None:
            raise StructuralError(f"failed check {self.name!r} carries no witness")

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @classmethod
    def ok(cls, name: str, detail: str = "") -> "CheckResult":
        return cls(name, "pass", detail)

    @classmethod
    def fail(cls, name: str, detail: str, witness: dict) -> "CheckResult":
        return cls(name, "fail", detail, witness)

    @classmethod
    def from_dict(cls, data: dict) -> "CheckResult":
        return cls(data["name"], data["status"], data.get("detail", ""), data.get("witness"))

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness, "detail": self.detail}


@dataclass
class Certificate:
    """一次运行的完整结论"""
    spec: dict  # ModuleSpec.to_dict()
    backend: str  # exact | modp
    checks: List[CheckResult] = field(default_factory=list)
    dims: Dict[str, int] = field(default_factory=dict)
    seed: int = 0
    timings_ms: Dict[str, float] = field(default_factory=dict)
    skipped: Dict[str, str] = field(default_factory=dict)  # all 中未运行的套件 -> 原因, 不计为通过
    schema: int = CERTIFICATE_SCHEMA

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    def to_dict(self, normalize: bool = False) -> dict:
        """转换为字典; normalize 时清空耗时, 便于逐字节比较"""
        return {
            "schema": self.schema,
            "spec": self.spec,
            "backend": self.backend,
            "checks": [c.to_dict() for c in self.checks],
            "dims": dict(self.dims),
            "seed": self.seed,
            "timings_ms": {} if normalize else {k: round(v, 3) for k, v in self.timings_ms.items()},
            "skipped": dict(self.skipped),
        }

    def to_json(self, normalize: bool = False) -> str:
        return json.dumps(self.to_dict(normalize), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "Certificate":
        if data.get("schema") != CERTIFICATE_SCHEMA:
            raise StructuralError(f"unsupported certificate schema {data.get('schema')!r}")
        return cls(
            spec=data["spec"],
            backend=data["backend"],
            checks=[CheckResult.from_dict(c) for c in data["checks"]],
            dims=dict(data.get("dims", {})),
            seed=int(data.get("seed", 0)),
            timings_ms=dict(data.get("timings_ms", {})),
            skipped=dict(data.get("skipped", {})),
        )

    @classmethod
    def from_db_row(cls, row) -> "Certificate":
        """从归档库 runs 表的一行恢复"""
        return cls.from_dict(json.loads(row["certificate"]))


@dataclass
class Provenance:
    """某一行由哪个种子分量经哪个词得到; word 按算子书写顺序, 最右侧先作用"""
    seed: int
    word: Tuple[str, ...]

    def extend(self, sym: str) -> "Provenance":
        return Provenance(self.seed, (sym,) + self.word)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "word": list(self.word)}

    @classmethod
    def from_dict(cls, data: dict) -> "Provenance":
        return cls(int(data["seed"]), tuple(data["word"]))


@dataclass
class SubmoduleBasis:
    """
    子模的阶梯形基

    rows 按主元升序; 每行是权齐次的, 主元系数为 1, 在其它行的主元处为 0。
    """
    shape: IndexShape
    field: BaseField
    rows: List[SparseVec]
    pivots: List[MultiIndex]
    provenance: List[Optional[Provenance]]
    complete: bool = False  # 是否已核对对全部生成元封闭

    def __post_init__(self):
        if not (len(self.rows) == len(self.pivots) == len(self.provenance)):
            raise StructuralError("rows, pivots and provenance lengths differ")
        if any(a >= b for a, b in zip(self.pivots, self.pivots[1:])):
            raise StructuralError("pivots must be strictly increasing")

    @property
    def dim(self) -> int:
        return len(self.rows)

    def echelon(self) -> EchelonBasis:
        ech = EchelonBasis(self.field)
        for p, row in zip(self.pivots, self.rows):
            ech.rows[p] = dict(row.items())
        return ech

    def contains(self, v: SparseVec) -> bool:
        return self.echelon().contains(dict(v.items()))

    def header(self, spec: dict) -> dict:
        return {
            "schema": CERTIFICATE_SCHEMA,
            "kind": "submodule_basis",
            "spec": spec,
            "backend": self.field.backend,
            "dim": self.dim,
            "complete": self.complete,
        }

    def to_ndjson(self, spec: dict) -> List[str]:
        """一行头部, 之后每行一个基向量"""
        lines = [json.dumps(self.header(spec), sort_keys=True)]
        for p, row, prov in zip(self.pivots, self.rows, self.provenance):
            lines.append(json.dumps(
                {"pivot": list(p), "vec": row.to_json(), "word": prov.to_dict() if prov else None},
                sort_keys=True,
            ))
        return lines

    @classmethod
    def from_ndjson(cls, lines: List[str], field_: BaseField) -> Tuple[dict, "SubmoduleBasis"]:
        """返回 (头部, 基)"""
        lines = [ln for ln in lines if ln.strip()]
        if not lines:
            raise StructuralError("empty basis dump")
        header = json.loads(lines[0])
        if header.get("kind") != "submodule_basis":
            raise StructuralError("not a submodule basis dump")
        rows, pivots, prov = [], [], []
        shape = None
        for ln in lines[1:]:
            data = json.loads(ln)
            vec = SparseVec.from_json(data["vec"], field_)
            shape = vec.shape
            rows.append(vec)
            pivots.append(tuple(data["pivot"]))
            prov.append(Provenance.from_dict(data["word"]) if data.get("word") else None)
        if shape is None:
            spec = header["spec"]
            shape = IndexShape(spec["type"], spec["rank"], spec["ell"])
        if len(rows) != header.get("dim"):
            raise StructuralError(f"dump header says dim {header.get('dim')}, found {len(rows)} rows")
        return header, cls(shape, field_, rows, pivots, prov, bool(header.get("complete")))
