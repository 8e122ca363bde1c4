"""
运行配置

RunConfig 汇总命令行与配置文件的取值。优先级: 命令行 > 配置文件 > 环境变量 (QGR_THREADS) > 默认值。
配置文件格式: 每行 `key = value`, `#` 开头为注释, 空行忽略。
"""
import re
from dataclasses import dataclass, field, fields
from typing import Callable, Dict, Mapping, Optional, Tuple

from .certify import EXTRA_SUITES, SUITES, resolve_lambda_variant
from .errors import DomainError, UsageError
from .modtools import DEFAULT_EXHAUSTIVE_BOUND
from .schnizer import LAMBDA_VARIANTS, ModuleSpec, default_params
from .weylrep import MIN_RANK, Pos
from .workers import default_threads

BACKEND_PATTERN = re.compile(r"^(exact|modp(:\d+)?)$")
SCOPES = ("auto", "exhaustive", "within")


def parse_int_list(text: str) -> Tuple[int, ...]:
    """'3,1' -> (3, 1)"""
    try:
        return tuple(int(x) for x in str(text).split(",") if x.strip())
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}")


def parse_position(text: str) -> Pos:
    """'1,2' 或 '1.2' -> (1, 2)"""
    parts = re.split(r"[.,]", str(text).strip())
    if len(parts) != 2:
        raise UsageError(f"expected a position i,j, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"expected a position i,j, got {text!r}")


def parse_overrides(text: str) -> Dict[Pos, int]:
    """
    参数覆盖表

    Args:
        text: 形如 "1.1:2, 2.1:0"

    Returns:
        {(i, j): 指数}
    """
    out: Dict[Pos, int] = {}
    for item in str(text).split(","):
        item = item.strip()
        if not item:
            continue
        pos, sep, exp = item.partition(":")
        if not sep:
            raise UsageError(f"override {item!r} is not of the form i.j:exp")
        try:
            out[parse_position(pos)] = int(exp)
        except ValueError:
            raise UsageError(f"override {item!r} has a non-integer exponent")
    return out


def _int(text) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise UsageError(f"expected an integer, got {text!r}")


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def _str(text) -> str:
    return str(text).strip()


# 配置键 -> (RunConfig 字段, 转换函数)
CONFIG_KEYS: Dict[str, Tuple[str, Callable]] = {
    "type": ("kind", lambda s: _str(s).upper()),
    "rank": ("rank", _int),
    "ell": ("ell", _int),
    "lambda": ("lam", parse_int_list),
    "suite": ("suite", _str),
    "sample": ("sample", _int),
    "seed": ("seed", _int),
    "backend": ("backend", _str),
    "w0_word": ("w0_word", parse_int_list),
    "out": ("out", _str),
    "basis_out": ("basis_out", _str),
    "basis_in": ("basis_in", _str),
    "threads": ("threads", _int),
    "lambda_variant": ("lambda_variant", _str),
    "exhaustive_bound": ("exhaustive_bound", _int),
    "scope": ("scope", _str),
    "a": ("a", parse_overrides),
    "b": ("b", parse_overrides),
    "mutate_b": ("mutate_b", parse_position),
    "archive": ("archive", _str),
    "xlsx": ("xlsx", _str),
    "normalize": ("normalize", _bool),
}


def read_config_file(path: str) -> Dict[str, str]:
    """
    读取 key = value 配置文件

    Raises:
        UsageError: 语法错误或未知的键
        OSError: 文件无法读取
    """
    values: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key = key.strip().replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value.strip()
    return values


@dataclass
class RunConfig:
    """一次运行的全部设置"""
    command: str  # 子命令
    kind: str  # A|B|C|D
    rank: int
    ell: int
    lam: Optional[Tuple[int, ...]] = None  # 缺省为全 0
    suite: str = "all"
    sample: Optional[int] = None  # None: 规模允许时穷举
    seed: int = 0
    backend: str = "exact"
    w0_word: Optional[Tuple[int, ...]] = None
    out: Optional[str] = None  # 证书 JSON 路径
    basis_out: Optional[str] = None
    basis_in: Optional[str] = None
    threads: int = field(default_factory=default_threads)
    lambda_variant: str = "auto"
    exhaustive_bound: int = DEFAULT_EXHAUSTIVE_BOUND
    scope: str = "auto"
    a: Dict[Pos, int] = field(default_factory=dict)  # a 参数覆盖
    b: Dict[Pos, int] = field(default_factory=dict)  # b 参数覆盖
    mutate_b: Optional[Pos] = None
    archive: Optional[str] = None
    xlsx: Optional[str] = None
    normalize: bool = False
    verbose: bool = False

    def __post_init__(self):
        """数据验证"""
        if self.kind not in MIN_RANK:
            raise UsageError(f"--type must be one of A, B, C, D, got {self.kind!r}")
        if self.rank < MIN_RANK[self.kind]:
            raise UsageError(f"type {self.kind} needs --rank >= {MIN_RANK[self.kind]}, got {self.rank}")
        if self.ell < 5 or self.ell % 2 == 0:
            raise UsageError(f"--ell must be an odd integer >= 5, got {self.ell}")
        if self.lam is None:
            self.lam = (0,) * self.rank
        self.lam = tuple(self.lam)
        if len(self.lam) != self.rank:
            raise UsageError(f"--lambda has {len(self.lam)} entries, --rank is {self.rank}")
        if any(not 0 <= x < self.ell for x in self.lam):
            raise UsageError(f"--lambda entries must lie in [0, {self.ell - 1}]")
        if self.suite not in SUITES + EXTRA_SUITES + ("all",):
            raise UsageError(f"unknown suite {self.suite!r}")
        if self.sample is not None and self.sample < 1:
            raise UsageError("--sample must be positive")
        if not BACKEND_PATTERN.match(self.backend):
            raise UsageError(f"--backend must be exact or modp[:P], got {self.backend!r}")
        if self.threads < 1:
            raise UsageError("--threads must be positive")
        if self.lambda_variant not in ("auto",) + LAMBDA_VARIANTS:
            raise UsageError(f"unknown lambda variant {self.lambda_variant!r}")
        if self.scope not in SCOPES:
            raise UsageError(f"--scope must be one of {', '.join(SCOPES)}")
        if self.exhaustive_bound < 1:
            raise UsageError("--exhaustive-bound must be positive")
        if self.xlsx and not self.archive:
            raise UsageError("--xlsx exports the archive and needs --archive")

    @classmethod
    def from_sources(
        cls,
        command: str,
        flags: Mapping[str, object],
        file_values: Optional[Mapping[str, str]] = None,
    ) -> "RunConfig":
        """
        合并配置文件与命令行

        Args:
            command: 子命令名
            flags: 命令行取值, 以配置键为键, 未给出的为 None
            file_values: read_config_file 的结果
        """
        merged: Dict[str, object] = {}
        for key, raw in (file_values or {}).items():
            attr, convert = CONFIG_KEYS[key]
            merged[attr] = convert(raw)
        for key, raw in flags.items():
            if raw is None:
                continue
            if key in CONFIG_KEYS:
                attr, convert = CONFIG_KEYS[key]
                merged[attr] = convert(raw)
            elif key == "verbose":
                merged["verbose"] = bool(raw)
        for required, flag in (("kind", "--type"), ("rank", "--rank"), ("ell", "--ell")):
            if required not in merged:
                raise UsageError(f"{flag} is required (on the command line or in the config file)")
        known = {f.name for f in fields(cls)}
        return cls(command=command, **{k: v for k, v in merged.items() if k in known})

    def build_spec(self) -> Tuple[ModuleSpec, str]:
        """
        由配置构造 ModuleSpec

        Returns:
            (spec, λ′ 读法说明); 非 B 型说明为空串
        """
        try:
            a0, b0 = default_params(self.kind, self.rank)
            a = dict(a0)
            b = dict(b0)
            for name, table, overrides in (("a", a, self.a), ("b", b, self.b)):
                for pos, exp in overrides.items():
                    if pos not in table:
                        raise UsageError(f"{name} override at {pos} is outside the {self.kind}{self.rank} grid")
                    table[pos] = exp
            spec = ModuleSpec(self.kind, self.rank, self.ell, self.lam, a, b)
            if self.mutate_b is not None:
                spec = spec.mutated_b(self.mutate_b)
        except DomainError as e:
            raise UsageError(str(e))
        if self.kind != "B":
            return spec, ""
        spec, chosen = resolve_lambda_variant(spec, self.lambda_variant)
        return spec, chosen
