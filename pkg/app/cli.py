"""
命令行入口

子命令: verify-relations, primitive, submodule, nilpotent, rootvec, certify, dump-generators。
stdout 输出 NDJSON 事件, 人类可读的摘要经 logging 写到 stderr。
退出码: 0 全部通过, 1 有检查失败或内部不变量被破坏, 2 用法错误, 3 I/O 错误。
"""
import argparse
import json
import logging
import sqlite3
import sys
from typing import Callable, List, Optional, TextIO

from .certify import EXTRA_SUITES, SUITES, Certifier
from .config import SCOPES, RunConfig, read_config_file
from .cyclotomic import resolve_field
from .database import CertificateArchive, spec_echo
from .errors import (
    DomainError,
    ExpressionSwellError,
    InternalConsistencyError,
    StructuralError,
    UnsupportedConfiguration,
    UsageError,
)
from .freealg import RootVectorBuilder
from .modtools import dump_basis, load_basis
from .schnizer import LAMBDA_VARIANTS, ModuleSpec, dump_generators
from .utils import event_line, format_duration
from .workers import SweepPool

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3

# 子命令 -> 套件; None 表示取 --suite
COMMAND_SUITES = {
    "verify-relations": "relation",
    "primitive": "primitive",
    "submodule": "submodule",
    "nilpotent": "nilpotent",
    "certify": None,
}
COMMANDS = tuple(COMMAND_SUITES) + ("rootvec", "dump-generators")


class _Parser(argparse.ArgumentParser):
    """解析失败时抛出 UsageError 而不是直接退出"""

    def error(self, message):
        raise UsageError(message)


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value 配置文件")
    common.add_argument("--type", help="A|B|C|D")
    common.add_argument("--rank")
    common.add_argument("--ell", help="单位根阶数 l (奇数, >= 5)")
    common.add_argument("--lambda", dest="lambda", help="最高权, 逗号分隔")
    common.add_argument("--sample", help="抽样的基向量个数")
    common.add_argument("--seed")
    common.add_argument("--backend", help="exact 或 modp[:P]")
    common.add_argument("--w0-word", dest="w0_word", help="w0 的约化词, 逗号分隔")
    common.add_argument("--out", help="证书 JSON 输出路径")
    common.add_argument("--basis-out", dest="basis_out")
    common.add_argument("--threads")
    common.add_argument("--lambda-variant", dest="lambda_variant", choices=("auto",) + LAMBDA_VARIANTS)
    common.add_argument("--exhaustive-bound", dest="exhaustive_bound")
    common.add_argument("--a-exp", dest="a", help="a 参数覆盖, 如 1.1:2,2.1:0")
    common.add_argument("--b-exp", dest="b", help="b 参数覆盖")
    common.add_argument("--mutate-b", dest="mutate_b", help="把默认 b_ij 加 1 (测试用)")
    common.add_argument("--archive", help="SQLite 证书归档")
    common.add_argument("--xlsx", help="把归档导出为 Excel")
    common.add_argument("--normalize", action="store_true", default=None, help="证书中不写耗时")
    common.add_argument("-v", "--verbose", action="store_true", default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="qgr", description="Exact certification of Schnizer modules at odd roots of unity")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-relations", parents=[common], help="defining relations on basis vectors")
    prim = sub.add_parser("primitive", parents=[common], help="uniqueness of the primitive vector")
    prim.add_argument("--scope", choices=SCOPES)
    span = sub.add_parser("submodule", parents=[common], help="span U u(0) and check closure")
    span.add_argument("--basis-in", dest="basis_in", help="复核已导出的基而不重新张成")
    sub.add_parser("nilpotent", parents=[common], help="l-th powers of root vectors")
    sub.add_parser("rootvec", parents=[common], help="print root vectors along a reduced word")
    cert = sub.add_parser("certify", parents=[common], help="run one suite or all of them")
    cert.add_argument("--suite", choices=SUITES + EXTRA_SUITES + ("all",))
    cert.add_argument("--scope", choices=SCOPES)
    sub.add_parser("dump-generators", parents=[common], help="print the Weyl-word terms of every generator")
    return parser


def parse_args(argv: Optional[List[str]] = None) -> RunConfig:
    """
    解析命令行

    Raises:
        UsageError: 参数无效
        OSError: 配置文件无法读取
    """
    ns = build_parser().parse_args(argv)
    flags = vars(ns).copy()
    command = flags.pop("command")
    config_path = flags.pop("config", None)
    file_values = read_config_file(config_path) if config_path else {}
    return RunConfig.from_sources(command, flags, file_values)


def _emitter(stream: TextIO) -> Callable:
    def emit(event: str, **data):
        stream.write(event_line(event, **data) + "\n")
        stream.flush()
    return emit


def run_rootvec(config: RunConfig, spec: ModuleSpec, emit: Callable) -> int:
    field = resolve_field(spec.l, config.backend)
    builder = RootVectorBuilder(spec.kind, spec.n, field, config.w0_word)
    emit("w0_word", word=list(builder.word))
    try:
        for k, beta in enumerate(builder.roots(), start=1):
            e = builder.e_root(k)
            f = builder.f_root(k)
            emit(
                "root_vector",
                k=k,
                beta=list(beta),
                e=e.text(),
                f=f.text(),
                degrees=sorted(list(d) for d in e.degrees(spec.n)),
                words=len(e),
            )
    except ExpressionSwellError as e:
        logger.error("root vector expansion stopped: %s", e)
        emit("error", kind="expression_swell", message=str(e))
        return EXIT_FAIL
    return EXIT_OK


def run(config: RunConfig, stream: Optional[TextIO] = None) -> int:
    """执行一次运行, 返回退出码"""
    emit = _emitter(stream or sys.stdout)
    spec, variant = config.build_spec()
    emit("start", command=config.command, spec=spec.to_dict(), backend=config.backend, seed=config.seed)

    if config.command == "dump-generators":
        for name, terms in dump_generators(spec).items():
            emit("generator", name=name, terms=terms)
        return EXIT_OK
    if config.command == "rootvec":
        return run_rootvec(config, spec, emit)

    certifier = Certifier(
        spec,
        backend=config.backend,
        sample=config.sample,
        seed=config.seed,
        bound=config.exhaustive_bound,
        w0_word=config.w0_word,
        pool=SweepPool(config.threads),
        variant_note=variant,
        scope=config.scope,
    )
    if config.command == "submodule" and config.basis_in:
        try:
            header, basis = load_basis(config.basis_in, certifier.gens)
            certifier.load_span(basis)
        except (StructuralError, KeyError, TypeError, ValueError) as e:
            raise OSError(f"unreadable basis dump {config.basis_in}: {e}") from e
        logger.info("reloaded dim %d basis from %s", basis.dim, config.basis_in)

    suite = COMMAND_SUITES[config.command] or config.suite
    cert = certifier.run(suite)

    span = certifier.current_span
    if span is not None:
        emit("submodule", dim=span.dim, complete=span.complete)
        if config.basis_out:
            dump_basis(config.basis_out, spec, span)
            emit("basis_written", path=config.basis_out, rows=span.dim)
    elif config.basis_out:
        logger.warning("--basis-out ignored: suite %s does not span a submodule", suite)

    for c in cert.checks:
        emit("check", name=c.name, status=c.status, detail=c.detail)
    for name, reason in cert.skipped.items():
        emit("skipped", suite=name, reason=reason)
    emit("certificate", certificate=cert.to_dict(config.normalize))

    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(cert.to_json(config.normalize) + "\n")
    if config.archive:
        archive = CertificateArchive(config.archive)
        run_id = archive.add_certificate(cert)
        emit("archived", path=config.archive, run_id=run_id)
        if config.xlsx:
            if not archive.export_to_excel(config.xlsx):
                raise OSError(f"could not export the archive to {config.xlsx}")
            emit("exported", path=config.xlsx)

    total = sum(cert.timings_ms.values())
    logger.info(
        "%s: %d checks, %d failed, %s",
        spec_echo(cert), len(cert.checks), len(cert.failures), format_duration(total),
    )
    for c in cert.failures:
        logger.warning("FAIL %s: %s", c.name, c.detail)
    return EXIT_OK if cert.passed else EXIT_FAIL


def main(argv: Optional[List[str]] = None, stream: Optional[TextIO] = None) -> int:
    """解析参数并运行, 把异常映射为退出码"""
    try:
        config = parse_args(argv)
    except UsageError as e:
        logger.error("usage error: %s", e)
        return EXIT_USAGE
    except OSError as e:
        logger.error("cannot read config file: %s", e)
        return EXIT_IO
    logging.getLogger().setLevel(logging.DEBUG if config.verbose else logging.INFO)
    try:
        return run(config, stream)
    except (UsageError, UnsupportedConfiguration, DomainError, StructuralError) as e:
        logger.error("usage error: %s", e)
        return EXIT_USAGE
    except (OSError, sqlite3.Error, json.JSONDecodeError) as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    except InternalConsistencyError as e:
        logger.error("internal consistency check failed: %s", e)
        return EXIT_FAIL
