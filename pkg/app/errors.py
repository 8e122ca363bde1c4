"""
异常定义模块
所有业务异常都从 QGRError 派生, CLI 据此映射退出码
"""


class QGRError(Exception):
    """本项目异常基类"""


class StructuralError(QGRError):
    """结构错误: 域不一致、多重指标与形状不符等"""


class DomainError(QGRError, ValueError):
    """参数超出定义域: l 非法、秩过小、阶乘 k >= l 等"""


class DivisionByZeroError(QGRError, ZeroDivisionError):
    """对零元求逆"""


class InternalConsistencyError(QGRError):
    """内部不变量被破坏"""


class UnsupportedConfiguration(QGRError):
    """当前配置不支持该操作 (例如闭式路径配合非默认参数)"""


class ExpressionSwellError(QGRError):
    """根向量展开后的词数超过预算"""


class UsageError(QGRError):
    """命令行或配置文件用法错误, 退出码 2"""


class ExhaustiveBoundError(UsageError):
    """穷举范围超过上限"""

    def __init__(self, size: int, bound: int, hint: str = "use scope=within(U u(0)) or raise --exhaustive-bound"):
        super().__init__(f"exhaustive scope needs l^N = {size} basis vectors, above the bound {bound}; {hint}")
        self.size = size
        self.bound = bound
