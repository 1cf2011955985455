"""
验证工具模块
提供源文件、编译目标与生成代码命名的检查功能
"""

import keyword
import re
from pathlib import Path
from typing import Optional


# 支持的编译目标
SUPPORTED_TARGETS = {
    "py": "Python 源码",
}

# 已知但未实现的目标
KNOWN_TARGETS = {"py", "llvm"}

SOURCE_SUFFIX = ".ling"

# 生成代码中使用的内建函数，用户变量不得遮蔽
PYTHON_RESERVED = frozenset(keyword.kwlist) | frozenset(keyword.softkwlist) | {"sum", "len", "print"}


def validate_target(target: str) -> bool:
    """目标是否已实现"""
    return target in SUPPORTED_TARGETS


def validate_source_path(path: Path) -> Optional[str]:
    """
    检查源文件路径

    Args:
        path: 源文件路径

    Returns:
        问题描述；没有问题时返回 None
    """
    if not path.exists():
        return f"file not found: {path}"
    if not path.is_file():
        return f"not a regular file: {path}"
    return None


def decode_source(data: bytes) -> str:
    """
    按 UTF-8 解码源文件

    Raises:
        UnicodeDecodeError: 输入不是合法的 UTF-8
    """
    text = data.decode("utf-8")
    # 统一换行符，保持列号稳定
    return text.replace("\r\n", "\n").replace("\r", "\n")


def to_snake_case(name: str) -> str:
    """
    将标识符转换为 snake_case

    Args:
        name: 源标识符，如 ``maxValue``

    Returns:
        转换结果，如 ``max_value``
    """
    step = re.sub(r"([A-Z]+)([A-Z][a-z])", r"\1_\2", name)
    step = re.sub(r"([a-z0-9])([A-Z])", r"\1_\2", step)
    return step.lower()


def is_python_reserved(name: str) -> bool:
    """名字是否会与目标语言关键字或所用内建函数冲突"""
    return name in PYTHON_RESERVED
