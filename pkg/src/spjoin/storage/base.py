"""存储基础工具

确保输出目录存在，统一 I/O 错误的转换。
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from ..errors import ErrorCode, SpjoinError


PathLike = Union[str, Path]


def ensure_parent_dir(path: PathLike) -> Path:
    """确保文件的父目录存在

    Args:
        path: 文件路径

    Returns:
        规范化后的路径
    """
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def require_file(path: PathLike) -> Path:
    """确认输入文件存在

    Raises:
        SpjoinError: 文件不存在
    """
    p = Path(path)
    if not p.is_file():
        raise SpjoinError(ErrorCode.STORAGE_NOT_FOUND, f"文件不存在: {p}", {"path": str(p)})
    return p


def write_text(path: PathLike, text: str) -> Path:
    """以 UTF-8 / LF 写出文本文件"""
    p = ensure_parent_dir(path)
    try:
        with p.open("w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        raise SpjoinError(ErrorCode.STORAGE_WRITE_ERROR, f"无法写入 {p}: {e}", {"path": str(p)}) from e
    return p
