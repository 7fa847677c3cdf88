"""JSON 文件读写辅助函数"""

import json
from typing import Any

from ..errors import ErrorCode, SpjoinError
from .base import PathLike, ensure_parent_dir, require_file


def read_json(path: PathLike) -> Any:
    """读取 JSON 文件

    Args:
        path: JSON 文件路径

    Returns:
        解析后的 JSON 数据

    Raises:
        SpjoinError: 文件不存在，或内容不是合法 JSON
    """
    p = require_file(path)
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SpjoinError(
            ErrorCode.STORAGE_READ_ERROR,
            f"无法解析 JSON {p}: 第 {e.lineno} 行: {e.msg}",
            {"path": str(p), "line": e.lineno},
        ) from e


def write_json(path: PathLike, data: Any, indent: int | None = 2) -> None:
    """写入 JSON 文件

    Args:
        path: JSON 文件路径
        data: 要写入的数据
        indent: 缩进空格数
    """
    p = ensure_parent_dir(path)
    p.write_text(
        json.dumps(data, ensure_ascii=False, indent=indent, default=str, sort_keys=True) + "\n",
        encoding="utf-8",
    )
