"""扁平 key=value 配置文件

空行与 `#` 开头的注释行被忽略；键中的 `-` 统一为 `_`。
"""

from __future__ import annotations

from typing import Dict

from ..errors import ErrorCode, SpjoinError
from .base import PathLike, require_file


def parse_config(text: str) -> Dict[str, str]:
    """解析配置文本

    Raises:
        SpjoinError: 行格式错误或键重复
    """
    values: Dict[str, str] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SpjoinError(
                ErrorCode.CONFIG_SCHEMA_ERROR,
                f"配置第 {line_no} 行缺少 '=': {raw}",
                {"line": line_no},
            )
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if not key:
            raise SpjoinError(ErrorCode.CONFIG_SCHEMA_ERROR, f"配置第 {line_no} 行键为空", {"line": line_no})
        if key in values:
            raise SpjoinError(
                ErrorCode.CONFIG_SCHEMA_ERROR,
                f"配置第 {line_no} 行键 '{key}' 重复",
                {"line": line_no, "key": key},
            )
        values[key] = value
    return values


def load_config(path: PathLike) -> Dict[str, str]:
    """读取配置文件"""
    return parse_config(require_file(path).read_text(encoding="utf-8"))
