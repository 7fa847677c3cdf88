"""spjoin 存储模块

数据集 / 结果 / 统计 CSV、key=value 配置文件与 JSON 报告的读写。
"""

from .base import ensure_parent_dir, require_file, write_text
from .config_file import load_config, parse_config
from .dataset_csv import (
    format_dataset,
    load_dataset,
    load_result,
    parse_dataset,
    store_dataset,
    store_result,
    store_stats,
)
from .json_store import read_json, write_json

__all__ = [
    "ensure_parent_dir",
    "require_file",
    "write_text",
    "load_config",
    "parse_config",
    "format_dataset",
    "load_dataset",
    "load_result",
    "parse_dataset",
    "store_dataset",
    "store_result",
    "store_stats",
    "read_json",
    "write_json",
]
