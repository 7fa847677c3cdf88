"""R-tree 模块

STR 批量构建、结构校验、窗口查询，以及供软件遍历与加速器模拟器共用的扁平序列化格式。
"""

from .bulk_load import node_mbr, str_bulk_load
from .codec import deserialize, deserialize_bytes, serialize, serialize_bytes
from .models import ENTRY_BYTES, Entry, RTree, RTreeNode, ValidationReport, Violation, ViolationKind
from .query import tree_summary, window_query
from .validation import require_valid, validate

__all__ = [
    "ENTRY_BYTES",
    "Entry",
    "RTree",
    "RTreeNode",
    "ValidationReport",
    "Violation",
    "ViolationKind",
    "deserialize",
    "deserialize_bytes",
    "node_mbr",
    "require_valid",
    "serialize",
    "serialize_bytes",
    "str_bulk_load",
    "tree_summary",
    "validate",
    "window_query",
]
