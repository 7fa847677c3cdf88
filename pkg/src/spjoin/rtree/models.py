"""R-tree 数据模型

包含:
- Entry: 节点条目（MBR + 引用）
- RTreeNode: 目录节点或叶节点
- RTree: 扁平节点数组形式的 R-tree
- Violation / ValidationReport: 校验报告
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from ..geometry import MBR


# 固定条目占用：4 个 4 字节坐标 + 4 字节引用
ENTRY_BYTES = 20


@dataclass(frozen=True, slots=True)
class Entry:
    """节点条目

    目录节点中 ref 为子节点下标，叶节点中 ref 为对象 ID。
    """
    mbr: MBR
    ref: int


@dataclass
class RTreeNode:
    """R-tree 节点"""
    is_leaf: bool
    entries: List[Entry] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.entries)


@dataclass
class RTree:
    """R-tree

    节点存放在扁平数组中，目录条目通过下标引用子节点；
    这种布局同时供软件遍历与加速器模拟器使用。
    """
    nodes: List[RTreeNode]
    root_index: int
    height: int
    node_size: int

    @property
    def root(self) -> RTreeNode:
        return self.nodes[self.root_index]

    def node(self, index: int) -> RTreeNode:
        return self.nodes[index]

    def __len__(self) -> int:
        return len(self.nodes)


class ViolationKind(str, Enum):
    """校验违规类型"""
    COUNT_BOUND = "count_bound"
    LEAF_DEPTH = "leaf_depth"
    TIGHTNESS = "tightness"
    COVERAGE = "coverage"
    STRUCTURE = "structure"


class Violation(BaseModel):
    """单条违规"""
    kind: ViolationKind
    node_index: Optional[int] = None
    message: str


class ValidationReport(BaseModel):
    """R-tree 校验报告"""
    node_count: int = Field(default=0, ge=0)
    height: int = Field(default=0, ge=0)
    violations: List[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, kind: ViolationKind) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]
