"""STR (Sort-Tile-Recursive) 批量构建

叶层：按中心 x 排序，切成 ⌈√(n/M)⌉ 个竖条，条内按中心 y 排序，每 M 个打包成一个节点；
上层对节点 MBR 中心重复同样过程，直到只剩一个节点。
"""

from __future__ import annotations

import logging
import math
from typing import List, Sequence

import numpy as np

from ..errors import ErrorCode, SpjoinError
from ..geometry import MBR, SpatialObject, mbr_union
from .models import Entry, RTree, RTreeNode


logger = logging.getLogger(__name__)

MIN_NODE_SIZE = 4


def str_bulk_load(objects: Sequence[SpatialObject], node_size: int) -> RTree:
    """STR 批量构建 R-tree

    排序键为 (中心 x, 中心 y, id)，条内为 (中心 y, 中心 x, id)，
    因而结果只取决于对象集合与 node_size，与输入顺序无关。

    Args:
        objects: 空间对象序列
        node_size: 节点容量 M

    Returns:
        构建好的 R-tree

    Raises:
        SpjoinError: 输入为空或 M < 4
    """
    if not objects:
        raise SpjoinError(ErrorCode.TREE_EMPTY_INPUT, "不能对空数据集构建 R-tree")
    if node_size < MIN_NODE_SIZE:
        raise SpjoinError(
            ErrorCode.TREE_INVALID_NODE_SIZE,
            f"节点容量必须 ≥ {MIN_NODE_SIZE}，实际为 {node_size}",
            {"node_size": node_size},
        )

    nodes: List[RTreeNode] = []

    # 叶层
    level_entries = [Entry(obj.mbr, obj.id) for obj in objects]
    keys = np.fromiter((obj.id for obj in objects), dtype=np.int64, count=len(objects))
    is_leaf = True
    height = 0

    while True:
        groups = _str_groups(level_entries, keys, node_size)
        first_index = len(nodes)
        for group in groups:
            nodes.append(RTreeNode(is_leaf=is_leaf, entries=[level_entries[i] for i in group]))
        height += 1
        logger.debug("STR 第 %d 层: %d 个节点", height, len(groups))

        if len(groups) == 1:
            break

        # 上一层：每个新节点成为一个目录条目，以节点下标为排序 tie-break
        level_entries = [
            Entry(mbr_union(e.mbr for e in nodes[idx].entries), idx)
            for idx in range(first_index, len(nodes))
        ]
        keys = np.arange(first_index, len(nodes), dtype=np.int64)
        is_leaf = False

    return RTree(nodes=nodes, root_index=len(nodes) - 1, height=height, node_size=node_size)


def _str_groups(entries: Sequence[Entry], keys: np.ndarray, node_size: int) -> List[List[int]]:
    """对一层条目做切片-排序-打包，返回每个节点的条目下标列表"""
    n = len(entries)
    cx = np.fromiter(((e.mbr.xmin + e.mbr.xmax) / 2.0 for e in entries), dtype=np.float64, count=n)
    cy = np.fromiter(((e.mbr.ymin + e.mbr.ymax) / 2.0 for e in entries), dtype=np.float64, count=n)

    # np.lexsort 以最后一个键为主键
    order_x = np.lexsort((keys, cy, cx))
    if n <= node_size:
        return [order_x.tolist()]

    slices = math.ceil(math.sqrt(n / node_size))
    slice_size = slices * node_size

    groups: List[List[int]] = []
    for start in range(0, n, slice_size):
        part = order_x[start:start + slice_size]
        order_y = part[np.lexsort((keys[part], cx[part], cy[part]))]
        for j in range(0, len(order_y), node_size):
            groups.append(order_y[j:j + node_size].tolist())
    return groups


def node_mbr(tree: RTree, index: int) -> MBR:
    """节点的紧致 MBR"""
    return mbr_union(e.mbr for e in tree.nodes[index].entries)
