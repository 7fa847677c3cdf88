"""R-tree 查询与概要"""

from __future__ import annotations

from collections import deque
from typing import Any, Dict, List

from ..geometry import MBR, mbr_intersects
from .models import RTree


def window_query(tree: RTree, query: MBR) -> List[int]:
    """窗口查询：自根向下，按 mbr_intersects 剪枝

    Returns:
        与 query 相交的对象 ID（升序）
    """
    found: List[int] = []
    stack = [tree.root_index]
    while stack:
        node = tree.nodes[stack.pop()]
        for entry in node.entries:
            if not mbr_intersects(entry.mbr, query):
                continue
            if node.is_leaf:
                found.append(entry.ref)
            else:
                stack.append(entry.ref)
    found.sort()
    return found


def tree_summary(tree: RTree) -> Dict[str, Any]:
    """统计树高、每层节点数与平均填充率"""
    per_level: List[int] = [0] * tree.height
    entries_per_level: List[int] = [0] * tree.height
    queue = deque([(tree.root_index, 0)])
    while queue:
        idx, depth = queue.popleft()
        node = tree.nodes[idx]
        if depth < tree.height:
            per_level[depth] += 1
            entries_per_level[depth] += node.count
        if not node.is_leaf:
            queue.extend((e.ref, depth + 1) for e in node.entries)

    leaf_nodes = per_level[-1] if per_level else 0
    leaf_entries = entries_per_level[-1] if entries_per_level else 0
    return {
        "height": tree.height,
        "node_size": tree.node_size,
        "node_count": len(tree.nodes),
        "nodes_per_level": per_level,
        "object_count": leaf_entries,
        "leaf_fill": leaf_entries / (leaf_nodes * tree.node_size) if leaf_nodes else 0.0,
    }
