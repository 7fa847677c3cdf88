"""R-tree 同步遍历连接

- sync_traversal_dfs: 深度优先递归，分叶/叶、目录/目录、叶/目录三种情形
- sync_traversal_bfs: 逐层展开，每层的节点对任务列表可被多个 worker 并行处理

两者对同一对树产生完全相同的结果与每层任务数。
"""

from __future__ import annotations

import logging
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from ..geometry import MBR, mbr_intersects
from ..rtree import RTree, node_mbr
from .models import JoinCounters, JoinResult, NodePairTask, Pair, SchedulingPolicy
from .workers import check_workers, run_tasks


logger = logging.getLogger(__name__)


def node_mbrs(tree: RTree) -> List[MBR]:
    """每个节点的紧致 MBR（按节点下标）"""
    return [node_mbr(tree, i) for i in range(len(tree.nodes))]


@dataclass
class TaskOutcome:
    """处理一个节点对任务的产出"""
    children: List[NodePairTask] = field(default_factory=list)
    pairs: List[Pair] = field(default_factory=list)
    predicate_evals: int = 0


def expand_task(
    tree_r: RTree,
    tree_s: RTree,
    task: NodePairTask,
    mbrs_r: Sequence[MBR],
    mbrs_s: Sequence[MBR],
) -> TaskOutcome:
    """处理一个节点对，返回下一层任务或结果对

    叶/目录混合时，叶节点保持不变，与目录节点中 MBR 与该叶节点相交的子节点重新配对。
    """
    node_r = tree_r.nodes[task.node_r_index]
    node_s = tree_s.nodes[task.node_s_index]
    out = TaskOutcome()

    if node_r.is_leaf and node_s.is_leaf:
        for er in node_r.entries:
            rm = er.mbr
            for es in node_s.entries:
                if mbr_intersects(rm, es.mbr):
                    out.pairs.append((er.ref, es.ref))
        out.predicate_evals = node_r.count * node_s.count
    elif not node_r.is_leaf and not node_s.is_leaf:
        for er in node_r.entries:
            rm = er.mbr
            for es in node_s.entries:
                if mbr_intersects(rm, es.mbr):
                    out.children.append(NodePairTask(er.ref, es.ref))
        out.predicate_evals = node_r.count * node_s.count
    elif node_r.is_leaf:
        leaf_mbr = mbrs_r[task.node_r_index]
        for es in node_s.entries:
            if mbr_intersects(leaf_mbr, es.mbr):
                out.children.append(NodePairTask(task.node_r_index, es.ref))
        out.predicate_evals = node_s.count
    else:
        leaf_mbr = mbrs_s[task.node_s_index]
        for er in node_r.entries:
            if mbr_intersects(er.mbr, leaf_mbr):
                out.children.append(NodePairTask(er.ref, task.node_s_index))
        out.predicate_evals = node_r.count
    return out


def sync_traversal_dfs(
    tree_r: RTree,
    tree_s: RTree,
    counters: Optional[JoinCounters] = None,
) -> JoinResult:
    """深度优先同步遍历"""
    mbrs_r = node_mbrs(tree_r)
    mbrs_s = node_mbrs(tree_s)
    local = JoinCounters()
    pairs: List[Pair] = []

    def traverse(task: NodePairTask, depth: int) -> None:
        outcome = expand_task(tree_r, tree_s, task, mbrs_r, mbrs_s)
        local.node_pairs += 1
        local.tasks_per_depth[depth] += 1
        local.predicate_evals += outcome.predicate_evals
        pairs.extend(outcome.pairs)
        for child in outcome.children:
            traverse(child, depth + 1)

    # 递归深度不超过两棵树高之和
    needed = tree_r.height + tree_s.height + 100
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)
    traverse(NodePairTask(tree_r.root_index, tree_s.root_index), 0)

    if counters is not None:
        counters.merge(local)
    return JoinResult.from_pairs(pairs)


def sync_traversal_bfs(
    tree_r: RTree,
    tree_s: RTree,
    workers: int = 1,
    policy: SchedulingPolicy = SchedulingPolicy.STATIC,
    counters: Optional[JoinCounters] = None,
) -> JoinResult:
    """广度优先同步遍历

    第 k 层消费第 k-1 层产生的 NodePairTask 列表（软件版本的任务队列），
    层内任务交给 worker 并行处理。

    Args:
        tree_r: R 侧 R-tree
        tree_s: S 侧 R-tree
        workers: worker 数
        policy: 调度策略
        counters: 可选插桩计数器
    """
    check_workers(workers)
    mbrs_r = node_mbrs(tree_r)
    mbrs_s = node_mbrs(tree_s)
    local = JoinCounters()
    pairs: List[Pair] = []

    level: List[NodePairTask] = [NodePairTask(tree_r.root_index, tree_s.root_index)]
    depth = 0
    while level:
        outcomes = run_tasks(
            level,
            lambda t: expand_task(tree_r, tree_s, t, mbrs_r, mbrs_s),
            workers,
            policy,
        )
        local.node_pairs += len(level)
        local.tasks_per_depth[depth] += len(level)
        next_level: List[NodePairTask] = []
        for outcome in outcomes:
            local.predicate_evals += outcome.predicate_evals
            pairs.extend(outcome.pairs)
            next_level.extend(outcome.children)
        logger.debug("BFS 第 %d 层: %d 个任务, 产生 %d 个下层任务", depth, len(level), len(next_level))
        level = next_level
        depth += 1

    if counters is not None:
        counters.merge(local)
    return JoinResult.from_pairs(pairs)
