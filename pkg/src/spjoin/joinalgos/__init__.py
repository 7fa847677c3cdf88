"""软件空间连接算法

嵌套循环、平面扫描、R-tree 同步遍历（DFS / BFS）、PBSM（均匀网格、层次划分、一维竖条）。
"""

from .models import (
    GridSpec,
    JoinCounters,
    JoinResult,
    NodePairTask,
    Pair,
    SchedulingPolicy,
    Tile,
    TileJoiner,
)
from .nested_loop import nested_loop_candidates, nested_loop_count, nested_loop_join, nested_loop_mask
from .pbsm import (
    join_tile,
    pbsm_1d,
    pbsm_emissions,
    pbsm_hierarchical_partition,
    pbsm_join,
    pbsm_partition,
    union_region,
    uniform_grid_for,
)
from .plane_sweep import plane_sweep_candidates, plane_sweep_join
from .traversal import expand_task, node_mbrs, sync_traversal_bfs, sync_traversal_dfs
from .workers import run_tasks

__all__ = [
    "GridSpec",
    "JoinCounters",
    "JoinResult",
    "NodePairTask",
    "Pair",
    "SchedulingPolicy",
    "Tile",
    "TileJoiner",
    "expand_task",
    "join_tile",
    "nested_loop_candidates",
    "nested_loop_count",
    "nested_loop_join",
    "nested_loop_mask",
    "node_mbrs",
    "pbsm_1d",
    "pbsm_emissions",
    "pbsm_hierarchical_partition",
    "pbsm_join",
    "pbsm_partition",
    "plane_sweep_candidates",
    "plane_sweep_join",
    "run_tasks",
    "sync_traversal_bfs",
    "sync_traversal_dfs",
    "union_region",
    "uniform_grid_for",
]
