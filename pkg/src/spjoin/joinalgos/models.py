"""连接算法数据模型

包含:
- JoinResult: 结果对集合
- GridSpec / Tile: PBSM 网格与瓦片
- NodePairTask: BFS 同步遍历的节点对任务
- JoinCounters: 谓词计数等插桩信息
- SchedulingPolicy / TileJoiner: 调度策略与瓦片内连接算法
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, List, Set, Tuple

import numpy as np

from ..errors import ErrorCode, SpjoinError
from ..geometry import MBR, SpatialObject


Pair = Tuple[int, int]


class SchedulingPolicy(str, Enum):
    """任务调度策略"""
    STATIC = "static"    # 按 worker 下标切分连续块 / 轮询预分配
    DYNAMIC = "dynamic"  # 空闲者领取下一个任务


class TileJoiner(str, Enum):
    """瓦片内连接算法"""
    NESTED_LOOP = "nested_loop"
    PLANE_SWEEP = "plane_sweep"


@dataclass
class JoinResult:
    """连接结果：(id_r, id_s) 对的集合，比较与顺序无关"""
    pairs: Set[Pair] = field(default_factory=set)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Pair]) -> JoinResult:
        return cls(set(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def sorted_pairs(self) -> List[Pair]:
        """按字典序排序的结果对（便于 diff）"""
        return sorted(self.pairs)


@dataclass(frozen=True, slots=True)
class NodePairTask:
    """一对待连接的节点（R 树节点下标, S 树节点下标）"""
    node_r_index: int
    node_s_index: int


@dataclass
class JoinCounters:
    """插桩计数器

    各 worker 各自累计，最后用 merge 结合（满足结合律与交换律）。
    """
    predicate_evals: int = 0
    node_pairs: int = 0
    y_overlap_tests: int = 0
    tasks_per_depth: Counter[int] = field(default_factory=Counter)

    def merge(self, other: JoinCounters) -> JoinCounters:
        self.predicate_evals += other.predicate_evals
        self.node_pairs += other.node_pairs
        self.y_overlap_tests += other.y_overlap_tests
        self.tasks_per_depth.update(other.tasks_per_depth)
        return self

    def depth_profile(self) -> List[int]:
        """按深度排列的节点对任务数"""
        if not self.tasks_per_depth:
            return []
        return [self.tasks_per_depth.get(d, 0) for d in range(max(self.tasks_per_depth) + 1)]


@dataclass(frozen=True)
class GridSpec:
    """均匀网格：区域被 cols × rows 个等大瓦片划分"""
    region: MBR
    cols: int
    rows: int

    def __post_init__(self) -> None:
        if self.cols < 1 or self.rows < 1:
            raise SpjoinError(
                ErrorCode.GRID_INVALID,
                f"网格行列数必须 ≥ 1，实际为 {self.cols}×{self.rows}",
                {"cols": self.cols, "rows": self.rows},
            )

    def col_edge(self, k: int) -> float:
        """第 k 条竖向分割线的 x 坐标（k = cols 时恰为区域右边界）"""
        return _edge(self.region.xmin, self.region.xmax, k, self.cols)

    def row_edge(self, k: int) -> float:
        return _edge(self.region.ymin, self.region.ymax, k, self.rows)

    def tile_mbr(self, col: int, row: int) -> MBR:
        return MBR(self.col_edge(col), self.row_edge(row), self.col_edge(col + 1), self.row_edge(row + 1))

    def edges(self) -> Tuple[np.ndarray, np.ndarray]:
        """全部竖向 / 横向分割线坐标，与 tile_mbr 一样舍入到 32 位浮点"""
        xs = np.array([self.col_edge(k) for k in range(self.cols + 1)], dtype=np.float32)
        ys = np.array([self.row_edge(k) for k in range(self.rows + 1)], dtype=np.float32)
        return xs.astype(np.float64), ys.astype(np.float64)

    @property
    def tile_count(self) -> int:
        return self.cols * self.rows


def _edge(lo: float, hi: float, k: int, n: int) -> float:
    if k >= n:
        return hi
    return lo + (hi - lo) * k / n


@dataclass
class Tile:
    """PBSM 瓦片

    objects_r / objects_s 中每个对象的 MBR 都与 tile_mbr 相交。
    flagged 表示层次划分在最小尺寸处停止、仍超出负载上界。
    """
    tile_mbr: MBR
    last_col: bool
    last_row: bool
    objects_r: List[SpatialObject] = field(default_factory=list)
    objects_s: List[SpatialObject] = field(default_factory=list)
    depth: int = 0
    flagged: bool = False

    @property
    def geomean(self) -> float:
        """两侧对象数的几何平均"""
        return (len(self.objects_r) * len(self.objects_s)) ** 0.5

    @property
    def comparisons(self) -> int:
        return len(self.objects_r) * len(self.objects_s)
