"""PBSM (Partition-Based Spatial-Merge) 连接

阶段一把两侧对象复制到与其相交的每个网格瓦片；阶段二逐瓦片连接，
候选对只有在其相交区域参考点落在本瓦片内时才报告，从而每对恰好输出一次。
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import ErrorCode, SpjoinError
from ..geometry import (
    MBR,
    SpatialObject,
    intersection_reference_point,
    mbr_array,
    mbr_intersects,
    mbr_union,
    point_in_tile,
)
from .models import GridSpec, JoinCounters, JoinResult, Pair, SchedulingPolicy, Tile, TileJoiner
from .nested_loop import ObjectPair, nested_loop_candidates
from .plane_sweep import AXIS_X, AXIS_Y, plane_sweep_candidates
from .workers import check_workers, run_tasks


logger = logging.getLogger(__name__)

# 层次划分的最小瓦片边长 = 区域边长 / 2^14
MIN_EXTENT_DIVISOR = 2**14


def union_region(R: Iterable[SpatialObject], S: Iterable[SpatialObject]) -> MBR:
    """两侧对象的并集 MBR"""
    return mbr_union([o.mbr for o in R] + [o.mbr for o in S])


def uniform_grid_for(
    R: Sequence[SpatialObject],
    S: Sequence[SpatialObject],
    cols: int,
    rows: Optional[int] = None,
) -> GridSpec:
    """覆盖两侧并集 MBR 的均匀网格"""
    return GridSpec(union_region(R, S), cols, rows if rows is not None else cols)


def _check_inside(objects: Sequence[SpatialObject], coords: np.ndarray, region: MBR) -> None:
    outside = (
        (coords[:, 0] < region.xmin)
        | (coords[:, 1] < region.ymin)
        | (coords[:, 2] > region.xmax)
        | (coords[:, 3] > region.ymax)
    )
    if outside.any():
        obj = objects[int(np.argmax(outside))]
        raise SpjoinError(
            ErrorCode.REGION_MISMATCH,
            f"对象 {obj.id} 的 MBR {obj.mbr.as_tuple()} 超出网格区域 {region.as_tuple()}",
            {"id": obj.id},
        )


def _tile_members(coords: np.ndarray, grid: GridSpec) -> Dict[int, np.ndarray]:
    """瓦片键 (row * cols + col) -> 与该瓦片（闭区间）相交的对象下标，下标保持输入顺序

    瓦片 c 覆盖 [xs[c], xs[c+1]]，对象与之相交当且仅当 xs[c+1] ≥ xmin 且 xs[c] ≤ xmax。
    """
    xs, ys = grid.edges()
    c0 = np.searchsorted(xs[1:], coords[:, 0], side="left")
    c1 = np.searchsorted(xs[:-1], coords[:, 2], side="right") - 1
    r0 = np.searchsorted(ys[1:], coords[:, 1], side="left")
    r1 = np.searchsorted(ys[:-1], coords[:, 3], side="right") - 1

    ncols = c1 - c0 + 1
    counts = ncols * (r1 - r0 + 1)
    obj = np.repeat(np.arange(len(coords)), counts)
    # 每个对象所覆盖矩形块内的局部序号
    local = np.arange(len(obj)) - np.repeat(np.cumsum(counts) - counts, counts)
    keys = (r0[obj] + local // ncols[obj]) * grid.cols + c0[obj] + local % ncols[obj]

    order = np.argsort(keys, kind="stable")
    keys = keys[order]
    obj = obj[order]
    uniq, starts = np.unique(keys, return_index=True)
    return dict(zip(uniq.tolist(), np.split(obj, starts[1:])))


def pbsm_partition(
    R: Sequence[SpatialObject],
    S: Sequence[SpatialObject],
    grid: GridSpec,
    keep_empty: bool = False,
) -> List[Tile]:
    """PBSM 阶段一：网格划分

    每个对象被复制到所有与其 MBR（闭区间）相交的瓦片中。
    瓦片范围按坐标数组整体计算，瓦片内对象保持输入顺序。

    Args:
        R: R 侧对象
        S: S 侧对象
        grid: 网格
        keep_empty: 是否保留任一侧为空的瓦片

    Returns:
        按行优先排列的瓦片列表

    Raises:
        SpjoinError: 有对象不在网格区域内
    """
    members = []
    for objects in (R, S):
        coords = mbr_array(objects)
        _check_inside(objects, coords, grid.region)
        members.append(_tile_members(coords, grid))
    members_r, members_s = members

    if keep_empty:
        keys: Iterable[int] = range(grid.tile_count)
    else:
        keys = sorted(members_r.keys() & members_s.keys())

    empty = np.empty(0, dtype=np.int64)
    tiles: List[Tile] = []
    for key in keys:
        row, col = divmod(key, grid.cols)
        tiles.append(Tile(
            tile_mbr=grid.tile_mbr(col, row),
            last_col=col == grid.cols - 1,
            last_row=row == grid.rows - 1,
            objects_r=[R[i] for i in members_r.get(key, empty).tolist()],
            objects_s=[S[i] for i in members_s.get(key, empty).tolist()],
        ))
    logger.debug("PBSM 划分 %d×%d 网格: 保留 %d 个瓦片", grid.cols, grid.rows, len(tiles))
    return tiles


def default_coarse_grid(
    R: Sequence[SpatialObject],
    S: Sequence[SpatialObject],
    max_geomean: int,
) -> GridSpec:
    """层次划分的起始粗网格

    每个粗瓦片的期望负载约为上界的 4 倍，一般再细分一到两次即可满足上界。
    """
    region = union_region(R, S)
    if region.width == 0 or region.height == 0:
        region = MBR(region.xmin, region.ymin, region.xmin + max(region.width, 1.0),
                     region.ymin + max(region.height, 1.0))
    load = math.sqrt(len(R) * len(S)) / max_geomean
    k = max(1, int(math.sqrt(load)) // 2)
    return GridSpec(region, k, k)


def pbsm_hierarchical_partition(
    R: Sequence[SpatialObject],
    S: Sequence[SpatialObject],
    max_geomean: int,
    coarse_grid: Optional[GridSpec] = None,
    keep_empty: bool = False,
) -> List[Tile]:
    """层次划分

    从粗网格开始，√(|R_i|·|S_i|) 超过上界的瓦片递归 2×2 细分，
    直到满足上界或达到最小瓦片边长（此时 flagged=True）。

    Args:
        R: R 侧对象
        S: S 侧对象
        max_geomean: 每瓦片几何平均对象数上界（比较次数上界为其平方）
        coarse_grid: 起始网格，默认见 default_coarse_grid
        keep_empty: 是否保留任一侧为空的瓦片
    """
    if max_geomean < 1:
        raise SpjoinError(
            ErrorCode.JOIN_INVALID_ARGUMENT,
            f"max_geomean 必须 ≥ 1，实际为 {max_geomean}",
            {"max_geomean": max_geomean},
        )
    if not R or not S:
        return []

    grid = coarse_grid or default_coarse_grid(R, S, max_geomean)
    min_w = grid.region.width / MIN_EXTENT_DIVISOR
    min_h = grid.region.height / MIN_EXTENT_DIVISOR
    bound = max_geomean * max_geomean

    out: List[Tile] = []
    splits = 0
    for coarse in pbsm_partition(R, S, grid, keep_empty=keep_empty):
        stack = [coarse]
        while stack:
            tile = stack.pop()
            if tile.comparisons <= bound:
                out.append(tile)
                continue
            m = tile.tile_mbr
            if m.width / 2 <= min_w or m.height / 2 <= min_h:
                tile.flagged = True
                out.append(tile)
                continue
            splits += 1
            # 逆序入栈，使输出按 (左下, 右下, 左上, 右上) 排列
            stack.extend(reversed(_split_quadrants(tile, keep_empty)))

    logger.debug(
        "层次划分: 粗网格 %d×%d, 细分 %d 次, 输出 %d 个瓦片 (%d 个超界)",
        grid.cols, grid.rows, splits, len(out), sum(t.flagged for t in out),
    )
    return out


def _split_quadrants(tile: Tile, keep_empty: bool) -> List[Tile]:
    m = tile.tile_mbr
    xm = (m.xmin + m.xmax) / 2
    ym = (m.ymin + m.ymax) / 2
    children: List[Tile] = []
    for lower, (y0, y1) in ((True, (m.ymin, ym)), (False, (ym, m.ymax))):
        for left, (x0, x1) in ((True, (m.xmin, xm)), (False, (xm, m.xmax))):
            cm = MBR(x0, y0, x1, y1)
            child = Tile(
                tile_mbr=cm,
                last_col=tile.last_col and not left,
                last_row=tile.last_row and not lower,
                objects_r=[o for o in tile.objects_r if mbr_intersects(o.mbr, cm)],
                objects_s=[o for o in tile.objects_s if mbr_intersects(o.mbr, cm)],
                depth=tile.depth + 1,
            )
            if keep_empty or (child.objects_r and child.objects_s):
                children.append(child)
    return children


def _joiner_fn(tile_joiner: TileJoiner, axis: int) -> Callable[..., List[ObjectPair]]:
    if TileJoiner(tile_joiner) == TileJoiner.NESTED_LOOP:
        return lambda r, s, c: nested_loop_candidates(r, s, c)
    return lambda r, s, c: plane_sweep_candidates(r, s, axis, c)


def join_tile(
    tile: Tile,
    tile_joiner: TileJoiner = TileJoiner.NESTED_LOOP,
    counters: Optional[JoinCounters] = None,
    axis: int = AXIS_X,
) -> List[Pair]:
    """连接单个瓦片，只保留参考点落在本瓦片内的候选对"""
    candidates = _joiner_fn(tile_joiner, axis)(tile.objects_r, tile.objects_s, counters)
    return [
        (r.id, s.id)
        for r, s in candidates
        if point_in_tile(
            intersection_reference_point(r.mbr, s.mbr), tile.tile_mbr, tile.last_col, tile.last_row,
        )
    ]


def pbsm_emissions(
    tiles: Sequence[Tile],
    tile_joiner: TileJoiner = TileJoiner.NESTED_LOOP,
    workers: int = 1,
    policy: SchedulingPolicy = SchedulingPolicy.STATIC,
    counters: Optional[JoinCounters] = None,
    axis: int = AXIS_X,
) -> List[Pair]:
    """PBSM 阶段二在并集之前的输出（多重集），用于审计每对恰好输出一次"""
    check_workers(workers)

    def run(tile: Tile) -> Tuple[List[Pair], JoinCounters]:
        local = JoinCounters()
        return join_tile(tile, tile_joiner, local, axis), local

    emitted: List[Pair] = []
    for pairs, local in run_tasks(tiles, run, workers, policy):
        emitted.extend(pairs)
        if counters is not None:
            counters.merge(local)
    return emitted


def pbsm_join(
    tiles: Sequence[Tile],
    tile_joiner: TileJoiner = TileJoiner.NESTED_LOOP,
    workers: int = 1,
    policy: SchedulingPolicy = SchedulingPolicy.STATIC,
    counters: Optional[JoinCounters] = None,
) -> JoinResult:
    """PBSM 阶段二：逐瓦片连接并按参考点去重

    Args:
        tiles: 划分得到的瓦片
        tile_joiner: 瓦片内连接算法
        workers: worker 数
        policy: 调度策略
        counters: 可选插桩计数器
    """
    return JoinResult.from_pairs(pbsm_emissions(tiles, tile_joiner, workers, policy, counters))


def pbsm_1d(
    R: Sequence[SpatialObject],
    S: Sequence[SpatialObject],
    strips: int,
    workers: int = 1,
    policy: SchedulingPolicy = SchedulingPolicy.STATIC,
    counters: Optional[JoinCounters] = None,
) -> JoinResult:
    """一维 PBSM：按 x 切成竖条，条内沿 y 平面扫描，按参考点所在竖条去重"""
    if strips < 1:
        raise SpjoinError(
            ErrorCode.GRID_INVALID,
            f"竖条数必须 ≥ 1，实际为 {strips}",
            {"strips": strips},
        )
    check_workers(workers)
    if not R or not S:
        return JoinResult()
    tiles = pbsm_partition(R, S, uniform_grid_for(R, S, strips, 1))
    return JoinResult.from_pairs(
        pbsm_emissions(tiles, TileJoiner.PLANE_SWEEP, workers, policy, counters, axis=AXIS_Y)
    )
