"""MBR 谓词

过滤阶段的基础原语：相交判断、PBSM 参考点规则、瓦片归属。
所有函数均为纯函数，可被任意数量的并发 worker 调用。
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..errors import ErrorCode, SpjoinError
from .models import MBR, Point, SpatialObject


def mbr_intersects(a: MBR, b: MBR) -> bool:
    """闭区间相交判断（共享边或角也算相交）

    与硬件连接单元的四个比较器一致：
    r.right ≥ s.left, s.right ≥ r.left, r.top ≥ s.bottom, s.top ≥ r.bottom
    """
    return (
        a.xmax >= b.xmin
        and b.xmax >= a.xmin
        and a.ymax >= b.ymin
        and b.ymax >= a.ymin
    )


def mbr_array(objects: Sequence[SpatialObject]) -> np.ndarray:
    """对象 MBR 组成的 [n, 4] float64 数组，列为 xmin, ymin, xmax, ymax"""
    return np.array([o.mbr.as_tuple() for o in objects], dtype=np.float64).reshape(-1, 4)


def intersect_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """两组 MBR 两两做闭区间相交判断，[i, j] 与 mbr_intersects(a[i], b[j]) 一致

    四个比较器合并为两次广播比较：a 的上界 ≥ b 的下界，且 b 的上界 ≥ a 的下界。
    """
    a_lo = a[:, None, :2]
    a_hi = a[:, None, 2:]
    b_lo = b[None, :, :2]
    b_hi = b[None, :, 2:]
    ok = (a_hi >= b_lo) & (b_hi >= a_lo)
    return ok[..., 0] & ok[..., 1]


def mbr_contains(outer: MBR, inner: MBR) -> bool:
    """闭区间包含判断"""
    return (
        outer.xmin <= inner.xmin
        and outer.ymin <= inner.ymin
        and inner.xmax <= outer.xmax
        and inner.ymax <= outer.ymax
    )


def mbr_union(mbrs: Iterable[MBR]) -> MBR:
    """逐坐标取 min/max 得到紧致并集

    Raises:
        SpjoinError: 输入为空
    """
    it = iter(mbrs)
    first = next(it, None)
    if first is None:
        raise SpjoinError(ErrorCode.MBR_INVALID, "不能对空集合求 MBR 并集")

    xmin, ymin, xmax, ymax = first.xmin, first.ymin, first.xmax, first.ymax
    for m in it:
        if m.xmin < xmin:
            xmin = m.xmin
        if m.ymin < ymin:
            ymin = m.ymin
        if m.xmax > xmax:
            xmax = m.xmax
        if m.ymax > ymax:
            ymax = m.ymax
    return MBR(xmin, ymin, xmax, ymax)


def intersection_reference_point(a: MBR, b: MBR) -> Point:
    """相交区域的参考点：取交集矩形的最小 x / 最小 y 角

    Raises:
        SpjoinError: 两个 MBR 不相交
    """
    if not mbr_intersects(a, b):
        raise SpjoinError(
            ErrorCode.REFERENCE_POINT_UNDEFINED,
            "MBR 不相交，参考点无定义",
            {"a": list(a.as_tuple()), "b": list(b.as_tuple())},
        )
    return Point(max(a.xmin, b.xmin), max(a.ymin, b.ymin))


def point_in_tile(p: Point, tile: MBR, is_last_col: bool, is_last_row: bool) -> bool:
    """半开区间瓦片归属 [xmin, xmax) × [ymin, ymax)

    网格最后一列 / 最后一行在最大边上闭合，保证网格区域内每个点恰好属于一个瓦片。
    """
    if p.x < tile.xmin or p.y < tile.ymin:
        return False
    in_x = p.x <= tile.xmax if is_last_col else p.x < tile.xmax
    in_y = p.y <= tile.ymax if is_last_row else p.y < tile.ymax
    return in_x and in_y
