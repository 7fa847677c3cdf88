"""平面扫描连接

两侧按扫描轴下界排序（SortLeft），每步取两侧队首中较小者放入己方活动集，
从对方活动集剔除已离开扫描线的对象，再对剩余对象做另一轴的重叠检查。
"""

from __future__ import annotations

from typing import Callable, List, Optional, Sequence

from ..geometry import MBR, SpatialObject
from .models import JoinCounters, JoinResult
from .nested_loop import ObjectPair


AXIS_X = 0
AXIS_Y = 1


def _axis_fns(axis: int) -> tuple[Callable[[MBR], float], Callable[[MBR], float], Callable[[MBR, MBR], bool]]:
    if axis == AXIS_X:
        return (
            lambda m: m.xmin,
            lambda m: m.xmax,
            lambda a, b: a.ymax >= b.ymin and b.ymax >= a.ymin,
        )
    return (
        lambda m: m.ymin,
        lambda m: m.ymax,
        lambda a, b: a.xmax >= b.xmin and b.xmax >= a.xmin,
    )


def plane_sweep_candidates(
    r_objs: Sequence[SpatialObject],
    s_objs: Sequence[SpatialObject],
    axis: int = AXIS_X,
    counters: Optional[JoinCounters] = None,
) -> List[ObjectPair]:
    """平面扫描，返回所有相交的 (r, s) 对象对

    下界相等时先处理 R 侧对象；剔除条件为严格小于（上界 < 当前下界），
    因此仅边界接触的对象仍会被保留并报告。

    Args:
        r_objs: R 侧对象
        s_objs: S 侧对象
        axis: 扫描轴（0 = x，1 = y）
        counters: 可选插桩计数器（记录另一轴重叠检查次数）
    """
    lo, hi, overlaps = _axis_fns(axis)
    r_sorted = sorted(r_objs, key=lambda o: (lo(o.mbr), o.id))
    s_sorted = sorted(s_objs, key=lambda o: (lo(o.mbr), o.id))

    active_r: List[SpatialObject] = []
    active_s: List[SpatialObject] = []
    out: List[ObjectPair] = []
    tests = 0
    i = j = 0
    nr, ns = len(r_sorted), len(s_sorted)

    while i < nr or j < ns:
        if j >= ns or (i < nr and lo(r_sorted[i].mbr) <= lo(s_sorted[j].mbr)):
            cur = r_sorted[i]
            i += 1
            active_r.append(cur)
            sweep = lo(cur.mbr)
            active_s = [a for a in active_s if hi(a.mbr) >= sweep]
            tests += len(active_s)
            out.extend((cur, a) for a in active_s if overlaps(cur.mbr, a.mbr))
        else:
            cur = s_sorted[j]
            j += 1
            active_s.append(cur)
            sweep = lo(cur.mbr)
            active_r = [a for a in active_r if hi(a.mbr) >= sweep]
            tests += len(active_r)
            out.extend((a, cur) for a in active_r if overlaps(a.mbr, cur.mbr))

    if counters is not None:
        counters.y_overlap_tests += tests
        counters.predicate_evals += tests
    return out


def plane_sweep_join(
    r_objs: Sequence[SpatialObject],
    s_objs: Sequence[SpatialObject],
    counters: Optional[JoinCounters] = None,
    axis: int = AXIS_X,
) -> JoinResult:
    """平面扫描空间连接，结果与嵌套循环完全一致"""
    return JoinResult.from_pairs(
        (r.id, s.id) for r, s in plane_sweep_candidates(r_objs, s_objs, axis, counters)
    )
