"""嵌套循环连接

对叉积一次性广播求值四个比较器，耗时只取决于两侧对象数，与相交对数无关。
也是所有其他算法的判定基准。
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..geometry import SpatialObject, intersect_matrix, mbr_array
from .models import JoinCounters, JoinResult


ObjectPair = Tuple[SpatialObject, SpatialObject]

# 单次广播求值的对数上限
_BLOCK_PAIRS = 1 << 22


def nested_loop_mask(
    r_objs: Sequence[SpatialObject],
    s_objs: Sequence[SpatialObject],
    counters: Optional[JoinCounters] = None,
) -> np.ndarray:
    """[len(r), len(s)] 布尔矩阵，[i, j] 为 r_objs[i] 与 s_objs[j] 是否相交"""
    if counters is not None:
        counters.predicate_evals += len(r_objs) * len(s_objs)
    return intersect_matrix(mbr_array(r_objs), mbr_array(s_objs))


def nested_loop_count(
    r_objs: Sequence[SpatialObject],
    s_objs: Sequence[SpatialObject],
    counters: Optional[JoinCounters] = None,
) -> int:
    """相交对数，不构造结果对"""
    return int(np.count_nonzero(nested_loop_mask(r_objs, s_objs, counters)))


def nested_loop_candidates(
    r_objs: Sequence[SpatialObject],
    s_objs: Sequence[SpatialObject],
    counters: Optional[JoinCounters] = None,
) -> List[ObjectPair]:
    """返回所有相交的对象对，按 (r 下标, s 下标) 排列"""
    if counters is not None:
        counters.predicate_evals += len(r_objs) * len(s_objs)
    r_arr = mbr_array(r_objs)
    s_arr = mbr_array(s_objs)
    step = max(1, _BLOCK_PAIRS // max(1, len(s_objs)))
    out: List[ObjectPair] = []
    for start in range(0, len(r_objs), step):
        ii, jj = np.nonzero(intersect_matrix(r_arr[start:start + step], s_arr))
        out.extend((r_objs[start + i], s_objs[j]) for i, j in zip(ii.tolist(), jj.tolist()))
    return out


def nested_loop_join(
    r_objs: Sequence[SpatialObject],
    s_objs: Sequence[SpatialObject],
    counters: Optional[JoinCounters] = None,
) -> JoinResult:
    """嵌套循环空间连接"""
    return JoinResult.from_pairs(
        (r.id, s.id) for r, s in nested_loop_candidates(r_objs, s_objs, counters)
    )
