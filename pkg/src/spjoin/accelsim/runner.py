"""模拟入口

- sim_sync_traversal: BFS 同步遍历调度器（逐层屏障，中间任务经任务队列管理器写回）
- sim_pbsm: PBSM 调度器（单阶段，无中间任务读写，参考点去重为组合逻辑、不额外耗时）

连接单元的功能部分用 numpy 向量化求值，结果与软件算法逐对一致。
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import List, Sequence, Set, Tuple, Union

import numpy as np

from ..errors import ErrorCode, SpjoinError
from ..geometry import intersect_matrix, mbr_array
from ..joinalgos import JoinResult, Pair, Tile
from ..rtree import RTree, deserialize, require_valid
from ..rtree.codec import node_record_size
from .engine import AcceleratorModel, Job
from .models import CycleStats, SimConfig, SimOutcome


logger = logging.getLogger(__name__)

# (条目坐标 [k, 4], 条目引用 [k])
NodeArrays = Tuple[np.ndarray, np.ndarray]

_HEADER_BYTES = 24


def node_arrays(tree: RTree) -> List[NodeArrays]:
    """把每个节点的条目转换为 numpy 数组（float64 保证与软件比较逐位一致）"""
    out: List[NodeArrays] = []
    for node in tree.nodes:
        coords = np.array([e.mbr.as_tuple() for e in node.entries], dtype=np.float64).reshape(-1, 4)
        refs = np.array([e.ref for e in node.entries], dtype=np.int64)
        out.append((coords, refs))
    return out


def _bounding(coords: np.ndarray) -> np.ndarray:
    return np.array(
        [[coords[:, 0].min(), coords[:, 1].min(), coords[:, 2].max(), coords[:, 3].max()]],
        dtype=np.float64,
    )


def _check_tree(tree: RTree, side: str) -> None:
    try:
        require_valid(tree)
    except SpjoinError as e:
        e.details["side"] = side
        raise


def _outcome(result: Set[Pair], stats: CycleStats, cfg: SimConfig, transfer_bytes: int) -> SimOutcome:
    return SimOutcome(
        result=JoinResult(result),
        stats=stats,
        latency_seconds=stats.total_cycles / cfg.clock_hz,
        transfer_seconds=transfer_bytes / cfg.pcie_bytes_per_second,
    )


def sim_sync_traversal(tree_r: RTree, tree_s: RTree, cfg: SimConfig) -> SimOutcome:
    """模拟 BFS 同步遍历

    每层的节点对由调度器分派给连接单元；非叶层的相交节点对作为下一层任务
    写入任务队列，层 k+1 在层 k 完全排空后才开始。

    Args:
        tree_r: R 侧 R-tree
        tree_s: S 侧 R-tree
        cfg: 模拟参数

    Returns:
        模拟产出

    Raises:
        SpjoinError: 输入树校验失败（TREE_INVALID）
    """
    _check_tree(tree_r, "R")
    _check_tree(tree_s, "S")
    arrays_r = node_arrays(tree_r)
    arrays_s = node_arrays(tree_s)

    model = AcceleratorModel(cfg)
    result: Set[Pair] = set()
    tasks: List[Tuple[int, int]] = [(tree_r.root_index, tree_s.root_index)]

    while tasks:
        jobs: List[Job] = []
        next_tasks: List[Tuple[int, int]] = []
        for ri, si in tasks:
            leaf_r = tree_r.nodes[ri].is_leaf
            leaf_s = tree_s.nodes[si].is_leaf
            coords_r, refs_r = arrays_r[ri]
            coords_s, refs_s = arrays_s[si]

            if leaf_r and leaf_s:
                ii, jj = np.nonzero(intersect_matrix(coords_r, coords_s))
                result.update(zip(refs_r[ii].tolist(), refs_s[jj].tolist()))
                jobs.append(Job(len(refs_r), len(refs_s), len(ii), True))
            elif not leaf_r and not leaf_s:
                ii, jj = np.nonzero(intersect_matrix(coords_r, coords_s))
                next_tasks.extend(zip(refs_r[ii].tolist(), refs_s[jj].tolist()))
                jobs.append(Job(len(refs_r), len(refs_s), len(ii), False))
            elif leaf_r:
                # 叶节点以其 MBR 作为单个条目，与目录节点的子节点比较
                _, jj = np.nonzero(intersect_matrix(_bounding(coords_r), coords_s))
                next_tasks.extend((ri, c) for c in refs_s[jj].tolist())
                jobs.append(Job(1, len(refs_s), len(jj), False))
            else:
                ii, _ = np.nonzero(intersect_matrix(coords_r, _bounding(coords_s)))
                next_tasks.extend((c, si) for c in refs_r[ii].tolist())
                jobs.append(Job(len(refs_r), 1, len(ii), False))

        model.run_phase(jobs)
        tasks = next_tasks

    stats = model.finish()
    stats.results_emitted = len(result)
    transfer = sum(
        _HEADER_BYTES + len(t.nodes) * node_record_size(t.node_size) for t in (tree_r, tree_s)
    )
    logger.debug("同步遍历模拟完成: %d 层, %d 周期", len(stats.per_level), stats.total_cycles)
    return _outcome(result, stats, cfg, transfer)


def sim_sync_traversal_files(
    path_r: Union[str, Path],
    path_s: Union[str, Path],
    cfg: SimConfig,
) -> SimOutcome:
    """从序列化树文件运行同步遍历模拟"""
    return sim_sync_traversal(deserialize(path_r), deserialize(path_s), cfg)


def _tile_arrays(objects: Sequence) -> NodeArrays:
    coords = mbr_array(objects)
    ids = np.array([o.id for o in objects], dtype=np.int64)
    return coords, ids


def sim_pbsm(tiles: Sequence[Tile], cfg: SimConfig) -> SimOutcome:
    """模拟 PBSM 调度器

    每个瓦片是一个任务，连接单元做嵌套循环比较，并按参考点规则在线去重。

    Args:
        tiles: 划分得到的瓦片
        cfg: 模拟参数
    """
    model = AcceleratorModel(cfg)
    result: Set[Pair] = set()
    jobs: List[Job] = []
    transfer = 0
    emitted = 0

    for tile in tiles:
        if not tile.objects_r or not tile.objects_s:
            continue
        coords_r, ids_r = _tile_arrays(tile.objects_r)
        coords_s, ids_s = _tile_arrays(tile.objects_s)
        ii, jj = np.nonzero(intersect_matrix(coords_r, coords_s))

        # 参考点：交集矩形的最小角；瓦片半开，网格末列 / 末行闭合
        px = np.maximum(coords_r[ii, 0], coords_s[jj, 0])
        py = np.maximum(coords_r[ii, 1], coords_s[jj, 1])
        m = tile.tile_mbr
        in_x = (px >= m.xmin) & ((px <= m.xmax) if tile.last_col else (px < m.xmax))
        in_y = (py >= m.ymin) & ((py <= m.ymax) if tile.last_row else (py < m.ymax))
        keep = in_x & in_y

        kept = list(zip(ids_r[ii[keep]].tolist(), ids_s[jj[keep]].tolist()))
        result.update(kept)
        emitted += len(kept)
        jobs.append(Job(len(ids_r), len(ids_s), len(kept), True))
        transfer += (len(ids_r) + len(ids_s)) * cfg.entry_bytes

    model.run_phase(jobs)
    stats = model.finish()
    stats.results_emitted = emitted
    logger.debug("PBSM 模拟完成: %d 个瓦片任务, %d 周期", len(jobs), stats.total_cycles)
    return _outcome(result, stats, cfg, transfer)


def write_path_bytes(stats: CycleStats, cfg: SimConfig) -> int:
    """结果写路径的总字节数

    Raises:
        SpjoinError: 物理地址计数器的终值与结果数不符
    """
    expected = stats.results_emitted * cfg.result_pair_bytes
    if stats.result_bytes_written != expected:
        raise SpjoinError(
            ErrorCode.SIM_WRITE_COUNTER_VIOLATION,
            f"写计数器推进了 {stats.result_bytes_written} 字节，期望 {expected}",
            {"written": stats.result_bytes_written, "expected": expected},
        )
    return expected
