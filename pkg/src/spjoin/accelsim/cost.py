"""连接单元周期代价模型

一个节点对的周期数 = 取数 + n_r·n_s（每周期一个谓词）+ 流水线深度。
两个节点经各自独立的读通路并行取回，取数时间由较大的节点决定。
"""

from __future__ import annotations

import math

from ..errors import ErrorCode, SpjoinError
from .models import SimConfig


def fetch_cycles(n_r: int, n_s: int, cfg: SimConfig) -> int:
    """连接单元看到的取数延迟：L + ⌈max(n_r, n_s)·entry / W⌉"""
    return cfg.mem_latency_cycles + math.ceil(max(n_r, n_s) * cfg.entry_bytes / cfg.mem_bw_bytes_per_cycle)


def channel_occupancy(n_r: int, n_s: int, cfg: SimConfig) -> int:
    """一次节点对取数占用共享读通道的周期数

    两个节点的数据都要经过同一 DRAM 通道：L + ⌈(n_r + n_s)·entry / W⌉。
    """
    return cfg.mem_latency_cycles + math.ceil((n_r + n_s) * cfg.entry_bytes / cfg.mem_bw_bytes_per_cycle)


def write_cycles(num_bytes: int, cfg: SimConfig) -> int:
    """一次突发写占用写通道的周期数"""
    return math.ceil(num_bytes / cfg.mem_bw_bytes_per_cycle)


def unit_pair_cycles(n_r: int, n_s: int, cfg: SimConfig) -> int:
    """单个连接单元处理一个节点对所需周期

    Args:
        n_r: R 侧条目数
        n_s: S 侧条目数
        cfg: 模拟参数

    Returns:
        fetch + n_r·n_s + pipeline_depth
    """
    if n_r < 1 or n_s < 1:
        raise SpjoinError(
            ErrorCode.SIM_INVALID_INPUT,
            f"节点条目数必须 ≥ 1，实际为 ({n_r}, {n_s})",
            {"n_r": n_r, "n_s": n_s},
        )
    return fetch_cycles(n_r, n_s, cfg) + n_r * n_s + cfg.pipeline_depth
