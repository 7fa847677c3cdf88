"""加速器模拟器数据模型

包含:
- SimConfig: 时序模型参数
- LevelStats / CycleStats: 周期统计
- SimOutcome: 功能结果 + 统计 + 延迟
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

from pydantic import BaseModel, ConfigDict, Field

from ..joinalgos import JoinResult, SchedulingPolicy


class SimConfig(BaseModel):
    """加速器参数

    默认值：随机访存延迟 10 周期、突发宽度 64 字节/周期、3 级流水线、
    4 KB 突发阈值、200 MHz 时钟。
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    num_join_units: int = Field(default=16, ge=1)
    mem_latency_cycles: int = Field(default=10, gt=0)
    mem_bw_bytes_per_cycle: int = Field(default=64, gt=0)
    entry_bytes: int = Field(default=20, gt=0)
    result_pair_bytes: int = Field(default=8, gt=0)
    pipeline_depth: int = Field(default=3, ge=1)
    burst_threshold_bytes: int = Field(default=4096, gt=0)
    clock_hz: int = Field(default=200_000_000, gt=0)
    scheduling_policy: SchedulingPolicy = SchedulingPolicy.STATIC
    read_channels: int = Field(default=1, ge=1)
    write_channels: int = Field(default=1, ge=1)
    pcie_bytes_per_second: int = Field(default=12_000_000_000, gt=0)


class LevelStats(BaseModel):
    """单层（或 PBSM 单阶段）统计"""
    tasks: int = 0
    predicate_evals: int = 0
    cycles: int = 0


class CycleStats(BaseModel):
    """模拟输出的周期统计"""
    total_cycles: int = 0
    per_level: List[LevelStats] = Field(default_factory=list)
    mem_read_cycles: int = 0
    mem_write_cycles: int = 0
    compute_cycles: int = 0
    stall_cycles: int = 0
    results_emitted: int = 0
    result_bytes_written: int = 0
    task_bytes_written: int = 0
    flush_count: int = 0
    write_offsets_checked: int = 0
    read_channel_busy: int = 0
    per_unit_busy: List[int] = Field(default_factory=list)

    @property
    def predicate_evals(self) -> int:
        return sum(level.predicate_evals for level in self.per_level)

    @property
    def tasks(self) -> int:
        return sum(level.tasks for level in self.per_level)

    @property
    def cycles_per_predicate(self) -> float:
        evals = self.predicate_evals
        return self.total_cycles / evals if evals else 0.0


@dataclass
class SimOutcome:
    """一次模拟的完整产出

    latency_seconds = total_cycles / clock_hz；主机与加速器间的传输时间单独记录在
    transfer_seconds，不计入 total_cycles。
    """
    result: JoinResult
    stats: CycleStats
    latency_seconds: float
    transfer_seconds: float = 0.0
