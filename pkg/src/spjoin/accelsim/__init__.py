"""加速器周期级模拟器

连接单元（每周期一个谓词，三级流水线）、BFS 同步遍历调度器、PBSM 调度器、
任务队列管理器、突发缓冲与参数化存储模型；同时产出功能结果与周期统计。
"""

from .cost import channel_occupancy, fetch_cycles, unit_pair_cycles, write_cycles
from .engine import AcceleratorModel, Job, static_plan
from .memory import BurstBuffer, MemoryChannels, WriteCounter
from .models import CycleStats, LevelStats, SimConfig, SimOutcome
from .runner import sim_pbsm, sim_sync_traversal, sim_sync_traversal_files, write_path_bytes

__all__ = [
    "AcceleratorModel",
    "BurstBuffer",
    "CycleStats",
    "Job",
    "LevelStats",
    "MemoryChannels",
    "SimConfig",
    "SimOutcome",
    "WriteCounter",
    "channel_occupancy",
    "fetch_cycles",
    "sim_pbsm",
    "sim_sync_traversal",
    "sim_sync_traversal_files",
    "static_plan",
    "unit_pair_cycles",
    "write_cycles",
    "write_path_bytes",
]
