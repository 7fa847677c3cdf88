"""离散事件引擎

每个连接单元是一个 simpy 进程：领取任务，向共享读通道申请取数，取数完成后
每周期评估一个谓词；结果按突发放入结果 FIFO，由写单元进程经共享写通道写回内存。
写路径与计算经 FIFO 解耦，不阻塞连接单元。
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Generator, List, Optional, Sequence, Tuple

import simpy

from ..joinalgos import SchedulingPolicy
from .cost import channel_occupancy, fetch_cycles, write_cycles
from .memory import BurstBuffer, MemoryChannels, WriteCounter
from .models import CycleStats, LevelStats, SimConfig


logger = logging.getLogger(__name__)

# 结果 FIFO 中的一个突发：(结果对个数, 是否为最终结果)
Burst = Tuple[int, bool]


@dataclass(frozen=True, slots=True)
class Job:
    """分派给连接单元的一个任务

    Attributes:
        n_r: R 侧参与比较的条目数
        n_s: S 侧参与比较的条目数
        out_count: 产生的输出对数
        final: 输出为最终结果（True）还是下一层任务（False）
    """
    n_r: int
    n_s: int
    out_count: int
    final: bool


def estimated_cycles(job: Job, cfg: SimConfig) -> int:
    """不计通道争用时单元处理该任务的周期"""
    return fetch_cycles(job.n_r, job.n_s, cfg) + job.n_r * job.n_s + cfg.pipeline_depth


def static_plan(jobs: Sequence[Job], cfg: SimConfig) -> List[List[int]]:
    """静态策略：按任务队列顺序，把每个任务预先分给估计负载最小的单元

    负载相同时取编号最小的单元，因此等代价任务退化为轮询分派。
    """
    units = cfg.num_join_units
    load = [0] * units
    plan: List[List[int]] = [[] for _ in range(units)]
    for idx, job in enumerate(jobs):
        u = min(range(units), key=lambda k: (load[k], k))
        plan[u].append(idx)
        load[u] += estimated_cycles(job, cfg)
    return plan


class AcceleratorModel:
    """连接单元阵列 + 调度器 + 读写通道 + 任务队列管理器"""

    def __init__(self, cfg: SimConfig, record_offsets: bool = False):
        """初始化模型

        Args:
            cfg: 模拟参数
            record_offsets: 是否记录每个结果的写偏移
        """
        self.cfg = cfg
        self.env = simpy.Environment()
        self.read_channels = MemoryChannels(self.env, cfg.read_channels)
        self.write_channels = MemoryChannels(self.env, cfg.write_channels)
        self.burst = BurstBuffer(cfg.burst_threshold_bytes, cfg.result_pair_bytes)
        self.result_counter = WriteCounter(cfg.result_pair_bytes, record=record_offsets)
        self.stats = CycleStats(per_unit_busy=[0] * cfg.num_join_units)

    @property
    def now(self) -> int:
        return int(self.env.now)

    def run_phase(self, jobs: Sequence[Job]) -> LevelStats:
        """执行一层（或 PBSM 的唯一一个阶段）的全部任务，直到读写通道排空

        Args:
            jobs: 本层任务，按任务队列顺序

        Returns:
            本层统计
        """
        level = LevelStats(tasks=len(jobs), predicate_evals=sum(j.n_r * j.n_s for j in jobs))
        if not jobs:
            return level

        start = self.now
        # 本层的中间任务从任务队列区域的起点开始写
        task_counter = WriteCounter(self.cfg.result_pair_bytes)
        for job in jobs:
            (self.result_counter if job.final else task_counter).reserve(job.out_count)

        self.env.run(until=self.env.process(self._phase(jobs, task_counter)))

        task_counter.verify_drained()
        self.result_counter.verify_drained()
        self.stats.task_bytes_written += task_counter.bytes_written
        self.stats.result_bytes_written = self.result_counter.bytes_written
        level.cycles = self.now - start
        self.stats.per_level.append(level)
        logger.debug(
            "阶段 %d: %d 个任务, %d 次谓词, %d 周期",
            len(self.stats.per_level) - 1, level.tasks, level.predicate_evals, level.cycles,
        )
        return level

    def _dispatcher(self, jobs: Sequence[Job]) -> Callable[[int], Optional[int]]:
        """返回 单元号 -> 下一个任务下标 的领取函数"""
        if SchedulingPolicy(self.cfg.scheduling_policy) == SchedulingPolicy.STATIC:
            queues = [iter(q) for q in static_plan(jobs, self.cfg)]
            return lambda u: next(queues[u], None)
        # 动态策略：最先空闲的单元领取共享队列中的下一个任务
        shared = iter(range(len(jobs)))
        return lambda u: next(shared, None)

    def _phase(self, jobs: Sequence[Job], task_counter: WriteCounter) -> Generator:
        fifo: simpy.Store = simpy.Store(self.env)
        take = self._dispatcher(jobs)
        units = [
            self.env.process(self._join_unit(u, jobs, take, fifo))
            for u in range(self.cfg.num_join_units)
        ]
        writer = self.env.process(self._write_unit(fifo, task_counter))

        yield self.env.all_of(units)
        yield fifo.put(None)
        yield writer
        yield self.read_channels.drain()

    def _join_unit(
        self,
        u: int,
        jobs: Sequence[Job],
        take: Callable[[int], Optional[int]],
        fifo: simpy.Store,
    ) -> Generator:
        cfg = self.cfg
        env = self.env
        while True:
            idx = take(u)
            if idx is None:
                return
            job = jobs[idx]

            requested = env.now
            req = self.read_channels.request()
            yield req
            granted = env.now
            self.read_channels.occupy(req, channel_occupancy(job.n_r, job.n_s, cfg))

            fetch = fetch_cycles(job.n_r, job.n_s, cfg)
            compute = job.n_r * job.n_s + cfg.pipeline_depth
            yield env.timeout(fetch + compute)

            self.stats.stall_cycles += granted - requested
            self.stats.mem_read_cycles += fetch
            self.stats.compute_cycles += compute
            self.stats.per_unit_busy[u] += env.now - granted

            for count in self.burst.bursts(job.out_count):
                yield fifo.put((count, job.final))

    def _write_unit(self, fifo: simpy.Store, task_counter: WriteCounter) -> Generator:
        """任务队列管理器 / 结果写单元：按到达先后取突发，申请写通道"""
        cfg = self.cfg
        while True:
            burst: Optional[Burst] = yield fifo.get()
            if burst is None:
                break
            count, final = burst
            req = self.write_channels.request()
            yield req
            self.write_channels.occupy(req, write_cycles(count * cfg.result_pair_bytes, cfg))
            self.stats.flush_count += 1
            if final:
                self.result_counter.assign(count)
                self.stats.write_offsets_checked += count
            else:
                task_counter.assign(count)
        yield self.write_channels.drain()

    def finish(self) -> CycleStats:
        """结束模拟，返回统计"""
        self.stats.total_cycles = self.now
        self.stats.mem_write_cycles = self.write_channels.busy_cycles
        self.stats.read_channel_busy = self.read_channels.busy_cycles
        return self.stats
