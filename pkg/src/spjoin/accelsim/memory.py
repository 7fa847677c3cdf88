"""存储子系统模型

包含:
- MemoryChannels: 共享读 / 写通道（simpy.Resource），请求按到达先后授权
- BurstBuffer: 连接单元后的突发缓冲，达到阈值或节点对结束时输出一个突发
- WriteCounter: 物理地址自增计数器，为每个结果分配唯一且连续的写偏移
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Generator, List

import simpy

from ..errors import ErrorCode, SpjoinError


class MemoryChannels:
    """一组同构的存储通道

    申请者拿到通道后立即继续执行，通道本身在 occupancy 周期后由后台进程释放。
    """

    def __init__(self, env: simpy.Environment, channels: int = 1):
        """初始化通道组

        Args:
            env: 模拟环境
            channels: 通道数
        """
        self.env = env
        self.resource = simpy.Resource(env, capacity=channels)
        self.busy_cycles = 0
        self._holds: List[simpy.Process] = []

    def request(self) -> simpy.resources.resource.Request:
        return self.resource.request()

    def occupy(self, req: simpy.resources.resource.Request, cycles: int) -> None:
        """已授权的请求占用通道 cycles 个周期"""
        self.busy_cycles += cycles
        self._holds.append(self.env.process(self._hold(req, cycles)))

    def _hold(self, req: simpy.resources.resource.Request, cycles: int) -> Generator:
        yield self.env.timeout(cycles)
        self.resource.release(req)

    def drain(self) -> simpy.events.Condition:
        """所有已授权请求释放通道时触发"""
        pending = [p for p in self._holds if p.is_alive]
        self._holds = []
        return self.env.all_of(pending)


@dataclass
class BurstBuffer:
    """突发缓冲"""
    threshold_bytes: int
    item_bytes: int

    @property
    def items_per_burst(self) -> int:
        return max(1, self.threshold_bytes // self.item_bytes)

    def bursts(self, count: int) -> List[int]:
        """一个节点对产生 count 个结果对时输出的突发（以结果对个数计）

        满阈值的突发在连接过程中输出，剩余部分在节点对结束时输出。
        """
        if count <= 0:
            return []
        full, rest = divmod(count, self.items_per_burst)
        out = [self.items_per_burst] * full
        if rest:
            out.append(rest)
        return out


@dataclass
class WriteCounter:
    """物理地址自增计数器

    写区域按 reserve() 预留的条目数划定；assign() 越过区域末端，
    或 verify_drained() 时仍有预留未写，都视为计数器违例。
    """
    item_bytes: int
    base: int = 0
    record: bool = False
    next_offset: int = field(default=0, init=False)
    limit: int = field(default=0, init=False)
    offsets: List[int] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.next_offset = self.base
        self.limit = self.base

    def reserve(self, count: int) -> None:
        """为即将写出的 count 个条目扩展写区域"""
        self.limit += count * self.item_bytes

    def assign(self, count: int) -> int:
        """为连续 count 个条目分配地址，返回首个偏移"""
        first = self.next_offset
        end = first + count * self.item_bytes
        if end > self.limit:
            raise SpjoinError(
                ErrorCode.SIM_WRITE_COUNTER_VIOLATION,
                f"写偏移 {end} 越过写区域末端 {self.limit}",
                {"offset": end, "limit": self.limit},
            )
        if self.record:
            self.offsets.extend(range(first, end, self.item_bytes))
        self.next_offset = end
        return first

    def verify_drained(self) -> None:
        if self.next_offset != self.limit:
            raise SpjoinError(
                ErrorCode.SIM_WRITE_COUNTER_VIOLATION,
                f"写区域未写满：停在 {self.next_offset}，期望 {self.limit}",
                {"offset": self.next_offset, "limit": self.limit},
            )

    @property
    def bytes_written(self) -> int:
        return self.next_offset - self.base
