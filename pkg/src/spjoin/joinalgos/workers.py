"""数据并行执行器

把一批独立任务交给多个线程处理，支持两种调度策略：
- static: 按 worker 下标把任务列表切成连续块
- dynamic: 共享计数器，空闲 worker 领取下一个任务

返回值按任务下标排列，调用方的合并步骤因此与调度无关。
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from ..errors import ErrorCode, SpjoinError
from .models import SchedulingPolicy


T = TypeVar("T")
R = TypeVar("R")


def check_workers(workers: int) -> None:
    if workers < 1:
        raise SpjoinError(
            ErrorCode.WORKERS_INVALID,
            f"worker 数必须 ≥ 1，实际为 {workers}",
            {"workers": workers},
        )


def run_tasks(
    items: Sequence[T],
    fn: Callable[[T], R],
    workers: int = 1,
    policy: SchedulingPolicy = SchedulingPolicy.STATIC,
) -> List[R]:
    """并行处理任务

    Args:
        items: 任务列表
        fn: 处理单个任务的函数（必须线程安全）
        workers: worker 数
        policy: 调度策略

    Returns:
        与 items 一一对应的结果列表
    """
    check_workers(workers)
    n = len(items)
    if workers == 1 or n <= 1:
        return [fn(item) for item in items]

    results: List[Optional[R]] = [None] * n
    pool_size = min(workers, n)

    if SchedulingPolicy(policy) == SchedulingPolicy.STATIC:
        bounds = [n * w // pool_size for w in range(pool_size + 1)]

        def run_block(w: int) -> None:
            for i in range(bounds[w], bounds[w + 1]):
                results[i] = fn(items[i])

        with ThreadPoolExecutor(max_workers=pool_size) as pool:
            for future in [pool.submit(run_block, w) for w in range(pool_size)]:
                future.result()
    else:
        lock = threading.Lock()
        cursor = [0]

        def next_index() -> int:
            with lock:
                i = cursor[0]
                cursor[0] += 1
                return i

        def run_dynamic() -> None:
            while (i := next_index()) < n:
                results[i] = fn(items[i])

        with ThreadPoolExecutor(max_workers=pool_size) as pool:
            for future in [pool.submit(run_dynamic) for _ in range(pool_size)]:
                future.result()

    return results  # type: ignore[return-value]
