"""墙钟计时：预热若干次，再取若干次运行的中位数"""

from __future__ import annotations

import statistics
import time
from typing import Callable, Tuple, TypeVar


T = TypeVar("T")


def measure(fn: Callable[[], T], warmup: int = 1, repetitions: int = 3) -> Tuple[int, T]:
    """计时

    Args:
        fn: 被测函数
        warmup: 预热次数
        repetitions: 计时次数

    Returns:
        (中位耗时纳秒, 最后一次运行的返回值)
    """
    for _ in range(warmup):
        fn()
    samples = []
    result: T
    for _ in range(max(1, repetitions)):
        start = time.perf_counter_ns()
        result = fn()
        samples.append(time.perf_counter_ns() - start)
    return int(statistics.median(samples)), result
