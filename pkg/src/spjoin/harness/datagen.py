"""合成数据集生成

使用 numpy 的 PCG64 生成器；种子经 SeedSequence 按固定大小的分块派生子种子，
因此结果只取决于 (spec, seed)，与分块是否并行生成无关。
"""

from __future__ import annotations

import logging
from typing import List

import numpy as np

from ..errors import ErrorCode, SpjoinError
from ..geometry import SpatialObject, objects_from_arrays
from .models import DatasetKind, DatasetSpec


logger = logging.getLogger(__name__)

CHUNK_SIZE = 1 << 16


def _chunk_rngs(seed: int, n: int) -> List[np.random.Generator]:
    chunks = (n + CHUNK_SIZE - 1) // CHUNK_SIZE
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(chunks)]


def _corner_columns(spec: DatasetSpec, rng: np.random.Generator, count: int) -> tuple[np.ndarray, np.ndarray]:
    xmin, ymin, xmax, ymax = spec.region
    w, h = spec.object_size
    x0 = xmin + rng.random(count) * (xmax - w - xmin)
    y0 = ymin + rng.random(count) * (ymax - h - ymin)
    return x0, y0


def gen_uniform(spec: DatasetSpec) -> List[SpatialObject]:
    """均匀分布的矩形或点

    最小角在 [xmin, xmax - w] × [ymin, ymax - h] 内均匀分布，
    ID 为 0..n-1，坐标为 32 位浮点。

    Args:
        spec: 数据集描述（kind 为 uniform-rect 或 uniform-point）

    Returns:
        对象列表
    """
    w, h = spec.object_size
    xs: List[np.ndarray] = []
    ys: List[np.ndarray] = []
    for k, rng in enumerate(_chunk_rngs(spec.seed, spec.n)):
        count = min(CHUNK_SIZE, spec.n - k * CHUNK_SIZE)
        x0, y0 = _corner_columns(spec, rng, count)
        xs.append(x0)
        ys.append(y0)
    return _assemble(spec, np.concatenate(xs), np.concatenate(ys), w, h)


def gen_clustered(spec: DatasetSpec) -> List[SpatialObject]:
    """高斯聚簇分布

    簇中心在区域内均匀分布，对象最小角围绕所属中心按正态分布放置，
    超出区域的坐标截断到合法范围内。
    """
    xmin, ymin, xmax, ymax = spec.region
    w, h = spec.object_size
    center_rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([spec.seed, spec.clusters])))
    cx = xmin + center_rng.random(spec.clusters) * (xmax - w - xmin)
    cy = ymin + center_rng.random(spec.clusters) * (ymax - h - ymin)

    xs: List[np.ndarray] = []
    ys: List[np.ndarray] = []
    for k, rng in enumerate(_chunk_rngs(spec.seed, spec.n)):
        count = min(CHUNK_SIZE, spec.n - k * CHUNK_SIZE)
        which = rng.integers(0, spec.clusters, size=count)
        xs.append(np.clip(rng.normal(cx[which], spec.cluster_sigma), xmin, xmax - w))
        ys.append(np.clip(rng.normal(cy[which], spec.cluster_sigma), ymin, ymax - h))
    return _assemble(spec, np.concatenate(xs), np.concatenate(ys), w, h)


def _assemble(spec: DatasetSpec, x0: np.ndarray, y0: np.ndarray, w: float, h: float) -> List[SpatialObject]:
    # 舍入后再钳位，保证对象仍位于区域内
    xmax = np.float32(spec.region[2])
    ymax = np.float32(spec.region[3])
    x1 = np.minimum((x0 + w).astype(np.float32), xmax)
    y1 = np.minimum((y0 + h).astype(np.float32), ymax)
    x0_32 = np.minimum(x0.astype(np.float32), x1)
    y0_32 = np.minimum(y0.astype(np.float32), y1)
    objects = objects_from_arrays(range(spec.n), x0_32, y0_32, x1, y1)
    logger.debug("生成 %s 数据集: %d 个对象, seed=%d", spec.kind.value, spec.n, spec.seed)
    return objects


def generate(spec: DatasetSpec) -> List[SpatialObject]:
    """按描述生成（或读取）数据集"""
    kind = DatasetKind(spec.kind)
    if kind in (DatasetKind.UNIFORM_RECT, DatasetKind.UNIFORM_POINT):
        return gen_uniform(spec)
    if kind == DatasetKind.CLUSTERED:
        return gen_clustered(spec)
    if kind == DatasetKind.FILE and spec.path:
        from ..storage import load_dataset

        return load_dataset(spec.path)
    raise SpjoinError(ErrorCode.DATASET_SPEC_INVALID, f"无法生成数据集: {spec.kind}", {"kind": str(spec.kind)})
