"""几何数据模型

包含:
- MBR: 最小外接矩形（轴对齐，闭区间）
- Point: 二维点
- SpatialObject: 带 ID 的空间对象
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..errors import ErrorCode, SpjoinError


# 对象 ID 为 32 位无符号整数
MAX_OBJECT_ID = 2**32 - 1

_F32X4 = struct.Struct("<4f")


def to_float32(value: float) -> float:
    """将坐标舍入到最近的 32 位浮点值（仍以 Python float 表示）"""
    return float(np.float32(value))


def to_float32_list(values: Sequence[float] | np.ndarray) -> list[float]:
    """批量舍入到 32 位浮点"""
    return np.asarray(values, dtype=np.float32).astype(np.float64).tolist()


@dataclass(frozen=True, slots=True)
class Point:
    """二维点"""
    x: float
    y: float


@dataclass(frozen=True, slots=True)
class MBR:
    """最小外接矩形

    坐标满足 xmin ≤ xmax、ymin ≤ ymax 且均为有限值；构造时舍入到 32 位浮点，
    超出 32 位浮点范围的坐标被拒绝。
    点是退化的 MBR（xmin=xmax, ymin=ymax）。
    """
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self) -> None:
        coords = (self.xmin, self.ymin, self.xmax, self.ymax)
        if not all(math.isfinite(c) for c in coords):
            raise SpjoinError(
                ErrorCode.MBR_INVALID,
                f"MBR 坐标必须为有限值: {coords}",
                {"coords": list(coords)},
            )
        try:
            rounded = _F32X4.unpack(_F32X4.pack(*coords))
        except OverflowError:
            raise SpjoinError(
                ErrorCode.MBR_INVALID,
                f"MBR 坐标超出 32 位浮点范围: {coords}",
                {"coords": list(coords)},
            ) from None
        if rounded != coords:
            for name, value in zip(("xmin", "ymin", "xmax", "ymax"), rounded):
                object.__setattr__(self, name, value)
        if self.xmin > self.xmax or self.ymin > self.ymax:
            raise SpjoinError(
                ErrorCode.MBR_INVALID,
                f"MBR 最小角不能大于最大角: {coords}",
                {"coords": list(coords)},
            )

    @classmethod
    def from_point(cls, x: float, y: float) -> MBR:
        """由点构造退化 MBR"""
        return cls(x, y, x, y)

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> Point:
        return Point((self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.xmin, self.ymin, self.xmax, self.ymax)


@dataclass(frozen=True, slots=True)
class SpatialObject:
    """空间对象：32 位无符号 ID + MBR"""
    id: int
    mbr: MBR

    def __post_init__(self) -> None:
        if not 0 <= self.id <= MAX_OBJECT_ID:
            raise SpjoinError(
                ErrorCode.MBR_INVALID,
                f"对象 ID 超出 32 位无符号范围: {self.id}",
                {"id": self.id},
            )


def objects_from_arrays(
    ids: Iterable[int],
    xmin: Sequence[float] | np.ndarray,
    ymin: Sequence[float] | np.ndarray,
    xmax: Sequence[float] | np.ndarray,
    ymax: Sequence[float] | np.ndarray,
) -> list[SpatialObject]:
    """由坐标数组批量构造对象，坐标统一舍入到 32 位浮点"""
    columns = [to_float32_list(c) for c in (xmin, ymin, xmax, ymax)]
    return [
        SpatialObject(int(oid), MBR(x0, y0, x1, y1))
        for oid, x0, y0, x1, y1 in zip(ids, *columns)
    ]
