"""实验与数据集数据模型

包含:
- DatasetKind / DatasetSpec: 数据集生成参数
- ExperimentConfig: 实验参数（内嵌模拟参数）
- BenchRow / BenchReport: 实验结果
"""

from __future__ import annotations

from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..accelsim import SimConfig
from ..geometry import MBR


DEFAULT_REGION = (0.0, 0.0, 10000.0, 10000.0)


class DatasetKind(str, Enum):
    """数据集类型"""
    UNIFORM_RECT = "uniform-rect"
    UNIFORM_POINT = "uniform-point"
    CLUSTERED = "clustered"
    FILE = "file"


class DatasetSpec(BaseModel):
    """数据集描述

    uniform-point 忽略 obj_w / obj_h（对象退化为点）；
    clustered 围绕 clusters 个均匀分布的中心按正态分布放置对象。
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: DatasetKind = DatasetKind.UNIFORM_RECT
    n: int = Field(default=1000, ge=1)
    region: Tuple[float, float, float, float] = DEFAULT_REGION
    obj_w: float = Field(default=1.0, ge=0)
    obj_h: float = Field(default=1.0, ge=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    clusters: int = Field(default=8, ge=1)
    cluster_sigma: float = Field(default=200.0, gt=0)
    path: Optional[str] = None

    @model_validator(mode="after")
    def _check(self) -> DatasetSpec:
        xmin, ymin, xmax, ymax = self.region
        if not (xmin < xmax and ymin < ymax):
            raise ValueError(f"区域必须满足 xmin < xmax 且 ymin < ymax: {self.region}")
        w, h = self.object_size
        if w > xmax - xmin or h > ymax - ymin:
            raise ValueError(f"对象尺寸 {w}×{h} 超出区域")
        if self.kind == DatasetKind.FILE and not self.path:
            raise ValueError("file 类型的数据集必须给出 path")
        return self

    @property
    def region_mbr(self) -> MBR:
        return MBR(*self.region)

    @property
    def object_size(self) -> Tuple[float, float]:
        """实际使用的对象宽高"""
        if self.kind == DatasetKind.UNIFORM_POINT:
            return (0.0, 0.0)
        return (self.obj_w, self.obj_h)

    def label(self) -> str:
        """用于报告的数据集名称"""
        if self.kind == DatasetKind.FILE:
            return str(self.path)
        return f"{self.kind.value}-{self.n}"


_LIST_FIELDS = ("node_sizes", "units", "tile_sizes", "tile_cardinalities", "tile_geomeans", "sweep_units")


class ExperimentConfig(BaseModel):
    """实验参数

    R 侧数据集用 seed，S 侧用 seed + 1；两侧均为 dataset_kind 类型，
    或由 r_path / s_path 指定文件。
    """
    model_config = ConfigDict(extra="forbid")

    n: int = Field(default=100_000, ge=1)
    seed: int = Field(default=42, ge=0, lt=2**64 - 1)
    dataset_kind: DatasetKind = DatasetKind.UNIFORM_RECT
    obj_w: float = Field(default=1.0, ge=0)
    obj_h: float = Field(default=1.0, ge=0)
    r_path: Optional[str] = None
    s_path: Optional[str] = None

    node_sizes: List[int] = Field(default_factory=lambda: [8, 16, 32, 64])
    units: List[int] = Field(default_factory=lambda: [1, 2, 4, 8, 16])
    tile_sizes: List[int] = Field(default_factory=lambda: [4, 8, 16, 32, 64])
    tile_cardinalities: List[int] = Field(default_factory=lambda: [8, 16, 32, 64, 128])
    tiles_per_size: int = Field(default=100, ge=1)
    tile_geomeans: List[int] = Field(default_factory=lambda: [8, 16, 32, 64])
    sweep_units: List[int] = Field(default_factory=lambda: [1, 8, 16])

    node_size: int = Field(default=16, ge=4)
    max_geomean: int = Field(default=16, ge=1)
    grid: int = Field(default=32, ge=1)
    strips: int = Field(default=64, ge=1)
    workers: int = Field(default=1, ge=1)
    warmup: int = Field(default=1, ge=0)
    repetitions: int = Field(default=3, ge=1)
    include_software: bool = True
    nested_loop_limit: int = Field(default=5000, ge=0)

    sim: SimConfig = Field(default_factory=SimConfig)

    @field_validator(*_LIST_FIELDS, mode="before")
    @classmethod
    def _split_csv(cls, value: Any) -> Any:
        if isinstance(value, str):
            return [int(v) for v in value.split(",") if v.strip()]
        return value

    @field_validator(*_LIST_FIELDS)
    @classmethod
    def _non_empty(cls, value: List[int]) -> List[int]:
        if not value or any(v < 1 for v in value):
            raise ValueError("列表必须非空且元素 ≥ 1")
        return value

    @classmethod
    def from_flat(cls, values: Dict[str, Any]) -> ExperimentConfig:
        """由扁平键值构造，`sim.` 前缀的键归入模拟参数"""
        top: Dict[str, Any] = {}
        sim: Dict[str, Any] = {}
        for key, value in values.items():
            if key.startswith("sim."):
                sim[key[4:]] = value
            else:
                top[key] = value
        if sim:
            top["sim"] = sim
        return cls.model_validate(top)

    def dataset_specs(self) -> Tuple[DatasetSpec, DatasetSpec]:
        """R / S 两侧的数据集描述"""
        def side(path: Optional[str], seed: int) -> DatasetSpec:
            if path:
                return DatasetSpec(kind=DatasetKind.FILE, path=path, seed=seed)
            return DatasetSpec(
                kind=self.dataset_kind, n=self.n, obj_w=self.obj_w, obj_h=self.obj_h, seed=seed,
            )
        return side(self.r_path, self.seed), side(self.s_path, self.seed + 1)


class BenchRow(BaseModel):
    """一行实验结果

    metric 为 cycles、wall_time_ns 等；同一行附带谓词次数与结果数。
    """
    experiment: str
    dataset: str
    algorithm: str
    params: str = ""
    metric: str
    value: float
    predicate_evals: Optional[int] = None
    result_count: Optional[int] = None
    seed: Optional[int] = None

    def stats_rows(self) -> List[List[object]]:
        """展开为统计 CSV 行"""
        base = [self.experiment, self.dataset, self.algorithm, self.params]
        seed: object = "" if self.seed is None else self.seed
        rows: List[List[object]] = [base + [self.metric, _fmt(self.value), seed]]
        if self.predicate_evals is not None:
            rows.append(base + ["predicate_evals", self.predicate_evals, seed])
        if self.result_count is not None:
            rows.append(base + ["result_count", self.result_count, seed])
        return rows


def _fmt(value: float) -> object:
    return int(value) if float(value).is_integer() else value


class BenchReport(BaseModel):
    """一次实验的全部结果，内嵌完整配置以便复现"""
    experiment: str
    config: Dict[str, Any] = Field(default_factory=dict)
    rows: List[BenchRow] = Field(default_factory=list)

    def add(self, **kwargs: Any) -> BenchRow:
        row = BenchRow(experiment=self.experiment, **kwargs)
        self.rows.append(row)
        return row

    def stats_rows(self) -> List[List[object]]:
        out: List[List[object]] = []
        for row in self.rows:
            out.extend(row.stats_rows())
        return out

    def select(self, metric: Optional[str] = None, algorithm: Optional[str] = None) -> List[BenchRow]:
        """按指标 / 算法筛选行"""
        return [
            r for r in self.rows
            if (metric is None or r.metric == metric) and (algorithm is None or r.algorithm == algorithm)
        ]

    def inconsistent_datasets(self) -> List[str]:
        """同一数据集上 result_count 不一致的数据集名称"""
        counts: Dict[str, set[int]] = {}
        for r in self.rows:
            if r.result_count is not None:
                counts.setdefault(r.dataset, set()).add(r.result_count)
        return sorted(d for d, c in counts.items() if len(c) > 1)
