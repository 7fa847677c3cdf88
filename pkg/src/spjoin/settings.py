"""配置合并

配置文件（key=value）先于命令行参数生效，命令行显式给出的值覆盖文件中的值。
未知键报 CONFIG_SCHEMA_ERROR，取值不合法报 VALIDATION_ERROR。
"""

from __future__ import annotations

from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, ValidationError

from .accelsim import SimConfig
from .errors import ErrorCode, SpjoinError
from .harness import ExperimentConfig
from .storage import load_config
from .storage.base import PathLike


# 命令行风格的简写键
SIM_ALIASES = {
    "units": "num_join_units",
    "mem_latency": "mem_latency_cycles",
    "mem_bw": "mem_bw_bytes_per_cycle",
    "policy": "scheduling_policy",
    "burst_threshold": "burst_threshold_bytes",
}


def _canonical_sim_keys(values: Mapping[str, Any]) -> Dict[str, Any]:
    return {SIM_ALIASES.get(k, k): v for k, v in values.items()}


def _check_keys(values: Mapping[str, Any], model: type[BaseModel], prefix: str = "") -> None:
    unknown = sorted(k for k in values if k not in model.model_fields)
    if unknown:
        raise SpjoinError(
            ErrorCode.CONFIG_SCHEMA_ERROR,
            f"未知配置项: {', '.join(prefix + k for k in unknown)}",
            {"unknown": [prefix + k for k in unknown]},
        )


def validation_error(e: ValidationError) -> SpjoinError:
    """把 pydantic 校验错误转换为 SpjoinError"""
    first = e.errors()[0]
    field = ".".join(str(p) for p in first.get("loc", ()))
    return SpjoinError(
        ErrorCode.VALIDATION_ERROR,
        f"参数 {field or '?'} 不合法: {first.get('msg', '')}",
        {"errors": e.error_count()},
    )


def _drop_none(overrides: Optional[Mapping[str, Any]]) -> Dict[str, Any]:
    return {k: v for k, v in (overrides or {}).items() if v is not None}


def build_sim_config(
    config_path: Optional[PathLike] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> SimConfig:
    """由配置文件与命令行参数构造 SimConfig

    Args:
        config_path: 可选配置文件
        overrides: 命令行参数，值为 None 的项被忽略
    """
    values: Dict[str, Any] = _canonical_sim_keys(load_config(config_path)) if config_path else {}
    _check_keys(values, SimConfig)
    values.update(_canonical_sim_keys(_drop_none(overrides)))
    try:
        return SimConfig.model_validate(values)
    except ValidationError as e:
        raise validation_error(e) from e


def build_experiment_config(
    config_path: Optional[PathLike] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    sim_overrides: Optional[Mapping[str, Any]] = None,
) -> ExperimentConfig:
    """由配置文件与命令行参数构造 ExperimentConfig

    配置文件中 `sim.` 前缀的键（可用简写）归入模拟参数。
    """
    top: Dict[str, Any] = {}
    sim: Dict[str, Any] = {}
    if config_path:
        for key, value in load_config(config_path).items():
            if key.startswith("sim."):
                sim[SIM_ALIASES.get(key[4:], key[4:])] = value
            else:
                top[key] = value
    _check_keys(top, ExperimentConfig)
    _check_keys(sim, SimConfig, prefix="sim.")
    top.update(_drop_none(overrides))
    sim.update(_canonical_sim_keys(_drop_none(sim_overrides)))
    try:
        return ExperimentConfig.from_flat({**top, **{f"sim.{k}": v for k, v in sim.items()}})
    except ValidationError as e:
        raise validation_error(e) from e
