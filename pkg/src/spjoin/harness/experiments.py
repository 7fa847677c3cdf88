"""实验驱动

每个实验读取 ExperimentConfig，产出一份 BenchReport：
- node-size-sweep:      不同节点容量下同步遍历的模拟周期（可附软件耗时）
- unit-scalability:     连接单元数 1..16 的模拟周期与加速比（同步遍历与 PBSM）
- cycles-per-predicate: 不同瓦片大小下单个连接单元的每谓词周期
- tile-join-compare:    瓦片内嵌套循环与平面扫描在高 / 低结果密度下的耗时
- index-cost:           STR 构建与 PBSM 划分的耗时
- tile-size-sweep:      PBSM 层次划分不同瓦片负载上界下的模拟周期（可附软件耗时）
- size-by-units:        不同连接单元数下的最优节点容量 / 瓦片负载上界
- e2e-compare:          全部软件算法与两种模拟器的端到端对比
"""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..accelsim import SimConfig, SimOutcome, sim_pbsm, sim_sync_traversal, unit_pair_cycles
from ..errors import ErrorCode, SpjoinError
from ..geometry import SpatialObject, objects_from_arrays
from ..joinalgos import (
    JoinCounters,
    JoinResult,
    TileJoiner,
    nested_loop_count,
    nested_loop_join,
    pbsm_1d,
    pbsm_hierarchical_partition,
    pbsm_join,
    pbsm_partition,
    plane_sweep_join,
    sync_traversal_bfs,
    sync_traversal_dfs,
    uniform_grid_for,
)
from ..joinalgos.plane_sweep import plane_sweep_candidates
from ..rtree import str_bulk_load
from .datagen import generate
from .models import BenchReport, ExperimentConfig
from .timing import measure


logger = logging.getLogger(__name__)

Datasets = Tuple[str, List[SpatialObject], List[SpatialObject]]


def _datasets(config: ExperimentConfig) -> Datasets:
    spec_r, spec_s = config.dataset_specs()
    R = generate(spec_r)
    S = generate(spec_s)
    name = spec_r.label() if spec_r.path else f"{spec_r.kind.value}-{len(R)}x{len(S)}"
    logger.info("数据集 %s: |R|=%d, |S|=%d", name, len(R), len(S))
    return name, R, S


def _sim_cfg(config: ExperimentConfig, **overrides: object) -> SimConfig:
    return config.sim.model_copy(update=overrides)


def node_size_sweep(config: ExperimentConfig) -> BenchReport:
    """节点容量扫描"""
    report = _new_report("node-size-sweep", config)
    name, R, S = _datasets(config)
    cfg = config.sim
    for m in config.node_sizes:
        tree_r = str_bulk_load(R, m)
        tree_s = str_bulk_load(S, m)
        outcome = sim_sync_traversal(tree_r, tree_s, cfg)
        report.add(
            dataset=name, algorithm="sim-sync", params=f"M={m},units={cfg.num_join_units}",
            metric="cycles", value=outcome.stats.total_cycles,
            predicate_evals=outcome.stats.predicate_evals, result_count=len(outcome.result),
            seed=config.seed,
        )
        if config.include_software:
            counters = JoinCounters()
            ns, result = measure(
                lambda: sync_traversal_bfs(tree_r, tree_s, config.workers),
                config.warmup, config.repetitions,
            )
            sync_traversal_bfs(tree_r, tree_s, config.workers, counters=counters)
            report.add(
                dataset=name, algorithm="sync-bfs", params=f"M={m},workers={config.workers}",
                metric="wall_time_ns", value=ns, predicate_evals=counters.predicate_evals,
                result_count=len(result), seed=config.seed,
            )
    return report


def unit_scalability(config: ExperimentConfig) -> BenchReport:
    """连接单元数扩展性"""
    report = _new_report("unit-scalability", config)
    name, R, S = _datasets(config)

    def sweep(algorithm: str, params: str, run: Callable[[SimConfig], Tuple[int, int, int]]) -> None:
        base = None
        for units in config.units:
            cycles, evals, count = run(_sim_cfg(config, num_join_units=units))
            base = base or cycles
            row_params = f"{params},units={units}" if params else f"units={units}"
            report.add(
                dataset=name, algorithm=algorithm, params=row_params, metric="cycles", value=cycles,
                predicate_evals=evals, result_count=count, seed=config.seed,
            )
            report.add(
                dataset=name, algorithm=algorithm, params=row_params, metric="speedup",
                value=base / cycles if cycles else 0.0, seed=config.seed,
            )

    for m in config.node_sizes:
        tree_r = str_bulk_load(R, m)
        tree_s = str_bulk_load(S, m)

        def run_sync(cfg: SimConfig) -> Tuple[int, int, int]:
            out = sim_sync_traversal(tree_r, tree_s, cfg)
            return out.stats.total_cycles, out.stats.predicate_evals, len(out.result)

        sweep("sim-sync", f"M={m}", run_sync)

    tiles = pbsm_hierarchical_partition(R, S, config.max_geomean)

    def run_pbsm(cfg: SimConfig) -> Tuple[int, int, int]:
        out = sim_pbsm(tiles, cfg)
        return out.stats.total_cycles, out.stats.predicate_evals, len(out.result)

    sweep("sim-pbsm", f"K={config.max_geomean}", run_pbsm)
    return report


def cycles_per_predicate(config: ExperimentConfig) -> BenchReport:
    """单个连接单元处理 s×s 瓦片的每谓词周期"""
    report = _new_report("cycles-per-predicate", config)
    cfg = _sim_cfg(config, num_join_units=1)
    for size in config.tile_sizes:
        cycles = unit_pair_cycles(size, size, cfg)
        evals = size * size
        params = f"tile={size}"
        report.add(dataset=f"tile-{size}", algorithm="join-unit", params=params,
                   metric="cycles", value=cycles, predicate_evals=evals)
        report.add(dataset=f"tile-{size}", algorithm="join-unit", params=params,
                   metric="cycles_per_predicate", value=cycles / evals)
    return report


def synthetic_tiles(size: int, count: int, dense: bool, seed: int) -> List[Tuple[List[SpatialObject], List[SpatialObject]]]:
    """构造 count 对各含 size 个对象的瓦片

    dense 时对象边长为瓦片边长的一半（大部分对相交），否则为 1/100（几乎不相交）。
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, size, int(dense)])))
    extent = 100.0
    side = extent / 2 if dense else extent / 100
    out = []
    for _ in range(count):
        pair = []
        for base in (0, size):
            x0 = rng.random(size) * (extent - side)
            y0 = rng.random(size) * (extent - side)
            pair.append(objects_from_arrays(range(base, base + size), x0, y0, x0 + side, y0 + side))
        out.append((pair[0], pair[1]))
    return out


def tile_join_compare(config: ExperimentConfig) -> BenchReport:
    """瓦片内连接算法对比

    两种算法都只统计相交对数；嵌套循环对整个叉积做一次向量化求值。
    """
    report = _new_report("tile-join-compare", config)
    joiners = {
        TileJoiner.NESTED_LOOP: lambda r, s: nested_loop_count(r, s),
        TileJoiner.PLANE_SWEEP: lambda r, s: len(plane_sweep_candidates(r, s)),
    }
    for size in config.tile_cardinalities:
        for dense in (False, True):
            tiles = synthetic_tiles(size, config.tiles_per_size, dense, config.seed)
            dataset = f"tiles-{'high' if dense else 'low'}-{size}"
            for joiner, fn in joiners.items():
                def run_all(fn: Callable = fn) -> int:
                    return sum(fn(r, s) for r, s in tiles)

                ns, found = measure(run_all, config.warmup, config.repetitions)
                report.add(
                    dataset=dataset, algorithm=joiner.value, params=f"tile={size}",
                    metric="wall_time_ns_per_tile", value=ns / len(tiles),
                    predicate_evals=size * size * len(tiles), result_count=found, seed=config.seed,
                )
    return report


def flat_grid_cols(n_r: int, n_s: int, target: int) -> int:
    """使每个瓦片平均约有 target 个对象的网格列数"""
    return max(1, math.ceil(math.sqrt(max(n_r, n_s) / target)))


def index_cost(config: ExperimentConfig) -> BenchReport:
    """建索引（STR）与划分（PBSM）的耗时"""
    report = _new_report("index-cost", config)
    name, R, S = _datasets(config)

    for side, objs in (("R", R), ("S", S)):
        ns, tree = measure(lambda: str_bulk_load(objs, config.node_size), config.warmup, config.repetitions)
        report.add(dataset=name, algorithm="str", params=f"M={config.node_size},side={side}",
                   metric="wall_time_ns", value=ns, seed=config.seed)

    ns, tiles = measure(lambda: pbsm_hierarchical_partition(R, S, config.max_geomean),
                        config.warmup, config.repetitions)
    report.add(dataset=name, algorithm="pbsm-hier-partition", params=f"K={config.max_geomean}",
               metric="wall_time_ns", value=ns, seed=config.seed)

    cols = flat_grid_cols(len(R), len(S), config.max_geomean)
    grid = uniform_grid_for(R, S, cols)
    ns, flat = measure(lambda: pbsm_partition(R, S, grid), config.warmup, config.repetitions)
    report.add(dataset=name, algorithm="pbsm-grid-partition", params=f"grid={cols}x{cols}",
               metric="wall_time_ns", value=ns, seed=config.seed)
    logger.info("划分: 层次 %d 个瓦片, 均匀 %d 个瓦片", len(tiles), len(flat))
    return report


def tile_size_sweep(config: ExperimentConfig) -> BenchReport:
    """PBSM 瓦片负载上界扫描"""
    report = _new_report("tile-size-sweep", config)
    name, R, S = _datasets(config)
    cfg = config.sim
    for k in config.tile_geomeans:
        tiles = pbsm_hierarchical_partition(R, S, k)
        outcome = sim_pbsm(tiles, cfg)
        report.add(
            dataset=name, algorithm="sim-pbsm", params=f"K={k},units={cfg.num_join_units}",
            metric="cycles", value=outcome.stats.total_cycles,
            predicate_evals=outcome.stats.predicate_evals, result_count=len(outcome.result),
            seed=config.seed,
        )
        if config.include_software:
            counters = JoinCounters()
            ns, result = measure(
                lambda: pbsm_join(tiles, TileJoiner.NESTED_LOOP, config.workers),
                config.warmup, config.repetitions,
            )
            pbsm_join(tiles, TileJoiner.NESTED_LOOP, config.workers, counters=counters)
            report.add(
                dataset=name, algorithm="pbsm-hier", params=f"K={k},workers={config.workers}",
                metric="wall_time_ns", value=ns, predicate_evals=counters.predicate_evals,
                result_count=len(result), seed=config.seed,
            )
    return report


def size_by_units(config: ExperimentConfig) -> BenchReport:
    """不同连接单元数下的节点容量 / 瓦片负载上界扫描

    每个 (算法, 单元数) 组合额外输出一行 best_size：周期最少的 M 或 K。
    """
    report = _new_report("size-by-units", config)
    name, R, S = _datasets(config)
    trees = {m: (str_bulk_load(R, m), str_bulk_load(S, m)) for m in config.node_sizes}
    tiles = {k: pbsm_hierarchical_partition(R, S, k) for k in config.tile_geomeans}

    def sweep(algorithm: str, key: str, units: int, runs: Dict[int, Callable[[], SimOutcome]]) -> None:
        cycles: Dict[int, int] = {}
        for size, run in runs.items():
            outcome = run()
            cycles[size] = outcome.stats.total_cycles
            report.add(
                dataset=name, algorithm=algorithm, params=f"{key}={size},units={units}",
                metric="cycles", value=cycles[size], predicate_evals=outcome.stats.predicate_evals,
                result_count=len(outcome.result), seed=config.seed,
            )
        best = min(cycles, key=lambda size: (cycles[size], size))
        report.add(dataset=name, algorithm=algorithm, params=f"units={units}",
                   metric="best_size", value=best, seed=config.seed)

    for units in config.sweep_units:
        cfg = _sim_cfg(config, num_join_units=units)
        sweep("sim-sync", "M", units, {
            m: (lambda pair=pair: sim_sync_traversal(*pair, cfg)) for m, pair in trees.items()
        })
        sweep("sim-pbsm", "K", units, {
            k: (lambda t=t: sim_pbsm(t, cfg)) for k, t in tiles.items()
        })
    return report


def e2e_compare(config: ExperimentConfig) -> BenchReport:
    """端到端对比，所有引擎的结果数必须一致"""
    report = _new_report("e2e-compare", config)
    name, R, S = _datasets(config)
    tree_r = str_bulk_load(R, config.node_size)
    tree_s = str_bulk_load(S, config.node_size)
    hier_tiles = pbsm_hierarchical_partition(R, S, config.max_geomean)
    grid_tiles = pbsm_partition(R, S, uniform_grid_for(R, S, config.grid))
    w = config.workers

    software: Dict[str, Tuple[str, Callable[[JoinCounters], JoinResult]]] = {
        "plane-sweep": ("", lambda c: plane_sweep_join(R, S, c)),
        "sync-dfs": (f"M={config.node_size}", lambda c: sync_traversal_dfs(tree_r, tree_s, c)),
        "sync-bfs": (f"M={config.node_size},workers={w}",
                     lambda c: sync_traversal_bfs(tree_r, tree_s, w, counters=c)),
        "pbsm": (f"grid={config.grid},workers={w}", lambda c: pbsm_join(grid_tiles, workers=w, counters=c)),
        "pbsm-hier": (f"K={config.max_geomean},workers={w}",
                      lambda c: pbsm_join(hier_tiles, TileJoiner.NESTED_LOOP, w, counters=c)),
        "pbsm-1d": (f"strips={config.strips},workers={w}",
                    lambda c: pbsm_1d(R, S, config.strips, w, counters=c)),
    }
    if len(R) * len(S) <= config.nested_loop_limit ** 2:
        software["nested-loop"] = ("", lambda c: nested_loop_join(R, S, c))

    if config.include_software:
        for algorithm, (params, run) in software.items():
            ns, result = measure(lambda: run(JoinCounters()), config.warmup, config.repetitions)
            counters = JoinCounters()
            run(counters)
            report.add(dataset=name, algorithm=algorithm, params=params, metric="wall_time_ns",
                       value=ns, predicate_evals=counters.predicate_evals,
                       result_count=len(result), seed=config.seed)

    units = config.sim.num_join_units
    sync = sim_sync_traversal(tree_r, tree_s, config.sim)
    report.add(dataset=name, algorithm="sim-sync", params=f"M={config.node_size},units={units}",
               metric="cycles", value=sync.stats.total_cycles,
               predicate_evals=sync.stats.predicate_evals, result_count=len(sync.result), seed=config.seed)
    pbsm = sim_pbsm(hier_tiles, config.sim)
    report.add(dataset=name, algorithm="sim-pbsm", params=f"K={config.max_geomean},units={units}",
               metric="cycles", value=pbsm.stats.total_cycles,
               predicate_evals=pbsm.stats.predicate_evals, result_count=len(pbsm.result), seed=config.seed)

    bad = report.inconsistent_datasets()
    if bad:
        raise SpjoinError(
            ErrorCode.EXPERIMENT_FAILED,
            f"各引擎结果数不一致: {', '.join(bad)}",
            {"datasets": bad},
        )
    return report


def _new_report(experiment: str, config: ExperimentConfig) -> BenchReport:
    return BenchReport(experiment=experiment, config=config.model_dump(mode="json"))


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig], BenchReport]] = {
    "node-size-sweep": node_size_sweep,
    "unit-scalability": unit_scalability,
    "cycles-per-predicate": cycles_per_predicate,
    "tile-join-compare": tile_join_compare,
    "index-cost": index_cost,
    "tile-size-sweep": tile_size_sweep,
    "size-by-units": size_by_units,
    "e2e-compare": e2e_compare,
}


def experiment_names() -> Sequence[str]:
    return list(EXPERIMENTS)


def run_experiment(name: str, config: ExperimentConfig) -> BenchReport:
    """运行实验

    Args:
        name: 实验名
        config: 实验参数

    Raises:
        SpjoinError: 未知实验名
    """
    try:
        fn = EXPERIMENTS[name]
    except KeyError:
        raise SpjoinError(
            ErrorCode.EXPERIMENT_UNKNOWN,
            f"未知实验 '{name}'，可选: {', '.join(EXPERIMENTS)}",
            {"name": name},
        ) from None
    logger.info("运行实验 %s", name)
    return fn(config)
