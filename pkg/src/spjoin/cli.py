"""spjoin CLI 入口

使用 Click 框架构建命令行界面。退出码: 0 成功，1 用户输入错误，2 内部不变量失败。
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import click

from . import __version__
from .errors import USER_ERROR_CODES, SpjoinError


logger = logging.getLogger("spjoin")

ALGORITHMS = ["nested-loop", "plane-sweep", "sync-dfs", "sync-bfs", "pbsm", "pbsm-hier", "pbsm-1d"]
POLICIES = ["static", "dynamic"]


def _setup_logging(verbose: int) -> None:
    level = logging.DEBUG if verbose > 1 else logging.INFO if verbose == 1 else logging.WARNING
    logger.setLevel(level)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        logger.addHandler(handler)


def _parse_region(value: str) -> tuple[float, float, float, float]:
    try:
        parts = tuple(float(v) for v in value.split(","))
    except ValueError:
        raise click.BadParameter(f"无法解析区域: {value}") from None
    if len(parts) != 4:
        raise click.BadParameter("区域格式为 xmin,ymin,xmax,ymax")
    return parts  # type: ignore[return-value]


def sim_options(fn):
    """模拟参数相关的公共选项"""
    for decorator in reversed([
        click.option("--units", type=int, help="连接单元数"),
        click.option("--mem-latency", type=int, help="随机访存延迟（周期）"),
        click.option("--mem-bw", type=int, help="突发带宽（字节/周期）"),
        click.option("--policy", type=click.Choice(POLICIES), help="调度策略"),
        click.option("--burst-threshold", type=int, help="突发缓冲阈值（字节）"),
        click.option("--clock-hz", type=int, help="时钟频率"),
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="key=value 配置文件"),
    ]):
        fn = decorator(fn)
    return fn


def _sim_overrides(units, mem_latency, mem_bw, policy, burst_threshold, clock_hz) -> dict:
    return {
        "num_join_units": units,
        "mem_latency_cycles": mem_latency,
        "mem_bw_bytes_per_cycle": mem_bw,
        "scheduling_policy": policy,
        "burst_threshold_bytes": burst_threshold,
        "clock_hz": clock_hz,
    }


@click.group()
@click.version_option(version=__version__)
@click.option("--verbose", "-v", count=True, help="输出日志（-vv 为调试级别）")
def main(verbose: int):
    """spjoin: 空间连接算法与硬件加速器周期模拟"""
    _setup_logging(verbose)


@main.command("gen")
@click.option("--n", "-n", type=int, required=True, help="对象数")
@click.option("--seed", type=int, default=0, show_default=True, help="随机种子")
@click.option("--kind", type=click.Choice(["uniform-rect", "uniform-point", "clustered"]),
              default="uniform-rect", show_default=True, help="分布类型")
@click.option("--region", default="0,0,10000,10000", show_default=True, help="区域 xmin,ymin,xmax,ymax")
@click.option("--obj-w", type=float, default=1.0, show_default=True, help="对象宽度")
@click.option("--obj-h", type=float, default=1.0, show_default=True, help="对象高度")
@click.option("--clusters", type=int, default=8, show_default=True, help="簇数（clustered）")
@click.option("--sigma", type=float, default=200.0, show_default=True, help="簇标准差（clustered）")
@click.option("--out", "-o", type=click.Path(dir_okay=False), required=True, help="输出数据集 CSV")
def gen(n: int, seed: int, kind: str, region: str, obj_w: float, obj_h: float,
        clusters: int, sigma: float, out: str):
    """生成合成数据集"""
    from pydantic import ValidationError

    from .harness import DatasetSpec, generate
    from .settings import validation_error
    from .storage import store_dataset

    try:
        spec = DatasetSpec(kind=kind, n=n, seed=seed, region=_parse_region(region), obj_w=obj_w,
                           obj_h=obj_h, clusters=clusters, cluster_sigma=sigma)
    except ValidationError as e:
        raise validation_error(e) from e
    objects = generate(spec)
    store_dataset(objects, out)
    click.echo(f"✓ 已生成 {len(objects)} 个对象 → {out}")


@main.command("index")
@click.option("--input", "-i", "input_path", type=click.Path(dir_okay=False), required=True,
              help="数据集 CSV")
@click.option("--node-size", "-m", type=int, default=16, show_default=True, help="节点容量 M")
@click.option("--out", "-o", type=click.Path(dir_okay=False), required=True, help="输出树文件")
def index(input_path: str, node_size: int, out: str):
    """用 STR 构建 R-tree 并序列化"""
    from .formatters.report_formatter import format_tree_summary
    from .rtree import serialize, str_bulk_load, tree_summary
    from .storage import load_dataset

    tree = str_bulk_load(load_dataset(input_path), node_size)
    size = serialize(tree, out)
    click.echo(format_tree_summary(tree_summary(tree)))
    click.echo(f"✓ 已写入 {size} 字节 → {out}")


@main.command("partition")
@click.option("--r", "r_path", type=click.Path(dir_okay=False), required=True, help="R 侧数据集 CSV")
@click.option("--s", "s_path", type=click.Path(dir_okay=False), required=True, help="S 侧数据集 CSV")
@click.option("--grid", type=int, help="均匀网格边长（瓦片数）")
@click.option("--max-geomean", type=int, help="层次划分的每瓦片负载上界")
def partition(r_path: str, s_path: str, grid: Optional[int], max_geomean: Optional[int]):
    """PBSM 划分并输出瓦片统计"""
    from .formatters.report_formatter import format_partition_summary
    from .joinalgos import pbsm_hierarchical_partition, pbsm_partition, uniform_grid_for
    from .storage import load_dataset

    if (grid is None) == (max_geomean is None):
        raise click.UsageError("必须且只能给出 --grid 或 --max-geomean 之一")
    R = load_dataset(r_path)
    S = load_dataset(s_path)
    if grid is not None:
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, grid)) if R and S else []
    else:
        tiles = pbsm_hierarchical_partition(R, S, max_geomean or 1)
    click.echo(format_partition_summary(tiles, len(R), len(S)))


@main.command("join")
@click.option("--algo", type=click.Choice(ALGORITHMS), required=True, help="连接算法")
@click.option("--r", "r_path", type=click.Path(dir_okay=False), required=True, help="R 侧数据集 CSV")
@click.option("--s", "s_path", type=click.Path(dir_okay=False), required=True, help="S 侧数据集 CSV")
@click.option("--node-size", "-m", type=int, default=16, show_default=True, help="R-tree 节点容量")
@click.option("--workers", "-w", type=int, default=1, show_default=True, help="worker 数")
@click.option("--policy", type=click.Choice(POLICIES), default="static", show_default=True, help="调度策略")
@click.option("--grid", type=int, default=32, show_default=True, help="pbsm 网格边长")
@click.option("--max-geomean", type=int, default=16, show_default=True, help="pbsm-hier 负载上界")
@click.option("--strips", type=int, default=64, show_default=True, help="pbsm-1d 竖条数")
@click.option("--tile-joiner", type=click.Choice(["nested_loop", "plane_sweep"]), default="nested_loop",
              show_default=True, help="瓦片内连接算法")
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="结果 CSV")
def join(algo: str, r_path: str, s_path: str, node_size: int, workers: int, policy: str, grid: int,
         max_geomean: int, strips: int, tile_joiner: str, out: Optional[str]):
    """运行软件空间连接"""
    from .formatters.report_formatter import format_join_summary
    from .harness import measure
    from .joinalgos import (
        JoinCounters,
        SchedulingPolicy,
        TileJoiner,
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
    from .rtree import str_bulk_load
    from .storage import load_dataset, store_result

    R = load_dataset(r_path)
    S = load_dataset(s_path)
    sched = SchedulingPolicy(policy)
    joiner = TileJoiner(tile_joiner)
    counters = JoinCounters()

    def run():
        if algo == "nested-loop":
            return nested_loop_join(R, S, counters)
        if algo == "plane-sweep":
            return plane_sweep_join(R, S, counters)
        if algo == "pbsm-1d":
            return pbsm_1d(R, S, strips, workers, sched, counters)
        if not R or not S:
            from .joinalgos import JoinResult

            return JoinResult()
        if algo in ("sync-dfs", "sync-bfs"):
            tree_r = str_bulk_load(R, node_size)
            tree_s = str_bulk_load(S, node_size)
            if algo == "sync-dfs":
                return sync_traversal_dfs(tree_r, tree_s, counters)
            return sync_traversal_bfs(tree_r, tree_s, workers, sched, counters)
        if algo == "pbsm":
            tiles = pbsm_partition(R, S, uniform_grid_for(R, S, grid))
        else:
            tiles = pbsm_hierarchical_partition(R, S, max_geomean)
        return pbsm_join(tiles, joiner, workers, sched, counters)

    elapsed, result = measure(run, warmup=0, repetitions=1)
    if out:
        store_result(result.pairs, out)
    click.echo(format_join_summary(algo, len(result), counters, elapsed))


@main.command("sim")
@click.option("--mode", type=click.Choice(["sync", "pbsm"]), default="sync", show_default=True,
              help="同步遍历或 PBSM 调度器")
@click.option("--r", "r_path", type=click.Path(dir_okay=False), help="R 侧数据集 CSV")
@click.option("--s", "s_path", type=click.Path(dir_okay=False), help="S 侧数据集 CSV")
@click.option("--tree-r", type=click.Path(dir_okay=False), help="R 侧树文件（sync）")
@click.option("--tree-s", type=click.Path(dir_okay=False), help="S 侧树文件（sync）")
@click.option("--node-size", "-m", type=int, default=16, show_default=True, help="R-tree 节点容量")
@click.option("--max-geomean", type=int, default=16, show_default=True, help="PBSM 负载上界")
@sim_options
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="统计 CSV")
@click.option("--result", "result_path", type=click.Path(dir_okay=False), help="结果 CSV")
def sim(mode: str, r_path: Optional[str], s_path: Optional[str], tree_r: Optional[str],
        tree_s: Optional[str], node_size: int, max_geomean: int, units, mem_latency, mem_bw, policy,
        burst_threshold, clock_hz, config_path: Optional[str], out: Optional[str],
        result_path: Optional[str]):
    """运行加速器周期模拟"""
    from .accelsim import sim_pbsm, sim_sync_traversal, sim_sync_traversal_files
    from .formatters.report_formatter import format_sim_stats
    from .joinalgos import pbsm_hierarchical_partition
    from .rtree import str_bulk_load
    from .settings import build_sim_config
    from .storage import load_dataset, store_result, store_stats

    cfg = build_sim_config(config_path, _sim_overrides(units, mem_latency, mem_bw, policy,
                                                       burst_threshold, clock_hz))
    use_trees = tree_r is not None or tree_s is not None
    if use_trees and (tree_r is None or tree_s is None or mode != "sync"):
        raise click.UsageError("--tree-r 与 --tree-s 须同时给出，且仅用于 sync 模式")
    if not use_trees and (r_path is None or s_path is None):
        raise click.UsageError("须给出 --r 与 --s（或 --tree-r 与 --tree-s）")

    if use_trees:
        outcome = sim_sync_traversal_files(tree_r, tree_s, cfg)
        dataset = f"{Path(tree_r).stem}x{Path(tree_s).stem}"
        params = ""
    else:
        R = load_dataset(r_path)
        S = load_dataset(s_path)
        dataset = f"{Path(r_path).stem}x{Path(s_path).stem}"
        if mode == "sync":
            outcome = sim_sync_traversal(str_bulk_load(R, node_size), str_bulk_load(S, node_size), cfg)
            params = f"M={node_size}"
        else:
            outcome = sim_pbsm(pbsm_hierarchical_partition(R, S, max_geomean), cfg)
            params = f"K={max_geomean}"

    click.echo(format_sim_stats(outcome))
    if result_path:
        store_result(outcome.result.pairs, result_path)
    if out:
        params = ",".join(p for p in (params, f"units={cfg.num_join_units}",
                                      f"policy={cfg.scheduling_policy.value}") if p)
        s = outcome.stats
        metrics = [
            ("total_cycles", s.total_cycles),
            ("latency_seconds", outcome.latency_seconds),
            ("transfer_seconds", outcome.transfer_seconds),
            ("predicate_evals", s.predicate_evals),
            ("results_emitted", s.results_emitted),
            ("mem_read_cycles", s.mem_read_cycles),
            ("mem_write_cycles", s.mem_write_cycles),
            ("compute_cycles", s.compute_cycles),
            ("stall_cycles", s.stall_cycles),
            ("flush_count", s.flush_count),
        ]
        store_stats([["sim", dataset, f"sim-{mode}", params, m, v, ""] for m, v in metrics], out)


@main.command("bench")
@click.option("--experiment", "-e", required=True, help="实验名")
@click.option("--n", "-n", type=int, help="每侧对象数")
@click.option("--seed", type=int, help="随机种子")
@click.option("--workers", "-w", type=int, help="软件 worker 数")
@click.option("--no-software", is_flag=True, help="跳过软件算法计时")
@sim_options
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="统计 CSV")
@click.option("--json", "json_path", type=click.Path(dir_okay=False), help="完整报告 JSON")
def bench(experiment: str, n: Optional[int], seed: Optional[int], workers: Optional[int],
          no_software: bool, units, mem_latency, mem_bw, policy, burst_threshold, clock_hz,
          config_path: Optional[str], out: Optional[str], json_path: Optional[str]):
    """运行实验并输出统计"""
    from .formatters.report_formatter import format_bench_report
    from .harness import run_experiment
    from .settings import build_experiment_config
    from .storage import store_stats, write_json

    config = build_experiment_config(
        config_path,
        {"n": n, "seed": seed, "workers": workers, "include_software": False if no_software else None},
        _sim_overrides(units, mem_latency, mem_bw, policy, burst_threshold, clock_hz),
    )
    report = run_experiment(experiment, config)
    click.echo(format_bench_report(report))
    if out:
        store_stats(report.stats_rows(), out)
    if json_path:
        write_json(json_path, report.model_dump(mode="json"))


@main.command("report")
@click.argument("json_path", type=click.Path(dir_okay=False))
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="统计 CSV")
def report_cmd(json_path: str, out: Optional[str]):
    """重新显示 bench --json 保存的报告"""
    from pydantic import ValidationError

    from .formatters.report_formatter import format_bench_report
    from .harness import BenchReport
    from .settings import validation_error
    from .storage import read_json, store_stats

    try:
        report = BenchReport.model_validate(read_json(json_path))
    except ValidationError as e:
        raise validation_error(e) from e
    click.echo(format_bench_report(report))
    if out:
        store_stats(report.stats_rows(), out)


@main.command("validate")
@click.option("--tree", "tree_path", type=click.Path(dir_okay=False), required=True, help="树文件")
@click.option("--input", "-i", "input_path", type=click.Path(dir_okay=False),
              help="源数据集 CSV（检查对象覆盖）")
@click.option("--min-fill", type=int, default=1, show_default=True, help="非根节点最少条目数")
def validate_cmd(tree_path: str, input_path: Optional[str], min_fill: int):
    """校验 R-tree 文件的结构不变量"""
    from .formatters.report_formatter import format_validation_report
    from .rtree import deserialize, validate
    from .storage import load_dataset

    tree = deserialize(tree_path)
    source_ids = [o.id for o in load_dataset(input_path)] if input_path else None
    report = validate(tree, source_ids=source_ids, min_fill=min_fill)
    click.echo(format_validation_report(report))
    if not report.ok:
        raise SystemExit(1)


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """运行 CLI 并返回退出码

    Args:
        argv: 命令行参数（不含程序名），默认取 sys.argv

    Returns:
        0 成功，1 用户错误，2 内部错误
    """
    args: Optional[List[str]] = list(argv) if argv is not None else None
    try:
        rv = main.main(args=args, prog_name="spjoin", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("已中止", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except SpjoinError as e:
        click.echo(f"错误 [{e.code.value}]: {e.message}", err=True)
        return 1 if e.code in USER_ERROR_CODES else 2
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    except Exception as e:
        logger.debug("未预期的异常", exc_info=True)
        click.echo(f"内部错误: {type(e).__name__}: {e}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


def run() -> None:
    """console script 入口"""
    sys.exit(cli_main())
