"""命令行文本输出格式化"""

from __future__ import annotations

from typing import Any, Dict, List, Sequence

from ..accelsim import SimOutcome
from ..harness import BenchReport
from ..joinalgos import JoinCounters, Tile
from ..rtree import ValidationReport


# 校验问题类型显示名称
VIOLATION_NAMES = {
    "count_bound": "条目数越界",
    "leaf_depth": "叶深度不一致",
    "tightness": "MBR 不紧致",
    "coverage": "对象覆盖错误",
    "structure": "结构错误",
}


def format_tree_summary(summary: Dict[str, Any]) -> str:
    """格式化 R-tree 摘要

    Args:
        summary: tree_summary 的返回值

    Returns:
        格式化后的字符串
    """
    lines = [
        f"树高: {summary['height']}",
        f"节点容量: {summary['node_size']}",
        f"节点数: {summary['node_count']}",
        f"对象数: {summary['object_count']}",
        f"每层节点数: {' / '.join(str(n) for n in summary['nodes_per_level'])}",
        f"叶节点填充率: {summary['leaf_fill']:.1%}",
    ]
    return "\n".join(lines)


def format_validation_report(report: ValidationReport, limit: int = 20) -> str:
    """格式化校验报告"""
    if report.ok:
        return f"✓ 校验通过 ({report.node_count} 个节点, 树高 {report.height})"

    lines = [f"✗ 发现 {len(report.violations)} 个问题\n"]
    for v in report.violations[:limit]:
        name = VIOLATION_NAMES.get(v.kind.value, v.kind.value)
        where = f"节点 {v.node_index}" if v.node_index is not None else "全局"
        lines.append(f"  [{name}] {where}: {v.message}")
    if len(report.violations) > limit:
        lines.append(f"  ... 另有 {len(report.violations) - limit} 个问题")
    return "\n".join(lines)


def format_partition_summary(tiles: Sequence[Tile], objects_r: int, objects_s: int) -> str:
    """格式化 PBSM 划分摘要（瓦片数、复制率、最大负载）"""
    if not tiles:
        return "没有非空瓦片"
    refs_r = sum(len(t.objects_r) for t in tiles)
    refs_s = sum(len(t.objects_s) for t in tiles)
    total = objects_r + objects_s
    lines = [
        f"瓦片数: {len(tiles)}",
        f"复制率: {(refs_r + refs_s) / total:.3f}" if total else "复制率: -",
        f"最大几何平均负载: {max(t.geomean for t in tiles):.1f}",
        f"比较次数: {sum(t.comparisons for t in tiles)}",
        f"最大细分深度: {max(t.depth for t in tiles)}",
    ]
    flagged = sum(t.flagged for t in tiles)
    if flagged:
        lines.append(f"⚠ {flagged} 个瓦片达到最小尺寸仍超出负载上界")
    return "\n".join(lines)


def format_join_summary(algorithm: str, result_count: int, counters: JoinCounters, elapsed_ns: int) -> str:
    """格式化一次软件连接的摘要"""
    lines = [
        f"算法: {algorithm}",
        f"结果对数: {result_count}",
        f"谓词次数: {counters.predicate_evals}",
        f"耗时: {elapsed_ns / 1e6:.2f} ms",
    ]
    if counters.node_pairs:
        lines.append(f"节点对任务: {counters.node_pairs} (每层 {counters.depth_profile()})")
    return "\n".join(lines)


def format_sim_stats(outcome: SimOutcome) -> str:
    """格式化模拟统计"""
    s = outcome.stats
    lines = [
        f"总周期: {s.total_cycles}",
        f"延迟: {outcome.latency_seconds * 1e3:.3f} ms (传输 {outcome.transfer_seconds * 1e3:.3f} ms)",
        f"结果对数: {len(outcome.result)}",
        f"谓词次数: {s.predicate_evals} (每谓词 {s.cycles_per_predicate:.3f} 周期)",
        f"读 / 计算 / 写 周期: {s.mem_read_cycles} / {s.compute_cycles} / {s.mem_write_cycles}",
        f"读通道等待: {s.stall_cycles} 周期",
        f"突发写次数: {s.flush_count}",
    ]
    if len(s.per_level) > 1:
        lines.append("各层:")
        for i, level in enumerate(s.per_level):
            lines.append(f"  [{i}] 任务 {level.tasks}, 谓词 {level.predicate_evals}, 周期 {level.cycles}")
    return "\n".join(lines)


def format_bench_report(report: BenchReport) -> str:
    """格式化实验报告为对齐的表格"""
    if not report.rows:
        return f"实验 {report.experiment}: 无结果"

    header = ["dataset", "algorithm", "params", "metric", "value", "results"]
    body: List[List[str]] = []
    for r in report.rows:
        value = f"{r.value:.3f}" if not float(r.value).is_integer() else str(int(r.value))
        body.append([r.dataset, r.algorithm, r.params, r.metric, value,
                     "" if r.result_count is None else str(r.result_count)])
    widths = [max(len(row[i]) for row in [header] + body) for i in range(len(header))]

    def fmt(row: List[str]) -> str:
        return "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()

    lines = [f"实验 {report.experiment}", fmt(header), fmt(["-" * w for w in widths])]
    lines.extend(fmt(row) for row in body)
    return "\n".join(lines)
