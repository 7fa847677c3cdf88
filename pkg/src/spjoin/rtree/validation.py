"""R-tree 结构校验

检查节点条目数上下界、叶深度一致、父条目 MBR 紧致、对象覆盖四类性质。
validate 从不抛异常，所有问题都记录在报告中；require_valid 在有违规时抛 TREE_INVALID。
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from typing import Dict, Iterable, List, Optional

from ..errors import ErrorCode, SpjoinError
from ..geometry import mbr_union
from .models import RTree, ValidationReport, Violation, ViolationKind


logger = logging.getLogger(__name__)


def validate(
    tree: RTree,
    source_ids: Optional[Iterable[int]] = None,
    min_fill: int = 1,
) -> ValidationReport:
    """校验 R-tree

    STR 打包只保证每层最后一个节点至少 1 个条目，因此默认下界为 1；
    校验外部导入的树时可传入 min_fill=2。

    Args:
        tree: 待校验的树
        source_ids: 源数据集的对象 ID（提供时检查覆盖完全一致）
        min_fill: 非根节点的最少条目数

    Returns:
        校验报告
    """
    report = ValidationReport(node_count=len(tree.nodes), height=tree.height)
    violations = report.violations

    if not tree.nodes or not 0 <= tree.root_index < len(tree.nodes):
        violations.append(Violation(
            kind=ViolationKind.STRUCTURE,
            message=f"根节点下标 {tree.root_index} 超出节点数组范围 ({len(tree.nodes)})",
        ))
        return report

    depths = _node_depths(tree, violations)
    M = tree.node_size

    for idx, depth in sorted(depths.items()):
        node = tree.nodes[idx]
        is_root = idx == tree.root_index

        # 条目数上下界
        low = 1 if is_root else min_fill
        if not low <= node.count <= M:
            violations.append(Violation(
                kind=ViolationKind.COUNT_BOUND,
                node_index=idx,
                message=f"节点 {idx} 条目数 {node.count} 不在 [{low}, {M}] 内",
            ))

        # 叶深度一致
        if node.is_leaf and depth != tree.height - 1:
            violations.append(Violation(
                kind=ViolationKind.LEAF_DEPTH,
                node_index=idx,
                message=f"叶节点 {idx} 深度 {depth}，期望 {tree.height - 1}",
            ))
        if not node.is_leaf and depth >= tree.height - 1:
            violations.append(Violation(
                kind=ViolationKind.LEAF_DEPTH,
                node_index=idx,
                message=f"目录节点 {idx} 位于深度 {depth}，树高为 {tree.height}",
            ))

        # 父条目紧致
        if not node.is_leaf:
            for entry in node.entries:
                child = tree.nodes[entry.ref] if 0 <= entry.ref < len(tree.nodes) else None
                if child is None or not child.entries:
                    continue
                tight = mbr_union(e.mbr for e in child.entries)
                if tight != entry.mbr:
                    violations.append(Violation(
                        kind=ViolationKind.TIGHTNESS,
                        node_index=idx,
                        message=(
                            f"节点 {idx} 指向子节点 {entry.ref} 的条目 MBR "
                            f"{entry.mbr.as_tuple()} 不等于子节点并集 {tight.as_tuple()}"
                        ),
                    ))

    unreachable = set(range(len(tree.nodes))) - set(depths)
    for idx in sorted(unreachable):
        violations.append(Violation(
            kind=ViolationKind.STRUCTURE,
            node_index=idx,
            message=f"节点 {idx} 不可从根到达",
        ))

    _check_coverage(tree, depths, source_ids, violations)

    if violations:
        logger.debug("R-tree 校验发现 %d 处违规", len(violations))
    return report


def require_valid(
    tree: RTree,
    source_ids: Optional[Iterable[int]] = None,
    min_fill: int = 1,
) -> ValidationReport:
    """校验 R-tree，有违规时抛出异常

    Raises:
        SpjoinError: TREE_INVALID，details 给出违规数与首个违规
    """
    report = validate(tree, source_ids=source_ids, min_fill=min_fill)
    if not report.ok:
        first = report.violations[0]
        raise SpjoinError(
            ErrorCode.TREE_INVALID,
            f"R-tree 无效（{len(report.violations)} 处违规）: {first.message}",
            {
                "violations": len(report.violations),
                "kind": first.kind.value,
                "node_index": first.node_index,
            },
        )
    return report


def _node_depths(tree: RTree, violations: List[Violation]) -> Dict[int, int]:
    """从根出发 BFS 计算每个可达节点的深度，同时检查引用结构"""
    depths: Dict[int, int] = {tree.root_index: 0}
    queue = deque([tree.root_index])
    while queue:
        idx = queue.popleft()
        node = tree.nodes[idx]
        if node.is_leaf:
            continue
        for entry in node.entries:
            child = entry.ref
            if not 0 <= child < len(tree.nodes):
                violations.append(Violation(
                    kind=ViolationKind.STRUCTURE,
                    node_index=idx,
                    message=f"节点 {idx} 引用了不存在的子节点 {child}",
                ))
                continue
            if child in depths:
                violations.append(Violation(
                    kind=ViolationKind.STRUCTURE,
                    node_index=child,
                    message=f"节点 {child} 被多次引用",
                ))
                continue
            depths[child] = depths[idx] + 1
            queue.append(child)
    return depths


def _check_coverage(
    tree: RTree,
    depths: Dict[int, int],
    source_ids: Optional[Iterable[int]],
    violations: List[Violation],
) -> None:
    counts: Counter[int] = Counter()
    for idx in depths:
        node = tree.nodes[idx]
        if node.is_leaf:
            counts.update(e.ref for e in node.entries)

    for oid, n in sorted(counts.items()):
        if n > 1:
            violations.append(Violation(
                kind=ViolationKind.COVERAGE,
                message=f"对象 {oid} 在叶节点中出现 {n} 次",
            ))

    if source_ids is None:
        return
    expected = set(source_ids)
    missing = expected - counts.keys()
    extra = counts.keys() - expected
    if missing:
        violations.append(Violation(
            kind=ViolationKind.COVERAGE,
            message=f"{len(missing)} 个源对象未出现在叶节点中，例如 {sorted(missing)[:5]}",
        ))
    if extra:
        violations.append(Violation(
            kind=ViolationKind.COVERAGE,
            message=f"{len(extra)} 个叶条目不属于源数据集，例如 {sorted(extra)[:5]}",
        ))
