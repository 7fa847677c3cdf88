"""R-tree 校验测试"""

from dataclasses import replace

from spjoin.geometry import MBR
import pytest

from spjoin.errors import ErrorCode, SpjoinError
from spjoin.rtree import Entry, ViolationKind, require_valid, str_bulk_load, validate


def _tree(small_datasets):
    R, _ = small_datasets
    return str_bulk_load(R, 8), [o.id for o in R]


class TestValidate:
    def test_fresh_tree_passes(self, small_datasets):
        tree, ids = _tree(small_datasets)
        assert validate(tree, source_ids=ids).ok

    def test_truncated_leaf_detected(self, small_datasets):
        tree, ids = _tree(small_datasets)
        leaf_index = next(i for i, n in enumerate(tree.nodes) if n.is_leaf and n.count > 1)
        dropped = tree.nodes[leaf_index].entries.pop()

        report = validate(tree, source_ids=ids)
        assert not report.ok
        coverage = report.of_kind(ViolationKind.COVERAGE)
        assert coverage and str(dropped.ref) in coverage[0].message

    def test_shrunk_parent_names_node(self, small_datasets):
        tree, ids = _tree(small_datasets)
        parent = tree.root
        e = parent.entries[0]
        m = e.mbr
        parent.entries[0] = Entry(MBR(m.xmin, m.ymin, m.xmax - 1.0, m.ymax), e.ref)

        report = validate(tree, source_ids=ids)
        tight = report.of_kind(ViolationKind.TIGHTNESS)
        assert len(tight) == 1
        assert tight[0].node_index == tree.root_index
        assert str(tree.root_index) in tight[0].message

    def test_overfull_node(self, small_datasets):
        tree, _ = _tree(small_datasets)
        leaf = next(n for n in tree.nodes if n.is_leaf)
        leaf.entries.extend([leaf.entries[0]] * tree.node_size)
        report = validate(tree)
        assert report.of_kind(ViolationKind.COUNT_BOUND)
        assert report.of_kind(ViolationKind.COVERAGE)

    def test_leaf_depth_mismatch(self, small_datasets):
        tree, _ = _tree(small_datasets)
        wrong = replace(tree, height=tree.height + 1)
        report = validate(wrong)
        assert report.of_kind(ViolationKind.LEAF_DEPTH)

    def test_min_fill(self, rects):
        objs = rects([(i, 0, i, 0) for i in range(9)])
        tree = str_bulk_load(objs, 8)
        assert validate(tree).ok
        assert validate(tree, min_fill=2).of_kind(ViolationKind.COUNT_BOUND)

    def test_bad_root_index(self, small_datasets):
        tree, _ = _tree(small_datasets)
        report = validate(replace(tree, root_index=len(tree.nodes)))
        assert report.of_kind(ViolationKind.STRUCTURE)


class TestRequireValid:
    def test_valid_tree_returns_report(self, small_datasets):
        tree, ids = _tree(small_datasets)
        assert require_valid(tree, source_ids=ids).ok

    def test_violation_raises_tree_invalid(self, small_datasets):
        tree, ids = _tree(small_datasets)
        e = tree.root.entries[0]
        m = e.mbr
        tree.root.entries[0] = Entry(MBR(m.xmin, m.ymin, m.xmax - 1.0, m.ymax), e.ref)

        with pytest.raises(SpjoinError) as exc:
            require_valid(tree, source_ids=ids)
        assert exc.value.code == ErrorCode.TREE_INVALID
        assert exc.value.details["kind"] == ViolationKind.TIGHTNESS.value
        assert exc.value.details["node_index"] == tree.root_index
