"""STR 批量构建测试"""

import random

import pytest

from spjoin.errors import ErrorCode, SpjoinError
from spjoin.geometry import MBR, SpatialObject, mbr_union
from spjoin.rtree import node_mbr, str_bulk_load, tree_summary, validate, window_query


def lattice(side):
    return [SpatialObject(i * side + j, MBR.from_point(i, j)) for i in range(side) for j in range(side)]


class TestShape:
    """树形状"""

    def test_single_object(self):
        tree = str_bulk_load([SpatialObject(0, MBR(0, 0, 1, 1))], 16)
        assert tree.height == 1
        assert len(tree.nodes) == 1
        assert tree.root.is_leaf
        assert tree.root.entries[0].ref == 0

    def test_seventeen_identical_objects(self):
        objs = [SpatialObject(i, MBR(5, 5, 6, 6)) for i in range(17)]
        tree = str_bulk_load(objs, 16)
        assert tree.height == 2
        leaves = [n for n in tree.nodes if n.is_leaf]
        assert sorted(n.count for n in leaves) == [1, 16]
        assert tree.root.count == 2
        assert validate(tree, source_ids=range(17)).ok

    def test_lattice_packs_full_leaves(self):
        tree = str_bulk_load(lattice(16), 16)
        leaves = [n for n in tree.nodes if n.is_leaf]
        assert len(leaves) == 16
        assert all(n.count == 16 for n in leaves)
        assert tree.height == 2

    def test_root_is_last_node(self):
        tree = str_bulk_load(lattice(20), 8)
        assert tree.root_index == len(tree.nodes) - 1
        assert not tree.root.is_leaf

    @pytest.mark.parametrize("node_size", [4, 8, 16, 64])
    def test_valid_for_many_sizes(self, small_datasets, node_size):
        R, _ = small_datasets
        tree = str_bulk_load(R, node_size)
        report = validate(tree, source_ids=[o.id for o in R])
        assert report.ok, report.violations
        summary = tree_summary(tree)
        assert summary["object_count"] == len(R)
        assert summary["nodes_per_level"][0] == 1

    def test_root_mbr_covers_everything(self, small_datasets):
        R, _ = small_datasets
        tree = str_bulk_load(R, 16)
        assert node_mbr(tree, tree.root_index) == mbr_union(o.mbr for o in R)


class TestDeterminism:
    def test_input_order_irrelevant(self, small_datasets):
        R, _ = small_datasets
        shuffled = list(R)
        random.Random(7).shuffle(shuffled)
        a = str_bulk_load(R, 16)
        b = str_bulk_load(shuffled, 16)
        assert a.nodes == b.nodes
        assert a.root_index == b.root_index


class TestErrors:
    def test_empty_input(self):
        with pytest.raises(SpjoinError) as exc:
            str_bulk_load([], 16)
        assert exc.value.code == ErrorCode.TREE_EMPTY_INPUT

    def test_node_size_too_small(self):
        with pytest.raises(SpjoinError) as exc:
            str_bulk_load(lattice(2), 3)
        assert exc.value.code == ErrorCode.TREE_INVALID_NODE_SIZE


class TestWindowQuery:
    def test_matches_linear_scan(self, small_datasets):
        R, _ = small_datasets
        tree = str_bulk_load(R, 8)
        for q in [MBR(0, 0, 100, 100), MBR(400, 400, 401, 401), MBR(-5, -5, -1, -1), MBR(0, 0, 1000, 1000)]:
            expected = sorted(
                o.id for o in R
                if o.mbr.xmax >= q.xmin and q.xmax >= o.mbr.xmin and o.mbr.ymax >= q.ymin and q.ymax >= o.mbr.ymin
            )
            assert window_query(tree, q) == expected
