"""PBSM 划分与去重测试"""

from collections import Counter

import pytest

from spjoin.errors import ErrorCode, SpjoinError
from spjoin.geometry import MBR, Point, intersection_reference_point, mbr_intersects, point_in_tile
from spjoin.joinalgos import (
    GridSpec,
    SchedulingPolicy,
    nested_loop_join,
    pbsm_1d,
    pbsm_emissions,
    pbsm_hierarchical_partition,
    pbsm_partition,
    uniform_grid_for,
)
from spjoin.joinalgos.pbsm import MIN_EXTENT_DIVISOR


class TestPartition:
    def test_tiles_hold_intersecting_objects_only(self, small_datasets):
        R, S = small_datasets
        for tile in pbsm_partition(R, S, uniform_grid_for(R, S, 8)):
            assert tile.objects_r and tile.objects_s
            assert all(mbr_intersects(o.mbr, tile.tile_mbr) for o in tile.objects_r + tile.objects_s)

    def test_every_object_assigned(self, small_datasets):
        R, S = small_datasets
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, 8), keep_empty=True)
        assert len(tiles) == 64
        assert {o.id for t in tiles for o in t.objects_r} == {o.id for o in R}

    def test_last_row_and_column_flags(self, small_datasets):
        R, S = small_datasets
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, 4), keep_empty=True)
        assert sum(t.last_col for t in tiles) == 4
        assert sum(t.last_row for t in tiles) == 4
        assert sum(t.last_col and t.last_row for t in tiles) == 1

    @pytest.mark.parametrize("cols,rows", [(1, 1), (3, 5), (8, 8)])
    def test_matches_tile_by_tile_scan(self, border_datasets, cols, rows):
        R, S = border_datasets
        grid = uniform_grid_for(R, S, cols, rows)
        tiles = pbsm_partition(R, S, grid, keep_empty=True)
        assert len(tiles) == cols * rows
        for k, tile in enumerate(tiles):
            row, col = divmod(k, cols)
            tm = grid.tile_mbr(col, row)
            assert tile.tile_mbr == tm
            assert tile.objects_r == [o for o in R if mbr_intersects(o.mbr, tm)]
            assert tile.objects_s == [o for o in S if mbr_intersects(o.mbr, tm)]

    def test_degenerate_region(self, rects):
        R = rects([(0, 5, 3, 5), (4, 5, 9, 5)])
        S = rects([(2, 5, 6, 5)], start_id=10)
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, 3, 2))
        assert [len(t.objects_s) for t in tiles] == [1, 1, 1, 1, 1, 1]
        assert [o.id for o in tiles[0].objects_r] == [0]

    def test_region_mismatch(self, rects):
        R = rects([(0, 0, 10, 10)])
        S = rects([(5, 5, 20, 20)], start_id=10)
        with pytest.raises(SpjoinError) as exc:
            pbsm_partition(R, S, GridSpec(MBR(0, 0, 10, 10), 2, 2))
        assert exc.value.code == ErrorCode.REGION_MISMATCH

    def test_invalid_grid(self):
        with pytest.raises(SpjoinError) as exc:
            GridSpec(MBR(0, 0, 1, 1), 0, 3)
        assert exc.value.code == ErrorCode.GRID_INVALID

    def test_invalid_strips(self, small_datasets):
        with pytest.raises(SpjoinError) as exc:
            pbsm_1d(*small_datasets, 0)
        assert exc.value.code == ErrorCode.GRID_INVALID


class TestDeduplication:
    """每个结果对恰好输出一次"""

    @pytest.mark.parametrize("grid", [2, 8, 32])
    def test_emitted_once(self, small_datasets, grid):
        R, S = small_datasets
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, grid))
        emitted = pbsm_emissions(tiles)
        counts = Counter(emitted)
        assert max(counts.values()) == 1
        assert set(counts) == nested_loop_join(R, S).pairs

    def test_reference_point_in_exactly_one_tile(self, small_datasets):
        R, S = small_datasets
        grid = uniform_grid_for(R, S, 6, 4)
        tiles = [
            (grid.tile_mbr(c, r), c == grid.cols - 1, r == grid.rows - 1)
            for r in range(grid.rows) for c in range(grid.cols)
        ]
        points = [
            intersection_reference_point(r.mbr, s.mbr)
            for r in R for s in S if mbr_intersects(r.mbr, s.mbr)
        ]
        xs, ys = grid.edges()
        # 网格线交点，含区域四角
        points += [Point(float(x), float(y)) for x in xs for y in ys]
        for p in points:
            assert sum(point_in_tile(p, *t) for t in tiles) == 1

    def test_replicated_large_objects(self, rects):
        # 大对象跨越全部瓦片，仍只输出一次
        R = rects([(0, 0, 100, 100)])
        S = rects([(x, y, x + 1, y + 1) for x in range(0, 100, 10) for y in range(0, 100, 10)], start_id=1000)
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, 5))
        assert sum(len(t.objects_r) for t in tiles) == 25
        emitted = pbsm_emissions(tiles, workers=3, policy=SchedulingPolicy.DYNAMIC)
        assert len(emitted) == len(set(emitted)) == 100


class TestHierarchical:
    def test_bound_or_flagged(self, small_datasets):
        R, S = small_datasets
        bound = 4
        tiles = pbsm_hierarchical_partition(R, S, bound)
        assert tiles
        for t in tiles:
            assert t.geomean <= bound or t.flagged

    def test_tiles_disjoint_interiors(self, small_datasets):
        R, S = small_datasets
        tiles = pbsm_hierarchical_partition(R, S, 8, keep_empty=True)
        total = sum(t.tile_mbr.area for t in tiles)
        region = uniform_grid_for(R, S, 1).region
        assert total == pytest.approx(region.area)

    def test_dense_hotspot_flagged(self, rects):
        # 同一点上堆叠的对象无法被细分
        R = rects([(5, 5, 5, 5)] * 10 + [(0, 0, 1, 1), (9, 9, 10, 10)])
        S = rects([(5, 5, 5, 5)] * 10 + [(0, 0, 1, 1), (9, 9, 10, 10)], start_id=100)
        tiles = pbsm_hierarchical_partition(R, S, 2)
        flagged = [t for t in tiles if t.flagged]
        assert flagged
        region = uniform_grid_for(R, S, 1).region
        assert all(t.tile_mbr.width / 2 <= region.width / MIN_EXTENT_DIVISOR for t in flagged)

    def test_no_split_equals_flat_partition(self, small_datasets):
        R, S = small_datasets
        grid = uniform_grid_for(R, S, 8)
        flat = pbsm_partition(R, S, grid)
        tiles = pbsm_hierarchical_partition(R, S, len(R) + len(S), coarse_grid=grid)
        assert [t.tile_mbr for t in tiles] == [t.tile_mbr for t in flat]
        assert [(t.objects_r, t.objects_s) for t in tiles] == [(t.objects_r, t.objects_s) for t in flat]
        assert all(t.depth == 0 and not t.flagged for t in tiles)

    def test_invalid_bound(self, small_datasets):
        with pytest.raises(SpjoinError) as exc:
            pbsm_hierarchical_partition(*small_datasets, 0)
        assert exc.value.code == ErrorCode.JOIN_INVALID_ARGUMENT


def test_border_spanning_majority_emitted_once():
    from spjoin.harness import DatasetSpec, gen_uniform

    spec = dict(n=300, region=(0.0, 0.0, 1000.0, 1000.0), obj_w=40.0, obj_h=40.0)
    R = gen_uniform(DatasetSpec(seed=21, **spec))
    S = gen_uniform(DatasetSpec(seed=22, **spec))
    grid = uniform_grid_for(R, S, 64)
    tiles = pbsm_partition(R, S, grid)
    replicated = Counter(o.id for t in tiles for o in t.objects_r)
    assert sum(1 for c in replicated.values() if c > 1) >= len(R) // 2

    emitted = pbsm_emissions(tiles)
    assert len(emitted) == len(set(emitted))
    assert set(emitted) == nested_loop_join(R, S).pairs
