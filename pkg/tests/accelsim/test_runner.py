"""模拟入口测试：功能结果与周期统计"""

import pytest

from spjoin.accelsim import (
    SimConfig,
    sim_pbsm,
    sim_sync_traversal,
    sim_sync_traversal_files,
    unit_pair_cycles,
    write_path_bytes,
)
from spjoin.errors import ErrorCode, SpjoinError
from spjoin.joinalgos import (
    JoinCounters,
    SchedulingPolicy,
    nested_loop_join,
    pbsm_hierarchical_partition,
    pbsm_partition,
    sync_traversal_bfs,
    uniform_grid_for,
)
from spjoin.rtree import Entry, serialize, str_bulk_load


@pytest.fixture
def trees(small_datasets):
    R, S = small_datasets
    return str_bulk_load(R, 16), str_bulk_load(S, 16)


class TestSyncTraversal:
    def test_matches_oracle(self, small_datasets, trees):
        outcome = sim_sync_traversal(*trees, SimConfig())
        assert outcome.result.pairs == nested_loop_join(*small_datasets).pairs

    def test_mixed_heights(self, small_datasets, rects):
        R, _ = small_datasets
        S = rects([(100, 100, 400, 400), (900, 0, 1000, 50)], start_id=9000)
        outcome = sim_sync_traversal(str_bulk_load(R, 8), str_bulk_load(S, 8), SimConfig())
        assert outcome.result.pairs == nested_loop_join(R, S).pairs

    def test_levels_match_software(self, trees):
        counters = JoinCounters()
        sync_traversal_bfs(*trees, counters=counters)
        stats = sim_sync_traversal(*trees, SimConfig()).stats
        assert [level.tasks for level in stats.per_level] == counters.depth_profile()

    def test_deterministic(self, trees):
        a = sim_sync_traversal(*trees, SimConfig())
        b = sim_sync_traversal(*trees, SimConfig())
        assert a.stats.model_dump() == b.stats.model_dump()

    def test_latency_identity(self, trees):
        cfg = SimConfig(clock_hz=100_000_000)
        outcome = sim_sync_traversal(*trees, cfg)
        assert outcome.latency_seconds == outcome.stats.total_cycles / cfg.clock_hz
        assert outcome.transfer_seconds > 0

    def test_throughput_lower_bound(self, trees):
        for units in (1, 4, 16):
            stats = sim_sync_traversal(*trees, SimConfig(num_join_units=units)).stats
            assert stats.total_cycles * units >= stats.predicate_evals

    def test_more_units_help(self, trees):
        cycles = {
            u: sim_sync_traversal(*trees, SimConfig(num_join_units=u, scheduling_policy=SchedulingPolicy.DYNAMIC))
            .stats.total_cycles
            for u in (1, 2, 4, 16)
        }
        assert cycles[1] > cycles[2] > cycles[4] >= cycles[16]

    def test_disjoint_roots_single_task(self, rects):
        R = rects([(i, 0, i + 1, 1) for i in range(40)])
        S = rects([(i, 100, i + 1, 101) for i in range(40)], start_id=100)
        tree_r, tree_s = str_bulk_load(R, 4), str_bulk_load(S, 4)
        cfg = SimConfig()
        outcome = sim_sync_traversal(tree_r, tree_s, cfg)
        assert len(outcome.result) == 0
        assert outcome.stats.tasks == 1
        assert outcome.stats.total_cycles == unit_pair_cycles(tree_r.root.count, tree_s.root.count, cfg)

    def test_write_counter_matches_results(self, trees):
        cfg = SimConfig()
        outcome = sim_sync_traversal(*trees, cfg)
        assert write_path_bytes(outcome.stats, cfg) == len(outcome.result) * cfg.result_pair_bytes
        outcome.stats.result_bytes_written += 1
        with pytest.raises(SpjoinError) as exc:
            write_path_bytes(outcome.stats, cfg)
        assert exc.value.code == ErrorCode.SIM_WRITE_COUNTER_VIOLATION

    def test_invalid_tree_rejected(self, trees):
        tree_r, tree_s = trees
        e = tree_r.root.entries[0]
        tree_r.root.entries[0] = Entry(e.mbr, len(tree_r.nodes) + 5)
        with pytest.raises(SpjoinError) as exc:
            sim_sync_traversal(tree_r, tree_s, SimConfig())
        assert exc.value.code == ErrorCode.TREE_INVALID
        assert exc.value.details["side"] == "R"

    def test_from_files(self, trees, temp_dir):
        serialize(trees[0], temp_dir / "r.tree")
        serialize(trees[1], temp_dir / "s.tree")
        from_files = sim_sync_traversal_files(temp_dir / "r.tree", temp_dir / "s.tree", SimConfig())
        assert from_files.stats.model_dump() == sim_sync_traversal(*trees, SimConfig()).stats.model_dump()


class TestPbsm:
    @pytest.mark.parametrize("bound", [2, 8, 16])
    def test_matches_oracle(self, small_datasets, bound):
        R, S = small_datasets
        outcome = sim_pbsm(pbsm_hierarchical_partition(R, S, bound), SimConfig())
        assert outcome.result.pairs == nested_loop_join(R, S).pairs
        assert outcome.stats.results_emitted == len(outcome.result)
        assert len(outcome.stats.per_level) == 1

    def test_uniform_grid_tiles(self, small_datasets):
        R, S = small_datasets
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, 16))
        outcome = sim_pbsm(tiles, SimConfig(num_join_units=4))
        assert outcome.result.pairs == nested_loop_join(R, S).pairs
        assert outcome.stats.predicate_evals == sum(t.comparisons for t in tiles)
        assert outcome.stats.task_bytes_written == 0

    def test_no_tiles(self):
        outcome = sim_pbsm([], SimConfig())
        assert len(outcome.result) == 0
        assert outcome.stats.total_cycles == 0


class TestUnitScaling:
    """固定输入与策略时，总周期随连接单元数不增"""

    DOUBLING = (1, 2, 4, 8, 16)

    @staticmethod
    def _cfg(units, policy):
        return SimConfig(num_join_units=units, scheduling_policy=policy)

    @pytest.mark.parametrize("policy", list(SchedulingPolicy))
    def test_sync_traversal(self, trees, policy):
        cycles = [sim_sync_traversal(*trees, self._cfg(u, policy)).stats.total_cycles for u in self.DOUBLING]
        assert cycles == sorted(cycles, reverse=True)

    @pytest.mark.parametrize("policy", list(SchedulingPolicy))
    def test_pbsm(self, small_datasets, policy):
        R, S = small_datasets
        tiles = pbsm_hierarchical_partition(R, S, 16)
        cycles = [sim_pbsm(tiles, self._cfg(u, policy)).stats.total_cycles for u in self.DOUBLING]
        assert cycles == sorted(cycles, reverse=True)

    def test_dynamic_every_unit_count(self, small_datasets):
        R, S = small_datasets
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, 12))
        cycles = [
            sim_pbsm(tiles, self._cfg(u, SchedulingPolicy.DYNAMIC)).stats.total_cycles
            for u in range(1, 17)
        ]
        assert cycles == sorted(cycles, reverse=True)


class TestWritePath:
    def test_one_tile_one_unit(self, rects):
        from spjoin.joinalgos import Tile
        from spjoin.geometry import MBR

        R = rects([(i, 0, i + 2, 2) for i in range(6)])
        S = rects([(i, 1, i + 1, 3) for i in range(5)], start_id=50)
        tile = Tile(tile_mbr=MBR(0, 0, 10, 10), last_col=True, last_row=True, objects_r=R, objects_s=S)
        cfg = SimConfig(num_join_units=1)
        outcome = sim_pbsm([tile], cfg)
        drain = -(-len(outcome.result) * cfg.result_pair_bytes // cfg.mem_bw_bytes_per_cycle)
        assert outcome.stats.total_cycles == unit_pair_cycles(6, 5, cfg) + drain
        assert outcome.result.pairs == nested_loop_join(R, S).pairs

    def test_zero_results(self, rects):
        R = rects([(0, 0, 1, 1)])
        S = rects([(5, 5, 6, 6)], start_id=10)
        cfg = SimConfig()
        outcome = sim_sync_traversal(str_bulk_load(R, 4), str_bulk_load(S, 4), cfg)
        assert write_path_bytes(outcome.stats, cfg) == 0
        assert outcome.stats.flush_count == 0

    def test_flush_count_lower_bound(self, small_datasets):
        R, S = small_datasets
        cfg = SimConfig(burst_threshold_bytes=64)
        outcome = sim_pbsm(pbsm_hierarchical_partition(R, S, 16), cfg)
        nbytes = write_path_bytes(outcome.stats, cfg)
        assert outcome.stats.flush_count >= -(-nbytes // cfg.burst_threshold_bytes)
        assert outcome.stats.write_offsets_checked == outcome.stats.results_emitted
