"""随机数据集上的全量一致性检查（需 --runslow）"""

import pytest

from spjoin.accelsim import SimConfig, sim_pbsm, sim_sync_traversal
from spjoin.harness import DatasetKind, DatasetSpec, generate
from spjoin.joinalgos import (
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
from spjoin.rtree import str_bulk_load


pytestmark = pytest.mark.slow

KINDS = [DatasetKind.UNIFORM_RECT, DatasetKind.UNIFORM_POINT, DatasetKind.CLUSTERED]


@pytest.mark.parametrize("seed", range(100))
def test_all_engines_match_oracle(seed):
    kind = KINDS[seed % len(KINDS)]
    n = 50 + (seed * 37) % 400
    spec = dict(kind=kind, n=n, region=(0.0, 0.0, 500.0, 500.0), obj_w=12.0, obj_h=8.0,
                clusters=3, cluster_sigma=40.0)
    R = generate(DatasetSpec(seed=2 * seed, **spec))
    S = generate(DatasetSpec(seed=2 * seed + 1, **spec))
    oracle = nested_loop_join(R, S).pairs

    assert plane_sweep_join(R, S).pairs == oracle

    node_size = (4, 8, 16, 32)[seed % 4]
    tree_r, tree_s = str_bulk_load(R, node_size), str_bulk_load(S, node_size)
    assert sync_traversal_dfs(tree_r, tree_s).pairs == oracle
    workers = (1, 2, 4, 16)[seed % 4]
    policy = list(SchedulingPolicy)[seed % 2]
    assert sync_traversal_bfs(tree_r, tree_s, workers, policy).pairs == oracle

    for i, grid in enumerate((8, 32, 128)):
        tiles = pbsm_partition(R, S, uniform_grid_for(R, S, grid))
        joiner = list(TileJoiner)[(seed + i) % 2]
        assert pbsm_join(tiles, joiner, workers, policy).pairs == oracle
    assert pbsm_1d(R, S, 1 + seed % 32).pairs == oracle

    units = (1, 4, 16)[seed % 3]
    cfg = SimConfig(num_join_units=units, scheduling_policy=policy)
    assert sim_sync_traversal(tree_r, tree_s, cfg).result.pairs == oracle
    assert sim_pbsm(pbsm_hierarchical_partition(R, S, 16), cfg).result.pairs == oracle
