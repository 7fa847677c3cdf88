"""大规模数据集上的模拟验收（需 --runslow）"""

import pytest

from spjoin.accelsim import SimConfig, sim_pbsm, sim_sync_traversal
from spjoin.harness import DatasetSpec, gen_uniform
from spjoin.joinalgos import SchedulingPolicy, pbsm_hierarchical_partition
from spjoin.rtree import str_bulk_load


pytestmark = pytest.mark.slow

N = 100_000


@pytest.fixture(scope="module")
def datasets():
    R = gen_uniform(DatasetSpec(n=N, seed=1))
    S = gen_uniform(DatasetSpec(n=N, seed=2))
    return R, S


@pytest.fixture(scope="module")
def trees(datasets):
    R, S = datasets
    return {m: (str_bulk_load(R, m), str_bulk_load(S, m)) for m in (8, 16, 32, 64)}


def _cycles(trees, m, units, policy=SchedulingPolicy.STATIC):
    cfg = SimConfig(num_join_units=units, scheduling_policy=policy)
    return sim_sync_traversal(*trees[m], cfg).stats.total_cycles


def test_node_size_16_best_at_16_units(trees):
    cycles = {m: _cycles(trees, m, 16) for m in trees}
    assert min(cycles, key=cycles.get) == 16


def test_small_nodes_saturate_memory(trees):
    speedup_4 = _cycles(trees, 8, 1) / _cycles(trees, 8, 4)
    speedup_16 = _cycles(trees, 8, 1) / _cycles(trees, 8, 16)
    assert speedup_16 / speedup_4 < 1.5


def test_static_close_to_dynamic(trees):
    static = _cycles(trees, 16, 16, SchedulingPolicy.STATIC)
    dynamic = _cycles(trees, 16, 16, SchedulingPolicy.DYNAMIC)
    assert abs(static - dynamic) / dynamic < 0.05


def test_pbsm_faster_than_traversal(datasets, trees):
    R, S = datasets
    tiles = pbsm_hierarchical_partition(R, S, 16)
    pbsm = sim_pbsm(tiles, SimConfig())
    assert pbsm.stats.total_cycles < _cycles(trees, 16, 16)


def test_larger_nodes_scale_better(trees):
    speedup_8 = _cycles(trees, 8, 1) / _cycles(trees, 8, 16)
    speedup_32 = _cycles(trees, 32, 1) / _cycles(trees, 32, 16)
    assert speedup_32 > speedup_8


def test_pbsm_policies_similar(datasets):
    R, S = datasets
    tiles = pbsm_hierarchical_partition(R, S, 16)
    static = sim_pbsm(tiles, SimConfig(scheduling_policy=SchedulingPolicy.STATIC)).stats.total_cycles
    dynamic = sim_pbsm(tiles, SimConfig(scheduling_policy=SchedulingPolicy.DYNAMIC)).stats.total_cycles
    assert abs(static - dynamic) / dynamic < 0.05


def test_node_size_8_best_at_single_unit(trees):
    cycles = {m: _cycles(trees, m, 1) for m in trees}
    assert min(cycles, key=cycles.get) == 8
