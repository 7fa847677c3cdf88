"""离散事件引擎测试"""

from spjoin.accelsim import AcceleratorModel, Job, SimConfig, static_plan, unit_pair_cycles
from spjoin.joinalgos import SchedulingPolicy


def test_single_unit_is_sum_of_pairs():
    cfg = SimConfig(num_join_units=1)
    sizes = [(4, 4), (16, 16), (32, 7), (1, 32), (8, 8)]
    model = AcceleratorModel(cfg)
    model.run_phase([Job(a, b, 0, True) for a, b in sizes])
    stats = model.finish()
    assert stats.total_cycles == sum(unit_pair_cycles(a, b, cfg) for a, b in sizes)
    assert stats.stall_cycles == 0
    assert stats.per_unit_busy == [stats.total_cycles]


def test_parallel_units_share_read_channel():
    cfg = SimConfig(num_join_units=2)
    model = AcceleratorModel(cfg)
    model.run_phase([Job(16, 16, 0, True), Job(16, 16, 0, True)])
    stats = model.finish()
    single = unit_pair_cycles(16, 16, cfg)
    # 第二个单元等待第一次取数占用的读通道
    assert stats.stall_cycles == 20
    assert stats.total_cycles == single + 20


def test_level_barrier():
    cfg = SimConfig(num_join_units=4)
    model = AcceleratorModel(cfg)
    first = model.run_phase([Job(8, 8, 0, False)])
    second = model.run_phase([Job(8, 8, 0, True)] * 4)
    stats = model.finish()
    assert first.cycles == unit_pair_cycles(8, 8, cfg)
    assert stats.total_cycles == first.cycles + second.cycles
    assert len(stats.per_level) == 2


def test_write_path_accounting():
    cfg = SimConfig(num_join_units=1)
    model = AcceleratorModel(cfg, record_offsets=True)
    model.run_phase([Job(32, 32, 1000, True), Job(4, 4, 3, True)])
    stats = model.finish()
    assert stats.flush_count == 3
    assert stats.result_bytes_written == 1003 * cfg.result_pair_bytes
    assert stats.write_offsets_checked == 1003
    offsets = model.result_counter.offsets
    assert offsets == sorted(set(offsets))
    assert len(offsets) == 1003
    assert stats.mem_write_cycles == 64 + 61 + 1


def test_intermediate_tasks_not_counted_as_results():
    model = AcceleratorModel(SimConfig())
    model.run_phase([Job(8, 8, 5, False)])
    stats = model.finish()
    assert stats.result_bytes_written == 0
    assert stats.task_bytes_written == 5 * 8


def test_empty_phase_adds_nothing():
    model = AcceleratorModel(SimConfig())
    level = model.run_phase([])
    assert level.tasks == 0
    assert model.finish().total_cycles == 0


def test_static_plan_round_robin_on_equal_jobs():
    cfg = SimConfig(num_join_units=2)
    assert static_plan([Job(8, 8, 0, True)] * 5, cfg) == [[0, 2, 4], [1, 3]]


def test_static_plan_balances_estimated_cost():
    # 大小任务交替出现时，轮询会把所有大任务分给同一个单元
    jobs = [Job(64, 64, 0, True), Job(4, 4, 0, True)] * 6
    cfg = SimConfig(num_join_units=2, scheduling_policy=SchedulingPolicy.STATIC)
    plan = static_plan(jobs, cfg)
    assert sorted(len(q) for q in plan) == [6, 6]
    assert all(sum(1 for i in q if jobs[i].n_r == 64) == 3 for q in plan)

    static = AcceleratorModel(cfg)
    dynamic = AcceleratorModel(SimConfig(num_join_units=2, scheduling_policy=SchedulingPolicy.DYNAMIC))
    static.run_phase(jobs)
    dynamic.run_phase(jobs)
    s, d = static.finish().total_cycles, dynamic.finish().total_cycles
    assert abs(s - d) <= 0.05 * d
    assert s < 0.75 * 6 * unit_pair_cycles(64, 64, cfg)


def test_units_are_simulation_processes():
    model = AcceleratorModel(SimConfig(num_join_units=3))
    model.run_phase([Job(8, 8, 2, True)] * 3)
    stats = model.finish()
    assert model.now == stats.total_cycles
    assert all(busy >= unit_pair_cycles(8, 8, model.cfg) for busy in stats.per_unit_busy)
    assert stats.read_channel_busy == 3 * 15
