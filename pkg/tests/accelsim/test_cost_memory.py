"""代价模型与存储子系统测试"""

import pytest
import simpy

from spjoin.accelsim import BurstBuffer, MemoryChannels, SimConfig, WriteCounter, unit_pair_cycles
from spjoin.accelsim.cost import channel_occupancy, fetch_cycles
from spjoin.errors import ErrorCode, SpjoinError


class TestUnitPairCycles:
    """默认参数下的校准值"""

    @pytest.mark.parametrize("size,cycles", [(32, 1047), (8, 80), (4, 31), (16, 274), (64, 4129)])
    def test_calibration(self, size, cycles):
        assert unit_pair_cycles(size, size, SimConfig()) == cycles

    def test_cycles_per_predicate_band(self):
        cfg = SimConfig()
        per_pred = {s: unit_pair_cycles(s, s, cfg) / (s * s) for s in (4, 8, 16, 32, 64)}
        assert per_pred[4] > per_pred[8] > per_pred[16] > per_pred[32] > per_pred[64] > 1.0
        assert per_pred[32] < 1.05
        assert all(1.0 <= per_pred[s] <= 1.35 for s in (8, 16, 32, 64))
        assert per_pred[4] >= 1.5
        assert abs(unit_pair_cycles(32, 32, cfg) - 1066) <= 106.6

    def test_uneven_nodes_fetch_by_larger(self):
        cfg = SimConfig()
        assert fetch_cycles(1, 32, cfg) == fetch_cycles(32, 32, cfg)
        assert channel_occupancy(1, 32, cfg) < channel_occupancy(32, 32, cfg)

    def test_empty_node_rejected(self):
        with pytest.raises(SpjoinError) as exc:
            unit_pair_cycles(0, 4, SimConfig())
        assert exc.value.code == ErrorCode.SIM_INVALID_INPUT


class TestMemoryChannels:
    @staticmethod
    def _grants(channels, requests):
        """requests: [(发出周期, 占用周期)]，返回各请求的授权周期"""
        env = simpy.Environment()
        mem = MemoryChannels(env, channels)
        grants = []

        def client(at, cycles):
            yield env.timeout(at)
            req = mem.request()
            yield req
            grants.append(env.now)
            mem.occupy(req, cycles)

        for at, cycles in requests:
            env.process(client(at, cycles))
        env.run()
        return mem, grants

    def test_single_channel_serializes(self):
        mem, grants = self._grants(1, [(0, 10), (0, 10), (50, 5)])
        assert grants == [0, 10, 50]
        assert mem.busy_cycles == 25

    def test_multiple_channels(self):
        _, grants = self._grants(2, [(0, 10), (0, 10), (0, 10)])
        assert grants == [0, 0, 10]

    def test_drain_waits_for_release(self):
        env = simpy.Environment()
        mem = MemoryChannels(env, 1)
        done = []

        def client():
            req = mem.request()
            yield req
            mem.occupy(req, 30)
            yield mem.drain()
            done.append(env.now)

        env.process(client())
        env.run()
        assert done == [30]


class TestBurstBuffer:
    def test_bursts(self):
        buf = BurstBuffer(4096, 8)
        assert buf.items_per_burst == 512
        assert buf.bursts(0) == []
        assert buf.bursts(10) == [10]
        assert buf.bursts(1100) == [512, 512, 76]

    def test_threshold_below_item(self):
        assert BurstBuffer(4, 8).bursts(3) == [1, 1, 1]


class TestWriteCounter:
    def test_offsets_contiguous(self):
        counter = WriteCounter(8, base=1024, record=True)
        counter.reserve(5)
        assert counter.assign(3) == 1024
        assert counter.assign(0) == 1048
        assert counter.assign(2) == 1048
        assert counter.offsets == [1024, 1032, 1040, 1048, 1056]
        assert counter.bytes_written == 40
        counter.verify_drained()

    def test_overrun_detected(self):
        counter = WriteCounter(8)
        counter.reserve(4)
        counter.assign(4)
        with pytest.raises(SpjoinError) as exc:
            counter.assign(1)
        assert exc.value.code == ErrorCode.SIM_WRITE_COUNTER_VIOLATION

    def test_unwritten_reservation_detected(self):
        counter = WriteCounter(8)
        counter.reserve(3)
        counter.assign(2)
        with pytest.raises(SpjoinError) as exc:
            counter.verify_drained()
        assert exc.value.code == ErrorCode.SIM_WRITE_COUNTER_VIOLATION
