"""Pytest 配置和共享 fixtures"""

import shutil
import tempfile
from pathlib import Path

import pytest

from spjoin.geometry import MBR, SpatialObject
from spjoin.harness import DatasetSpec, gen_uniform


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="运行大规模验收测试")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="需要 --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def temp_dir():
    """创建临时目录用于测试"""
    temp = Path(tempfile.mkdtemp(prefix="spjoin-test-"))
    yield temp
    shutil.rmtree(temp, ignore_errors=True)


def make_objects(rects, start_id=0):
    """由 (xmin, ymin, xmax, ymax) 列表构造对象"""
    return [SpatialObject(start_id + i, MBR(*r)) for i, r in enumerate(rects)]


@pytest.fixture
def small_datasets():
    """两组 500 个对象的均匀数据集（对象较大，保证有足够的相交对）"""
    spec_r = DatasetSpec(n=500, region=(0.0, 0.0, 1000.0, 1000.0), obj_w=20.0, obj_h=20.0, seed=1)
    spec_s = DatasetSpec(n=500, region=(0.0, 0.0, 1000.0, 1000.0), obj_w=20.0, obj_h=20.0, seed=2)
    return gen_uniform(spec_r), gen_uniform(spec_s)


@pytest.fixture
def border_datasets():
    """含边界接触、点对象与跨瓦片大对象的手工数据集"""
    R = make_objects([
        (0, 0, 10, 10),
        (10, 10, 20, 20),     # 与 S[0] 仅角点接触
        (5, 5, 5, 5),         # 点
        (0, 45, 100, 55),     # 横跨整个区域
        (50, 50, 50, 50),     # 位于网格线交点的点
        (99, 99, 100, 100),   # 区域右上角
    ])
    S = make_objects([
        (20, 20, 30, 30),
        (5, 0, 5, 100),       # 竖线
        (50, 0, 50, 100),     # 落在网格线上的竖线
        (50, 50, 60, 60),
        (100, 100, 100, 100),  # 区域右上角的点
        (0, 0, 0, 0),
    ], start_id=100)
    return R, S


@pytest.fixture
def rects():
    """返回 make_objects，供测试手工构造对象"""
    return make_objects
