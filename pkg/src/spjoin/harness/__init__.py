"""spjoin 实验框架

数据集生成、计时与实验驱动。
"""

from .datagen import gen_clustered, gen_uniform, generate
from .experiments import EXPERIMENTS, experiment_names, run_experiment
from .models import BenchReport, BenchRow, DatasetKind, DatasetSpec, ExperimentConfig
from .timing import measure

__all__ = [
    "gen_clustered",
    "gen_uniform",
    "generate",
    "EXPERIMENTS",
    "experiment_names",
    "run_experiment",
    "BenchReport",
    "BenchRow",
    "DatasetKind",
    "DatasetSpec",
    "ExperimentConfig",
    "measure",
]
