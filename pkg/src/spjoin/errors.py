"""spjoin 错误定义

包含:
- ErrorCode: 错误码枚举
- SpjoinError: 自定义异常基类
"""

from __future__ import annotations

from enum import Enum


class ErrorCode(str, Enum):
    """错误码"""
    # 存储与文件格式相关 (1xx)
    STORAGE_READ_ERROR = "E101"
    STORAGE_WRITE_ERROR = "E102"
    STORAGE_NOT_FOUND = "E103"
    DATASET_PARSE_ERROR = "E104"
    DATASET_DUPLICATE_ID = "E105"
    TREE_FILE_MALFORMED = "E106"

    # 几何相关 (2xx)
    MBR_INVALID = "E201"
    REFERENCE_POINT_UNDEFINED = "E202"

    # R-tree 相关 (3xx)
    TREE_EMPTY_INPUT = "E301"
    TREE_INVALID_NODE_SIZE = "E302"
    TREE_INVALID = "E303"

    # 连接与划分相关 (4xx)
    REGION_MISMATCH = "E401"
    GRID_INVALID = "E402"
    WORKERS_INVALID = "E403"
    JOIN_INVALID_ARGUMENT = "E404"

    # 模拟器相关 (5xx)
    SIM_INVALID_INPUT = "E501"
    SIM_WRITE_COUNTER_VIOLATION = "E502"

    # 验证与配置相关 (6xx)
    VALIDATION_ERROR = "E601"
    CONFIG_SCHEMA_ERROR = "E602"
    DATASET_SPEC_INVALID = "E603"

    # 实验相关 (7xx)
    EXPERIMENT_UNKNOWN = "E701"
    EXPERIMENT_FAILED = "E702"


class SpjoinError(Exception):
    """spjoin 自定义异常基类"""

    def __init__(self, code: ErrorCode, message: str, details: dict | None = None):
        self.code = code
        self.message = message
        self.details = details or {}
        super().__init__(f"[{code.value}] {message}")

    def to_dict(self) -> dict:
        """转换为字典格式"""
        return {
            "code": self.code.value,
            "message": self.message,
            "details": self.details,
        }


# 属于用户输入问题的错误码（CLI 退出码 1），其余视为内部不变量失败（退出码 2）
USER_ERROR_CODES = frozenset({
    ErrorCode.STORAGE_READ_ERROR,
    ErrorCode.STORAGE_WRITE_ERROR,
    ErrorCode.STORAGE_NOT_FOUND,
    ErrorCode.DATASET_PARSE_ERROR,
    ErrorCode.DATASET_DUPLICATE_ID,
    ErrorCode.TREE_FILE_MALFORMED,
    ErrorCode.MBR_INVALID,
    ErrorCode.TREE_EMPTY_INPUT,
    ErrorCode.TREE_INVALID_NODE_SIZE,
    ErrorCode.TREE_INVALID,
    ErrorCode.REGION_MISMATCH,
    ErrorCode.GRID_INVALID,
    ErrorCode.WORKERS_INVALID,
    ErrorCode.JOIN_INVALID_ARGUMENT,
    ErrorCode.SIM_INVALID_INPUT,
    ErrorCode.VALIDATION_ERROR,
    ErrorCode.CONFIG_SCHEMA_ERROR,
    ErrorCode.DATASET_SPEC_INVALID,
    ErrorCode.EXPERIMENT_UNKNOWN,
})
