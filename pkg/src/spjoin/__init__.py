"""spjoin: 空间连接过滤阶段引擎与加速器周期级模拟器"""

__version__ = "0.1.0"
__author__ = "spjoin Team"
