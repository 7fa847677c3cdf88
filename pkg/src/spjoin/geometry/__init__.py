"""几何原语

MBR、相交谓词与 PBSM 参考点规则，其余模块都以此为基础。
"""

from .models import MBR, Point, SpatialObject, objects_from_arrays, to_float32, to_float32_list
from .predicates import (
    intersect_matrix,
    intersection_reference_point,
    mbr_array,
    mbr_contains,
    mbr_intersects,
    mbr_union,
    point_in_tile,
)

__all__ = [
    "MBR",
    "Point",
    "SpatialObject",
    "objects_from_arrays",
    "to_float32",
    "to_float32_list",
    "intersect_matrix",
    "intersection_reference_point",
    "mbr_array",
    "mbr_contains",
    "mbr_intersects",
    "mbr_union",
    "point_in_tile",
]
