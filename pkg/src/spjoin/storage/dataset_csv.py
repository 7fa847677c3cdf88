"""CSV 文件格式

- 数据集: 表头 `id,xmin,ymin,xmax,ymax`，每行一个对象
- 结果:   表头 `id_r,id_s`，按字典序排序
- 统计:   表头 `experiment,dataset,algorithm,params,metric,value,seed`

均为 UTF-8 编码、LF 换行。
"""

from __future__ import annotations

import csv
import io
import math
from typing import Iterable, List, Sequence, Tuple

from ..errors import ErrorCode, SpjoinError
from ..geometry import MBR, SpatialObject, to_float32
from ..geometry.models import MAX_OBJECT_ID
from .base import PathLike, require_file, write_text


DATASET_HEADER = ["id", "xmin", "ymin", "xmax", "ymax"]
RESULT_HEADER = ["id_r", "id_s"]
STATS_HEADER = ["experiment", "dataset", "algorithm", "params", "metric", "value", "seed"]


def _parse_error(line_no: int, message: str) -> SpjoinError:
    return SpjoinError(
        ErrorCode.DATASET_PARSE_ERROR,
        f"第 {line_no} 行: {message}",
        {"line": line_no},
    )


def parse_dataset(text: str) -> List[SpatialObject]:
    """解析数据集 CSV 文本

    坐标舍入到 32 位浮点。

    Raises:
        SpjoinError: 格式错误（带行号）或 ID 重复
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != DATASET_HEADER:
        raise _parse_error(1, f"表头必须为 {','.join(DATASET_HEADER)}")

    objects: List[SpatialObject] = []
    seen: dict[int, int] = {}
    for row in reader:
        line_no = reader.line_num
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 5:
            raise _parse_error(line_no, f"应有 5 个字段，实际 {len(row)} 个")
        try:
            oid = int(row[0])
            coords = [float(v) for v in row[1:]]
        except ValueError:
            raise _parse_error(line_no, f"无法解析数值: {','.join(row)}") from None
        if not 0 <= oid <= MAX_OBJECT_ID:
            raise _parse_error(line_no, f"ID {oid} 超出 32 位无符号范围")
        if not all(math.isfinite(c) for c in coords):
            raise _parse_error(line_no, "坐标必须为有限值")
        xmin, ymin, xmax, ymax = (to_float32(c) for c in coords)
        if xmax < xmin or ymax < ymin:
            raise _parse_error(line_no, f"最大角小于最小角: {','.join(row[1:])}")
        if oid in seen:
            raise SpjoinError(
                ErrorCode.DATASET_DUPLICATE_ID,
                f"第 {line_no} 行: ID {oid} 与第 {seen[oid]} 行重复",
                {"line": line_no, "id": oid},
            )
        seen[oid] = line_no
        objects.append(SpatialObject(oid, MBR(xmin, ymin, xmax, ymax)))
    return objects


def load_dataset(path: PathLike) -> List[SpatialObject]:
    """读取数据集 CSV"""
    p = require_file(path)
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise SpjoinError(ErrorCode.STORAGE_READ_ERROR, f"无法读取 {p}: {e}", {"path": str(p)}) from e
    return parse_dataset(text)


def format_dataset(objects: Iterable[SpatialObject]) -> str:
    lines = [",".join(DATASET_HEADER)]
    for o in objects:
        m = o.mbr
        lines.append(",".join([str(o.id)] + [repr(float(v)) for v in m.as_tuple()]))
    return "\n".join(lines) + "\n"


def store_dataset(objects: Iterable[SpatialObject], path: PathLike) -> None:
    """写出数据集 CSV（浮点数以最短往返表示输出）"""
    write_text(path, format_dataset(objects))


def store_result(pairs: Iterable[Tuple[int, int]], path: PathLike) -> None:
    """写出结果 CSV（按字典序排序）"""
    lines = [",".join(RESULT_HEADER)]
    lines.extend(f"{r},{s}" for r, s in sorted(pairs))
    write_text(path, "\n".join(lines) + "\n")


def load_result(path: PathLike) -> List[Tuple[int, int]]:
    """读取结果 CSV"""
    p = require_file(path)
    reader = csv.reader(io.StringIO(p.read_text(encoding="utf-8")))
    header = next(reader, None)
    if header != RESULT_HEADER:
        raise _parse_error(1, f"表头必须为 {','.join(RESULT_HEADER)}")
    out: List[Tuple[int, int]] = []
    for row in reader:
        if not row:
            continue
        try:
            out.append((int(row[0]), int(row[1])))
        except (ValueError, IndexError):
            raise _parse_error(reader.line_num, f"无法解析结果对: {','.join(row)}") from None
    return out


def store_stats(rows: Sequence[Sequence[object]], path: PathLike) -> None:
    """写出统计 CSV

    Args:
        rows: 与 STATS_HEADER 对齐的行
        path: 输出路径
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(STATS_HEADER)
    writer.writerows(rows)
    write_text(path, buf.getvalue())
