"""R-tree 扁平二进制格式

小端布局:
- 头部: magic "SSRT", version u32, M u32, height u32, node_count u32, root_index u32
- 节点记录 × node_count: is_leaf u8, 3 字节填充, count u32, 然后 M 个 20 字节条目槽
  (xmin, ymin, xmax, ymax 为 f32, ref 为 u32)，未用槽位补零
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import BinaryIO, List, NoReturn, Union

from ..errors import ErrorCode, SpjoinError
from ..geometry import MBR
from .models import ENTRY_BYTES, Entry, RTree, RTreeNode


MAGIC = b"SSRT"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sIIIII")
_NODE_HEADER = struct.Struct("<B3xI")
_ENTRY = struct.Struct("<ffffI")
_EMPTY_SLOT = bytes(ENTRY_BYTES)

assert _ENTRY.size == ENTRY_BYTES


def node_record_size(node_size: int) -> int:
    """单个节点记录的字节数"""
    return _NODE_HEADER.size + node_size * ENTRY_BYTES


def serialize_bytes(tree: RTree) -> bytes:
    """将 R-tree 编码为扁平字节串"""
    parts = [_HEADER.pack(
        MAGIC, FORMAT_VERSION, tree.node_size, tree.height, len(tree.nodes), tree.root_index,
    )]
    for node in tree.nodes:
        parts.append(_NODE_HEADER.pack(1 if node.is_leaf else 0, node.count))
        for entry in node.entries:
            m = entry.mbr
            parts.append(_ENTRY.pack(m.xmin, m.ymin, m.xmax, m.ymax, entry.ref))
        parts.append(_EMPTY_SLOT * (tree.node_size - node.count))
    return b"".join(parts)


def serialize(tree: RTree, sink: Union[Path, str, BinaryIO]) -> int:
    """写出 R-tree

    Args:
        tree: R-tree
        sink: 文件路径或可写二进制流

    Returns:
        写出的字节数
    """
    data = serialize_bytes(tree)
    if isinstance(sink, (str, Path)):
        path = Path(sink)
        path.parent.mkdir(parents=True, exist_ok=True)
        try:
            path.write_bytes(data)
        except OSError as e:
            raise SpjoinError(ErrorCode.STORAGE_WRITE_ERROR, f"无法写入树文件 {path}: {e}") from e
    else:
        sink.write(data)
    return len(data)


def deserialize(source: Union[Path, str, BinaryIO, bytes]) -> RTree:
    """读取 R-tree

    Args:
        source: 文件路径、二进制流或字节串

    Returns:
        解码后的 R-tree

    Raises:
        SpjoinError: 格式错误（details 中带字节偏移）
    """
    if isinstance(source, bytes):
        data = source
    elif isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise SpjoinError(ErrorCode.STORAGE_NOT_FOUND, f"树文件不存在: {path}")
        data = path.read_bytes()
    else:
        data = source.read()
    return deserialize_bytes(data)


def deserialize_bytes(data: bytes) -> RTree:
    """从字节串解码 R-tree"""
    if len(data) < _HEADER.size:
        _malformed("文件头被截断", 0)
    magic, version, node_size, height, node_count, root_index = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        _malformed(f"魔数错误: {magic!r}", 0)
    if version != FORMAT_VERSION:
        _malformed(f"不支持的版本号 {version}", 4)
    if node_size < 1:
        _malformed(f"节点容量无效: {node_size}", 8)
    if height < 1:
        _malformed(f"树高无效: {height}", 12)
    if node_count == 0:
        _malformed("节点数为 0", 16)
    if root_index >= node_count:
        _malformed(f"根节点下标 {root_index} 超出节点数 {node_count}", 20)

    record = node_record_size(node_size)
    expected = _HEADER.size + node_count * record
    if len(data) != expected:
        offset = min(len(data), expected)
        _malformed(f"文件长度 {len(data)} 与期望长度 {expected} 不符", offset)

    nodes: List[RTreeNode] = []
    offset = _HEADER.size
    for _ in range(node_count):
        is_leaf, count = _NODE_HEADER.unpack_from(data, offset)
        if is_leaf not in (0, 1):
            _malformed(f"节点类型标志无效: {is_leaf}", offset)
        if count > node_size:
            _malformed(f"节点条目数 {count} 超过容量 {node_size}", offset + 4)
        entries: List[Entry] = []
        pos = offset + _NODE_HEADER.size
        for _ in range(count):
            xmin, ymin, xmax, ymax, ref = _ENTRY.unpack_from(data, pos)
            try:
                mbr = MBR(xmin, ymin, xmax, ymax)
            except SpjoinError:
                _malformed("条目 MBR 无效", pos)
            entries.append(Entry(mbr, ref))
            pos += ENTRY_BYTES
        nodes.append(RTreeNode(is_leaf=bool(is_leaf), entries=entries))
        offset += record

    return RTree(nodes=nodes, root_index=root_index, height=height, node_size=node_size)


def _malformed(message: str, offset: int) -> NoReturn:
    raise SpjoinError(
        ErrorCode.TREE_FILE_MALFORMED,
        f"树文件格式错误 (偏移 {offset}): {message}",
        {"offset": offset},
    )
