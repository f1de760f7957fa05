"""
小端二进制文件格式的公共读写工具

所有格式共享同一结构：4字节魔数、u32版本号、若干u64尺寸字段，
随后是行优先的 little-endian f32 数据块，必要时再跟长度前缀的UTF-8字符串。
"""
import struct
from typing import BinaryIO, List, Sequence, Tuple

import numpy as np

from ...domain.exceptions import FormatError

FORMAT_VERSION = 1
_F32 = np.dtype('<f4')


def write_header(f: BinaryIO, magic: bytes, sizes: Sequence[int],
                 version: int = FORMAT_VERSION) -> None:
    """写出魔数、版本号和尺寸字段"""
    f.write(magic)
    f.write(struct.pack('<I', version))
    f.write(struct.pack(f'<{len(sizes)}Q', *sizes))


def read_header(f: BinaryIO, path: str, magic: bytes,
                n_sizes: int) -> Tuple[int, ...]:
    """读取并校验文件头

    Args:
        f: 二进制文件对象
        path: 文件路径（用于错误信息）
        magic: 期望的魔数
        n_sizes: u64尺寸字段个数

    Returns:
        尺寸字段

    Raises:
        FormatError: 魔数或版本不匹配、文件截断
    """
    head = f.read(4)
    if head != magic:
        raise FormatError(path, f"魔数应为 {magic!r}，实际为 {head!r}")
    version, = struct.unpack('<I', _read_exact(f, 4, path))
    if version != FORMAT_VERSION:
        raise FormatError(path, f"不支持的版本号 {version}")
    return struct.unpack(f'<{n_sizes}Q', _read_exact(f, 8 * n_sizes, path))


def write_f32_block(f: BinaryIO, matrix: np.ndarray) -> None:
    """以行优先 little-endian f32 写出矩阵"""
    f.write(np.ascontiguousarray(matrix, dtype=_F32).tobytes(order='C'))


def read_f32_block(f: BinaryIO, path: str, rows: int, cols: int) -> np.ndarray:
    """读取 rows×cols 的 f32 数据块，返回 float64 矩阵"""
    count = rows * cols
    buf = _read_exact(f, count * _F32.itemsize, path)
    return np.frombuffer(buf, dtype=_F32, count=count).astype(np.float64).reshape(rows, cols)


def write_trailer(f: BinaryIO, flags: int) -> None:
    """在数据块之后写出u32标志位"""
    f.write(struct.pack('<I', flags))


def read_trailer(f: BinaryIO, path: str) -> int:
    """读取数据块之后的u32标志位，没有尾部时为0"""
    data = f.read(4)
    if not data:
        return 0
    if len(data) != 4:
        raise FormatError(path, f"文件尾部长度应为4字节，实际 {len(data)} 字节")
    flags, = struct.unpack('<I', data)
    return flags


def write_strings(f: BinaryIO, values: Sequence[str]) -> None:
    """写出u32长度前缀的UTF-8字符串序列"""
    for value in values:
        data = value.encode('utf-8')
        f.write(struct.pack('<I', len(data)))
        f.write(data)


def read_strings(f: BinaryIO, path: str, count: int) -> List[str]:
    """读取count个长度前缀字符串"""
    values = []
    for _ in range(count):
        length, = struct.unpack('<I', _read_exact(f, 4, path))
        try:
            values.append(_read_exact(f, length, path).decode('utf-8'))
        except UnicodeDecodeError as e:
            raise FormatError(path, f"字符串不是合法UTF-8: {e}") from e
    return values


def _read_exact(f: BinaryIO, n: int, path: str) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise FormatError(path, f"文件被截断，期望 {n} 字节，实际 {len(data)} 字节")
    return data
