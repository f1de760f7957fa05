"""
基础设施层 - JSON报告
"""
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Union

import orjson

GENERATED_AT_FIELD = "generated_at"

_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def dumps_report(payload: Dict[str, Any], generated_at: Optional[str] = None) -> bytes:
    """序列化报告，除 generated_at 外内容相同则字节相同"""
    data = dict(payload)
    data[GENERATED_AT_FIELD] = generated_at or datetime.now(timezone.utc).isoformat()
    return orjson.dumps(data, option=_OPTIONS) + b"\n"


def write_json_report(path: Union[str, Path], payload: Dict[str, Any],
                      generated_at: Optional[str] = None) -> None:
    with open(path, 'wb') as f:
        f.write(dumps_report(payload, generated_at))


def read_json(path: Union[str, Path]) -> Any:
    with open(path, 'rb') as f:
        return orjson.loads(f.read())


def write_json(path: Union[str, Path], data: Any) -> None:
    """写出不带时间戳的JSON（用于需要逐字节复现的文件）"""
    with open(path, 'wb') as f:
        f.write(orjson.dumps(data, option=_OPTIONS) + b"\n")
