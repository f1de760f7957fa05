"""
进程级设置（环境变量 ZSCOMP_* 与 .env 文件）
"""
import os
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class ZscompSettings(BaseSettings):
    """环境设置"""
    model_config = SettingsConfigDict(env_prefix="ZSCOMP_", env_file=".env",
                                      env_file_encoding="utf-8", extra="ignore")

    threads: int = 0
    log_level: str = "WARNING"

    def resolve_threads(self, requested: Optional[int] = None) -> int:
        """命令行 > 配置文件 > 环境变量；0 表示CPU核数"""
        threads = requested if requested is not None else self.threads
        if threads <= 0:
            return os.cpu_count() or 1
        return threads
