"""
配置管理模块
处理环境变量和编译器配置
"""

import sys
from pathlib import Path
from dotenv import load_dotenv
from pydantic_settings import BaseSettings
from pydantic import Field

# 加载环境变量
load_dotenv()


class CompilerConfig(BaseSettings):
    """编译器配置"""

    py: str = Field(default=sys.executable, description="运行生成代码的目标解释器（LINGUINE_PY）")
    run_timeout: int = Field(default=30, description="生成代码执行超时时间（秒）")
    step_budget: int = Field(default=10_000_000, description="参考解释器最大步数")
    max_identifier_bytes: int = Field(default=256, description="标识符最大字节数")
    emit_header: str = Field(default="# generated by linguinec", description="生成文件首行注释")

    model_config = {
        "env_prefix": "LINGUINE_",
        "extra": "ignore",
        "case_sensitive": False
    }


class FuzzConfig(BaseSettings):
    """差分测试配置"""

    count: int = Field(default=500, description="生成程序数量")
    max_depth: int = Field(default=7, description="表达式最大深度")
    seed_base: int = Field(default=0, description="起始随机种子")
    failure_dir: Path = Field(default=Path("fuzz-failures"), description="复现文件目录")
    workers: int = Field(default=1, description="并行工作线程数")

    model_config = {
        "env_prefix": "LINGUINE_FUZZ_",
        "extra": "ignore",
        "case_sensitive": False
    }


class AppConfig(BaseSettings):
    """应用配置"""

    # 日志配置
    log_level: str = Field(default="WARNING", description="日志级别")
    log_file_enabled: bool = Field(default=False, description="启用文件日志")
    log_file: str = Field(default="linguinec.log", description="日志文件路径")

    # 应用信息
    app_name: str = Field(default="linguinec", description="应用名称")
    app_version: str = Field(default="0.3.0", description="应用版本")

    model_config = {
        "env_prefix": "LINGUINE_",
        "extra": "ignore",
        "case_sensitive": False
    }


def get_config_info() -> dict:
    """获取配置信息摘要"""
    try:
        compiler_config = CompilerConfig()
        app_config = AppConfig()
        fuzz_config = FuzzConfig()

        return {
            "compiler": {
                "py": compiler_config.py,
                "run_timeout": compiler_config.run_timeout,
                "step_budget": compiler_config.step_budget,
            },
            "app": {
                "name": app_config.app_name,
                "version": app_config.app_version,
                "log_level": app_config.log_level,
                "log_file": app_config.log_file if app_config.log_file_enabled else None,
            },
            "fuzz": {
                "count": fuzz_config.count,
                "max_depth": fuzz_config.max_depth,
                "failure_dir": str(fuzz_config.failure_dir),
            }
        }
    except Exception as e:
        return {"error": str(e)}
