"""
工具函数包
"""

from .logger import setup_logger, get_logger, LoggerMixin
from .validators import validate_target, validate_source_path, to_snake_case

__all__ = ['setup_logger', 'get_logger', 'LoggerMixin', 'validate_target', 'validate_source_path', 'to_snake_case']
