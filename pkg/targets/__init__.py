"""
编译目标包
"""

from .python_runner import PythonRunner, RunResult

__all__ = ['PythonRunner', 'RunResult']
