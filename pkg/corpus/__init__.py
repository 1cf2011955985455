"""
黄金程序语料包
"""

from .golden import GoldenCorpus, GoldenProgram

__all__ = ['GoldenCorpus', 'GoldenProgram']
