"""
随机程序生成与差分测试包
"""

from .differential import (
    CampaignReport, DifferentialResult, differential_run, run_campaign, shrink, write_reproduction,
)
from .faults import FAULT_KINDS, FaultSpec, fault_corpus, inject
from .generator import GenConfig, gen_program, gen_surface, render, render_expr

__all__ = [
    'CampaignReport',
    'DifferentialResult',
    'differential_run',
    'run_campaign',
    'shrink',
    'write_reproduction',
    'FAULT_KINDS',
    'FaultSpec',
    'fault_corpus',
    'inject',
    'GenConfig',
    'gen_program',
    'gen_surface',
    'render',
    'render_expr',
]
