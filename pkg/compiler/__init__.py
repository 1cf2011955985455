"""
编译器模块包
"""

from .base_pass import BasePass
from .errors import Category, Diagnostic, LinguineError, SourceSpan, render_diagnostic
from .lexer import Lexer, tokenize
from .parser import SyntaxAnalyzer, parse
from .desugar import Desugarer, desugar
from .typeck import TypeChecker, infer
from .lower import SsaLowering, lower
from .verify import SsaVerifier, verify_ssa
from .refanalysis import ReferentAnalyzer, analyze
from .interp import Interpreter, run
from .codegen import CodeGenerator, emit
from .pipeline import CompilerPipeline, PipelineConfig, CompilationUnit
from .repl import Repl, ReplState, repl_eval

__all__ = [
    'BasePass',
    'Category', 'Diagnostic', 'LinguineError', 'SourceSpan', 'render_diagnostic',
    'Lexer', 'tokenize',
    'SyntaxAnalyzer', 'parse',
    'Desugarer', 'desugar',
    'TypeChecker', 'infer',
    'SsaLowering', 'lower',
    'SsaVerifier', 'verify_ssa',
    'ReferentAnalyzer', 'analyze',
    'Interpreter', 'run',
    'CodeGenerator', 'emit',
    'CompilerPipeline', 'PipelineConfig', 'CompilationUnit',
    'Repl', 'ReplState', 'repl_eval',
]
