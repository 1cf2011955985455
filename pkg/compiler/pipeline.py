"""
编译流水线模块
按顺序调度各编译阶段，记录每个阶段的耗时，并把阶段异常统一转换为诊断
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from utils.logger import get_logger

from .ast_nodes import Program
from .base_pass import BasePass
from .codegen import DEFAULT_HEADER, CodeGenerator
from .desugar import Desugarer
from .errors import Diagnostic, InternalCompilerError, LinguineError, render_diagnostic
from .interp import DEFAULT_STEP_BUDGET, Interpreter
from .lexer import MAX_IDENTIFIER_BYTES, Lexer, TokenStream
from .lower import SsaLowering
from .parser import ReferentStack, SyntaxAnalyzer
from .refanalysis import ReferentAnalyzer, RefReport
from .ssa import SsaProgram
from .typeck import TypeChecker, TypedProgram
from .verify import SsaVerifier

logger = get_logger(__name__)

# 阶段顺序；codegen 与 interp 二选一
STAGES = ("lex", "parse", "desugar", "typeck", "ssa", "verify", "refs", "codegen", "interp")


@dataclass
class PipelineConfig:
    """流水线配置"""
    stop_after: Optional[str] = None
    interpret: bool = False
    annotate: bool = False
    check_types: bool = False
    step_budget: int = DEFAULT_STEP_BUDGET
    max_identifier_bytes: int = MAX_IDENTIFIER_BYTES
    emit_header: str = DEFAULT_HEADER

    def __post_init__(self):
        if self.stop_after is not None and self.stop_after not in STAGES:
            raise ValueError(f"unknown stage: {self.stop_after}")


@dataclass
class CompilationUnit:
    """一次编译的全部中间结果"""
    source: str
    source_id: str
    current_stage: str = "init"
    status: str = "pending"  # pending, processing, completed, failed

    tokens: Optional[TokenStream] = None
    ast: Optional[Program] = None
    stack: Optional[ReferentStack] = None
    core: Optional[Program] = None
    typed: Optional[TypedProgram] = None
    ssa: Optional[SsaProgram] = None
    refs: Optional[RefReport] = None
    python_source: Optional[str] = None
    output: Optional[str] = None

    timings: Dict[str, float] = field(default_factory=dict)
    total_ms: float = 0.0  # 整次编译的墙钟时间，独立于各阶段计时
    diagnostic: Optional[Diagnostic] = None

    @property
    def ok(self) -> bool:
        return self.status == "completed"

    def render_diagnostic(self) -> str:
        if self.diagnostic is None:
            return ""
        return render_diagnostic(self.diagnostic, self.source, self.source_id)

    def format_timings(self) -> str:
        """--time 输出：每阶段一行 stage<TAB>ms，最后一行为合计"""
        lines = [f"{stage}\t{ms:.3f}" for stage, ms in self.timings.items()]
        lines.append(f"total\t{self.total_ms:.3f}")
        return "\n".join(lines)


class CompilerPipeline:
    """编译流水线控制器"""

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.config = config or PipelineConfig()
        logger.debug("编译流水线初始化完成")

    def _passes(self, unit: CompilationUnit) -> List[BasePass]:
        cfg = self.config
        passes: List[BasePass] = [
            Lexer(unit.source_id, cfg.max_identifier_bytes),
            SyntaxAnalyzer(),
            Desugarer(),
            TypeChecker(),
            SsaLowering(),
            SsaVerifier(),
            ReferentAnalyzer(),
        ]
        if cfg.interpret:
            passes.append(Interpreter(cfg.step_budget, cfg.check_types))
        else:
            passes.append(CodeGenerator(cfg.annotate, cfg.emit_header))
        return passes

    def _store(self, unit: CompilationUnit, stage: str, result: Any) -> Any:
        """保存阶段结果，返回下一阶段的输入"""
        if stage == "lex":
            unit.tokens = result
        elif stage == "parse":
            unit.ast, unit.stack = result
            return unit.ast
        elif stage == "desugar":
            unit.core = result
        elif stage == "typeck":
            unit.typed = result
        elif stage in ("ssa", "verify"):
            unit.ssa = result
        elif stage == "refs":
            unit.refs = result
            # 指代分析只做检查，后续阶段仍以程序为输入
            return unit.typed if self.config.interpret else unit.ssa
        elif stage == "codegen":
            unit.python_source = result
        elif stage == "interp":
            unit.output = result
        return result

    def compile(self, source: str, source_id: str = "<input>") -> CompilationUnit:
        """
        编译源码

        Args:
            source: 源码文本
            source_id: 文件名或 REPL 标识，用于诊断

        Returns:
            CompilationUnit: 成功时含全部中间结果，失败时含诊断
        """
        unit = CompilationUnit(source=source, source_id=source_id, status="processing")
        data: Any = source
        compile_started = time.perf_counter()
        try:
            for compiler_pass in self._passes(unit):
                unit.current_stage = compiler_pass.stage
                started = time.perf_counter()
                result = compiler_pass(data)
                unit.timings[compiler_pass.stage] = (time.perf_counter() - started) * 1000.0
                data = self._store(unit, compiler_pass.stage, result)
                if compiler_pass.stage == self.config.stop_after:
                    break
            unit.status = "completed"
        except LinguineError as exc:
            unit.status = "failed"
            unit.diagnostic = exc.to_diagnostic()
            logger.debug(f"[{unit.current_stage}] {exc.message}")
        except RecursionError:
            unit.status = "failed"
            unit.diagnostic = InternalCompilerError(
                f"program nesting is too deep for the {unit.current_stage} stage").to_diagnostic()
        except Exception as exc:
            logger.exception(f"[{unit.current_stage}] 内部错误")
            unit.status = "failed"
            unit.diagnostic = InternalCompilerError(f"internal compiler error in {unit.current_stage}: {exc}") \
                .to_diagnostic()
        finally:
            unit.total_ms = (time.perf_counter() - compile_started) * 1000.0
        return unit

    def get_pipeline_info(self) -> Dict[str, Any]:
        return {
            "stages": [p.get_pass_info() for p in self._passes(CompilationUnit("", "<info>"))],
            "interpret": self.config.interpret,
            "stop_after": self.config.stop_after,
        }


def compile_source(source: str, source_id: str = "<input>", **options: Any) -> CompilationUnit:
    """便捷入口：以给定选项运行整条流水线"""
    return CompilerPipeline(PipelineConfig(**options)).compile(source, source_id)
