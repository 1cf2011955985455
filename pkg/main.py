"""
linguinec 主入口点
支持编译运行、只生成代码、解释执行以及交互式 REPL
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from rich.console import Console

from config import AppConfig, CompilerConfig, get_config_info
from compiler.ast_nodes import format_program
from compiler.lexer import format_tokens
from compiler.pipeline import CompilationUnit, CompilerPipeline, PipelineConfig
from compiler.refanalysis import format_refs
from compiler.repl import Repl
from compiler.ssa import format_ir
from compiler.typeck import format_types
from targets.python_runner import PythonRunner
from utils.logger import get_logger, set_level
from utils.validators import KNOWN_TARGETS, decode_source, validate_source_path, validate_target

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_DIAGNOSTIC = 1
EXIT_NOT_FOUND = 2
EXIT_UNSUPPORTED_TARGET = 3

# --emit-* 选项 -> (所需阶段, 输出函数)
DUMPS = {
    "tokens": ("lex", lambda unit: format_tokens(unit.tokens)),
    "ast": ("parse", lambda unit: format_program(unit.ast)),
    "core": ("desugar", lambda unit: format_program(unit.core)),
    "types": ("typeck", lambda unit: format_types(unit.typed)),
    "ir": ("verify", lambda unit: format_ir(unit.ssa)),
    "refs": ("refs", lambda unit: format_refs(unit.refs)),
}
_STAGE_ORDER = ("lex", "parse", "desugar", "typeck", "ssa", "verify", "refs")

# 诊断写到 stderr，关闭标记与高亮以保持原样输出
stderr = Console(stderr=True, highlight=False, markup=False, emoji=False, soft_wrap=True)


def _error(text: str) -> None:
    stderr.print(text, markup=False, highlight=False)


def _out(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def _read_source(path: Path) -> Optional[str]:
    try:
        return decode_source(path.read_bytes())
    except UnicodeDecodeError as exc:
        _error(f"error[lex] source is not valid UTF-8 (byte {exc.start})\n --> {path}")
        return None


def compile_file(path: Path, mode: str = "run", dumps: Optional[List[str]] = None, time_stages: bool = False,
                 annotate: bool = False, config: Optional[CompilerConfig] = None) -> int:
    """
    编译一个源文件

    Args:
        path: .ling 源文件
        mode: run（生成并执行）| emit（只写出 .py）| interpret（参考解释器执行）
        dumps: 需要输出的中间表示，见 DUMPS
        time_stages: 在 stderr 输出各阶段耗时
        annotate: 生成代码附带 ``# line N`` 注释
        config: 编译器配置

    Returns:
        进程退出码
    """
    config = config or CompilerConfig()
    dumps = dumps or []
    problem = validate_source_path(path)
    if problem is not None:
        _error(f"error: {problem}")
        return EXIT_NOT_FOUND
    source = _read_source(path)
    if source is None:
        return EXIT_DIAGNOSTIC

    stop_after = None
    if dumps:
        stop_after = max((DUMPS[d][0] for d in dumps), key=_STAGE_ORDER.index)
    pipeline = CompilerPipeline(PipelineConfig(
        stop_after=stop_after,
        interpret=mode == "interpret",
        annotate=annotate,
        step_budget=config.step_budget,
        max_identifier_bytes=config.max_identifier_bytes,
        emit_header=config.emit_header,
    ))
    unit = pipeline.compile(source, str(path))
    if time_stages:
        # 保留制表符，不经过 rich 渲染
        sys.stderr.write(unit.format_timings() + "\n")
        sys.stderr.flush()
    if not unit.ok:
        _error(unit.render_diagnostic())
        return EXIT_DIAGNOSTIC

    if dumps:
        for name in dumps:
            text = DUMPS[name][1](unit)
            _out(text + ("\n" if text and not text.endswith("\n") else ""))
        return EXIT_OK

    if mode == "interpret":
        _out(unit.output or "")
        return EXIT_OK
    return _emit_and_run(unit, path, run=mode == "run", config=config)


def _emit_and_run(unit: CompilationUnit, path: Path, run: bool, config: CompilerConfig) -> int:
    runner = PythonRunner(config)
    target = runner.write(unit.python_source, path.with_suffix(".py"))
    logger.info(f"生成代码已写出: {target}")
    if not run:
        return EXIT_OK
    result = runner.run_file(target)
    _out(result.stdout)
    if result.stderr:
        sys.stderr.write(result.stderr)
        sys.stderr.flush()
    return result.returncode


def run_interactive_mode(config: Optional[CompilerConfig] = None) -> int:
    """交互模式"""
    config = config or CompilerConfig()
    repl = Repl(write=print, write_error=_error, budget=config.step_budget)
    try:
        return repl.loop()
    except KeyboardInterrupt:
        print()
        return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linguinec",
        description="Linguine compiler: controlled-English programs compiled to Python",
    )
    parser.add_argument("file", nargs="?", help="source file (.ling)")
    parser.add_argument("-i", "--interactive", action="store_true", help="start the interactive REPL")
    parser.add_argument("-t", "--target", metavar="TARGET",
                        help=f"compile to TARGET without running ({', '.join(sorted(KNOWN_TARGETS))})")
    parser.add_argument("--interpret", action="store_true", help="run with the reference interpreter")
    for name in DUMPS:
        parser.add_argument(f"--emit-{name}", dest=f"emit_{name}", action="store_true",
                            help=f"print the {name} dump and stop")
    parser.add_argument("--time", action="store_true", help="print per-stage wall-clock times to stderr")
    parser.add_argument("--annotate", action="store_true", help="add '# line N' comments to emitted code")
    parser.add_argument("--config", action="store_true", help="print the configuration summary")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more log output (-vv for debug)")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        set_level("DEBUG" if args.verbose > 1 else "INFO")
    else:
        set_level(AppConfig().log_level)

    if args.config:
        print(json.dumps(get_config_info(), ensure_ascii=False, indent=2))
        return EXIT_OK

    config = CompilerConfig()
    if args.interactive:
        return run_interactive_mode(config)

    if args.file is None:
        parser.print_usage(sys.stderr)
        _error("error: no input file (use -i for the REPL)")
        return EXIT_NOT_FOUND

    mode = "interpret" if args.interpret else "run"
    if args.target is not None:
        if not validate_target(args.target):
            _error(f"error: unsupported target '{args.target}' (supported: py)")
            return EXIT_UNSUPPORTED_TARGET
        mode = "emit"

    dumps: List[str] = [name for name in DUMPS if getattr(args, f"emit_{name}")]
    return compile_file(Path(args.file), mode, dumps, args.time, args.annotate, config)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
