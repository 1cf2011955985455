"""
差分测试模块
同一程序分别经参考解释器与生成的 Python 代码执行，逐字节比较输出
"""

import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, List, Optional, Union

from compiler.ast_nodes import Program
from compiler.lexer import tokenize
from compiler.parser import parse
from compiler.pipeline import compile_source
from targets.python_runner import PythonRunner
from utils.logger import get_logger

from .generator import GenConfig, gen_program, render

logger = get_logger(__name__)

FUZZ_SOURCE_ID = "<fuzz>"


@dataclass
class DifferentialResult:
    """
    一次差分运行的结果

    status 取值：match | mismatch | rejected（前端拒绝）| error（目标解释器异常退出）
    """
    source: str
    status: str
    seed: Optional[int] = None
    interp_output: Optional[str] = None
    target_output: Optional[str] = None
    target_stderr: str = ""
    diagnostic: Optional[str] = None

    @property
    def matched(self) -> bool:
        return self.status == "match"


@dataclass
class CampaignReport:
    """一轮差分测试的汇总"""
    total: int = 0
    matched: int = 0
    failures: List[DifferentialResult] = field(default_factory=list)
    reproductions: List[Path] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.total == self.matched


def differential_run(program: Union[Program, str], runner: Optional[PythonRunner] = None,
                     seed: Optional[int] = None, step_budget: Optional[int] = None) -> DifferentialResult:
    """
    比较解释器输出与生成代码的输出

    Args:
        program: 核心程序（先渲染为源码）或源码文本
        runner: 目标解释器执行器
        seed: 生成种子，写入结果以便复现
        step_budget: 解释器步数上限

    Returns:
        DifferentialResult
    """
    source = program if isinstance(program, str) else render(program)
    runner = runner or PythonRunner()
    options = {"step_budget": step_budget} if step_budget is not None else {}

    interpreted = compile_source(source, FUZZ_SOURCE_ID, interpret=True, check_types=True, **options)
    if not interpreted.ok:
        return DifferentialResult(source, "rejected", seed, diagnostic=interpreted.render_diagnostic())
    compiled = compile_source(source, FUZZ_SOURCE_ID, **options)
    if not compiled.ok:
        return DifferentialResult(source, "rejected", seed, interp_output=interpreted.output,
                                  diagnostic=compiled.render_diagnostic())

    run = runner.run_source(compiled.python_source)
    if not run.ok:
        status = "error"
    elif run.stdout == interpreted.output:
        status = "match"
    else:
        status = "mismatch"
    return DifferentialResult(source, status, seed, interpreted.output, run.stdout, run.stderr)


def _statements(source: str) -> List:
    return list(parse(tokenize(source, FUZZ_SOURCE_ID)).statements)


def shrink(source: str, predicate: Callable[[str], bool]) -> str:
    """
    贪心缩减：逐条删除顶层语句，只要 predicate 仍成立就保留删除

    Args:
        source: 触发问题的源码
        predicate: 对候选源码判断问题是否仍然存在

    Returns:
        不能再删去任何一条顶层语句的源码
    """
    try:
        statements = _statements(source)
    except Exception:
        return source
    best = source
    changed = True
    while changed and len(statements) > 1:
        changed = False
        for index in range(len(statements)):
            candidate = statements[:index] + statements[index + 1:]
            text = render(Program(tuple(candidate)))
            if predicate(text):
                statements, best, changed = candidate, text, True
                logger.debug(f"缩减到 {len(statements)} 条语句")
                break
    return best


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w", encoding="utf-8") as handle:
        handle.write(text)
    os.replace(tmp, path)


def write_reproduction(result: DifferentialResult, failure_dir: Path) -> Path:
    """
    写出复现文件 <failure_dir>/<seed>.ling 与 <seed>.json

    Returns:
        .ling 文件路径
    """
    failure_dir = Path(failure_dir)
    failure_dir.mkdir(parents=True, exist_ok=True)
    stem = str(result.seed) if result.seed is not None else f"manual-{int(time.time() * 1000)}"
    source_path = failure_dir / f"{stem}.ling"
    _atomic_write(source_path, result.source)
    _atomic_write(failure_dir / f"{stem}.json", json.dumps(asdict(result), ensure_ascii=False, indent=2) + "\n")
    logger.info(f"复现文件已写出: {source_path}")
    return source_path


def _still_failing(runner: PythonRunner, status: str) -> Callable[[str], bool]:
    def predicate(text: str) -> bool:
        return differential_run(text, runner).status == status
    return predicate


def check_seed(seed: int, max_depth: int, runner: PythonRunner) -> DifferentialResult:
    program = gen_program(GenConfig(seed=seed, max_depth=max_depth))
    return differential_run(program, runner, seed)


def run_campaign(seeds: Iterable[int], max_depth: int = 7, failure_dir: Optional[Path] = None,
                 runner: Optional[PythonRunner] = None, workers: int = 1,
                 on_result: Optional[Callable[[DifferentialResult], None]] = None) -> CampaignReport:
    """
    对一组种子运行差分测试

    Args:
        seeds: 随机种子
        max_depth: 表达式最大深度
        failure_dir: 复现文件目录；None 表示不写出
        runner: 目标解释器执行器
        workers: 并行线程数（每个程序各自启动目标解释器进程）
        on_result: 每得到一个结果时回调

    Returns:
        CampaignReport
    """
    runner = runner or PythonRunner()
    report = CampaignReport()
    started = time.perf_counter()
    seeds = list(seeds)

    def handle(result: DifferentialResult) -> None:
        report.total += 1
        if result.matched:
            report.matched += 1
        else:
            logger.warning(f"种子 {result.seed}: {result.status}")
            if result.status in ("mismatch", "error"):
                shrunk = shrink(result.source, _still_failing(runner, result.status))
                if shrunk != result.source:
                    result = differential_run(shrunk, runner, result.seed)
            report.failures.append(result)
            if failure_dir is not None:
                report.reproductions.append(write_reproduction(result, failure_dir))
        if on_result is not None:
            on_result(result)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for result in pool.map(lambda s: check_seed(s, max_depth, runner), seeds):
                handle(result)
    else:
        for seed in seeds:
            handle(check_seed(seed, max_depth, runner))
    report.elapsed = time.perf_counter() - started
    return report
