"""
linguine-fuzz 主入口点
生成随机程序，比较参考解释器与生成代码的输出；全部一致时退出码为 0
"""

import sys
from pathlib import Path
from typing import Optional

import click
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

from config import CompilerConfig, FuzzConfig
from fuzz.differential import DifferentialResult, run_campaign
from fuzz.faults import fault_corpus
from compiler.pipeline import compile_source
from targets.python_runner import PythonRunner
from utils.logger import get_logger, set_level

logger = get_logger(__name__)

console = Console(stderr=True, highlight=False)

_defaults = FuzzConfig()


@click.group(invoke_without_command=True)
@click.option("--count", type=int, default=_defaults.count, show_default=True, help="number of programs")
@click.option("--max-depth", type=int, default=_defaults.max_depth, show_default=True,
              help="maximum expression depth")
@click.option("--seed-base", type=int, default=_defaults.seed_base, show_default=True, help="first seed")
@click.option("--failure-dir", type=click.Path(path_type=Path), default=_defaults.failure_dir,
              show_default=True, help="where reproduction files are written")
@click.option("--workers", type=int, default=_defaults.workers, show_default=True, help="parallel workers")
@click.option("-v", "--verbose", count=True, help="more log output")
@click.pass_context
def cli(ctx: click.Context, count: int, max_depth: int, seed_base: int, failure_dir: Path, workers: int,
        verbose: int) -> None:
    """Differential stress test: reference interpreter against emitted Python."""
    if verbose:
        set_level("DEBUG" if verbose > 1 else "INFO")
    if ctx.invoked_subcommand is not None:
        return
    ctx.exit(run_differential(count, max_depth, seed_base, failure_dir, workers))


def run_differential(count: int, max_depth: int, seed_base: int, failure_dir: Optional[Path],
                     workers: int = 1) -> int:
    """运行差分测试，返回退出码"""
    runner = PythonRunner(CompilerConfig())
    columns = (TextColumn("[bold]fuzz"), BarColumn(), MofNCompleteColumn(), TimeElapsedColumn())
    with Progress(*columns, console=console, transient=True) as progress:
        task = progress.add_task("fuzz", total=count)

        def advance(_: DifferentialResult) -> None:
            progress.advance(task)

        report = run_campaign(range(seed_base, seed_base + count), max_depth, failure_dir, runner,
                              workers, on_result=advance)

    for failure in report.failures:
        console.print(f"seed {failure.seed}: {failure.status}", markup=False)
        if failure.diagnostic:
            console.print(failure.diagnostic, markup=False)
    for path in report.reproductions:
        console.print(f"reproduction: {path}", markup=False)
    console.print(f"{report.matched}/{report.total} matched in {report.elapsed:.1f}s", markup=False)
    return 0 if report.ok else 1


@cli.command("faults")
def faults_command() -> None:
    """Compile the fault corpus; every variant must be rejected with its expected category."""
    wrong = 0
    variants = fault_corpus()
    for spec, source in variants:
        unit = compile_source(source, f"{spec.name}.ling")
        category = unit.diagnostic.category.value if unit.diagnostic is not None else "accepted"
        if category != spec.expected_category:
            wrong += 1
            console.print(f"{spec.name}: expected {spec.expected_category}, got {category}", markup=False)
    console.print(f"{len(variants) - wrong}/{len(variants)} faults rejected as expected", markup=False)
    sys.exit(0 if wrong == 0 else 1)


if __name__ == "__main__":
    cli()
