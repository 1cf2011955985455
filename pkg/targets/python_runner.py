"""
Python 目标运行器
把生成的源码写入文件，并用外部解释器（LINGUINE_PY）执行
"""

import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from config import CompilerConfig
from utils.logger import LoggerMixin


@dataclass
class RunResult:
    """外部解释器执行结果"""
    stdout: str
    stderr: str
    returncode: int
    timed_out: bool = False

    @property
    def ok(self) -> bool:
        return self.returncode == 0 and not self.timed_out


class PythonRunner(LoggerMixin):
    """生成代码的执行器"""

    def __init__(self, config: Optional[CompilerConfig] = None, executable: Optional[str] = None):
        """
        初始化执行器

        Args:
            config: 编译器配置
            executable: 目标解释器路径，不提供则使用配置中的 LINGUINE_PY
        """
        self.config = config or CompilerConfig()
        self.executable = executable or self.config.py
        self.timeout = self.config.run_timeout

    def write(self, source: str, path: Path) -> Path:
        """写出生成的源码文件"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(source, encoding="utf-8")
        self.logger.debug(f"已写出 {path}")
        return path

    def run_file(self, path: Path) -> RunResult:
        """
        执行生成的文件

        Args:
            path: .py 文件路径

        Returns:
            RunResult: 标准输出、标准错误与退出码
        """
        cmd = [self.executable, str(path)]
        self.logger.debug(f"执行: {' '.join(cmd)}")
        try:
            completed = subprocess.run(
                cmd,
                capture_output=True,
                timeout=self.timeout,
                encoding="utf-8",
                errors="replace",
            )
        except subprocess.TimeoutExpired as exc:
            self.logger.warning(f"执行超时（{self.timeout} 秒）: {path}")
            return RunResult(_text(exc.stdout), _text(exc.stderr), 124, timed_out=True)
        except OSError as exc:
            self.logger.error(f"无法启动目标解释器 {self.executable}: {exc}")
            return RunResult("", f"cannot start {self.executable}: {exc}\n", 127)
        return RunResult(completed.stdout, completed.stderr, completed.returncode)

    def run_source(self, source: str) -> RunResult:
        """在临时目录中写出并执行源码"""
        with tempfile.TemporaryDirectory(prefix="linguine-") as tmp:
            path = self.write(source, Path(tmp) / "program.py")
            return self.run_file(path)


def _text(data) -> str:
    if data is None:
        return ""
    if isinstance(data, bytes):
        return data.decode("utf-8", errors="replace")
    return data
