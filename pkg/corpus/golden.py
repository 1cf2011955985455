"""
黄金程序语料
每个程序是 programs/ 下的一对文件：<name>.ling 源码与 <name>.out 期望输出
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional

from utils.logger import get_logger
from utils.validators import SOURCE_SUFFIX, decode_source

logger = get_logger(__name__)

PROGRAM_DIR = Path(__file__).parent / "programs"
EXPECTED_SUFFIX = ".out"


@dataclass(frozen=True)
class GoldenProgram:
    """一个黄金程序及其手工核对过的期望输出"""
    name: str
    path: Path
    source: str
    expected: str

    @property
    def title(self) -> str:
        """首行注释中冒号前的标题"""
        first = self.source.splitlines()[0] if self.source else ""
        if first.startswith("#"):
            return first.lstrip("# ").split(":", 1)[0]
        return self.name

    @property
    def line_count(self) -> int:
        return len(self.source.splitlines())


class GoldenCorpus:
    """黄金程序集合，按名称排序"""

    NAMES = (
        "average",
        "dictionary_count",
        "factorial",
        "fibonacci",
        "fizzbuzz",
        "list_comprehension",
        "max_of_list",
        "palindrome",
        "prime_test",
    )

    # 不在基准程序集内的较长脚本，只用于输出与编译延迟检查，不参与故障语料
    EXTRA_NAMES = ("grade_report",)

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory) if directory is not None else PROGRAM_DIR
        self._programs: Dict[str, GoldenProgram] = {}

    def _load(self, name: str) -> GoldenProgram:
        source_path = self.directory / f"{name}{SOURCE_SUFFIX}"
        expected_path = source_path.with_suffix(EXPECTED_SUFFIX)
        if not source_path.is_file():
            raise FileNotFoundError(f"golden program not found: {source_path}")
        source = decode_source(source_path.read_bytes())
        expected = expected_path.read_text(encoding="utf-8") if expected_path.is_file() else ""
        logger.debug(f"载入黄金程序 {name}")
        return GoldenProgram(name, source_path, source, expected)

    def get(self, name: str) -> GoldenProgram:
        if name not in self._programs:
            self._programs[name] = self._load(name)
        return self._programs[name]

    def names(self) -> List[str]:
        return list(self.NAMES)

    def all(self) -> List[GoldenProgram]:
        return [self.get(name) for name in self.NAMES]

    def __iter__(self) -> Iterator[GoldenProgram]:
        return iter(self.all())

    def __len__(self) -> int:
        return len(self.NAMES)

    def extras(self) -> List[GoldenProgram]:
        return [self.get(name) for name in self.EXTRA_NAMES]

    def largest(self) -> GoldenProgram:
        """含补充脚本在内行数最多的程序，用于编译延迟检查"""
        return max(self.all() + self.extras(), key=lambda p: p.line_count)
