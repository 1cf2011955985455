"""
故障语料
对每个黄金程序注入三类故障：无先行词的代词、多义先行词、类型不匹配
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

from corpus import GoldenCorpus

FAULT_KINDS = ("orphan-pronoun", "ambiguous-antecedent", "type-mismatch")

# 每类故障应得到的诊断类别
EXPECTED_CATEGORY = {
    "orphan-pronoun": "pronoun-undefined",
    "ambiguous-antecedent": "pronoun-ambiguous",
    "type-mismatch": "type",
}

ORPHAN = "Print it.\n"

AMBIGUOUS = """If true:
    Let first be 1.
Else:
    Let second be 2.
End if.
Print it.
"""

# 类型不匹配的注入点：把源码中第一处 old 替换为 new
TYPE_SITES: Dict[str, Tuple[str, str]] = {
    "average": ("total divided by count", 'total divided by "count"'),
    "dictionary_count": ("total plus 1", 'total plus "one"'),
    "factorial": ("result times i", 'result times "i"'),
    "fibonacci": ("previous plus current", 'previous plus "current"'),
    "fizzbuzz": ("n plus 1", 'n plus "1"'),
    "list_comprehension": ("n times n", 'n times "n"'),
    "max_of_list": ("it is greater than largest", 'it is greater than "largest"'),
    "palindrome": ("If word reversed is word", "If word reversed is 0"),
    "prime_test": ("candidate plus 1", 'candidate plus "1"'),
}


@dataclass(frozen=True)
class FaultSpec:
    """一个故障变体"""
    program_id: int  # 1..9，按黄金程序名称排序
    program: str
    kind: str
    site: str

    @property
    def expected_category(self) -> str:
        return EXPECTED_CATEGORY[self.kind]

    @property
    def name(self) -> str:
        return f"{self.program}-{self.kind}"


def inject(source: str, kind: str, program: str) -> Tuple[str, str]:
    """
    向源码注入一类故障

    Returns:
        (注入后的源码, 注入位置说明)
    """
    if kind == "orphan-pronoun":
        return ORPHAN + source, "line 1"
    if kind == "ambiguous-antecedent":
        body = source if source.endswith("\n") else source + "\n"
        return body + AMBIGUOUS, f"line {body.count(chr(10)) + 6}"
    if kind == "type-mismatch":
        old, new = TYPE_SITES[program]
        if old not in source:
            raise ValueError(f"no type-fault site {old!r} in {program}")
        line = source[:source.index(old)].count("\n") + 1
        return source.replace(old, new, 1), f"line {line}"
    raise ValueError(f"unknown fault kind: {kind}")


def fault_corpus(corpus: GoldenCorpus = None) -> List[Tuple[FaultSpec, str]]:
    """
    生成全部故障变体（9 个程序 × 3 类 = 27 个）

    Returns:
        [(FaultSpec, 源码)]
    """
    corpus = corpus or GoldenCorpus()
    variants: List[Tuple[FaultSpec, str]] = []
    for program_id, golden in enumerate(corpus.all(), start=1):
        for kind in FAULT_KINDS:
            source, site = inject(golden.source, kind, golden.name)
            variants.append((FaultSpec(program_id, golden.name, kind, site), source))
    return variants
