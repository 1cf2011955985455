"""
词法分析模块
将源码转换为规范化的记号流：合并多词关键字短语，丢弃可选功能词
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, List, Optional, Tuple, Union

from .base_pass import BasePass
from .errors import LexError, SourceSpan


class TokenKind(str, Enum):
    """记号种类"""

    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    INTEGER = "integer"
    STRING = "string"
    PRONOUN = "pronoun"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True, slots=True)
class Token:
    """记号

    lexeme 是源码原文切片；value 是规范值（关键字规范名、整数值、字符串内容、小写代词）。
    """

    kind: TokenKind
    lexeme: str
    span: SourceSpan
    value: Union[str, int]

    def is_keyword(self, *names: str) -> bool:
        return self.kind is TokenKind.KEYWORD and self.value in names

    def is_punct(self, *chars: str) -> bool:
        return self.kind is TokenKind.PUNCTUATION and self.value in chars

    def describe(self) -> str:
        """用于诊断信息的简短描述"""
        if self.kind is TokenKind.KEYWORD:
            return f"'{self.value}'"
        if self.kind is TokenKind.PUNCTUATION:
            return f"'{self.value}'"
        return f"{self.kind.value} '{self.lexeme}'"


@dataclass(frozen=True)
class TokenStream:
    """记号流"""

    tokens: Tuple[Token, ...]
    source_id: str = "<input>"

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


PRONOUNS = frozenset({"it", "them", "this", "that"})

ARTICLES = frozenset({"the", "a", "an"})

KEYWORDS = frozenset({
    "let", "be", "if", "else", "end", "while", "for", "each", "in", "print",
    "add", "to", "plus", "minus", "times", "divided", "by", "modulo",
    "sum", "length", "of", "reversed", "is", "equal", "greater", "less", "than",
    "true", "false", "list",
})

# 多词关键字短语，最长匹配优先
PHRASES = {
    ("is", "equal", "to"): "is-equal-to",
    ("is", "greater", "than"): "greater-than",
    ("is", "less", "than"): "less-than",
    ("sum", "of"): "sum-of",
    ("length", "of"): "length-of",
    ("divided", "by"): "divided-by",
    ("greater", "than"): "greater-than",
    ("less", "than"): "less-than",
    ("for", "each"): "for-each",
    ("end", "if"): "end-if",
    ("end", "while"): "end-while",
    ("end", "for"): "end-for",
    ("else", "if"): "else-if",
}
MAX_PHRASE = max(len(words) for words in PHRASES)

# 可以开始名词短语的保留词：冠词后跟这些词时仍是冠词
NOUN_STARTERS = frozenset({"list", "sum", "length", "true", "false"})

PUNCTUATION = frozenset(".,:[]()")

MAX_IDENTIFIER_BYTES = 256
INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1


@dataclass(frozen=True, slots=True)
class _Raw:
    """扫描阶段的原始单元"""

    kind: str  # word | int | str | punct
    text: str
    span: SourceSpan


def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def _scan(source: str) -> Iterator[_Raw]:
    """逐行扫描源码，跳过空白与 # 注释"""
    for line_no, line in enumerate(source.split("\n"), start=1):
        i, n = 0, len(line)
        while i < n:
            ch = line[i]
            if ch.isspace():
                i += 1
            elif ch == "#":
                break
            elif ch == '"':
                close = line.find('"', i + 1)
                if close < 0:
                    raise LexError("unterminated string literal", SourceSpan(line_no, i + 1, max(i + 1, n)))
                yield _Raw("str", line[i:close + 1], SourceSpan(line_no, i + 1, close + 1))
                i = close + 1
            elif ch.isascii() and ch.isalpha():
                j = i + 1
                while j < n and line[j].isascii() and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                yield _Raw("word", line[i:j], SourceSpan(line_no, i + 1, j))
                i = j
            elif _is_digit(ch) or (ch == "-" and i + 1 < n and _is_digit(line[i + 1])):
                j = i + 1
                while j < n and _is_digit(line[j]):
                    j += 1
                if j < n and line[j].isascii() and (line[j].isalpha() or line[j] == "_"):
                    raise LexError(f"malformed number '{line[i:j + 1]}'", SourceSpan(line_no, i + 1, j + 1))
                yield _Raw("int", line[i:j], SourceSpan(line_no, i + 1, j))
                i = j
            elif ch in PUNCTUATION:
                yield _Raw("punct", ch, SourceSpan(line_no, i + 1, i + 1))
                i += 1
            else:
                raise LexError(f"unexpected character {ch!r}", SourceSpan(line_no, i + 1, i + 1))


def normalize(source: str) -> str:
    """
    规范化源码：字符串与注释之外的关键字、代词、功能词转为小写

    标识符保持原样；转换不改变长度，因此行列映射不变。

    Args:
        source: 源码文本

    Returns:
        规范化后的文本

    Raises:
        LexError: 未闭合的字符串字面量
    """
    lines = source.split("\n")
    for raw in _scan(source):
        if raw.kind != "word":
            continue
        lowered = raw.text.lower()
        if lowered in KEYWORDS or lowered in PRONOUNS or lowered in ARTICLES:
            span = raw.span
            text = lines[span.line - 1]
            lines[span.line - 1] = text[:span.start - 1] + lowered + text[span.end:]
    return "\n".join(lines)


def _article_is_name(raws: List[_Raw], i: int) -> bool:
    """冠词后面没有名词短语时按变量名处理，如 ``Let a be 1.``、``Add 1 to a.``"""
    following = raws[i + 1] if i + 1 < len(raws) else None
    if following is None:
        return True
    if following.kind == "punct":
        return following.text not in "[("
    if following.kind == "word":
        word = following.text.lower()
        return word in KEYWORDS and word not in NOUN_STARTERS
    return False


def _match_phrase(raws: List[_Raw], i: int) -> Optional[Tuple[str, int]]:
    """从位置 i 起尝试最长匹配关键字短语，返回 (规范名, 词数)"""
    for size in range(MAX_PHRASE, 1, -1):
        window = raws[i:i + size]
        if len(window) < size or any(r.kind != "word" for r in window):
            continue
        if any(r.span.line != window[0].span.line for r in window):
            continue
        key = tuple(r.text.lower() for r in window)
        if key in PHRASES:
            return PHRASES[key], size
    return None


def tokenize(source: str, source_id: str = "<input>", max_identifier_bytes: int = MAX_IDENTIFIER_BYTES) -> TokenStream:
    """
    将源码切分为记号流

    先做短语合并，再删除功能词（后接名词短语的 the/a/an、短语外的 of、紧邻 [ 之前的 list）。
    后面不跟名词短语的冠词是变量名。

    Args:
        source: 源码文本
        source_id: 来源标识（文件名或 REPL 行号）
        max_identifier_bytes: 标识符最大字节数

    Returns:
        记号流

    Raises:
        LexError: 未知字符、未闭合字符串、越界整数、过长标识符
    """
    raws = list(_scan(source))
    lines = source.split("\n")
    tokens: List[Token] = []
    i = 0
    while i < len(raws):
        raw = raws[i]
        if raw.kind == "word":
            phrase = _match_phrase(raws, i)
            if phrase is not None:
                name, size = phrase
                first, last = raws[i].span, raws[i + size - 1].span
                span = SourceSpan(first.line, first.start, last.end)
                lexeme = lines[span.line - 1][span.start - 1:span.end]
                tokens.append(Token(TokenKind.KEYWORD, lexeme, span, name))
                i += size
                continue
            word = raw.text.lower()
            following = raws[i + 1] if i + 1 < len(raws) else None
            if word in ARTICLES and _article_is_name(raws, i):
                tokens.append(Token(TokenKind.IDENTIFIER, raw.text, raw.span, raw.text))
                i += 1
                continue
            if word in ARTICLES or word == "of":
                i += 1
                continue
            if word == "list" and following is not None and following.kind == "punct" and following.text == "[":
                i += 1
                continue
            if word in PRONOUNS:
                tokens.append(Token(TokenKind.PRONOUN, raw.text, raw.span, word))
            elif word in KEYWORDS:
                tokens.append(Token(TokenKind.KEYWORD, raw.text, raw.span, word))
            else:
                if len(raw.text.encode("utf-8")) > max_identifier_bytes:
                    raise LexError(f"identifier longer than {max_identifier_bytes} bytes", raw.span)
                tokens.append(Token(TokenKind.IDENTIFIER, raw.text, raw.span, raw.text))
        elif raw.kind == "int":
            value = int(raw.text, 10)
            if not INT_MIN <= value <= INT_MAX:
                raise LexError(f"integer literal {raw.text} does not fit in 64 bits", raw.span)
            tokens.append(Token(TokenKind.INTEGER, raw.text, raw.span, value))
        elif raw.kind == "str":
            tokens.append(Token(TokenKind.STRING, raw.text, raw.span, raw.text[1:-1]))
        else:
            tokens.append(Token(TokenKind.PUNCTUATION, raw.text, raw.span, raw.text))
        i += 1
    return TokenStream(tuple(tokens), source_id)


def format_tokens(stream: TokenStream) -> str:
    """--emit-tokens 输出：每行 KIND<TAB>lexeme<TAB>line:start-end"""
    return "\n".join(
        f"{tok.kind.name}\t{tok.lexeme}\t{tok.span.line}:{tok.span.start}-{tok.span.end}"
        for tok in stream
    )


class Lexer(BasePass):
    """词法分析阶段"""

    stage = "lex"

    def __init__(self, source_id: str = "<input>", max_identifier_bytes: int = MAX_IDENTIFIER_BYTES):
        self.source_id = source_id
        self.max_identifier_bytes = max_identifier_bytes

    def run(self, data: str) -> TokenStream:
        stream = tokenize(data, self.source_id, self.max_identifier_bytes)
        self.logger.debug(f"生成 {len(stream)} 个记号")
        return stream
