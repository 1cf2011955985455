"""
语法分析模块
确定性递归下降分析：构造表层语法树，维护指代栈并为每个代词标注临时先行词
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .ast_nodes import (
    UNRESOLVED, AddTo, BinOp, BoolLit, Expr, ForEach, If, IntLit, LengthOf, Let,
    ListLit, Print, Program, Pronoun, RelOp, Reversed, Stmt, StrLit, SumOf, Var, While,
)
from .base_pass import BasePass
from .errors import ParseError, SourceSpan
from .lexer import Token, TokenKind, TokenStream


@dataclass(frozen=True)
class ReferentStack:
    """指代栈；entries 末尾为栈顶"""

    entries: Tuple[Tuple[str, SourceSpan], ...] = ()

    def push(self, name: str, site: SourceSpan) -> "ReferentStack":
        return ReferentStack(self.entries + ((name, site),))

    @property
    def top(self) -> Optional[Tuple[str, SourceSpan]]:
        return self.entries[-1] if self.entries else None

    def names(self) -> List[str]:
        """自栈顶向下的变量名"""
        return [name for name, _ in reversed(self.entries)]

    def __len__(self) -> int:
        return len(self.entries)


def referent_push(stack: ReferentStack, name: str, site: SourceSpan) -> ReferentStack:
    """在绑定点压入指代，返回新栈"""
    return stack.push(name, site)


def resolve_pronoun(stack: ReferentStack, pronoun: str) -> str:
    """
    解析代词：栈非空时取栈顶，否则返回 UNRESOLVED

    单复数代词一视同仁；解析不修改栈。
    """
    top = stack.top
    return top[0] if top is not None else UNRESOLVED


_ADD_OPS = ("plus", "minus")
_MUL_OPS = ("times", "divided-by", "modulo")
_BLOCK_ENDS = {"if": "end-if", "while": "end-while", "for-each": "end-for"}
_CLOSER_TEXT = {"end-if": "End if.", "end-while": "End while.", "end-for": "End for."}
_STMT_STARTS = ("let", "print", "if", "while", "for-each", "add")


class Parser:
    """递归下降语法分析器（LL(k)，k ≤ 3，不回溯）"""

    def __init__(self, stream: TokenStream, stack: Optional[ReferentStack] = None):
        self.tokens = stream.tokens
        self.source_id = stream.source_id
        self.pos = 0
        self.stack = stack or ReferentStack()
        self._sentence_start = 0

    # ------------------------------------------------------------ 工具

    def _peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _sentence(self) -> str:
        """当前句子的原文（用于诊断）"""
        words = []
        for tok in self.tokens[self._sentence_start:]:
            words.append(tok.lexeme)
            if tok.is_punct("."):
                break
        return " ".join(words)

    def _last_span(self) -> SourceSpan:
        if self.tokens:
            return self.tokens[min(self.pos, len(self.tokens)) - 1].span
        return SourceSpan(1, 1, 1)

    def _error(self, message: str, tok: Optional[Token], expected: Tuple[str, ...] = ()) -> ParseError:
        span = tok.span if tok is not None else self._last_span()
        if expected:
            message = f"{message}; expected {', '.join(expected)}"
        return ParseError(message, span, self._sentence(), expected)

    def _unexpected(self, expected: Tuple[str, ...]) -> ParseError:
        tok = self._peek()
        if tok is None:
            return self._error("unexpected end of input", None, expected)
        return self._error(f"unexpected {tok.describe()}", tok, expected)

    def _expect_keyword(self, name: str) -> Token:
        tok = self._peek()
        if tok is None or not tok.is_keyword(name):
            raise self._unexpected((f"'{name}'",))
        return self._advance()

    def _expect_punct(self, char: str) -> Token:
        tok = self._peek()
        if tok is None or not tok.is_punct(char):
            if char == "." and tok is None:
                raise self._error("statement is missing its final period", None)
            raise self._unexpected((f"'{char}'",))
        return self._advance()

    def _expect_identifier(self) -> Token:
        tok = self._peek()
        if tok is not None and tok.kind is TokenKind.IDENTIFIER:
            return self._advance()
        if tok is not None and tok.kind in (TokenKind.KEYWORD, TokenKind.PRONOUN):
            raise self._error(f"'{tok.lexeme}' is a reserved word and cannot name a variable", tok)
        raise self._unexpected(("identifier",))

    # ------------------------------------------------------------ 语句

    def parse_program(self) -> Tuple[Program, ReferentStack]:
        """
        分析整个记号流

        Returns:
            (程序, 分析结束时的指代栈)

        Raises:
            ParseError: 第一个语法错误
        """
        statements = self._parse_block(terminators=())
        return Program(tuple(statements), self.source_id), self.stack

    def _parse_block(self, terminators: Tuple[str, ...], opener: Optional[Token] = None) -> List[Stmt]:
        statements: List[Stmt] = []
        while True:
            tok = self._peek()
            if tok is None:
                if terminators:
                    closer = _BLOCK_ENDS[str(opener.value)] if opener is not None else terminators[-1]
                    raise ParseError(
                        f"unterminated block: '{opener.lexeme if opener else '?'}' opened at line "
                        f"{opener.span.line if opener else '?'} is never closed with '{_CLOSER_TEXT[closer]}'",
                        opener.span if opener else self._last_span(),
                        self._sentence(),
                    )
                return statements
            if tok.kind is TokenKind.KEYWORD and tok.value in terminators:
                return statements
            statements.append(self._parse_statement())

    def _parse_statement(self) -> Stmt:
        self._sentence_start = self.pos
        tok = self._peek()
        if tok is not None and tok.kind is TokenKind.KEYWORD:
            if tok.value == "let":
                return self._parse_let()
            if tok.value == "print":
                return self._parse_print()
            if tok.value == "add":
                return self._parse_add()
            if tok.value == "if":
                return self._parse_if()
            if tok.value == "while":
                return self._parse_while()
            if tok.value == "for-each":
                return self._parse_foreach()
        raise self._unexpected(tuple(f"'{s}'" for s in _STMT_STARTS))

    def _parse_let(self) -> Let:
        start = self._advance()
        name = self._expect_identifier()
        self._expect_keyword("be")
        value = self.parse_expr()
        end = self._expect_punct(".")
        stmt = Let(name.lexeme, value, name.span, span=start.span.merge(end.span))
        self.stack = referent_push(self.stack, name.lexeme, name.span)
        return stmt

    def _parse_print(self) -> Print:
        start = self._advance()
        value = self.parse_expr()
        end = self._expect_punct(".")
        return Print(value, span=start.span.merge(end.span))

    def _parse_add(self) -> AddTo:
        start = self._advance()
        value = self.parse_expr()
        self._expect_keyword("to")
        target = self._expect_identifier()
        end = self._expect_punct(".")
        return AddTo(value, target.lexeme, target.span, span=start.span.merge(end.span))

    def _close_block(self, closer: str) -> Token:
        tok = self._expect_keyword(closer)
        self._sentence_start = self.pos - 1
        self._expect_punct(".")
        return tok

    def _parse_if(self) -> If:
        opener = self._advance()
        cond = self.parse_expr()
        self._expect_punct(":")
        then = self._parse_block(("else-if", "else", "end-if"), opener)
        # else if 链：依次收集，最后自内向外组装
        branches: List[Tuple[Token, Expr, List[Stmt]]] = []
        orelse: Optional[List[Stmt]] = None
        while True:
            tok = self._peek()
            if tok is not None and tok.is_keyword("else-if"):
                self._sentence_start = self.pos
                clause = self._advance()
                clause_cond = self.parse_expr()
                self._expect_punct(":")
                body = self._parse_block(("else-if", "else", "end-if"), opener)
                branches.append((clause, clause_cond, body))
                continue
            if tok is not None and tok.is_keyword("else"):
                self._sentence_start = self.pos
                self._advance()
                self._expect_punct(":")
                orelse = self._parse_block(("end-if",), opener)
            break
        end = self._close_block("end-if")
        tail: Optional[Tuple[Stmt, ...]] = tuple(orelse) if orelse is not None else None
        for clause, clause_cond, body in reversed(branches):
            nested = If(clause_cond, tuple(body), tail, span=clause.span.merge(clause_cond.span))
            tail = (nested,)
        return If(cond, tuple(then), tail, span=opener.span.merge(cond.span))

    def _parse_while(self) -> While:
        opener = self._advance()
        cond = self.parse_expr()
        self._expect_punct(":")
        body = self._parse_block(("end-while",), opener)
        self._close_block("end-while")
        return While(cond, tuple(body), span=opener.span.merge(cond.span))

    def _parse_foreach(self) -> ForEach:
        opener = self._advance()
        var = self._expect_identifier()
        self._expect_keyword("in")
        iterable = self.parse_expr()
        self._expect_punct(":")
        # 循环变量是绑定点：体内的代词可以指向它
        self.stack = referent_push(self.stack, var.lexeme, var.span)
        body = self._parse_block(("end-for",), opener)
        self._close_block("end-for")
        return ForEach(var.lexeme, iterable, tuple(body), var.span, span=opener.span.merge(iterable.span))

    # ------------------------------------------------------------ 表达式

    def parse_expr(self) -> Expr:
        left = self._parse_additive()
        tok = self._peek()
        if tok is not None and tok.kind is TokenKind.KEYWORD and tok.value in ("is", "is-equal-to", "greater-than", "less-than"):
            op = self._advance()
            right = self._parse_additive()
            after = self._peek()
            if after is not None and after.kind is TokenKind.KEYWORD and after.value in ("is", "is-equal-to", "greater-than", "less-than"):
                raise self._error("comparisons cannot be chained", after)
            return RelOp(str(op.value), left, right, span=left.span.merge(right.span))
        return left

    def _parse_additive(self) -> Expr:
        left = self._parse_multiplicative()
        while True:
            tok = self._peek()
            if tok is None or not tok.is_keyword(*_ADD_OPS):
                return left
            self._advance()
            right = self._parse_multiplicative()
            left = BinOp(str(tok.value), left, right, span=left.span.merge(right.span))

    def _parse_multiplicative(self) -> Expr:
        left = self._parse_unary()
        while True:
            tok = self._peek()
            if tok is None or not tok.is_keyword(*_MUL_OPS):
                return left
            self._advance()
            right = self._parse_unary()
            left = BinOp(str(tok.value), left, right, span=left.span.merge(right.span))

    def _parse_unary(self) -> Expr:
        tok = self._peek()
        if tok is not None and tok.is_keyword("sum-of", "length-of"):
            self._advance()
            operand = self._parse_unary()
            node = SumOf if tok.value == "sum-of" else LengthOf
            return node(operand, span=tok.span.merge(operand.span))
        return self._parse_postfix()

    def _parse_postfix(self) -> Expr:
        expr = self._parse_primary()
        while True:
            tok = self._peek()
            if tok is None or not tok.is_keyword("reversed"):
                return expr
            self._advance()
            expr = Reversed(expr, span=expr.span.merge(tok.span))

    def _parse_primary(self) -> Expr:
        tok = self._peek()
        if tok is None:
            raise self._unexpected(("expression",))
        if tok.kind is TokenKind.INTEGER:
            self._advance()
            return IntLit(int(tok.value), span=tok.span)
        if tok.kind is TokenKind.STRING:
            self._advance()
            return StrLit(str(tok.value), span=tok.span)
        if tok.kind is TokenKind.IDENTIFIER:
            self._advance()
            return Var(tok.lexeme, span=tok.span)
        if tok.kind is TokenKind.PRONOUN:
            self._advance()
            top = self.stack.top
            referent = resolve_pronoun(self.stack, str(tok.value))
            return Pronoun(str(tok.value), referent, top[1] if top else None, span=tok.span)
        if tok.is_keyword("true", "false"):
            self._advance()
            return BoolLit(tok.value == "true", span=tok.span)
        if tok.is_punct("["):
            return self._parse_list()
        if tok.is_punct("("):
            self._advance()
            inner = self.parse_expr()
            self._expect_punct(")")
            return inner
        raise self._unexpected(("expression",))

    def _parse_list(self) -> ListLit:
        opener = self._advance()
        elements: List[Expr] = []
        tok = self._peek()
        if tok is not None and tok.is_punct("]"):
            closer = self._advance()
            return ListLit((), span=opener.span.merge(closer.span))
        while True:
            elements.append(self.parse_expr())
            tok = self._peek()
            if tok is not None and tok.is_punct(","):
                self._advance()
                continue
            closer = self._expect_punct("]")
            return ListLit(tuple(elements), span=opener.span.merge(closer.span))


def parse(tokens: TokenStream, stack: Optional[ReferentStack] = None) -> Program:
    """
    分析记号流为表层语法树

    Args:
        tokens: 词法分析输出
        stack: 初始指代栈（REPL 增量分析时传入）

    Returns:
        程序

    Raises:
        ParseError: 语法错误
    """
    program, _ = Parser(tokens, stack).parse_program()
    return program


class SyntaxAnalyzer(BasePass):
    """语法分析阶段"""

    stage = "parse"

    def __init__(self, stack: Optional[ReferentStack] = None):
        self.stack = stack

    def run(self, data: TokenStream) -> Tuple[Program, ReferentStack]:
        program, stack = Parser(data, self.stack).parse_program()
        self.logger.debug(f"分析得到 {len(program)} 条语句，指代栈深度 {len(stack)}")
        return program, stack
