"""词法分析测试"""

import pytest
from hypothesis import given, strategies as st

from compiler.errors import LexError, SourceSpan
from compiler.lexer import KEYWORDS, PRONOUNS, ARTICLES, TokenKind, format_tokens, normalize, tokenize


def values(source: str):
    return [tok.value for tok in tokenize(source)]


def test_articles_and_list_noise_are_dropped():
    assert values("Let numbers be the list [8, 12, 15, 9, 6].") == [
        "let", "numbers", "be", "[", 8, ",", 12, ",", 15, ",", 9, ",", 6, "]", ".",
    ]


def test_phrases_fuse_into_one_keyword():
    tokens = tokenize("If it is greater than 10:").tokens
    assert [t.kind for t in tokens] == [
        TokenKind.KEYWORD, TokenKind.PRONOUN, TokenKind.KEYWORD, TokenKind.INTEGER, TokenKind.PUNCTUATION,
    ]
    fused = tokens[2]
    assert fused.value == "greater-than"
    assert fused.lexeme == "is greater than"
    assert fused.span == SourceSpan(1, 7, 21)


def test_sum_of_and_length_of():
    assert values("Let total be sum of numbers.") == ["let", "total", "be", "sum-of", "numbers", "."]
    assert values("Print length of words.") == ["print", "length-of", "words", "."]


def test_phrases_do_not_cross_lines():
    result = values("Print x is\nequal to 3.")
    assert "is-equal-to" not in result
    assert result[2:5] == ["is", "equal", "to"]


def test_keywords_are_case_insensitive_identifiers_are_not():
    tokens = tokenize("LET Total BE 1.").tokens
    assert tokens[0].value == "let"
    assert tokens[1].kind is TokenKind.IDENTIFIER
    assert tokens[1].value == "Total"
    assert tokens[2].value == "be"


def test_string_literal_keeps_contents():
    tok = tokenize('Print "Average exceeds ten".').tokens[1]
    assert tok.kind is TokenKind.STRING
    assert tok.value == "Average exceeds ten"
    assert tok.lexeme == '"Average exceeds ten"'


def test_negative_literal_only_when_minus_touches_digits():
    assert values("Let x be -5.") == ["let", "x", "be", -5, "."]
    with pytest.raises(LexError):
        tokenize("Let x be - 5.")


def test_integer_range():
    assert values("Print 9223372036854775807.")[1] == 2 ** 63 - 1
    assert values("Print -9223372036854775808.")[1] == -(2 ** 63)
    with pytest.raises(LexError, match="64 bits"):
        tokenize("Print 9223372036854775808.")


def test_unterminated_string():
    with pytest.raises(LexError, match="unterminated string literal") as info:
        tokenize('Let x be 1.\nPrint "oops.')
    assert info.value.span.line == 2


def test_unexpected_character():
    with pytest.raises(LexError, match="unexpected character") as info:
        tokenize("Let x be 3 $ 4.")
    assert info.value.span == SourceSpan(1, 12, 12)


def test_malformed_number():
    with pytest.raises(LexError, match="malformed number"):
        tokenize("Let x be 12ab.")


def test_comments_are_skipped():
    tokens = tokenize("Print 1. # it is here\n# Print it.").tokens
    assert [t.value for t in tokens] == ["print", 1, "."]


def test_identifier_length_limit():
    assert values("Let abcd be 1.", ) == ["let", "abcd", "be", 1, "."]
    with pytest.raises(LexError, match="longer than 4 bytes"):
        tokenize("Let abcde be 1.", max_identifier_bytes=4)


@pytest.mark.parametrize("source, expected", [
    ("Let a be 1.", ["let", "a", "be", 1, "."]),
    ("Add 1 to a.", ["add", 1, "to", "a", "."]),
    ("Print an plus the.", ["print", "an", "plus", "the", "."]),
    ("Let the be a", ["let", "the", "be", "a"]),
])
def test_article_without_noun_phrase_is_a_name(source, expected):
    assert values(source) == expected
    names = [tok for tok in tokenize(source).tokens if tok.value in ARTICLES]
    assert names and all(tok.kind is TokenKind.IDENTIFIER for tok in names)


@pytest.mark.parametrize("source, expected", [
    ("Let the total be 5.", ["let", "total", "be", 5, "."]),
    ("Print the [1].", ["print", "[", 1, "]", "."]),
    ("Print a (1 plus 2).", ["print", "(", 1, "plus", 2, ")", "."]),
    ("Print the sum of xs.", ["print", "sum-of", "xs", "."]),
    ("Print the length of xs.", ["print", "length-of", "xs", "."]),
    ("Let b be a true.", ["let", "b", "be", "true", "."]),
])
def test_article_before_noun_phrase_is_dropped(source, expected):
    assert values(source) == expected


def test_list_keyword_survives_when_not_before_bracket():
    tokens = tokenize("Let list be 1.").tokens
    assert tokens[1].kind is TokenKind.KEYWORD
    assert tokens[1].value == "list"


def test_pronouns_are_their_own_kind():
    kinds = {tok.value: tok.kind for tok in tokenize("Print it. Print them. Print this. Print that.")}
    for word in PRONOUNS:
        assert kinds[word] is TokenKind.PRONOUN


def test_format_tokens():
    assert format_tokens(tokenize("Print 1.")) == (
        "KEYWORD\tPrint\t1:1-5\n"
        "INTEGER\t1\t1:7-7\n"
        "PUNCTUATION\t.\t1:8-8"
    )


def test_normalize_lowercases_keywords_only():
    assert normalize('LET Total BE "Hello THE".') == 'let Total be "Hello THE".'


_reserved = KEYWORDS | PRONOUNS | ARTICLES


@given(st.from_regex(r"[a-z][a-z0-9_]{0,12}", fullmatch=True).filter(lambda w: w not in _reserved))
def test_plain_words_lex_as_identifiers(word):
    tokens = tokenize(f"Let {word} be 1.").tokens
    assert tokens[1].kind is TokenKind.IDENTIFIER
    assert tokens[1].value == word
