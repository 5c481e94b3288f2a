"""
Tokenizer for ``.shift`` system specifications.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List

from ..core.exceptions import SpecSyntaxError

_TOKEN_PATTERN = re.compile(r"""
    (?P<newline>\n)
  | (?P<space>[ \t\r\f\v]+)
  | (?P<comment>\#[^\n]*)
  | (?P<dyadic>[-+]?\d+/2\^\d+)           # p/2^q
  | (?P<rational>[-+]?\d+/\d+)            # p/q
  | (?P<decimal>[-+]?(?:\d+\.\d*|\.\d+))  # 0.5, .5, 1.
  | (?P<integer>[-+]?\d+)
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_\-]*)
  | (?P<punct>[{}\[\]=;,])
""", re.VERBOSE)

PUNCTUATION = {
    "{": "LBRACE",
    "}": "RBRACE",
    "[": "LBRACK",
    "]": "RBRACK",
    "=": "EQUALS",
    ";": "SEMI",
    ",": "COMMA",
}

# Text shown in "expected ..." diagnostics.
TOKEN_TEXT = {
    "LBRACE": "'{'",
    "RBRACE": "'}'",
    "LBRACK": "'['",
    "RBRACK": "']'",
    "EQUALS": "'='",
    "SEMI": "';'",
    "COMMA": "','",
    "IDENT": "identifier",
    "STRING": "string",
    "NUMBER": "number",
    "EOF": "end of input",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: Any
    line: int
    column: int

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        if self.kind == "STRING":
            return f"string {self.value!r}"
        return repr(str(self.value))


def _unescape(body: str) -> str:
    result = []
    chars = iter(body)
    for ch in chars:
        if ch == "\\":
            nxt = next(chars, "")
            result.append({"n": "\n", "t": "\t"}.get(nxt, nxt))
        else:
            result.append(ch)
    return "".join(result)


MAX_EXPONENT = 4096


def _number(kind: str, text: str) -> Any:
    if kind == "dyadic":
        numerator, _, power = text.partition("/2^")
        if int(power) > MAX_EXPONENT:
            return None
        return Fraction(int(numerator), 2 ** int(power))
    if kind == "rational":
        numerator, _, denominator = text.partition("/")
        if int(denominator) == 0:
            return None
        return Fraction(int(numerator), int(denominator))
    if kind == "decimal":
        return Fraction(text)
    return int(text)


def tokenize(text: str) -> List[Token]:
    """Split ``text`` into tokens ending with an EOF token.

    Raises SpecSyntaxError, positioned at the offending character, for
    anything the grammar has no token for.
    """
    tokens: List[Token] = []
    line, line_start, pos = 1, 0, 0

    while pos < len(text):
        match = _TOKEN_PATTERN.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            if text[pos] == '"':
                raise SpecSyntaxError("unterminated string", line, column)
            raise SpecSyntaxError(f"unexpected character {text[pos]!r}", line, column)

        kind = match.lastgroup
        lexeme = match.group()
        pos = match.end()

        if kind == "newline":
            line += 1
            line_start = pos
        elif kind in ("space", "comment"):
            continue
        elif kind == "punct":
            tokens.append(Token(PUNCTUATION[lexeme], lexeme, line, column))
        elif kind == "string":
            tokens.append(Token("STRING", _unescape(lexeme[1:-1]), line, column))
        elif kind == "ident":
            tokens.append(Token("IDENT", lexeme, line, column))
        else:
            try:
                value = _number(kind, lexeme)  # type: ignore[arg-type]
            except ValueError:
                value = None
            if value is None:
                raise SpecSyntaxError(f"number {lexeme[:40]!r} out of range", line, column)
            tokens.append(Token("NUMBER", value, line, column))

    tokens.append(Token("EOF", None, line, pos - line_start + 1))
    return tokens
