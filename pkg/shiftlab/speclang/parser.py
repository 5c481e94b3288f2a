"""
Parser and pretty-printer for ``.shift`` system specifications.

A document is a sequence of blocks::

    kind [name] { key = value; key = [v1, v2]; }

The last block is the system being described; ``product`` blocks refer to
earlier named blocks through ``left`` and ``right``.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple, Union

from ..core.exceptions import ParameterError, SpecError, SpecSemanticError, SpecSyntaxError
from ..dynamics.subshifts import IRRATIONALS, convergents
from .lexer import TOKEN_TEXT, Token, tokenize

logger = logging.getLogger(__name__)

KINDS = ("full", "periodic", "sft", "substitution", "sturmian", "noninv", "product")
DEPTH_MODES = ("scaled", "literal")
PRECISION_MODES = ("exact", "float")


class Name(str):
    """A bare identifier value, kept distinct from quoted strings."""
    __slots__ = ()


@dataclass(frozen=True)
class SystemSpec:
    """A validated system declaration."""
    kind: str
    params: Dict[str, Any] = field(default_factory=dict, hash=False)
    name: Optional[str] = None
    components: Tuple['SystemSpec', ...] = ()
    line: int = field(default=1, compare=False)
    column: int = field(default=1, compare=False)

    def get(self, key: str, default: Any = None) -> Any:
        return self.params.get(key, default)

    @property
    def label(self) -> str:
        return self.name or self.kind


@dataclass
class _Entry:
    key: str
    value: Any
    line: int
    column: int


@dataclass
class _Block:
    kind: str
    name: Optional[str]
    entries: Dict[str, _Entry]
    line: int
    column: int


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "EOF":
            self.pos += 1
        return token

    def expect(self, *kinds: str) -> Token:
        token = self.current
        if token.kind not in kinds:
            raise SpecSyntaxError(
                f"unexpected {token.describe()}", token.line, token.column,
                expected=[TOKEN_TEXT[k] for k in kinds],
            )
        return self.advance()

    def document(self) -> List[_Block]:
        blocks = [self.block()]
        while self.current.kind != "EOF":
            blocks.append(self.block())
        return blocks

    def block(self) -> _Block:
        head = self.expect("IDENT")
        if head.value not in KINDS:
            raise SpecSyntaxError(f"unknown system kind {head.value!r}", head.line, head.column,
                                  expected=KINDS)
        name = None
        if self.current.kind == "IDENT":
            name = self.advance().value
        self.expect("LBRACE")

        entries: Dict[str, _Entry] = {}
        while self.current.kind != "RBRACE":
            entry = self.entry()
            if entry.key in entries:
                raise SpecSemanticError(f"duplicate key '{entry.key}'", entry.line, entry.column)
            entries[entry.key] = entry
            if self.current.kind == "SEMI":
                self.advance()
            elif self.current.kind != "RBRACE":
                self.expect("SEMI", "RBRACE")
        self.expect("RBRACE")
        return _Block(head.value, name, entries, head.line, head.column)

    def entry(self) -> _Entry:
        key = self.expect("IDENT")
        self.expect("EQUALS")
        start = self.current
        if start.kind == "LBRACK":
            value: Any = self.list_value()
        else:
            value = self.atom()
        return _Entry(key.value, value, start.line, start.column)

    def list_value(self) -> Tuple[Any, ...]:
        self.expect("LBRACK")
        items = []
        if self.current.kind != "RBRACK":
            items.append(self.atom())
            while self.current.kind == "COMMA":
                self.advance()
                items.append(self.atom())
        self.expect("RBRACK")
        return tuple(items)

    def atom(self) -> Any:
        token = self.expect("STRING", "NUMBER", "IDENT")
        if token.kind == "IDENT":
            return Name(token.value)
        return token.value


# ---------------------------------------------------------------------------
# Semantic validation
# ---------------------------------------------------------------------------

def _fail(message: str, entry: Union[_Entry, _Block]) -> SpecSemanticError:
    return SpecSemanticError(message, entry.line, entry.column)


def _text(entry: _Entry) -> str:
    if not isinstance(entry.value, str):
        raise _fail(f"'{entry.key}' must be a string", entry)
    return entry.value


def _text_list(entry: _Entry) -> Tuple[str, ...]:
    if not isinstance(entry.value, tuple) or not all(isinstance(v, str) for v in entry.value):
        raise _fail(f"'{entry.key}' must be a list of strings", entry)
    return entry.value


def _integer(entry: _Entry, minimum: int = 1) -> int:
    value = entry.value
    if not isinstance(value, int) or isinstance(value, bool):
        raise _fail(f"'{entry.key}' must be an integer", entry)
    if value < minimum:
        raise _fail(f"'{entry.key}' must be at least {minimum}", entry)
    return value


def _choice(entry: _Entry, options: Tuple[str, ...]) -> str:
    if not isinstance(entry.value, str) or entry.value not in options:
        raise _fail(f"'{entry.key}' must be one of {', '.join(options)}", entry)
    return entry.value


def _alphabet(entry: _Entry) -> Tuple[str, ...]:
    if isinstance(entry.value, tuple):
        symbols = _text_list(entry)
    else:
        symbols = tuple(_text(entry))
    if not symbols:
        raise _fail("alphabet must not be empty", entry)
    if len(set(symbols)) != len(symbols):
        raise _fail("alphabet lists a symbol twice", entry)
    return symbols


def _check_symbols(words: Tuple[str, ...], alphabet: Tuple[str, ...], entry: _Entry) -> None:
    allowed = set(alphabet)
    for word in words:
        for symbol in word:
            if symbol not in allowed:
                raise _fail(f"unknown symbol {symbol!r} in {word!r}", entry)


def _validate_full(block: _Block) -> None:
    _alphabet(block.entries["alphabet"])


def _validate_periodic(block: _Block) -> None:
    entry = block.entries["words"]
    words = _text_list(entry)
    if not words or any(not w for w in words):
        raise _fail("periodic orbits need at least one non-empty word", entry)
    if "alphabet" in block.entries:
        _check_symbols(words, _alphabet(block.entries["alphabet"]), entry)


def _validate_sft(block: _Block) -> None:
    alphabet = _alphabet(block.entries["alphabet"])
    entry = block.entries["forbid"]
    forbidden = _text_list(entry)
    if any(not w for w in forbidden):
        raise _fail("the empty word cannot be forbidden", entry)
    _check_symbols(forbidden, alphabet, entry)


def _validate_substitution(block: _Block) -> None:
    alphabet = _alphabet(block.entries["alphabet"])
    entry = block.entries["rules"]
    seen = set()
    for rule in _text_list(entry):
        source, arrow, image = rule.partition("->")
        source, image = source.strip(), image.strip()
        if not arrow or len(source) != 1 or not image:
            raise _fail(f"rule {rule!r} must look like 'a->ab'", entry)
        if source in seen:
            raise _fail(f"symbol {source!r} has more than one rule", entry)
        seen.add(source)
        _check_symbols((source, image), alphabet, entry)
    missing = [s for s in alphabet if s not in seen]
    if missing:
        raise _fail(f"no rule for symbol {missing[0]!r}", entry)
    if "seed" in block.entries:
        seed = block.entries["seed"]
        text = _text(seed)
        if len(text) != 2:
            raise _fail("seed must be a two-letter word", seed)
        _check_symbols((text,), alphabet, seed)


def _validate_sturmian(block: _Block) -> None:
    entry = block.entries["alpha"]
    alpha = entry.value
    if not isinstance(alpha, (int, Fraction)) or isinstance(alpha, bool):
        raise _fail("alpha must be a rational number", entry)
    if not 0 < alpha < 1:
        raise _fail("rotation parameter alpha must lie in (0, 1)", entry)
    if "irrational" in block.entries:
        named = block.entries["irrational"]
        if named.value not in IRRATIONALS:
            raise _fail(f"irrational must be one of {', '.join(sorted(IRRATIONALS))}", named)
        approximants = set(convergents(named.value, 40))
        if alpha not in approximants and 1 - alpha not in approximants:
            raise _fail(f"alpha {alpha} is not a convergent of {named.value}", entry)


def _validate_noninv(block: _Block) -> None:
    if "x0" in block.entries:
        entry = block.entries["x0"]
        seed = entry.value
        if not isinstance(seed, tuple) or not seed:
            raise _fail("x0 must be a non-empty list of numbers", entry)
        for value in seed:
            if not isinstance(value, (int, Fraction)) or isinstance(value, bool):
                raise _fail("x0 entries must be exact numbers", entry)
            if value <= 0:
                raise _fail("seed must be strictly positive", entry)
            if value > 1:
                raise _fail("seed symbols must lie in (0, 1]", entry)
    if "dmax" in block.entries:
        _integer(block.entries["dmax"])
    if "depth" in block.entries:
        _choice(block.entries["depth"], DEPTH_MODES)
    if "precision" in block.entries:
        _choice(block.entries["precision"], PRECISION_MODES)
    if "stages" in block.entries:
        _integer(block.entries["stages"])
    if "horizon" in block.entries:
        _integer(block.entries["horizon"])
    if "multiplicity" in block.entries:
        entry = block.entries["multiplicity"]
        values = entry.value
        if not isinstance(values, tuple) or not all(isinstance(v, int) and not isinstance(v, bool)
                                                    for v in values):
            raise _fail("multiplicity must be a list of integers", entry)
        for n, m in enumerate(values):
            if m < 2 ** n or m < 1:
                raise _fail(f"multiplicity at stage {n} must be at least {2 ** n}", entry)


def _validate_product(block: _Block) -> None:
    for key in ("left", "right"):
        if not isinstance(block.entries[key].value, str):
            raise _fail(f"'{key}' must name an earlier block", block.entries[key])


_SCHEMAS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...], Callable[[_Block], None]]] = {
    "full": (("alphabet",), (), _validate_full),
    "periodic": (("words",), ("alphabet",), _validate_periodic),
    "sft": (("alphabet", "forbid"), (), _validate_sft),
    "substitution": (("alphabet", "rules"), ("seed",), _validate_substitution),
    "sturmian": (("alpha",), ("irrational",), _validate_sturmian),
    "noninv": ((), ("x0", "dmax", "depth", "multiplicity", "precision", "stages", "horizon"),
               _validate_noninv),
    "product": (("left", "right"), (), _validate_product),
}


def _build(block: _Block, named: Mapping[str, SystemSpec]) -> SystemSpec:
    required, optional, validate = _SCHEMAS[block.kind]
    for key, entry in block.entries.items():
        if key not in required and key not in optional:
            raise _fail(f"unknown key '{key}' for {block.kind}", entry)
    for key in required:
        if key not in block.entries:
            raise _fail(f"{block.kind} needs '{key}'", block)
    validate(block)

    components: Tuple[SystemSpec, ...] = ()
    if block.kind == "product":
        resolved = []
        for key in ("left", "right"):
            entry = block.entries[key]
            if entry.value not in named:
                raise _fail(f"'{entry.value}' does not name an earlier block", entry)
            resolved.append(named[entry.value])
        components = tuple(resolved)

    params = {key: entry.value for key, entry in block.entries.items()}
    return SystemSpec(block.kind, params, block.name, components, block.line, block.column)


def parse_spec(text: str) -> SystemSpec:
    """Parse a spec document and return its last block, fully validated.

    Every failure is a SpecSyntaxError or SpecSemanticError carrying a
    1-based line and column.
    """
    try:
        blocks = _Parser(tokenize(text)).document()
    except RecursionError:
        raise SpecSyntaxError("input nested too deeply", 1, 1)

    named: Dict[str, SystemSpec] = {}
    spec: Optional[SystemSpec] = None
    for block in blocks:
        if block.name is not None and block.name in named:
            raise _fail(f"block name '{block.name}' is already used", block)
        spec = _build(block, named)
        if block.name is not None:
            named[block.name] = spec

    assert spec is not None
    logger.debug("Parsed %s spec with %d block(s)", spec.kind, len(blocks))
    return spec


def load_spec(path: Union[str, Path]) -> SystemSpec:
    """Read and parse a ``.shift`` file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParameterError(f"Cannot read spec file {path}: {e}")
    try:
        return parse_spec(text)
    except SpecError as e:
        e.message = f"{path}:{e.message}"
        e.args = (e.message,)
        raise


# ---------------------------------------------------------------------------
# Pretty printing
# ---------------------------------------------------------------------------

def _format_value(value: Any) -> str:
    if isinstance(value, tuple):
        return "[" + ", ".join(_format_value(v) for v in value) + "]"
    if isinstance(value, Name):
        return str(value)
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")
        return f'"{escaped}"'
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        d = value.denominator
        if d & (d - 1) == 0:
            return f"{value.numerator}/2^{d.bit_length() - 1}"
        return f"{value.numerator}/{value.denominator}"
    return str(value)


def _format_block(spec: SystemSpec) -> str:
    head = spec.kind if spec.name is None else f"{spec.kind} {spec.name}"
    lines = [head + " {"]
    for key, value in spec.params.items():
        lines.append(f"  {key} = {_format_value(value)};")
    lines.append("}")
    return "\n".join(lines)


def pretty(spec: SystemSpec) -> str:
    """Render a spec (components first) so that parsing it gives ``spec`` back."""
    blocks: List[str] = []
    emitted = set()

    def emit(node: SystemSpec) -> None:
        for component in node.components:
            if component.name not in emitted:
                emit(component)
                emitted.add(component.name)
        blocks.append(_format_block(node))

    emit(spec)
    return "\n\n".join(blocks) + "\n"
