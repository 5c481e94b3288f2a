"""
The ``.shift`` system-specification language.
"""

from .lexer import Token, tokenize
from .parser import SystemSpec, load_spec, parse_spec, pretty

__all__ = ["Token", "tokenize", "SystemSpec", "load_spec", "parse_spec", "pretty"]
