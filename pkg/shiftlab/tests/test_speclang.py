"""
Tests for the spec lexer, parser and pretty-printer.
"""

from fractions import Fraction

import pytest

from shiftlab.core.exceptions import SpecError, SpecSemanticError, SpecSyntaxError
from shiftlab.speclang import load_spec, parse_spec, pretty, tokenize


class TestTokenize:
    """Test the tokenizer."""

    def test_number_forms(self):
        tokens = tokenize("3/2^4 1/3 0.25 7")
        assert [t.value for t in tokens[:-1]] == [Fraction(3, 16), Fraction(1, 3), Fraction(1, 4), 7]
        assert tokens[-1].kind == "EOF"

    def test_positions_are_one_based(self):
        tokens = tokenize('full {\n  alphabet = "01";\n}')
        alphabet = tokens[2]
        assert (alphabet.value, alphabet.line, alphabet.column) == ("alphabet", 2, 3)

    def test_comments_skipped(self):
        assert [t.kind for t in tokenize("# note\nfull")] == ["IDENT", "EOF"]

    def test_unterminated_string(self):
        with pytest.raises(SpecSyntaxError) as excinfo:
            tokenize('full { alphabet = "01 }')
        assert excinfo.value.line == 1
        assert excinfo.value.column == 19

    def test_zero_denominator(self):
        with pytest.raises(SpecSyntaxError, match="out of range"):
            tokenize("1/0")


class TestParseSpec:
    """Test parse_spec on each system kind."""

    def test_sft(self):
        spec = parse_spec('sft { alphabet = "01"; forbid = ["11"] }')
        assert spec.kind == "sft"
        assert tuple(spec.get("alphabet")) == ("0", "1")
        assert spec.get("forbid") == ("11",)

    def test_sturmian_convergent(self):
        spec = parse_spec("sturmian { alpha = 377/610 }")
        assert spec.kind == "sturmian"
        assert spec.get("alpha") == Fraction(377, 610)

    def test_sturmian_named_irrational(self):
        spec = parse_spec("sturmian { alpha = 233/610; irrational = golden }")
        assert spec.get("irrational") == "golden"

    def test_product_resolves_components(self):
        text = 'full a { alphabet = "01" }\nperiodic b { words = ["001"] }\nproduct { left = a; right = b }'
        spec = parse_spec(text)
        assert spec.kind == "product"
        assert [c.kind for c in spec.components] == ["full", "periodic"]

    def test_noninv_defaults_are_optional(self):
        spec = parse_spec("noninv { }")
        assert spec.kind == "noninv"
        assert spec.params == {}

    def test_label_prefers_name(self):
        assert parse_spec('full two { alphabet = "01" }').label == "two"
        assert parse_spec('full { alphabet = "01" }').label == "full"


class TestParseErrors:
    """Test positioned diagnostics."""

    def test_non_positive_seed(self):
        with pytest.raises(SpecSemanticError, match="seed must be strictly positive"):
            parse_spec("noninv { x0 = [0, 1]; dmax = 6 }")

    def test_seed_above_one(self):
        with pytest.raises(SpecSemanticError):
            parse_spec("noninv { x0 = [3/2] }")

    def test_rotation_outside_unit_interval(self):
        with pytest.raises(SpecSemanticError, match=r"\(0, 1\)"):
            parse_spec("sturmian { alpha = 3/2 }")

    def test_non_convergent_alpha(self):
        with pytest.raises(SpecSemanticError, match="convergent"):
            parse_spec("sturmian { alpha = 1/7; irrational = golden }")

    def test_unknown_symbol_in_rule(self):
        with pytest.raises(SpecSemanticError, match="unknown symbol"):
            parse_spec('substitution { alphabet = "ab"; rules = ["a->ab", "b->c"] }')

    def test_rules_must_cover_alphabet(self):
        with pytest.raises(SpecSemanticError, match="no rule"):
            parse_spec('substitution { alphabet = "ab"; rules = ["a->ab"] }')

    def test_dangling_product_component(self):
        with pytest.raises(SpecSemanticError, match="earlier block"):
            parse_spec('full a { alphabet = "01" }\nproduct { left = a; right = b }')

    def test_syntax_error_lists_expected_tokens(self):
        with pytest.raises(SpecSyntaxError) as excinfo:
            parse_spec('full { alphabet "01" }')
        assert excinfo.value.expected == ("'='",)
        assert (excinfo.value.line, excinfo.value.column) == (1, 17)

    def test_unknown_kind(self):
        with pytest.raises(SpecSyntaxError, match="unknown system kind"):
            parse_spec("cellular { }")

    def test_unknown_key(self):
        with pytest.raises(SpecSemanticError) as excinfo:
            parse_spec('full {\n  alphabet = "01";\n  colour = "red";\n}')
        assert excinfo.value.line == 3

    def test_parse_is_total(self, rng):
        """Random token soup yields a spec or a SpecError, never anything else."""
        pieces = ["full", "sft", "noninv", "sturmian", "product", "a", "{", "}", "[", "]", "=", ";", ",",
                  '"01"', '"11"', "1/2", "0", "3/2^2", "alphabet", "forbid", "x0", "alpha", "#", "\n", '"']
        for _ in range(500):
            text = " ".join(rng.choice(pieces) for _ in range(rng.randrange(0, 15)))
            try:
                parse_spec(text)
            except SpecError as e:
                assert e.line >= 1 and e.column >= 1


class TestPretty:
    """Test pretty-printing."""

    @pytest.mark.parametrize("name", ["golden", "full2", "fib", "period3", "noninv", "product", "tiny"])
    def test_bundled_specs_reparse(self, spec_dir, name):
        spec = load_spec(spec_dir / f"{name}.shift")
        assert parse_spec(pretty(spec)) == spec

    def test_dyadic_values_print_as_powers_of_two(self):
        spec = parse_spec("noninv { x0 = [1/2, 3/4] }")
        assert "x0 = [1/2^1, 3/2^2];" in pretty(spec)

    def test_load_spec_prefixes_path(self, tmp_path):
        path = tmp_path / "broken.shift"
        path.write_text("full { alphabet = }", encoding="utf-8")
        with pytest.raises(SpecSyntaxError) as excinfo:
            load_spec(path)
        assert str(path) in excinfo.value.message
