"""Tests for formatters and report serialization"""

from fractions import Fraction

import yaml

from coxcat.core.report import Report, to_data
from coxcat.formatters.markdown import MarkdownFormatter
from coxcat.formatters.plain import PlainFormatter
from coxcat.formatters.yaml_formatter import YamlFormatter
from coxcat.theta.collection import Interval, Variant


def test_to_data_fractions():
    """Test fractions become decimal strings and integral ones become ints"""
    assert to_data(Fraction(-2, 3)) == "-2/3"
    assert to_data(Fraction(4, 2)) == 2
    assert to_data((Fraction(1, 2), 3)) == ["1/2", 3]


def test_to_data_tuple_keys():
    """Test tuple keys are rendered as strings"""
    assert to_data({(1, -1): {0: None}}) == {"(1, -1)": {"0": None}}


def test_to_data_enums_are_plain_strings():
    """Test str-valued enums reach the YAML dumper as their values"""
    value = to_data({"variant": Variant.STAR, "kinds": [Interval.CLOSED]})
    assert value == {"variant": "star", "kinds": ["closed"]}
    assert type(value["variant"]) is str
    assert yaml.safe_load(YamlFormatter().format(value)) == value


def test_plain_formatter_header_and_result():
    """Test the header line carries the command and a short digest"""
    formatter = PlainFormatter()
    result = formatter.format(
        {"command": "gkz", "input_digest": "abcdef0123456789", "result": {"chambers": 2}}
    )
    lines = result.splitlines()
    assert lines[0] == "gkz  [abcdef012345]"
    assert "chambers: 2" in lines


def test_plain_formatter_hom_matrix():
    """Test a Hom table is laid out as an aligned grid"""
    result = PlainFormatter().format(
        {"command": "homs", "result": {"dims": [[1, 0], [2, 1]], "order": "effectivity"}}
    )
    lines = result.splitlines()
    start = lines.index("dims:")
    assert lines[start + 1 : start + 3] == ["  1  0", "  2  1"]
    assert "order: effectivity" in lines


def test_plain_formatter_cohomology_table():
    """Test degree-keyed dimensions become a degree row over a value row"""
    result = PlainFormatter().format(
        {"command": "monad strand", "result": {"cohomology": {"1": 2, "-1": 0, "0": 10}}}
    )
    lines = result.splitlines()
    start = lines.index("cohomology:")
    assert lines[start + 1 : start + 3] == ["  -1   0  1", "   0  10  2"]


def test_plain_formatter_records_and_missing_values():
    """Test element lists become columns and None prints as a dash"""
    result = PlainFormatter().format(
        {
            "command": "theta",
            "result": {
                "elements": [
                    {"class": [0, 0], "chamber": None},
                    {"class": [-1, 0], "chamber": 1},
                ]
            },
        }
    )
    lines = result.splitlines()
    start = lines.index("elements:")
    assert lines[start + 1].split() == ["class", "chamber"]
    assert lines[start + 2].split() == ["(0,", "0)", "-"]
    assert lines[start + 3].split() == ["(-1,", "0)", "1"]


def test_plain_formatter_certificates():
    """Test certificates follow the result, numbered"""
    result = PlainFormatter().format(
        {
            "command": "check-exceptional",
            "result": {"verdict": "fail"},
            "certificates": [{"violation": {"kind": "triangularity", "pair": [1, 0]}}],
        }
    )
    assert "certificates (1):" in result
    assert "kind: triangularity" in result
    assert result.index("verdict: fail") < result.index("certificates")


def test_markdown_formatter():
    """Test markdown formatter"""
    formatter = MarkdownFormatter()
    result = formatter.format({"command": "theta", "result": {"count": 6}})
    assert result.startswith("# theta")
    assert "**count**: `6`" in result


def test_markdown_formatter_matrix_table():
    """Test a Hom table becomes a markdown table with indexed rows"""
    result = MarkdownFormatter().format({"command": "homs", "result": {"dims": [[1, 0], [2, 1]]}})
    assert "### dims" in result
    assert "| 0 | 1 | 0 |" in result
    assert "| 1 | 2 | 1 |" in result


def test_markdown_formatter_with_labels():
    """Test markdown formatter with custom labels"""
    formatter = MarkdownFormatter(labels={"count": "|Θ|"})
    result = formatter.format({"result": {"count": 6}})
    assert "|Θ|" in result


def test_yaml_formatter_is_deterministic():
    """Test identical reports render byte-identically"""
    report = Report(command="theta", result={"b": Fraction(1, 3), "a": [(0, 0)]})
    first = YamlFormatter().format(report.to_dict())
    second = YamlFormatter().format(report.to_dict())
    assert first == second
    data = yaml.safe_load(first)
    assert data["result"] == {"a": [[0, 0]], "b": "1/3"}
    assert first.index("certificates") < first.index("command")
