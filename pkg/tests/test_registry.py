"""Tests for the formatter registry"""

import pytest

from coxcat.core.errors import PreconditionError
from coxcat.core.registry import FormatterRegistry
from coxcat.formatters.plain import PlainFormatter


def test_register_and_get_formatter():
    """Test formatter registration and retrieval"""
    registry = FormatterRegistry()
    formatter = PlainFormatter()

    registry.register_formatter(formatter)
    assert registry.get_formatter("plain") is formatter


def test_unknown_formatter():
    """Test an unknown name is a precondition error listing the choices"""
    registry = FormatterRegistry()
    registry.register_formatter(PlainFormatter())
    with pytest.raises(PreconditionError, match="plain"):
        registry.get_formatter("html")


def test_builtin_formatters_registered():
    """Test importing the formatters package registers all three"""
    import coxcat.formatters  # noqa: F401
    from coxcat.core.registry import registry

    assert {"markdown", "plain", "yaml"} <= set(registry.list_formatters())


def test_discover_plugins(tmp_path):
    """Test formatter classes are picked up from a plugins directory"""
    plugins = tmp_path / "coxcat_plugins"
    plugins.mkdir()
    (plugins / "shout.py").write_text(
        "from coxcat.core.interfaces import IFormatter\n\n\n"
        "class ShoutFormatter(IFormatter):\n"
        "    @property\n"
        "    def name(self):\n"
        "        return 'shout'\n\n"
        "    def format(self, report):\n"
        "        return str(report).upper()\n"
    )
    (plugins / "broken.py").write_text("raise RuntimeError('boom')\n")
    registry = FormatterRegistry()
    registry.discover_plugins(str(plugins))
    assert registry.list_formatters() == ["shout"]
    assert registry.get_formatter("shout").format({"a": "b"}) == "{'A': 'B'}"
