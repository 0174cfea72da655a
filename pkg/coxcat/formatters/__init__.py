"""Built-in formatters"""

from coxcat.core.registry import registry
from coxcat.formatters.markdown import MarkdownFormatter
from coxcat.formatters.plain import PlainFormatter
from coxcat.formatters.yaml_formatter import YamlFormatter

for _formatter in (YamlFormatter(), PlainFormatter(), MarkdownFormatter()):
    registry.register_formatter(_formatter)

__all__ = ["MarkdownFormatter", "PlainFormatter", "YamlFormatter"]
