"""CLI commands"""

from coxcat.cli.commands import cli

__all__ = ["cli"]
