"""Command-line subcommands."""

from .commands import COMMANDS, CommandContext

__all__ = ["COMMANDS", "CommandContext"]
