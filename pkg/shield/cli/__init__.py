"""
Command-line interface.

This package provides the ``shield`` executable and the command handlers
behind its subcommands.
"""

from shield.cli.commands import cmd_eval, cmd_export, cmd_gen_corpus, cmd_train
from shield.cli.main import main

__all__ = ["cmd_eval", "cmd_export", "cmd_gen_corpus", "cmd_train", "main"]
