"""
CLI Commands Package
Contains the code-construction and counting subcommand groups
"""

from .code_commands import CodeCommands
from .counting_commands import CountingCommands

__all__ = [
    'CodeCommands',
    'CountingCommands'
]
