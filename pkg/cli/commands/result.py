from dataclasses import dataclass


@dataclass
class CommandResult:
    """What a subcommand produced: a JSON payload, table rows, or a matrix"""

    payload: object = None
    rows: list = None
    matrix: object = None
