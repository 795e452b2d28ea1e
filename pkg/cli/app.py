import argparse
import os
import sys
import traceback

from helper.errors import DomainError
from helper.report_io import ReportIO
from version import __version__

from cli.commands import CodeCommands, CountingCommands
from cli.components import LogSection
from cli.pipeline_controller import PipelineController
from cli.settings_manager import SettingsManager

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Raised by the parser instead of exiting the process"""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


class HSDCodesCLI:
    """Command-line application: parses arguments, loads settings and dispatches subcommands"""

    def __init__(self, stdout=None, stderr=None):
        self.stdout = stdout
        self.log_section = LogSection(stream=stderr)
        self.settings = None
        self.pipeline_controller = None

        self.code_commands = CodeCommands(self)
        self.counting_commands = CountingCommands(self)
        self.parser = self.create_parser()

    @property
    def _out(self):
        return self.stdout if self.stdout is not None else sys.stdout

    def create_parser(self):
        """Create the argument parser with every subcommand"""
        parser = _Parser(prog="hsd-codes",
                         description="Hermitian self-dual extended abelian group codes and their counting")
        parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        parser.add_argument("--output", help="write results to this file (.json, .csv, .xlsx, .txt)")
        parser.add_argument("--format", choices=["json", "csv", "matrix"], default=None)
        parser.add_argument("--settings", default=None, help="settings file (default hsd_settings.json)")
        parser.add_argument("--quiet", action="store_true", help="no log lines or progress bars")

        subparsers = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
        subparsers.required = True
        self.code_commands.register(subparsers)
        self.counting_commands.register(subparsers)
        return parser

    def log_message(self, message):
        """Add message to log with timestamp"""
        self.log_section.add_message(message)

    def load_settings(self, path):
        """Load settings and configure the components that depend on them"""
        self.settings = SettingsManager(path, log_func=self.log_message)
        self.settings.load_settings()
        self.log_section.show_progress = bool(self.settings.get("counting", "show_progress"))
        self.pipeline_controller = PipelineController(self.log_message,
                                                      self.settings.get("codes", "field_guard"))

    def run(self, argv=None):
        """Parse argv, run one subcommand and return the exit status"""
        try:
            args = self.parser.parse_args(argv)
        except UsageError as e:
            self.log_section.write_error(str(e))
            return EXIT_USAGE
        except SystemExit as e:
            # --help and --version
            return e.code if isinstance(e.code, int) else EXIT_OK

        self.log_section.quiet = args.quiet
        self.load_settings(args.settings)

        try:
            result = args.handler(args)
            self.emit(result, args)
        except DomainError as e:
            self.log_message(f"Error: {e}")
            self.log_section.write_error(ReportIO.to_json(e.to_dict()))
            return EXIT_DOMAIN_ERROR
        except Exception as e:
            self.log_message(f"Error: {e}")
            self.log_message(traceback.format_exc())
            raise
        return EXIT_OK

    def resolve_format(self, args):
        if args.format:
            return args.format
        if args.output:
            _, ext = os.path.splitext(args.output)
            if ext.lower() in [".csv", ".xlsx"]:
                return "csv"
        return getattr(args, "default_format", "json")

    def emit(self, result, args):
        """Write a command result to stdout or the --output file"""
        fmt = self.resolve_format(args)
        if fmt == "matrix":
            if result.matrix is None:
                raise DomainError(f"'{args.command}' has no matrix output", format=fmt)
            text = ReportIO.matrix_to_text(result.matrix)
        elif fmt == "csv":
            if result.rows is None:
                raise DomainError(f"'{args.command}' has no tabular output", format=fmt)
            if args.output and os.path.splitext(args.output)[1].lower() == ".xlsx":
                ReportIO.save_rows(result.rows, args.output, self.log_message)
                return
            text = ReportIO.rows_to_csv(result.rows)
        else:
            text = ReportIO.to_json(result.payload) + "\n"

        if args.output:
            directory = os.path.dirname(args.output)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(args.output, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            self.log_message(f"Results saved to {args.output}")
        else:
            self._out.write(text)
            self._out.flush()


def run(argv=None, stdout=None, stderr=None):
    """Run the command line once and return its exit status"""
    return HSDCodesCLI(stdout=stdout, stderr=stderr).run(argv)


def main():
    sys.exit(run())
