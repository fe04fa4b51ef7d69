import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, TextIO, Union

import pandas as pd

from config.settings import Config, SieveConfig
from .commands import register_commands
from ..helpers.errors import ConfigurationError, InvalidArgumentError, PrimeRatioError
from ..numtheory.primes import PrimeSieve
from ..report.reproduction import FORMATS
from ..report.tables import TIERS

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
MIN_SEGMENT = 2 ** 10
MAX_SEGMENT = 2 ** 24
MIN_BOUND = 10 ** 4

# flag dest -> (settings section, field)
FLAG_FIELDS = {
    'bound': ('sieve', 'global_bound'),
    'segment_length': ('sieve', 'segment_length'),
    'threads': ('sieve', 'threads'),
    'checkpoint': ('sieve', 'checkpoint_path'),
    'checkpoint_stride': ('sieve', 'checkpoint_stride'),
    'verify_checkpoints': ('sieve', 'verify_checkpoints'),
    'format': ('report', 'output_format'),
    'tier': ('report', 'tier'),
    'log_level': ('logging', 'log_level'),
}


@dataclass
class CliConfig:
    global_bound: int
    segment_length: int
    threads: int
    checkpoint_path: Optional[str]
    checkpoint_stride: int
    output_format: str
    tier: str
    settings: Config = field(repr=False)

    def sieve_config(self) -> SieveConfig:
        return self.settings.sieve


def load_config(flags: Optional[Mapping[str, Any]] = None, environ: Optional[Mapping[str, str]] = None) -> CliConfig:
    """Resolve flags > PRL_ environment > defaults.yaml > built-in defaults."""
    flags = dict(flags or {})
    try:
        settings = Config(environ={} if environ is None else environ)
    except ValueError as e:
        raise ConfigurationError(str(e))

    for dest, (section, name) in FLAG_FIELDS.items():
        value = flags.get(dest)
        if value is not None and value is not False:
            setattr(getattr(settings, section), name, value)
    if flags.get('extended'):
        settings.sieve.global_bound = max(settings.sieve.global_bound, settings.sieve.extended_bound)

    sieve = settings.sieve
    if sieve.threads < 1:
        raise ConfigurationError(f"threads must be >= 1, got {sieve.threads}")
    length = sieve.segment_length
    if length & (length - 1) or not MIN_SEGMENT <= length <= MAX_SEGMENT:
        raise ConfigurationError(f"segment length must be a power of two in [2^10, 2^24], got {length}")
    if sieve.global_bound < MIN_BOUND:
        raise ConfigurationError(f"bound must be >= {MIN_BOUND}, got {sieve.global_bound}")
    if sieve.checkpoint_stride < 1:
        raise ConfigurationError(f"checkpoint stride must be >= 1, got {sieve.checkpoint_stride}")
    if settings.report.output_format not in FORMATS:
        raise ConfigurationError(f"format must be one of {', '.join(FORMATS)}, got {settings.report.output_format!r}")
    if settings.report.tier not in TIERS:
        raise ConfigurationError(f"tier must be one of {', '.join(TIERS)}, got {settings.report.tier!r}")

    return CliConfig(
        global_bound=sieve.global_bound,
        segment_length=sieve.segment_length,
        threads=sieve.threads,
        checkpoint_path=sieve.checkpoint_path,
        checkpoint_stride=sieve.checkpoint_stride,
        output_format=settings.report.output_format,
        tier=settings.report.tier,
        settings=settings,
    )


def configure_logging(level: str = "INFO", log_file: Optional[str] = None):
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO), format=LOG_FORMAT,
                        handlers=handlers, force=True)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so main() owns the exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="prl", description="Prime-counting ratios, least witnesses and table reproduction.")
    parser.add_argument("--bound", type=int, help="global sieve bound (default 2^31)")
    parser.add_argument("--segment-length", type=int, dest="segment_length", help="sieve segment length, power of two")
    parser.add_argument("--threads", type=int, help="worker threads")
    parser.add_argument("--checkpoint", help="checkpoint CSV file")
    parser.add_argument("--checkpoint-stride", type=int, dest="checkpoint_stride", help="anchor spacing")
    parser.add_argument("--verify-checkpoints", action="store_true", dest="verify_checkpoints",
                        help="recount the last checkpoint segment on load")
    parser.add_argument("--format", choices=FORMATS, help="output format")
    parser.add_argument("--tier", choices=TIERS, help="reproduction tier")
    parser.add_argument("--extended", action="store_true", help="use the extended sieve bound")
    parser.add_argument("--log-level", dest="log_level", help="logging level")
    subparsers = parser.add_subparsers(dest="command", parser_class=_Parser)
    subparsers.required = True
    register_commands(subparsers)
    return parser


class PrimeRatioApp:
    def __init__(self, cli_config: CliConfig, stdout: Optional[TextIO] = None):
        self.config = cli_config
        self.stdout = stdout or sys.stdout
        self.logger = logging.getLogger("cli")
        self._sieve: Optional[PrimeSieve] = None

    @property
    def sieve(self) -> PrimeSieve:
        if self._sieve is None:
            self._sieve = PrimeSieve.from_config(self.config.sieve_config())
        return self._sieve

    def emit(self, records: Union[Dict[str, Any], List[Dict[str, Any]]], text: str):
        """Write one result: the text line, a CSV table or compact JSON."""
        output_format = self.config.output_format
        if output_format == "json":
            out = json.dumps(records, separators=(",", ":"))
        elif output_format == "csv":
            rows = records if isinstance(records, list) else [records]
            out = pd.DataFrame(rows).to_csv(index=False, lineterminator="\n").rstrip("\n")
        else:
            out = text
        self.stdout.write(out + "\n")

    def emit_raw(self, document: str):
        self.stdout.write(document if document.endswith("\n") else document + "\n")


def main(argv: Optional[List[str]] = None, environ: Optional[Mapping[str, str]] = None,
         stdout: Optional[TextIO] = None) -> int:
    """Run one subcommand; 0 on success, 1 on computation failure, 2 on usage error."""
    parser = build_parser()
    try:
        args = parser.parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        sys.stderr.write(f"prl: error: {e}\n")
        return 2
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else 2

    try:
        cli_config = load_config(vars(args), os.environ if environ is None else environ)
    except ConfigurationError as e:
        sys.stderr.write(f"prl: error: {e}\n")
        return 2

    logging_config = cli_config.settings.logging
    configure_logging(logging_config.log_level, logging_config.log_file)
    logger = logging.getLogger("cli")
    app = PrimeRatioApp(cli_config, stdout)

    try:
        return args.handler(app, args)
    except (ConfigurationError, InvalidArgumentError) as e:
        logger.error(str(e))
        return 2
    except PrimeRatioError as e:
        logger.error(str(e))
        return 1
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return 1
