import argparse
import logging
import logging.config
import sys
from typing import List, Optional, TextIO

from errors import CoverbordError, ParseError, UnknownCommand
from models.search import LabelMode
from routers import classify, search, topology
from routers.base import make_report
from services.config import TopologyConfig
from services.formats import dumps

logger = logging.getLogger(__name__)

ROUTERS = [topology.router, search.router, classify.router]


def configure_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """Console logging goes to stderr so stdout carries only the report"""
    level = (level or TopologyConfig.LOG_LEVEL).upper()
    log_file = log_file or TopologyConfig.LOG_FILE
    handlers = {
        "console": {
            "class": "logging.StreamHandler",
            "stream": sys.stderr,
            "formatter": "default",
            "level": level,
        }
    }
    if log_file:
        handlers["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "filename": log_file,
            "maxBytes": 10485760,  # 10MB
            "backupCount": 5,
            "formatter": "default",
            "level": level,
        }
    logging.config.dictConfig({
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "default": {
                "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                "datefmt": "%Y-%m-%d %H:%M:%S"
            }
        },
        "handlers": handlers,
        "root": {"level": level, "handlers": list(handlers)},
    })


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ParseError(f"{self.prog}: {message}", {"usage": self.format_usage().strip()})


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=[m.value for m in LabelMode], default=LabelMode.SINGLETON.value,
                        help="label sets tried for free vertices")
    common.add_argument("--budget", type=_positive, default=TopologyConfig.NODE_BUDGET,
                        help="search node budget")
    common.add_argument("--subdivide", type=_nonnegative, default=TopologyConfig.SUBDIVIDE,
                        help="bound on subdivision retries for witness searches")
    common.add_argument("--threads", type=_positive, default=TopologyConfig.THREADS)
    common.add_argument("--timing", action="store_true", help="include elapsed time in certificates")

    parser = _Parser(prog="coverbord", description="Homotopy and cobordism invariants of covers")
    subparsers = parser.add_subparsers(dest="command", metavar="command")
    for router in ROUTERS:
        router.mount(subparsers, parents=[common])
    return parser


def known_commands() -> List[str]:
    return [name for router in ROUTERS for name in router.commands]


def run_command(argv: List[str], out: Optional[TextIO] = None) -> int:
    """Run one subcommand, write its JSON report and return the exit status"""
    out = out or sys.stdout
    try:
        if not argv or argv[0] not in known_commands():
            if argv and argv[0] in ("-h", "--help"):
                build_parser().print_help(out)
                return 0
            raise UnknownCommand(
                f"unknown command {argv[0] if argv else ''!r}",
                {"known": sorted(known_commands())}
            )
        args = build_parser().parse_args(argv)
        logger.info(f"running {args.command}")
        report = args.handler(args)
    except CoverbordError as e:
        logger.error(f"{type(e).__name__}: {e.message}")
        out.write(dumps(make_report("error", **e.to_report())))
        return e.exit_code
    out.write(dumps(report))
    return 0


def main() -> None:
    configure_logging()
    try:
        status = run_command(sys.argv[1:])
    except Exception as e:
        logger.critical(f"unexpected failure: {str(e)}")
        sys.exit(1)
    sys.exit(status)


if __name__ == "__main__":
    main()
