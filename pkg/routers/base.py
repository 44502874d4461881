import argparse
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

from services.config import TopologyConfig

logger = logging.getLogger(__name__)

Report = Dict[str, Any]
Handler = Callable[[argparse.Namespace], Report]
Argument = Tuple[Tuple[str, ...], Dict[str, Any]]


def arg(*flags: str, **options: Any) -> Argument:
    """One add_argument call, recorded for later"""
    return flags, options


class Command:
    def __init__(self, name: str, handler: Handler, help: str, arguments: List[Argument]):
        self.name = name
        self.handler = handler
        self.help = help
        self.arguments = arguments


class CommandRouter:
    """
    Groups subcommands the way an API router groups endpoints: handlers are
    registered with a decorator and mounted onto the main parser later.
    """

    def __init__(self, tags: Optional[List[str]] = None):
        self.tags = tags or []
        self.commands: Dict[str, Command] = {}

    def command(self, name: str, help: str, *arguments: Argument) -> Callable[[Handler], Handler]:
        def register(handler: Handler) -> Handler:
            if name in self.commands:
                raise ValueError(f"command {name!r} registered twice")
            self.commands[name] = Command(name, handler, help, list(arguments))
            return handler
        return register

    def mount(self, subparsers, parents: List[argparse.ArgumentParser]) -> None:
        for command in self.commands.values():
            parser = subparsers.add_parser(command.name, help=command.help, parents=parents)
            for flags, options in command.arguments:
                parser.add_argument(*flags, **options)
            parser.set_defaults(handler=command.handler, command=command.name)
            logger.debug(f"mounted command {command.name} ({', '.join(self.tags)})")


def make_report(kind: str, **fields: Any) -> Report:
    return {"schema_version": TopologyConfig.SCHEMA_VERSION, "kind": kind, **fields}
