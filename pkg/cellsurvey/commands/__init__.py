import argparse
import importlib
import logging
import pkgutil
from types import ModuleType
from typing import Optional

mods = [m.name for m in pkgutil.iter_modules(__path__) if not m.name.startswith("_")]


def available() -> list[str]:
    """Command names as typed on the command line."""
    return [cli_name(name) for name in mods]


def cli_name(module_name: str) -> str:
    return module_name.replace("_", "-")


def load(command: str) -> ModuleType:
    return importlib.import_module(f".{command.replace('-', '_')}", package=__package__)


def register(subparsers, common: argparse.ArgumentParser) -> None:
    """Add one sub-parser per command module; each module fills in its own flags."""
    for name in mods:
        mod = load(name)
        p = subparsers.add_parser(
            cli_name(name),
            parents=[common],
            help=mod.COMMAND_INFO["help"],
            description=(mod.__doc__ or "").strip() or None,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        mod.add_arguments(p)
        p.set_defaults(command=cli_name(name))


def output_format(args: argparse.Namespace) -> str:
    """``--format`` if given, else the command's own default."""
    if args.format:
        return args.format
    return load(args.command).COMMAND_INFO.get("default_format", "json")


def validate(args: argparse.Namespace) -> Optional[str]:
    mod = load(args.command)
    fmt = output_format(args)
    formats = mod.COMMAND_INFO.get("formats", ("json", "csv"))
    if fmt not in formats:
        return f"{args.command} writes {' or '.join(formats)}, not {fmt}"
    check = getattr(mod, "validate", None)
    return check(args) if check else None


def run_command(args: argparse.Namespace, log: logging.Logger) -> int:
    mod = load(args.command)
    log.debug(f"Running command {args.command}")
    return mod.run(args, log)
