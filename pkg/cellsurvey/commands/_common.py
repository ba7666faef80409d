"""Argument types and file plumbing shared by the commands."""
import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Union

from cellsurvey.core.campaign import Campaign, read_campaign
from cellsurvey.core.errors import SchemaError
from cellsurvey.planning.genetic import GAParams

STDIO = "-"


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def int_list(text: str) -> list[int]:
    """Comma separated positive integers, e.g. ``40,50,60``."""
    values = [positive_int(part.strip()) for part in text.split(",") if part.strip()]
    if not values:
        raise argparse.ArgumentTypeError("expected at least one value")
    return values


def float_pair(text: str) -> tuple[float, float]:
    """``X,Y`` or ``WIDTH,HEIGHT`` in meters."""
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma separated numbers, got {text!r}")


def ga_params(args: argparse.Namespace, seed: Optional[int] = None) -> GAParams:
    defaults = GAParams()
    return GAParams(
        population_size=args.ga_pop if args.ga_pop is not None else defaults.population_size,
        generations=args.ga_gens if args.ga_gens is not None else defaults.generations,
        mutation_rate=args.ga_mut if args.ga_mut is not None else defaults.mutation_rate,
        elite_count=args.ga_elite if args.ga_elite is not None else defaults.elite_count,
        seed=seed if seed is not None else (args.seed or 0),
    )


def load_campaign_arg(args: argparse.Namespace, log: logging.Logger) -> Campaign:
    """The ``--campaign`` document, with ``--seed`` applied on top."""
    campaign = read_campaign(args.campaign)
    if args.seed is not None:
        campaign = campaign.with_seed(args.seed)
    log.info(f"Loaded campaign {args.campaign}: {len(campaign.sensors)} sensor(s), "
             f"{len(campaign.points)} point(s), {len(campaign.base_stations)} base station(s)")
    return campaign


def read_text(path: str) -> str:
    if path == STDIO:
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def read_json(path: str) -> Any:
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON at offset {e.pos}: {e.msg}")


def write_output(data: Union[str, bytes], path: Optional[str], log: logging.Logger, what: str = "output") -> None:
    """Write to ``path``, or to stdout when no path (or ``-``) is given."""
    if path is None or path == STDIO:
        if isinstance(data, bytes):
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            sys.stdout.write(data)
            sys.stdout.flush()
        return
    target = Path(path)
    if isinstance(data, bytes):
        target.write_bytes(data)
    else:
        target.write_text(data, encoding="utf-8")
    log.info(f"Wrote {what} → {target}")


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def json_lines(docs: list[dict]) -> str:
    return "".join(json.dumps(d, separators=(",", ":"), allow_nan=False) + "\n" for d in docs)


def rows_csv(rows: list[dict], fields: tuple[str, ...]) -> str:
    """CSV of dict rows; None is blank and floats keep their round-trip form."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow(["" if row[k] is None else (repr(row[k]) if isinstance(row[k], float) else row[k])
                         for k in fields])
    return buf.getvalue()
