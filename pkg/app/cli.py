"""
Command-line entry point: simulate / daltonize / check / adapt.

Exit codes: 0 ok, 1 conflicts found, 2 unresolved conflicts remain,
64 usage error, 65 data error. Diagnostics go to stderr; data goes to
stdout or the named output files.
"""

import argparse
import sys
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import ValidationError as SchemaError

from app.color.convert import parse_color
from app.core.config import Settings, get_settings
from app.core.exceptions import ConfigurationError, CvdError, ValidationError
from app.core.models import (
    ALL_KINDS,
    AdjacencyPair,
    ColorToken,
    ConflictThresholds,
    Dichromacy,
    RemapPolicy,
)
from app.ingest.image import load_png, save_png
from app.ingest.palette import load_palette, palette_edges
from app.ingest.stylesheet import StylesheetScanner, derive_adjacency, rewrite_stylesheet
from app.render.report import conflicts_to_json, conflicts_to_text, plan_to_json, plan_to_text
from app.rules.conflict import detect_conflicts
from app.rules.remap import resolve
from app.utils.logging import LogContext, create_logger, setup_logging
from app.vision.daltonize import daltonize_color, daltonize_image
from app.vision.simulate import simulate_color, simulate_image

logger = create_logger(__name__, component='cli')


class ExitCode(IntEnum):
    OK = 0
    FINDINGS = 1
    PARTIAL = 2
    USAGE = 64
    DATA = 65


@dataclass(frozen=True)
class CliConfig:
    """Validated settings for one invocation"""
    subcommand: str
    kinds: Tuple[Dichromacy, ...] = ALL_KINDS
    thresholds: ConflictThresholds = field(default_factory=ConflictThresholds)
    policy: RemapPolicy = field(default_factory=RemapPolicy)
    color: Optional[str] = None
    input: Optional[Path] = None
    output: Optional[Path] = None
    palette: Optional[Path] = None
    css: Optional[Path] = None
    report: Optional[Path] = None
    plan: Optional[Path] = None
    format: str = "text"
    workers: int = 1


class CliArgumentParser(argparse.ArgumentParser):
    """Raises instead of exiting so main() controls the exit code"""

    def error(self, message):
        raise ConfigurationError(f"{self.prog}: {message}")


def _kind(value: str) -> Dichromacy:
    try:
        return Dichromacy.parse(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> CliArgumentParser:
    parser = CliArgumentParser(
        prog="cvd-adapt",
        description="Simulate dichromacy, detect colour conflicts and recolour stylesheets.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="INFO logs; twice for DEBUG")
    parser.add_argument("--json-logs", action="store_true", help="structured JSON logs on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("simulate", "show a colour or PNG as a dichromat sees it"),
        ("daltonize", "compensate a colour or PNG for a dichromacy"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--type", dest="kind", type=_kind, required=True,
                       help="protan | deutan | tritan (full names accepted)")
        source = p.add_mutually_exclusive_group(required=True)
        source.add_argument("--color", help="single colour, #rgb or #rrggbb")
        source.add_argument("--input", type=Path, help="input PNG")
        p.add_argument("--output", type=Path, help="output PNG (required with --input)")
        p.add_argument("--workers", type=int, help="threads for image work")

    def add_gates(p: argparse.ArgumentParser) -> None:
        p.add_argument("--type", dest="kinds", type=_kind, action="append",
                       help="dichromacy to check; repeat for several (default: all three)")
        p.add_argument("--distinct-normal", type=float, help="minimum normal-vision delta-E")
        p.add_argument("--confusable-sim", type=float, help="simulated delta-E below which colours collide")

    check = sub.add_parser("check", help="report colour pairs that collide under dichromacy")
    check.add_argument("--palette", type=Path, help="palette JSON")
    check.add_argument("--css", type=Path, help="stylesheet")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--report", type=Path, help="write the report here instead of stdout")
    add_gates(check)

    adapt = sub.add_parser("adapt", help="recolour conflicting stylesheet colours")
    adapt.add_argument("--css", type=Path, required=True, help="input stylesheet")
    adapt.add_argument("--out", type=Path, required=True, help="rewritten stylesheet")
    adapt.add_argument("--plan", type=Path, help="write the remap plan JSON here")
    adapt.add_argument("--hue-step", type=float, help="degrees per rotation step")
    adapt.add_argument("--max-rotation", type=float, help="largest rotation tried, degrees")
    adapt.add_argument("--max-passes", type=int, help="rescoring passes")
    adapt.add_argument("--opposite-first", action="store_true", default=None,
                       help="try the +180 degree hue before the nearest rotations")
    add_gates(adapt)
    return parser


def _pick(value, default):
    return default if value is None else value


def _require_file(path: Optional[Path]) -> None:
    if path is not None and not path.is_file():
        raise ValidationError([f"Input file not found: {path}"])


def _require_parent(path: Optional[Path]) -> None:
    if path is not None and not path.resolve().parent.is_dir():
        raise ConfigurationError(f"Output directory does not exist: {path.parent}")


def build_config(args: argparse.Namespace, settings: Settings) -> CliConfig:
    """Merge flags over settings and validate paths before any work starts"""
    command = args.command
    try:
        thresholds = ConflictThresholds(
            distinct_normal=_pick(getattr(args, "distinct_normal", None), settings.distinct_normal),
            confusable_sim=_pick(getattr(args, "confusable_sim", None), settings.confusable_sim),
        )
        policy = RemapPolicy(
            hue_step=_pick(getattr(args, "hue_step", None), settings.hue_step),
            max_rotation=_pick(getattr(args, "max_rotation", None), settings.max_rotation),
            max_passes=_pick(getattr(args, "max_passes", None), settings.max_passes),
            opposite_first=_pick(getattr(args, "opposite_first", None), settings.opposite_first),
        )
    except SchemaError as e:
        raise ConfigurationError(f"Invalid option: {e.errors()[0]['loc'][0]}: {e.errors()[0]['msg']}") from e

    if command in ("simulate", "daltonize"):
        if args.input is not None and args.output is None:
            raise ConfigurationError("--output is required with --input")
        workers = _pick(args.workers, settings.image_workers)
        if workers < 1:
            raise ConfigurationError("--workers must be at least 1")
        config = CliConfig(
            subcommand=command,
            kinds=(args.kind,),
            color=args.color,
            input=args.input,
            output=args.output,
            workers=workers,
        )
    elif command == "check":
        if args.palette is None and args.css is None:
            raise ConfigurationError("check needs --palette and/or --css")
        config = CliConfig(
            subcommand=command,
            kinds=Dichromacy.ordered(args.kinds or ALL_KINDS),
            thresholds=thresholds,
            palette=args.palette,
            css=args.css,
            report=args.report,
            format=args.format,
        )
    else:
        config = CliConfig(
            subcommand=command,
            kinds=Dichromacy.ordered(args.kinds or ALL_KINDS),
            thresholds=thresholds,
            policy=policy,
            css=args.css,
            output=args.out,
            plan=args.plan,
        )

    for path in (config.input, config.palette, config.css):
        _require_file(path)
    for path in (config.output, config.report, config.plan):
        _require_parent(path)
    return config


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _transform_command(config: CliConfig, color_fn, image_fn) -> ExitCode:
    kind = config.kinds[0]
    if config.color is not None:
        result = color_fn(parse_color(config.color), kind)
        sys.stdout.write(result.hex + "\n")
        return ExitCode.OK

    img = load_png(config.input)
    save_png(image_fn(img, kind, workers=config.workers), config.output)
    logger.info(f"Wrote {config.output}", extra_data={'kind': kind.value})
    return ExitCode.OK


def cmd_simulate(config: CliConfig) -> ExitCode:
    return _transform_command(config, simulate_color, simulate_image)


def cmd_daltonize(config: CliConfig) -> ExitCode:
    return _transform_command(config, daltonize_color, daltonize_image)


def _scan_css(path: Path):
    source = path.read_bytes()
    scanner = StylesheetScanner(source)
    occurrences = scanner.scan()
    for warning in scanner.warnings:
        logger.warning(f"{path}: byte {warning.offset}: skipped {warning.literal!r} ({warning.message})")
    return source, occurrences


def _merge_tokens(
    merged: Dict[str, ColorToken],
    tokens: Sequence[ColorToken],
    source: Path,
) -> None:
    for token in tokens:
        existing = merged.get(token.id)
        if existing is None:
            merged[token.id] = token
        elif existing.color == token.color:
            merged[token.id] = ColorToken(
                id=token.id,
                color=token.color,
                role=existing.role,
                weight=existing.weight + token.weight,
            )
        else:
            raise ValidationError([
                f"{source}: token id {token.id} is {token.color.hex}, already defined as {existing.color.hex}"
            ])


def cmd_check(config: CliConfig) -> ExitCode:
    merged: Dict[str, ColorToken] = {}
    pairs: List[AdjacencyPair] = []

    if config.palette is not None:
        doc = load_palette(config.palette)
        _merge_tokens(merged, doc.colors, config.palette)
        pairs.extend(palette_edges(doc))

    if config.css is not None:
        _, occurrences = _scan_css(config.css)
        tokens, css_pairs = derive_adjacency(occurrences)
        _merge_tokens(merged, tokens, config.css)
        pairs.extend(css_pairs)

    reports = detect_conflicts(list(merged.values()), pairs, config.kinds, config.thresholds)

    if config.format == "json":
        rendered = conflicts_to_json(reports)
    else:
        rendered = conflicts_to_text(reports, config.kinds)

    if config.report is not None:
        config.report.write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)

    logger.info("Check finished", extra_data={'tokens': len(merged), 'pairs': len(pairs), 'conflicts': len(reports)})
    return ExitCode.FINDINGS if reports else ExitCode.OK


def cmd_adapt(config: CliConfig) -> ExitCode:
    source, occurrences = _scan_css(config.css)
    tokens, pairs = derive_adjacency(occurrences)

    plan = resolve(tokens, pairs, config.kinds, config.thresholds, config.policy)
    config.output.write_bytes(rewrite_stylesheet(source, occurrences, plan))
    if config.plan is not None:
        config.plan.write_text(plan_to_json(plan), encoding="utf-8")

    for line in plan_to_text(plan).splitlines():
        logger.info(line)
    if plan.unresolved:
        logger.warning(f"{len(plan.unresolved)} conflict(s) could not be resolved")
        return ExitCode.PARTIAL
    return ExitCode.OK


COMMANDS: Dict[str, Callable[[CliConfig], ExitCode]] = {
    "simulate": cmd_simulate,
    "daltonize": cmd_daltonize,
    "check": cmd_check,
    "adapt": cmd_adapt,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        settings = get_settings()
        args = parser.parse_args(argv)
    except ConfigurationError as e:
        sys.stderr.write(parser.format_usage())
        sys.stderr.write(f"error: {e}\n")
        return ExitCode.USAGE

    level = settings.log_level
    if args.verbose == 1:
        level = "INFO"
    elif args.verbose >= 2:
        level = "DEBUG"
    setup_logging(log_level=level, json_logs=args.json_logs or settings.json_logs)

    with LogContext(args.command):
        try:
            config = build_config(args, settings)
            return COMMANDS[config.subcommand](config)
        except ConfigurationError as e:
            logger.error(str(e))
            return ExitCode.USAGE
        except CvdError as e:
            logger.error(str(e))
            return ExitCode.DATA
        except OSError as e:
            logger.error(f"I/O error: {e}")
            return ExitCode.DATA


if __name__ == "__main__":
    raise SystemExit(main())
