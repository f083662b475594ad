"""
Shield command-line entry point.

Subcommands follow the experiment lifecycle:

    shield gen-corpus
    shield train {detector,attack,defense,shield}
    shield eval {baseline,attack,defense,correlation}
    shield export {spectrogram,embeddings}

Exit codes: 0 success, 1 configuration error, 2 missing dependency,
3 internal invariant violation.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import torch
from dotenv import load_dotenv

from shield import __version__
from shield.cli.commands import (
    EXPORT_KINDS,
    TRAIN_STAGES,
    cmd_eval,
    cmd_export,
    cmd_gen_corpus,
    cmd_train,
)
from shield.exceptions import ShieldError
from shield.models.attack import DiscriminatorLossForm
from shield.models.clip import GenId
from shield.models.report import DefenseSetting, EvalGrid
from shield.models.run_config import RunConfig
from shield.utils.logging import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INTERNAL = 3


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="Run configuration JSON file")
    parser.add_argument("--seed", type=int, help="Global seed")
    parser.add_argument("--out", type=Path, dest="out_dir", help="Output directory")
    parser.add_argument("--jobs", type=int, help="Worker threads for grid cells")
    gen_ids = [g.value for g in GenId]
    parser.add_argument("--gen", choices=gen_ids, help="Restrict to one generator")
    parser.add_argument("--attack-gen", choices=gen_ids, help="Attack generator")
    parser.add_argument("--defense-gen", choices=gen_ids, help="Defense generator")
    parser.add_argument(
        "--settings",
        choices=[s.value for s in DefenseSetting],
        help="Defense grid cells to evaluate",
    )
    parser.add_argument(
        "--include-plain-fakes",
        action="store_true",
        default=None,
        help="Pair unattacked fakes as attacked during SHIELD training",
    )
    parser.add_argument(
        "--d-loss-form",
        choices=[f.value for f in DiscriminatorLossForm],
        help="Discriminator objective",
    )
    parser.add_argument(
        "--allow-mixed",
        action="store_true",
        default=None,
        help="Accept checkpoints written under another config hash",
    )
    parser.add_argument(
        "--progress", action="store_true", default=None, help="Show progress bars"
    )
    parser.add_argument("--verbose", action="store_true", help="Debug logging")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shield",
        description="Generative anti-forensic attacks and the SHIELD defense.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-corpus", help="Write the synthetic corpus")
    _add_common_flags(gen)

    train = sub.add_parser("train", help="Train one stage")
    train.add_argument("stage", choices=TRAIN_STAGES)
    _add_common_flags(train)

    evaluate = sub.add_parser("eval", help="Run one evaluation grid")
    evaluate.add_argument("grid", choices=[g.value for g in EvalGrid])
    _add_common_flags(evaluate)

    export = sub.add_parser("export", help="Export spectrograms or embeddings")
    export.add_argument("kind", choices=EXPORT_KINDS)
    _add_common_flags(export)
    return parser


def config_from_args(
    args: argparse.Namespace, environ: Optional[dict] = None
) -> RunConfig:
    """Effective configuration: flags over environment over file over defaults."""
    overrides = {
        "seed": args.seed,
        "out_dir": args.out_dir,
        "jobs": args.jobs,
        "gen": args.gen,
        "attack_gen": args.attack_gen,
        "defense_gen": args.defense_gen,
        "settings": args.settings,
        "include_plain_fakes": args.include_plain_fakes,
        "d_loss_form": args.d_loss_form,
        "allow_mixed": args.allow_mixed,
        "progress": args.progress,
    }
    return RunConfig.load(args.config, overrides, environ)


def run(args: argparse.Namespace, environ: Optional[dict] = None) -> dict:
    """Validate the configuration, then dispatch to the command handler."""
    cfg = config_from_args(args, environ)
    if args.command == "gen-corpus":
        return cmd_gen_corpus(cfg)
    if args.command == "train":
        return cmd_train(args.stage, cfg)
    if args.command == "eval":
        return cmd_eval(args.grid, cfg)
    return cmd_export(args.kind, cfg)


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    setup_logging("shield", logging.DEBUG if args.verbose else logging.INFO)
    torch.use_deterministic_algorithms(True)

    try:
        result = run(args)
    except ShieldError as e:
        logger.error(
            "Command failed",
            extra={"json_fields": {"command": args.command, "error": str(e)}},
        )
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:
        logger.exception("Unexpected failure")
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL

    logger.info(
        "Command finished", extra={"json_fields": {"command": args.command, **result}}
    )
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
