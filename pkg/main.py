"""Command-line entry point: ``python main.py {synth,train,gradcheck,eval} [flags]``.

Exit codes: 0 success, 1 I/O failure, 2 configuration or input error,
3 numerical failure, 4 gradient check failure, 5 artifact mismatch.
"""

import argparse
import logging
import sys
from typing import List, Optional

from app.commands import EVALUATIONS, cmd_eval, cmd_gradcheck, cmd_synth, cmd_train
from app.config import GRADCHECK, LOG_LEVEL, PRESETS
from app.errors import ImaginetError
from app.io.run_config_io import load_run_config
from app.models.grad_check_settings import GradCheckSettings
from app.models.run_config import RunConfig

# (flag, type, help) for every RunConfig field settable from the command line
RUN_FLAGS = [
    ("--variant", str, "visual, textual, multitask or linreg"),
    ("--alpha", float, "override the variant's textual loss weight"),
    ("--embedding-dim", int, "word embedding size"),
    ("--hidden-dim", int, "GRU state size of each pathway"),
    ("--K", int, "image feature dimension"),
    ("--epochs", int, "passes over the training captions"),
    ("--batch-size", int, "captions per Adam step"),
    ("--lr", float, "Adam step size"),
    ("--seed", int, "seed for generation, initialisation and shuffling"),
    ("--min-count", int, "vocabulary frequency threshold"),
    ("--max-grad-norm", float, "global gradient norm clip (off when unset)"),
    ("--ridge-lambda", float, "ridge penalty for linreg (grid search when unset)"),
    ("--eval-seed", int, "seed for scrambled evaluation queries"),
    ("--workers", int, "evaluation threads"),
    ("--captions", str, "training captions (JSON Lines)"),
    ("--val-captions", str, "held-out captions (JSON Lines)"),
    ("--features", str, "image features (IMGF)"),
    ("--labels", str, "image labels (TSV)"),
    ("--benchmark", str, "word similarity benchmark (TSV)"),
    ("--checkpoint", str, "model checkpoint"),
    ("--vocab", str, "vocabulary file written by train"),
    ("--report", str, "evaluation report (TSV, appended)"),
    ("--loss-log", str, "per-epoch loss curve (TSV)"),
    ("--n-scenes", int, "synthetic images"),
    ("--n-objects", int, "synthetic object nouns"),
    ("--n-attributes", int, "synthetic attribute adjectives"),
    ("--noise-sigma", float, "synthetic feature noise"),
    ("--order-signal-strength", float, "weight of the background object in synthetic features"),
    ("--captions-per-scene", int, "synthetic paraphrases per image"),
    ("--validation-fraction", float, "share of synthetic scenes held out"),
]
# gradcheck sizes; a preset, config file or flag still overrides them
GRADCHECK_DIMS = {
    "embedding_dim": GRADCHECK["EMBEDDING_DIM"],
    "hidden_dim": GRADCHECK["HIDDEN_DIM"],
    "K": GRADCHECK["K"],
}
RUN_SWITCHES = [
    ("--hold-period", "keep a final period in place when scrambling"),
    ("--end-in-word-projection", "append END to one-word sentences"),
]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value run configuration file")
    common.add_argument("--preset", choices=sorted(PRESETS), help="named size preset")
    common.add_argument("--log-level", default=None, help=f"logging level (default {LOG_LEVEL})")
    for flag, kind, text in RUN_FLAGS:
        common.add_argument(flag, type=kind, default=None, help=text)
    for flag, text in RUN_SWITCHES:
        common.add_argument(flag, action="store_true", default=None, help=text)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="imaginet", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("synth", parents=[common], help="generate a synthetic corpus")
    commands.add_parser("train", parents=[common], help="train a model or the ridge baseline")

    gradcheck = commands.add_parser("gradcheck", parents=[common], help="finite-difference gradient check")
    gradcheck.add_argument("--vocab-size", type=int, default=GRADCHECK["VOCAB_SIZE"])
    gradcheck.add_argument("--sentence-len", type=int, default=GRADCHECK["SENTENCE_LEN"])
    gradcheck.add_argument("--instances", type=int, default=GRADCHECK["INSTANCES"])
    gradcheck.add_argument("--epsilon", type=float, default=GRADCHECK["EPSILON"])
    gradcheck.add_argument("--tolerance", type=float, default=GRADCHECK["TOLERANCE"])
    gradcheck.add_argument("--corrupt", default=None, help=argparse.SUPPRESS)

    evaluate = commands.add_parser("eval", parents=[common], help="run an evaluation protocol")
    evaluate.add_argument("--which", choices=EVALUATIONS, required=True)
    evaluate.add_argument("--condition", choices=("original", "scrambled"), default="original")
    evaluate.add_argument("--compare-checkpoint", default=None, help="second model for --which pairs")
    evaluate.add_argument("--compare-vocab", default=None, help="vocabulary of the second model")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Layer config.json defaults, preset, config file and flags."""
    names = set(RunConfig.field_names())
    flags = {name: value for name, value in vars(args).items() if name in names}
    flags["preset"] = args.preset
    file_values = load_run_config(args.config) if args.config else None
    base = GRADCHECK_DIMS if args.command == "gradcheck" else None
    return RunConfig.resolve(flags, file_values, base=base)


def run(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if args.command == "synth":
        cmd_synth(cfg)
    elif args.command == "train":
        cmd_train(cfg)
    elif args.command == "gradcheck":
        settings = GradCheckSettings(
            vocab_size=args.vocab_size,
            sentence_len=args.sentence_len,
            instances=args.instances,
            epsilon=args.epsilon,
            tolerance=args.tolerance,
            corrupt=args.corrupt,
        )
        cmd_gradcheck(cfg, settings)
    else:
        cmd_eval(cfg, args.which, args.condition, args.compare_checkpoint, args.compare_vocab)
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    level = (args.log_level or LOG_LEVEL).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO))
    try:
        return run(args)
    except ImaginetError as e:
        logging.error("%s: %s", type(e).__name__, e)
        logging.debug("details", exc_info=True)
        return e.exit_code
    except OSError as e:
        logging.error("I/O error: %s", e)
        logging.debug("details", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
