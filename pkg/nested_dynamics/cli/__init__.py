"""
Command line entry point:

    nested-dynamics simulate --config commuting_nrd --out runs/
    nested-dynamics verify --config good_rps_nrd --jobs 4
    nested-dynamics convert --rates 0.25,0.75
    nested-dynamics classify --config commuting_nrd --point car

The log level is read from the NESTED_DYNAMICS_LOG environment variable.
"""
import argparse
import logging
import os
import sys
from ..common import (NestedDynamicsError, ConfigError, InvalidProfile, InvalidTree,
                      InvalidClass, BoundaryState)
from .config import load_config, list_presets
from .commands import (cmd_simulate, cmd_verify, cmd_convert, cmd_classify,
                       EXIT_CONFIG, EXIT_RUNTIME)

logger = logging.getLogger(__name__)

# problems with the command line, the configuration or a given point; any
# other NestedDynamicsError is a runtime failure
USAGE_ERRORS = (ConfigError, InvalidProfile, InvalidTree, InvalidClass, BoundaryState)

def setup_logging(log_level_str):
    log_level_map = {
        'DEBUG': logging.DEBUG,
        'INFO': logging.INFO,
        'WARNING': logging.WARNING,
        'ERROR': logging.ERROR,
        'CRITICAL': logging.CRITICAL
    }
    log_level = log_level_map.get(log_level_str.upper(), logging.INFO)

    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(levelname)s - %(name)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr
    )

def make_parser():
    parser = argparse.ArgumentParser(
        prog="nested-dynamics",
        description="Population game dynamics on nested similarity structures.",
        epilog="Bundled presets: {}.".format(", ".join(list_presets()))
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", required=True,
                       help="A JSON experiment file or the name of a bundled preset.")
        p.add_argument("--seed", type=int, default=None,
                       help="Overrides the seed of the configuration.")
        return p

    simulate = with_config(sub.add_parser("simulate", help="Integrate and write a CSV trajectory."))
    simulate.add_argument("--out", default=".", help="The output directory.")
    simulate.add_argument("--show-times", action="store_true",
                          help="Log the wall-clock time of every sampling interval.")

    verify = with_config(sub.add_parser("verify", help="Run the invariant suite."))
    verify.add_argument("--out", default=".", help="The output directory.")
    verify.add_argument("--jobs", type=int, default=1, help="Worker threads for the checks.")

    conv = sub.add_parser("convert", help="Convert between parameter profiles.")
    source = conv.add_mutually_exclusive_group(required=True)
    source.add_argument("--rates", help="Comma-separated revision rates.")
    source.add_argument("--temps", help="Comma-separated temperatures.")

    classify = with_config(sub.add_parser("classify", help="Classify a point of the game."))
    classify.add_argument("--point", default=None,
                          help="Comma-separated shares or an action label (all vertices if omitted).")
    classify.add_argument("--tol", type=float, default=1e-9)

    return parser

def run(args):
    if args.command == "convert":
        return cmd_convert(rates=args.rates, temps=args.temps)

    config = load_config(args.config)

    if args.command == "simulate":
        return cmd_simulate(config, out_dir=args.out, seed=args.seed,
                            show_times=args.show_times)
    elif args.command == "verify":
        return cmd_verify(config, out_dir=args.out, seed=args.seed, jobs=args.jobs)
    else:
        return cmd_classify(config, point=args.point, tol=args.tol)

def main(argv=None):
    setup_logging(os.environ.get("NESTED_DYNAMICS_LOG", "INFO"))
    args = make_parser().parse_args(argv)

    try:
        return run(args)
    except USAGE_ERRORS as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_CONFIG
    except NestedDynamicsError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_RUNTIME
    except ValueError as e:
        # malformed input that did not surface as a ConfigError
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_CONFIG
