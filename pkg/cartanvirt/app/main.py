import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from .commands import cmd_curvature, cmd_invariance, cmd_list, cmd_uniqueness, cmd_verify
from .core.config import get_settings
from .core.errors import CartanVirtError
from .models.cli_config import CliConfig

# Load environment variables
load_dotenv()

logger = logging.getLogger("cartanvirt")

COMMANDS: Dict[str, Callable[[CliConfig], int]] = {
    "list": cmd_list,
    "verify": cmd_verify,
    "curvature": cmd_curvature,
    "uniqueness": cmd_uniqueness,
    "invariance": cmd_invariance,
}

HELP = {
    "list": "list the catalog of factor kinds",
    "verify": "run the identity suite on Omega_0 (--space catalog runs every catalog space)",
    "curvature": "sectional curvatures of the coordinate planes, Gauss route against the FD oracle",
    "uniqueness": "recover a random isometry iota from Omega_0 and iota o Omega_0",
    "invariance": "check Omega_0 o dgamma = Omega_0 for supplied isometries",
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--space", dest="space_spec",
                        help="sphere:n, hyperbolic2, hyperbolic:n, sl_so:n, euclidean:r, 'catalog', or a JSON file")
    shared.add_argument("--tol-algebraic", type=float)
    shared.add_argument("--tol-fd", type=float)
    shared.add_argument("--fd-step", type=float)
    shared.add_argument("--samples", type=int)
    shared.add_argument("--seed", type=int)
    shared.add_argument("--format", dest="output_format", choices=["text", "json"], default="text")
    shared.add_argument("--lambda", dest="lambdas", type=float, action="append", default=[],
                        help="metric scaling override, one per factor in order")
    shared.add_argument("--gamma", dest="gammas", action="append", default=[],
                        help="isometry as a JSON matrix, or -I")
    shared.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="cartanvirt",
        description="Symmetric spaces, the canonical virtual immersion and its identities",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[shared], help=HELP[name])
    return parser


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, get_settings().CARTANVIRT_LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Exit codes: 0 pass, 1 an identity failed, 2 usage or configuration error."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        cli = CliConfig(**vars(args))
        configure_logging(cli.verbose)
        return COMMANDS[cli.command](cli)
    except (CartanVirtError, ValidationError) as e:
        logger.debug("Configuration error", exc_info=True)
        print(f"cartanvirt {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
