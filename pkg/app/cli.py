"""Command-line entry point: ``qsl <command> [flags]``."""

import argparse
import logging
import sys
from typing import Optional, Sequence

from app.config import get_settings
from app.domain.casestudies import CASE_STUDIES
from app.models.enums import OutputFormat
from app.models.schemas import CommandRequest, DomainOverrides
from app.services.commands import execute_command, render


def _add_domain_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("bounded model")
    g.add_argument("--config", dest="config_file", help="key=value domain config file")
    g.add_argument("--vars", help="comma-separated program variables")
    g.add_argument("--vmin", type=int)
    g.add_argument("--vmax", type=int)
    g.add_argument("--addrs", type=int, help="addresses are 1..ADDRS")
    g.add_argument("--max-cells", type=int, help="heap size bound of enumerated states")
    g.add_argument("--loop-max-iters", type=int)
    g.add_argument("--loop-tol", help="loop tolerance as a rational, e.g. 1/1000000")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    p.add_argument("--verbose", "-v", action="store_true", help="debug logging for app.domain")
    _add_domain_flags(p)


def _add_program(p: argparse.ArgumentParser, post: bool = True) -> None:
    p.add_argument("--prog", dest="program", help="program file or bundled program name")
    p.add_argument("--prog-text", dest="program_text", help="inline program source")
    if post:
        p.add_argument("--post", help="postexpectation")
    p.add_argument("--state", dest="states", action="append", default=[],
                   help="state literal 'x=1,y=0; heap=1:7', repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsl", description="Quantitative separation logic workbench")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("eval", help="evaluate an expectation")
    p.add_argument("--expr", required=True)
    p.add_argument("--state", dest="states", action="append", default=[])
    _add_common(p)

    p = sub.add_parser("wp", help="weakest preexpectation in any of the eight modes")
    _add_program(p)
    p.add_argument("--mode", default="wp")
    p.add_argument("--literal-heap-rules", action="store_true")
    _add_common(p)

    p = sub.add_parser("oracle", help="expected reward of the operational MDP")
    _add_program(p)
    p.add_argument("--direction", choices=["min", "max"], default="min")
    p.add_argument("--tol")
    p.add_argument("--export", metavar="FILE", help="write the reachable fragment and its value table as JSON")
    _add_common(p)

    p = sub.add_parser("check-soundness", help="wp against the expected-reward oracle")
    _add_program(p)
    p.add_argument("--tol")
    _add_common(p)

    p = sub.add_parser("check-invariant", help="upper or lower loop invariant")
    _add_program(p)
    p.add_argument("--inv", required=True)
    p.add_argument("--direction", choices=["upper", "lower"], default="upper")
    p.add_argument("--mode", default="wp")
    _add_common(p)

    p = sub.add_parser("check-frame", help="quantitative frame rule or its converse")
    _add_program(p)
    p.add_argument("--frame", required=True)
    p.add_argument("--direction", choices=["sub", "super"], default="sub")
    p.add_argument("--mode", default="wp")
    _add_common(p)

    p = sub.add_parser("check-duality", help="the four duality equations")
    _add_program(p)
    _add_common(p)

    p = sub.add_parser("check-conservativity", help="QSL verdict against the SL triple checker")
    _add_program(p)
    p.add_argument("--pre", required=True)
    _add_common(p)

    p = sub.add_parser("laws", help="run the randomized law suite")
    p.add_argument("--laws", help="comma-separated globs over law ids, e.g. 'sepcon.*'")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--broken-sepcon", action="store_true", help="evaluate ⋆ with min (harness self-test)")
    _add_common(p)

    p = sub.add_parser("casestudy", help="reproduce a bounded case study")
    p.add_argument("casestudy", choices=sorted(CASE_STUDIES))
    p.add_argument("--size", "--n", "--len", dest="size", type=int,
                   help="n, list length or address count depending on the study")
    p.add_argument("--p", help="failure probability of the gc study")
    p.add_argument("--output", choices=[f.value for f in OutputFormat], default=OutputFormat.TEXT.value)
    p.add_argument("--verbose", "-v", action="store_true")

    return parser


def to_request(args: argparse.Namespace) -> CommandRequest:
    values = vars(args)
    domain = DomainOverrides(
        vars=values.get("vars"),
        vmin=values.get("vmin"),
        vmax=values.get("vmax"),
        addrs=values.get("addrs"),
        loop_max_iters=values.get("loop_max_iters"),
        loop_tol=values.get("loop_tol"),
    )
    fields = set(CommandRequest.model_fields) - {"domain", "command"}
    return CommandRequest(
        command=args.command,
        domain=domain,
        **{k: v for k, v in values.items() if k in fields and v is not None},
    )


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=getattr(logging, get_settings().log_level.upper(), logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if verbose:
        logging.getLogger("app.domain").setLevel(logging.DEBUG)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad flags, matching the input-error code
        return int(e.code or 0)
    _configure_logging(args.verbose)
    req = to_request(args)
    report = execute_command(req)
    print(render(report, req.output))
    return int(report.exit_code)


if __name__ == "__main__":
    sys.exit(main())
