import argparse
import logging
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from ytri.decompose import decompose_dispatch
from ytri.errors import InternalContradiction, NotDecomposable, YtriError
from ytri.inject import InjectiveCertified, NotInjective, check_injectivity
from ytri.inverse import evaluate_inverse, invert_report, verify_inverse
from ytri.mapalg import classify, eval_map
from ytri.parsing import parse_map, parse_point
from ytri.reports import (
    FORMATS,
    Report,
    classification_payload,
    decomposition_payload,
    error_payload,
    eval_payload,
    inverse_payload,
    render,
    verdict_payload,
    verification_payload,
)
from ytri.settings import Settings, resolve_settings

logger = logging.getLogger(__name__)

COMMANDS = (
    "classify",
    "decompose",
    "invert",
    "check-injectivity",
    "eval",
    "verify-chain",
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONCLUSIVE = 2
EXIT_INTERNAL_ERROR = 3


@dataclass(frozen=True)
class RunOptions:
    at: Optional[Tuple[Fraction, Fraction]] = None
    budget: int = 10_000
    seed: int = 0
    tolerance_bits: int = 40
    refine_rounds: int = 64
    assume_nonsingular: bool = False

    @classmethod
    def from_settings(cls, settings: Settings, **overrides) -> "RunOptions":
        values = dict(
            budget=settings.falsify_budget,
            seed=settings.falsify_seed,
            tolerance_bits=settings.tolerance_bits,
            refine_rounds=settings.refine_rounds,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def _execute(command: str, text: str, options: RunOptions) -> Report:
    F = parse_map(text)
    report = Report(command=command, input=str(F))

    if command == "classify":
        report.result = classification_payload(classify(F))
    elif command == "decompose":
        report.result = decomposition_payload(decompose_dispatch(F))
    elif command == "verify-chain":
        decomposition = decompose_dispatch(F)
        recomposed = decomposition.recompose()
        certified = decomposition.chain.all_certified()
        inverse = invert_report(decomposition, options.tolerance_bits)
        check = verify_inverse(F, inverse, options.tolerance_bits)
        payload = decomposition_payload(decomposition)
        payload.inverse_check = verification_payload(check)
        report.result = payload
        if not (recomposed.same_components(F) and certified and check.ok):
            report.exit_code = EXIT_INCONCLUSIVE
    elif command == "invert":
        decomposition = decompose_dispatch(F)
        inverse = invert_report(decomposition, options.tolerance_bits)
        check = verify_inverse(F, inverse, options.tolerance_bits)
        value = None
        if options.at is not None:
            value = evaluate_inverse(inverse, options.at)
        report.result = inverse_payload(inverse, check, options.at, value)
        if not check.ok:
            report.exit_code = EXIT_INCONCLUSIVE
    elif command == "check-injectivity":
        verdict = check_injectivity(
            F,
            budget=options.budget,
            seed=options.seed,
            assume_nonsingular=options.assume_nonsingular,
            max_rounds=options.refine_rounds,
        )
        report.result = verdict_payload(verdict)
        if not isinstance(verdict.status, (InjectiveCertified, NotInjective)):
            report.exit_code = EXIT_INCONCLUSIVE
    elif command == "eval":
        if options.at is None:
            raise YtriError("eval needs --at u,v")
        report.result = eval_payload(options.at, eval_map(F, options.at))
    else:
        raise YtriError(f"unknown command {command!r}")
    return report


def _failure(command: str, text: str, exit_code: int, exc: YtriError) -> Report:
    return Report(
        command=command, input=text, exit_code=exit_code, error=error_payload(exc)
    )


def run_command(
    command: str, text: str, options: Optional[RunOptions] = None
) -> Report:
    options = options or RunOptions()
    started = time.perf_counter()
    try:
        report = _execute(command, text, options)
    except NotDecomposable as exc:
        report = _failure(command, text, EXIT_INCONCLUSIVE, exc)
    except InternalContradiction as exc:
        logger.error("internal contradiction: %s", exc.message)
        report = _failure(command, text, EXIT_INTERNAL_ERROR, exc)
    except YtriError as exc:
        report = _failure(command, text, EXIT_INPUT_ERROR, exc)
    report.timing_ms = round((time.perf_counter() - started) * 1000, 3)
    logger.info("%s finished with exit code %d", command, report.exit_code)
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ytri",
        description="Decompose and certify planar maps polynomial in y.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS)
    parser.add_argument(
        "map", nargs="?", help='Map text, e.g. "x^2 ; x^2*y on (0, inf)".'
    )
    parser.add_argument(
        "--at", help="Point u,v for eval, or an image point for invert."
    )
    parser.add_argument("--budget", type=int, help="Falsifier sample count.")
    parser.add_argument("--seed", type=int, help="Falsifier seed.")
    parser.add_argument(
        "--tolerance-bits", type=int, help="Bisection tolerance 2^-k for inverses."
    )
    parser.add_argument("--format", choices=FORMATS, default="text")
    parser.add_argument(
        "--assume-nonsingular",
        action="store_true",
        help="Treat the map as non-singular when that cannot be certified.",
    )
    parser.add_argument("--log-level", help="Overrides YTRI_LOG_LEVEL.")
    parser.add_argument(
        "--fixtures",
        action="store_true",
        help="Regenerate the regression fixture corpus and exit.",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings()
    except RuntimeError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    if args.fixtures:
        from ytri.fixtures import regenerate

        written = regenerate(settings.seeds_path, settings.fixtures_dir, settings)
        print(f"Wrote {len(written)} fixtures to {settings.fixtures_dir}.")
        return EXIT_OK

    if not args.command or not args.map:
        print("a command and a map are required", file=sys.stderr)
        return EXIT_INPUT_ERROR

    try:
        at = parse_point(args.at) if args.at else None
    except YtriError as exc:
        print(exc.message, file=sys.stderr)
        return EXIT_INPUT_ERROR
    options = RunOptions.from_settings(
        settings,
        at=at,
        budget=args.budget,
        seed=args.seed,
        tolerance_bits=args.tolerance_bits,
        assume_nonsingular=args.assume_nonsingular,
    )
    report = run_command(args.command, args.map, options)
    sys.stdout.write(render(report, args.format))
    return report.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
