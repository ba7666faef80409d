import sys

from cellsurvey.cli import build_parser, print_usage_examples, validate_args
from cellsurvey.commands import run_command
from cellsurvey.core.errors import CellSurveyError
from cellsurvey.core.logging import get_logger

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    if len(argv) == 1 and argv[0] in ["examples", "--examples"]:
        print_usage_examples()
        return EXIT_OK

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse has already printed usage or help
        return EXIT_USAGE if exc.code else EXIT_OK

    valid, error_msg = validate_args(args)
    if not valid:
        parser.print_usage(sys.stderr)
        print(f"Error: {error_msg}", file=sys.stderr)
        return EXIT_USAGE

    log = get_logger(args.verbose)

    try:
        return run_command(args, log)
    except (CellSurveyError, OSError) as e:
        log.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE
    except KeyboardInterrupt:
        log.info("Interrupted by user")
        return EXIT_FAILURE
    except Exception as e:
        log.error(f"{args.command} failed: {e}")
        if args.verbose >= 2:
            import traceback
            traceback.print_exc()
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
