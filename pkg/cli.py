"""
Command-line entry point

    python cli.py analyze prog.mini --post "xs.size() = n" --mock-oracle script.json
    python cli.py slices prog.mini --emit-slices out/
    python cli.py bench manifest.json --mock-oracle script.json
    python cli.py serve-mock script.json --port 5005

Exit codes: 0 for a completed run whatever the verdict, 1 for analysis
errors, 2 for usage errors, 3 for unparseable input, 4 for oracle
misconfiguration.
"""

import sys
from typing import List, Optional

import click

from api.validators import parse_identifier_list, validate_analysis_options
from config.settings import settings
from controllers.analysis_controller import AnalysisController
from services.orchestrator import AnalysisLimits
from utils.exceptions import ConfigurationError, SymExeException
from utils.logger import get_logger, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _limits(max_partitions: Optional[int], parallel: int, exhaustive: bool, no_context: bool,
            tokenizer: Optional[str], function: Optional[str], best_of: Optional[int] = None) -> AnalysisLimits:
    is_valid, errors = validate_analysis_options(max_partitions, parallel, best_of, function)
    if not is_valid:
        raise click.UsageError("; ".join(errors))
    return AnalysisLimits(
        max_partitions=max_partitions or settings.MAX_PARTITIONS,
        parallel=parallel,
        exhaustive=exhaustive,
        include_context=not no_context,
        tokenizer=tokenizer,
        function=function,
    )


def _post_vars(text: Optional[str]) -> Optional[List[str]]:
    if text is None:
        return None
    is_valid, names, errors = parse_identifier_list(text)
    if not is_valid:
        raise click.UsageError("; ".join(errors))
    return names


def _slice_options(func):
    """Options shared by analyze and slices"""
    options = [
        click.option("--lang", "language", default=None, help="Language tag (inferred from the extension)"),
        click.option("--pre", default=None, help="Pre-condition, conjoined with in-file PRE markers"),
        click.option("--post", default=None, help="Post-condition, replaces an in-file POST marker"),
        click.option("--post-vars", default=None, help="Comma-separated slicing criterion"),
        click.option("--function", default=None, help="Function to analyse"),
        click.option("--max-partitions", type=int, default=None, help="Partition cap"),
        click.option("--tokenizer", type=click.Choice(["default", "tiktoken"]), default=None),
        click.option("--no-context", is_flag=True, default=False, help="Do not prepend outside declarations"),
        click.option("--emit-cfg", type=click.Path(dir_okay=False), default=None, help="Write the CFG as GraphML"),
        click.option("--emit-partitions", type=click.Path(dir_okay=False), default=None,
                     help="Write partitions as JSON"),
        click.option("--emit-slices", type=click.Path(file_okay=False), default=None,
                     help="Write slice_<n>.txt/.json into a directory"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _oracle_options(func):
    options = [
        click.option("--endpoint", default=None, help="Chat-completions URL (LLM_ENDPOINT)"),
        click.option("--model", default=None, help="Model name (LLM_MODEL)"),
        click.option("--mock-oracle", "mock_script", type=click.Path(exists=True, dir_okay=False), default=None,
                     help="Answer from a fingerprint script instead of a model"),
        click.option("--parallel", type=int, default=1, show_default=True, help="Queries in flight at once"),
        click.option("--best-of", type=int, default=None, help="Samples per query, majority wins"),
        click.option("--exhaustive", is_flag=True, default=False, help="Query every slice"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
              default=None, help="Console log level (LOG_LEVEL)")
@click.pass_context
def cli(ctx, log_level):
    """Slice-and-ask symbolic execution: decide {pre} unit {post} one slice at a time."""
    is_valid, errors = settings.validate()
    if not is_valid:
        raise ConfigurationError("settings", "; ".join(errors))
    if log_level:
        setup_logging(log_level=log_level, log_file=settings.LOG_FILE, error_log_file=settings.ERROR_LOG_FILE)
    ctx.obj = AnalysisController()


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_slice_options
@_oracle_options
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None, help="Write the JSON report")
@click.pass_obj
def analyze(controller: AnalysisController, file, language, pre, post, post_vars, function, max_partitions,
            tokenizer, no_context, emit_cfg, emit_partitions, emit_slices, endpoint, model, mock_script,
            parallel, best_of, exhaustive, report_path):
    """Analyse FILE and print the verdict."""
    limits = _limits(max_partitions, parallel, exhaustive, no_context, tokenizer, function, best_of)
    variables = _post_vars(post_vars)
    oracle, echo = controller.build_oracle(endpoint, model, mock_script, parallel, best_of)
    report = controller.analyze_file(
        file, oracle, limits,
        language=language, pre=pre, post=post, post_vars=variables, config_echo=echo,
        report_path=report_path, emit_cfg=emit_cfg, emit_partitions=emit_partitions, emit_slices=emit_slices,
    )
    click.echo(controller.format_report(report))
    if report_path:
        click.echo(f"Report saved to {report_path}")
    return EXIT_OK


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@_slice_options
@click.pass_obj
def slices(controller: AnalysisController, file, language, pre, post, post_vars, function, max_partitions,
           tokenizer, no_context, emit_cfg, emit_partitions, emit_slices):
    """Build the slices of FILE in query order without asking an oracle."""
    limits = _limits(max_partitions, 1, False, no_context, tokenizer, function)
    batch = controller.slices_for_file(
        file, limits,
        language=language, pre=pre, post=post, post_vars=_post_vars(post_vars),
        emit_cfg=emit_cfg, emit_partitions=emit_partitions, emit_slices=emit_slices,
    )
    click.echo(f"{len(batch.jobs)} slice(s) from {len(batch.partitions)} partition(s); "
               f"original region {batch.original_tokens} token(s)")
    for n, job in enumerate(batch.jobs):
        rendered = job.rendered
        click.echo(f"slice_{n}: partition {rendered.partition_index}, {rendered.stmt_count} statement(s), "
                   f"{rendered.token_count} token(s) [{rendered.tokenizer}] {rendered.fingerprint[:12]}")
    return EXIT_OK


@cli.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@_oracle_options
@click.option("--max-partitions", type=int, default=None, help="Partition cap")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write the bench rows as JSON")
@click.pass_obj
def bench(controller: AnalysisController, manifest, endpoint, model, mock_script, parallel, best_of, exhaustive,
          max_partitions, output):
    """Analyse every MANIFEST entry and print the accuracy table."""
    limits = _limits(max_partitions, parallel, exhaustive, False, None, None, best_of)
    result = controller.run_bench(manifest, limits, endpoint, model, mock_script, best_of, output)
    click.echo(controller.format_bench(result))
    return EXIT_OK


@cli.command("serve-mock")
@click.argument("script", type=click.Path(exists=True, dir_okay=False))
@click.option("--host", default=None, help="Bind address (MOCK_SERVER_HOST)")
@click.option("--port", type=int, default=None, help="Port (MOCK_SERVER_PORT)")
def serve_mock(script, host, port):
    """Serve SCRIPT as a chat-completions endpoint."""
    from app import create_app

    app = create_app(script)
    host = host or settings.MOCK_SERVER_HOST
    port = port or settings.MOCK_SERVER_PORT
    click.echo(f"Scripted oracle listening on http://{host}:{port}/v1/chat/completions")
    app.run(host=host, port=port, debug=False, use_reloader=False)
    return EXIT_OK


def cli_main(argv: Optional[List[str]] = None) -> int:
    """
    Run the command line and return its exit code

    Args:
        argv: Arguments without the program name (sys.argv[1:] when None)
    """
    try:
        result = cli.main(args=argv, prog_name="symexe", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_ERROR
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except SymExeException as e:
        logger.debug(f"{type(e).__name__}: {e.details}")
        click.echo(f"Error: {e.message}", err=True)
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        click.echo(f"Error: {e}", err=True)
        return EXIT_ERROR
    return result if isinstance(result, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(cli_main())
