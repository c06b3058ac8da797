"""Command line entry point: ``grammarworks check|schema|parse``."""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from colorama import just_fix_windows_console

from .config import FORMATS, load_config
from .console import Console
from .diagnostics import ConfigError, has_errors
from .export import dumps_model
from .pipeline import check_grammar, compile_grammar, process_model
from .schema_export import export_schema

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="configuration file read over the bundled defaults")
    common.add_argument("--no-color", action="store_true", help="never colour diagnostics")
    common.add_argument("--verbose", action="store_true", help="print progress notes to stderr")

    parser = argparse.ArgumentParser(prog="grammarworks", description="Grammar-based language workbench.")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", parents=[common], help="validate a grammar file")
    check.add_argument("grammar")

    schema = commands.add_parser("schema", parents=[common], help="export the abstract syntax of a grammar")
    schema.add_argument("grammar")
    schema.add_argument("--format", choices=FORMATS, default=None)
    schema.add_argument("--out", metavar="FILE")

    parse = commands.add_parser("parse", parents=[common], help="parse, resolve and export model files")
    parse.add_argument("grammar")
    parse.add_argument("models", nargs="+")
    parse.add_argument("--out", metavar="FILE")
    parse.add_argument("--no-memo", action="store_true", help="disable the packrat memo table")
    parse.add_argument("--workers", type=int, default=None)
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise _UsageError(f"cannot read {path}: {e}") from None


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_check(args, config, console) -> int:
    _, diagnostics = check_grammar(_read(args.grammar), args.grammar)
    console.diagnostics(diagnostics)
    console.note(f"checked {args.grammar}: {len(diagnostics)} diagnostic(s)")
    return EXIT_DIAGNOSTICS if has_errors(diagnostics) else EXIT_OK


def _cmd_schema(args, config, console) -> int:
    workbench, diagnostics = compile_grammar(_read(args.grammar), args.grammar)
    console.diagnostics(diagnostics)
    if workbench is None:
        return EXIT_DIAGNOSTICS
    _write(export_schema(workbench.schema, args.format or config.format, config.indent), args.out)
    return EXIT_OK


def _cmd_parse(args, config, console) -> int:
    grammar_text = _read(args.grammar)
    texts = [(path, _read(path)) for path in args.models]
    workbench, diagnostics = compile_grammar(grammar_text, args.grammar)
    console.diagnostics(diagnostics)
    if workbench is None:
        return EXIT_DIAGNOSTICS

    workers = config.workers if args.workers is None else args.workers
    if workers < 1:
        raise _UsageError(f"--workers must be at least 1, got {workers}")
    memoize = config.memoize and not args.no_memo
    with ThreadPoolExecutor(max_workers=min(workers, len(texts))) as pool:
        results = list(pool.map(lambda item: process_model(workbench, item[1], item[0], memoize), texts))

    failed = has_errors(diagnostics)
    for result in results:
        console.diagnostics(result.diagnostics)
        failed = failed or not result.ok
    console.note(f"parsed {len(results)} model file(s)")

    if len(results) == 1:
        if results[0].document is not None:
            _write(dumps_model(results[0].document, config.indent), args.out)
    else:
        documents = [r.document for r in results]
        _write(json.dumps(documents, indent=config.indent, ensure_ascii=False) + "\n", args.out)
    return EXIT_DIAGNOSTICS if failed else EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "schema": _cmd_schema,
    "parse": _cmd_parse,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    console = Console(color="never" if args.no_color else "auto", verbose=args.verbose)
    try:
        config = load_config(args.config)
    except ConfigError as e:
        console.error(e.message)
        return EXIT_USAGE
    if not args.no_color:
        console.color = config.color
    try:
        return _COMMANDS[args.command](args, config, console)
    except _UsageError as e:
        console.error(str(e))
        return EXIT_USAGE


def main() -> None:
    just_fix_windows_console()
    sys.exit(run())
