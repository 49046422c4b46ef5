"""Command-line entry point: ``geoparse``, ``eval`` and ``align-debug``.

Exit status is 0 on success, 1 when some documents failed and 2 for
configuration or input errors (nothing was processed).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from .errors import ConfigError
from .evaluation import GoldFormatError, ScoringError, render_metrics, render_paired_table
from .geotag import GazetteerError
from .pipeline import (
    CONFIG_NAME,
    FORMATS,
    PROVIDERS,
    EvalError,
    Geoparser,
    PipelineConfig,
    align_debug,
    read_config_file,
    run_eval,
    sample_corpus_path,
)
from .providers import ProviderError

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("mtgeoparse")


def _function_words(values: Sequence[str] | None) -> dict[str, str]:
    out = {}
    for item in values or ():
        lang, sep, path = item.partition("=")
        if not sep or not lang or not path:
            raise ConfigError(f"--function-words expects LANG=PATH, got {item!r}")
        out[f"function_words.{lang}"] = path
    return out


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lang", help="source language code (e.g. zh, ar)")
    p.add_argument("--config", type=Path, help="key = value settings file")
    p.add_argument("--provider", choices=PROVIDERS)
    p.add_argument("--fixtures", action="append", help="fixture JSONL file (repeatable)")
    p.add_argument("--gazetteer", help="gazetteer TSV replacing the bundled one")
    p.add_argument("--function-words", action="append", metavar="LANG=PATH")
    p.add_argument("--tagger-command", help="external tagger command (JSON lines on stdin/stdout)")
    p.add_argument("--blocklist", help="comma-separated surfaces never tagged as places")
    p.add_argument("--recover-scope", choices=("sentence", "document"))
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mtgeoparse",
        description="Geoparse non-English text through machine translation and word alignment.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("geoparse", help="geoparse documents (one per file, one segment per line)")
    _common(g)
    g.add_argument("files", nargs="*", default=["-"], help="input files, '-' for stdin")
    g.add_argument("--coords", action="store_true", default=None, help="append gazetteer coordinates")
    g.add_argument("--format", choices=FORMATS)
    g.add_argument("--jobs", type=int)

    e = sub.add_parser("eval", help="score a corpus against gold annotations")
    _common(e)
    e.add_argument("corpus", help="corpus directory, or sample:<lang> for a bundled sample")
    e.add_argument("--gold", help="gold TSV (default: <corpus>/gold.tsv)")
    e.add_argument("--mode", choices=("surface", "overlap"))
    e.add_argument("--side", choices=("source", "english"))
    e.add_argument("--paired", help="compare translation sources, e.g. machine,manual")
    e.add_argument("--per-doc", action="store_true", help="also print per-document counts")
    e.add_argument("--jobs", type=int)

    d = sub.add_parser("align-debug", help="show each alignment stage for one sentence")
    _common(d)
    d.add_argument("sentence")
    return parser


def _settings(args: argparse.Namespace) -> dict:
    values = {
        "lang": args.lang,
        "provider": args.provider,
        "fixtures": args.fixtures,
        "gazetteer": args.gazetteer,
        "tagger_command": args.tagger_command,
        "blocklist": args.blocklist,
        "recover_scope": args.recover_scope,
    }
    for name in ("coords", "format", "jobs", "mode", "side", "gold"):
        values[name] = getattr(args, name, None)
    values.update(_function_words(args.function_words))
    return values


def make_config(args: argparse.Namespace, default_file: Path | None = None) -> PipelineConfig:
    """Defaults, then the settings file, then command-line flags."""
    config = PipelineConfig()
    config_file = args.config or (default_file if default_file and default_file.is_file() else None)
    if config_file is not None:
        if not Path(config_file).is_file():
            raise ConfigError(f"config file {config_file} not found")
        config.merge(read_config_file(config_file))
    return config.merge(_settings(args)).validate()


def _read_inputs(files: Sequence[str]) -> list[tuple[str, str]]:
    docs = []
    for name in files:
        if name == "-":
            docs.append(("stdin", sys.stdin.read()))
            continue
        path = Path(name)
        if not path.is_file():
            raise ConfigError(f"input file {name} not found")
        docs.append((path.stem, path.read_text(encoding="utf-8")))
    return docs


def cmd_geoparse(args: argparse.Namespace) -> int:
    config = make_config(args)
    if not config.lang:
        raise ConfigError("--lang is required")
    docs = _read_inputs(args.files)
    geoparser = Geoparser.from_config(config)
    results = geoparser.geoparse_batch(docs, config.lang, config.jobs)
    out = sys.stdout
    for result in results:
        if config.format == "records":
            out.write(json.dumps(result.to_record(config.coords), ensure_ascii=False) + "\n")
            continue
        if len(results) > 1:
            out.write(f"# {result.doc_id}\n")
        if not result.ok:
            print(f"{result.doc_id}: error: {result.error}", file=sys.stderr)
            continue
        out.write(result.render_lines(config.coords))
        for toponym in result.unresolved:
            print(f"{result.doc_id}: unresolved: {toponym.surface}", file=sys.stderr)
        if args.verbose:
            for diag in result.diagnostics:
                print(f"{result.doc_id}: {diag}", file=sys.stderr)
    return EXIT_PARTIAL if any(not r.ok for r in results) else EXIT_OK


def _corpus_dir(spec: str) -> Path:
    if spec.startswith("sample:"):
        path = sample_corpus_path(spec.split(":", 1)[1])
    else:
        path = Path(spec)
    if not path.is_dir():
        raise ConfigError(f"corpus directory {spec} not found")
    return path


def cmd_eval(args: argparse.Namespace) -> int:
    corpus = _corpus_dir(args.corpus)
    config = make_config(args, corpus / CONFIG_NAME)
    paired = [s.strip() for s in args.paired.split(",")] if args.paired else None
    report = run_eval(corpus, config.gold, config, paired)
    print(f"# lang={report.lang} side={report.side} mode={report.mode}")
    for run in report.runs:
        print(render_metrics(run.metrics, run.label))
        if args.per_doc:
            for doc_id, m in run.per_doc.items():
                tp, fp, fn = m.counts
                print(f"  {doc_id}\t{tp}\t{fp}\t{fn}")
    if report.paired is not None:
        print(render_paired_table({report.lang: report.paired}), end="")
    for failed in report.failures:
        print(f"{failed.doc_id}: error: {failed.error}", file=sys.stderr)
    return EXIT_PARTIAL if report.failures else EXIT_OK


def cmd_align_debug(args: argparse.Namespace) -> int:
    config = make_config(args)
    if not config.lang:
        raise ConfigError("--lang is required")
    geoparser = Geoparser.from_config(config)
    sys.stdout.write(align_debug(args.sentence, config.lang, geoparser))
    return EXIT_OK


COMMANDS = {"geoparse": cmd_geoparse, "eval": cmd_eval, "align-debug": cmd_align_debug}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, GazetteerError, GoldFormatError, ScoringError, EvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProviderError as exc:
        # only reached outside per-document isolation (align-debug)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARTIAL


if __name__ == "__main__":
    sys.exit(main())
