"""Command line entry point: ``wikilead <subcommand> ...``.

Option values resolve as: command-line flag, then ``WIKILEAD_<NAME>``
environment variable, then ``--config`` JSON file, then built-in default.
Exit status is 0 on success, 1 on usage errors and 2 on data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from itertools import islice
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from wikilead import __version__
from wikilead.adapter import AbstractiveConfig, AdapterError, run_abstractive
from wikilead.corpus import (
    DataError,
    DatasetExample,
    dump_line,
    read_corpus,
    read_examples,
    read_wiki,
    write_examples,
)
from wikilead.dataset import FilterConfig, build_dataset, compute_stats, format_stats, split_dataset
from wikilead.evaluation import (
    DEFAULT_L_VALUES,
    experiment_to_json,
    format_experiment,
    format_sweep,
    l_sweep,
    mean_report,
    run_experiment1,
)
from wikilead.extractive import EXTRACTORS, run_extractor, strip_assembled
from wikilead.rouge import score_pair

logger = logging.getLogger("wikilead")

ENV_PREFIX = "WIKILEAD_"
SUBCOMMANDS = ("build-dataset", "stats", "extract", "rouge", "experiment", "sweep-l", "abstractive-run")
BATCH_PER_JOB = 64


class UsageError(Exception):
    pass


@dataclass
class PipelineConfig:
    filters: FilterConfig = field(default_factory=FilterConfig)
    L: int = 5
    seed: int = 0
    n_resamples: int = 1000
    percentiles: Tuple[float, float] = (2.5, 97.5)
    target_words: int = 100
    abstractive: AbstractiveConfig = field(default_factory=AbstractiveConfig)
    jobs: int = 1


# flat option name -> (section, field, type)
_OPTIONS = {
    "max_docs": ("filters", "max_docs", int),
    "min_total_input_words": ("filters", "min_total_input_words", int),
    "min_summary_words": ("filters", "min_summary_words", int),
    "clone_threshold": ("filters", "clone_threshold", float),
    "L": (None, "L", int),
    "seed": (None, "seed", int),
    "n_resamples": (None, "n_resamples", int),
    "lo_pct": ("percentiles", 0, float),
    "hi_pct": ("percentiles", 1, float),
    "target_words": (None, "target_words", int),
    "jobs": (None, "jobs", int),
    "J": ("abstractive", "J", int),
    "K_max": ("abstractive", "K_max", int),
    "K_min": ("abstractive", "K_min", int),
    "command": ("abstractive", "command", str),
}


def _flatten(config: dict) -> Dict[str, object]:
    flat: Dict[str, object] = {}
    for key, value in config.items():
        if key in ("filters", "abstractive") and isinstance(value, dict):
            for sub, v in value.items():
                flat[sub] = v
        elif key == "percentiles":
            flat["lo_pct"], flat["hi_pct"] = value
        else:
            flat[key] = value
    unknown = sorted(set(flat) - set(_OPTIONS))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return flat


def resolve_config(args: argparse.Namespace, environ=os.environ) -> PipelineConfig:
    """Merge defaults < config file < environment < flags."""
    values: Dict[str, object] = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                values.update(_flatten(json.load(fh)))
        except json.JSONDecodeError as exc:
            raise DataError(f"{args.config}: invalid JSON config ({exc.msg})") from None
    for name, (_, _, typ) in _OPTIONS.items():
        raw = environ.get(ENV_PREFIX + name.upper())
        if raw is not None:
            try:
                values[name] = typ(raw)
            except ValueError:
                raise UsageError(f"bad value for {ENV_PREFIX}{name.upper()}: {raw!r}") from None
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag

    cfg = PipelineConfig()
    filters = asdict(cfg.filters)
    abstractive = {f.name: getattr(cfg.abstractive, f.name) for f in fields(cfg.abstractive)}
    pct = list(cfg.percentiles)
    top = {}
    for name, value in values.items():
        section, key, typ = _OPTIONS[name]
        value = typ(value)
        if section == "filters":
            filters[key] = value
        elif section == "abstractive":
            abstractive[key] = value
        elif section == "percentiles":
            pct[key] = value
        else:
            top[key] = value
    try:
        return PipelineConfig(
            filters=FilterConfig(**filters),
            abstractive=AbstractiveConfig(**abstractive),
            percentiles=(pct[0], pct[1]),
            **top,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().rstrip()}")


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON file with PipelineConfig fields")
    common.add_argument("--jobs", type=int, help="worker processes (default 1)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = _Parser(prog="wikilead", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command_name", metavar="SUBCOMMAND", parser_class=_Parser)

    p = sub.add_parser("build-dataset", parents=[common], help="match corpus docs to wiki leads and filter")
    p.add_argument("--corpus", required=True)
    p.add_argument("--wiki", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-docs", dest="max_docs", type=int)
    p.add_argument("--min-input-words", dest="min_total_input_words", type=int)
    p.add_argument("--min-summary-words", dest="min_summary_words", type=int)
    p.add_argument("--clone-threshold", dest="clone_threshold", type=float)
    p.add_argument("--on-error", choices=("abort", "skip"), default="abort",
                   help="what to do with malformed corpus lines")
    p.add_argument("--split", action="store_true",
                   help="also write 80/10/10 train/validation/test files next to --out")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("stats", parents=[common], help="percentile table of a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", help="write the JSON report here")

    p = sub.add_parser("extract", parents=[common], help="run an extractive stage")
    p.add_argument("--dataset", required=True)
    p.add_argument("--extractor", choices=EXTRACTORS, default="tfidf")
    p.add_argument("-L", dest="L", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--target-words", dest="target_words", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rouge", parents=[common], help="score predictions against targets")
    p.add_argument("--predictions", required=True)
    p.add_argument("--targets", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("experiment", parents=[common], help="Random/TF-IDF/Cheating ablation table")
    p.add_argument("--dataset", required=True)
    p.add_argument("-L", dest="L", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--n-resamples", dest="n_resamples", type=int)
    p.add_argument("--target-words", dest="target_words", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--figure", help="also render a bar chart (png/pdf/svg)")

    p = sub.add_parser("sweep-l", parents=[common], help="R2 recall of the extract for several L")
    p.add_argument("--dataset", required=True)
    p.add_argument("--extractor", choices=EXTRACTORS, default="tfidf")
    p.add_argument("--l-values", type=_int_list, default=list(DEFAULT_L_VALUES))
    p.add_argument("--seed", type=int)
    p.add_argument("--target-words", dest="target_words", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--figure", help="also render the curve (png/pdf/svg)")

    p = sub.add_parser("abstractive-run", parents=[common], help="send extracts to an external model")
    p.add_argument("--extracts", required=True)
    p.add_argument("--command", dest="command")
    p.add_argument("-J", dest="J", type=int)
    p.add_argument("--k-max", dest="K_max", type=int)
    p.add_argument("--k-min", dest="K_min", type=int)
    p.add_argument("--out", required=True)
    return ap


def _open_in(path: str):
    if path == "-":
        return sys.stdin
    if not os.path.exists(path):
        raise DataError(f"no such file: {path}")
    return open(path, encoding="utf-8")


def _open_out(path: str):
    if path == "-":
        return _NoClose(sys.stdout)
    return open(path, "w", encoding="utf-8")


class _NoClose:
    def __init__(self, stream):
        self.stream = stream

    def __enter__(self):
        return self.stream

    def __exit__(self, *exc):
        self.stream.flush()


def _write_json(path: str, obj) -> None:
    with _open_out(path) as fh:
        fh.write(json.dumps(obj, ensure_ascii=False, indent=2) + "\n")


def _load_examples(path: str) -> List[DatasetExample]:
    with _open_in(path) as fh:
        examples = list(read_examples(fh))
    if not examples:
        raise DataError(f"{path}: no examples")
    return examples


def cmd_build_dataset(args, cfg: PipelineConfig) -> int:
    rejects: Dict[str, int] = {}
    with _open_in(args.wiki) as fh:
        wiki = list(read_wiki(fh))
    with _open_in(args.corpus) as corpus_fh:
        examples = list(build_dataset(read_corpus(corpus_fh, args.on_error), wiki, cfg.filters, rejects))
    with _open_out(args.out) as out:
        write_examples(out, examples)
    logger.info("wrote %d examples to %s; rejected %s", len(examples), args.out,
                json.dumps(rejects, sort_keys=True))
    if args.split:
        if len(examples) < 3:
            raise DataError(f"only {len(examples)} accepted examples, cannot split")
        stem = args.out[:-6] if args.out.endswith(".jsonl") else args.out
        for name, part in zip(("train", "validation", "test"), split_dataset(examples, seed=cfg.seed)):
            with open(f"{stem}.{name}.jsonl", "w", encoding="utf-8") as out:
                write_examples(out, part)
            logger.info("%s: %d examples", name, len(part))
    return 0


def cmd_stats(args, cfg: PipelineConfig) -> int:
    with _open_in(args.dataset) as fh:
        table = compute_stats(read_examples(fh))
    print(format_stats(table))
    if args.out:
        _write_json(args.out, {k: {str(p): v for p, v in row.items()} for k, row in table.items()})
    return 0


def _extract_one(task) -> str:
    index, example, extractor, L, seed, target_words = task
    result = run_extractor(extractor, example, L, [seed, index], target_words)
    return dump_line(result.to_json())


def _batches(it: Iterator, size: int) -> Iterator[list]:
    while True:
        batch = list(islice(it, size))
        if not batch:
            return
        yield batch


def cmd_extract(args, cfg: PipelineConfig) -> int:
    n = 0
    with _open_in(args.dataset) as fh, _open_out(args.out) as out:
        tasks = (
            (i, ex, args.extractor, cfg.L, cfg.seed, cfg.target_words)
            for i, ex in enumerate(read_examples(fh))
        )
        if cfg.jobs > 1:
            with ProcessPoolExecutor(cfg.jobs) as pool:
                for batch in _batches(tasks, cfg.jobs * BATCH_PER_JOB):
                    for line in pool.map(_extract_one, batch, chunksize=8):
                        out.write(line)
                        n += 1
        else:
            for task in tasks:
                out.write(_extract_one(task))
                n += 1
    logger.info("extracted %d examples with %s, L=%d", n, args.extractor, cfg.L)
    return 0


def _read_texts(path: str) -> List[Tuple[str, str]]:
    """(title, text) per line of a plain-text or JSON-lines file."""
    with _open_in(path) as fh:
        lines = [line.rstrip("\n") for line in fh]
    records = []
    for line in lines:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            obj = None
        if not isinstance(obj, dict):
            # plain text file: one text per line
            return [(str(i), line) for i, line in enumerate(lines)]
        records.append(obj)
    out = []
    for i, obj in enumerate(records):
        title = str(obj.get("title", i))
        if "text" in obj:
            text = obj["text"]
        elif "summary" in obj:
            text = obj["summary"]
        elif "assembled" in obj:
            text = strip_assembled(obj["assembled"])
        else:
            raise DataError(f"{path}: line {i + 1}: missing key text")
        out.append((title, text))
    return out


def cmd_rouge(args, cfg: PipelineConfig) -> int:
    preds = _read_texts(args.predictions)
    targets = _read_texts(args.targets)
    if len(preds) != len(targets):
        raise DataError(f"{len(preds)} predictions but {len(targets)} targets")
    if not preds:
        raise DataError("nothing to score")
    reports = []
    with _open_out(args.out) as out:
        for (title, pred), (_, target) in zip(preds, targets):
            report = score_pair(pred, target)
            reports.append(report)
            out.write(dump_line({"title": title, **report.to_dict()}))
    mean = mean_report(reports).to_dict()
    print("metric  P       R       F")
    for metric, prf in mean.items():
        print(f"{metric:<6}  {prf['p']:.4f}  {prf['r']:.4f}  {prf['f']:.4f}")
    return 0


def cmd_experiment(args, cfg: PipelineConfig) -> int:
    examples = _load_examples(args.dataset)
    lo, hi = cfg.percentiles
    table = run_experiment1(examples, cfg.L, cfg.seed, cfg.n_resamples, lo, hi,
                            target_words=cfg.target_words)
    _write_json(args.out, experiment_to_json(table, cfg.L, cfg.seed))
    print(format_experiment(table))
    if args.figure:
        from wikilead.plotting import plot_experiment

        plot_experiment(table, args.figure)
        logger.info("figure written to %s", args.figure)
    return 0


def cmd_sweep(args, cfg: PipelineConfig) -> int:
    examples = _load_examples(args.dataset)
    points = l_sweep(examples, args.extractor, args.l_values, cfg.seed, cfg.target_words)
    _write_json(args.out, {
        "extractor": args.extractor,
        "points": [{"L": p.L, "r2_recall": p.r2_recall_mean} for p in points],
    })
    print(format_sweep(points))
    if args.figure:
        from wikilead.plotting import plot_sweep

        plot_sweep(points, args.figure, label=args.extractor)
        logger.info("figure written to %s", args.figure)
    return 0


def cmd_abstractive(args, cfg: PipelineConfig) -> int:
    if not cfg.abstractive.command:
        raise UsageError("abstractive-run needs --command (or 'command' in the config)")
    with _open_in(args.extracts) as fh:
        rows = [json.loads(line) for line in fh if line.strip()]
    if any("assembled" not in r for r in rows):
        raise DataError(f"{args.extracts}: every line needs an 'assembled' key")
    try:
        summaries = run_abstractive(cfg.abstractive, [r["assembled"] for r in rows])
    except AdapterError as exc:
        raise DataError(str(exc)) from None
    with _open_out(args.out) as out:
        for row, s in zip(rows, summaries):
            out.write(dump_line({
                "id": s.id,
                "title": row.get("title", ""),
                "text": s.text,
                "n_tokens": s.n_tokens,
                "within_bounds": s.within_bounds,
            }))
    bad = sum(not s.within_bounds for s in summaries)
    logger.info("%d summaries, %d outside [%d, %d] tokens", len(summaries), bad,
                cfg.abstractive.K_min, cfg.abstractive.K_max)
    return 0


_HANDLERS = {
    "build-dataset": cmd_build_dataset,
    "stats": cmd_stats,
    "extract": cmd_extract,
    "rouge": cmd_rouge,
    "experiment": cmd_experiment,
    "sweep-l": cmd_sweep,
    "abstractive-run": cmd_abstractive,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command_name:
            raise UsageError(parser.format_help().rstrip())
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else logging.INFO,
            format="%(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
            force=True,
        )
        cfg = resolve_config(args)
        return _HANDLERS[args.command_name](args, cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except (DataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
