"""``crossgen`` command line: generate, rank, clue, render and experiment.

Exit codes: 0 success, 2 bad input, 3 missing dictionary entries,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import fields
from pathlib import Path
from typing import Sequence

from . import __version__
from . import experiments as ex
from .clues import ClueKind, DictionaryError, MissingEntriesError, bundled_dictionary, clue_puzzle, load_dictionary
from .engine import GeneratorConfig, run_generator
from .grid import Grid, GridError, violations
from .ranking import letter_rank, rank, rank_csv, sorted_list
from .render import render_svg, render_text
from .vocab import load_vocabulary, sample_vocabulary

log = logging.getLogger("crossgen")

EXIT_OK, EXIT_INPUT, EXIT_DICT, EXIT_INVARIANT = 0, 2, 3, 4

STUDIES = ("perm_brute", "perm_backtrack", "rank_saturation", "size_effect",
           "distance_dist", "contour", "scalability", "utilization")


class InputError(Exception):
    pass


class InvariantError(Exception):
    pass


# -- helpers --------------------------------------------------------------


def _read_json(path: str) -> dict:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        data = json.loads(text)
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _vocabulary(args) -> list[str]:
    if args.vocab and args.random:
        raise InputError("use either --vocab or --random, not both")
    try:
        if args.vocab:
            return load_vocabulary(args.vocab)
        if args.random:
            return sample_vocabulary(args.random, args.seed, max_len=getattr(args, "max_len", None))
    except OSError as exc:
        raise InputError(f"cannot read vocabulary: {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError("a vocabulary is required (--vocab FILE or --random N)")


def _dictionary(path: str | None):
    try:
        return load_dictionary(path) if path else bundled_dictionary()
    except DictionaryError as exc:
        raise InputError(str(exc)) from exc


def _grid_from(data: dict) -> Grid:
    """Accept a bare grid, a generated puzzle, or a clued puzzle."""
    try:
        return Grid.from_dict(data.get("solution", data))
    except GridError as exc:
        raise InputError(str(exc)) from exc


def _gate(grid: Grid) -> Grid:
    problems = violations(grid.rows, grid.cols, grid.placements)
    if problems:
        raise InvariantError("; ".join(problems))
    return grid


_CONFIG_FLAGS = {
    "strategy": "strategy",
    "order": "order",
    "grid_policy": "reset_policy",
    "target_words": "target_words",
    "max_iter": "max_iter",
    "ge_max": "ge_max",
    "tt": "tt",
    "seed": "seed",
    "max_grid": "max_grid",
    "time_limit": "time_limit",
    "grid_size": "grid_size",
}


def _engine_config(args) -> GeneratorConfig:
    values: dict = {}
    if args.config:
        data = _read_json(args.config)
        known = {f.name for f in fields(GeneratorConfig)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InputError(f"unknown config keys: {', '.join(unknown)}")
        values.update(data)
    for flag, key in _CONFIG_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    try:
        return GeneratorConfig(**values)
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid config: {exc}") from exc


# -- subcommands -------------------------------------------------------------


def cmd_generate(args) -> int:
    vocab = _vocabulary(args)
    cfg = _engine_config(args)
    try:
        result = run_generator(vocab, cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    grid = _gate(result.best.cropped() if args.crop else result.best)
    puzzle = grid.to_dict()
    puzzle["meta"] = {
        "n_words": result.n_best,
        "vocabulary_size": len(vocab),
        "iterations": result.iterations,
        "utilization": round(grid.utilization(), 6),
        "config": cfg.to_dict(),
    }
    rendered = render_svg(grid) if args.format == "svg" else render_text(grid)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "puzzle.json").write_text(_dump(puzzle), encoding="utf-8")
        (out / "run_log.csv").write_text(result.log_csv(), encoding="utf-8")
        (out / ("grid.svg" if args.format == "svg" else "grid.txt")).write_text(rendered, encoding="utf-8")
        log.info("%d of %d words placed in %dx%d", result.n_best, len(vocab), grid.rows, grid.cols)
    elif args.format == "json":
        sys.stdout.write(_dump(puzzle))
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def cmd_rank(args) -> int:
    vocab = _vocabulary(args)
    strategy = args.strategy or "pebble"
    if args.format == "json":
        ranks = rank(vocab, strategy)
        text = _dump({
            "strategy": ranks.strategy.value,
            "order": args.order or "asc",
            "scores": ranks.as_dict(),
            "letter_totals": letter_rank(vocab).as_dict(),
            "sorted": sorted_list(vocab, ranks, args.order or "asc"),
        })
    else:
        text = rank_csv(vocab, strategy, args.order or "asc")
    _emit(text, args.out)
    return EXIT_OK


def cmd_clue(args) -> int:
    grid = _grid_from(_read_json(args.puzzle))
    puzzle = clue_puzzle(_gate(grid), _dictionary(args.dict), args.prefer)
    if args.out and args.format != "text":
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "clued.json").write_text(_dump(puzzle.to_dict()), encoding="utf-8")
        (out / "sheet.txt").write_text(puzzle.sheet(), encoding="utf-8")
    elif args.format == "text":
        _emit(puzzle.sheet(), args.out)
    else:
        sys.stdout.write(_dump(puzzle.to_dict()))
    return EXIT_OK


def cmd_render(args) -> int:
    grid = _gate(_grid_from(_read_json(args.puzzle)))
    solved = not args.unsolved
    text = render_svg(grid, solved) if args.format == "svg" else render_text(grid, solved)
    _emit(text, args.out)
    return EXIT_OK


def _int_list(text: str) -> list[int]:
    try:
        if ".." in text:
            span, _, step = text.partition(":")
            lo, hi = span.split("..")
            return list(range(int(lo), int(hi) + 1, int(step or 1)))
        return [int(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise InputError(f"bad integer list {text!r}") from exc


def cmd_experiment(args) -> int:
    out = Path(args.out or "results")
    study = args.study
    manifest = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "verbose")}
    grid_size = args.grid_size or 13
    if study in ("perm_brute", "perm_backtrack", "distance_dist", "contour"):
        vocab = _vocabulary(args)
        common = dict(grid_size=grid_size, samples=args.samples, seed=args.seed,
                      exhaustive=args.exhaustive, workers=args.workers)
        if study == "perm_backtrack":
            records = ex.perm_backtrack(vocab, iter_budget=args.budget, tt=args.tt, **common)
        else:
            records = ex.perm_brute(vocab, **common)
        if len(records) < 1:
            raise InputError("samples must be >= 1")
        if study == "distance_dist":
            rows, header = ex.distance_dist(records, args.bins), ["d_bin", "count"]
        elif study == "contour":
            rows, header = ex.contour(records, args.bins), ["d_bin", "words_fitted", "count"]
        else:
            rows, header = records, None
    elif study == "rank_saturation":
        vocab = _vocabulary(args)
        curve = ex.rank_saturation(vocab, args.strategy or "pebble", args.order or "asc",
                                   grid_size, args.max_iter or 5000, tt=args.tt)
        rows = list(enumerate(curve.words, 1))
        header = ["iteration", "words_in_grid"]
        manifest["saturation_iter"] = curve.saturation_iter
        manifest["final_max"] = curve.final_max
        manifest["saturated"] = curve.saturated
    elif study == "size_effect":
        rows = ex.size_effect(_int_list(args.sizes), args.seed, grid_size, args.budget,
                              workers=args.workers)
        header = None
    else:
        targets = _int_list(args.targets)
        try:
            table = ex.scalability(args.vocabs, args.vocab_size, targets, args.grid_policy or "reset",
                                   args.seed, args.max_iter or 20000, args.ge_max or 500,
                                   workers=args.workers)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        if study == "scalability":
            rows, header = table, None
        else:
            u = ex.utilization_study(table)
            rows = [("words", x, y) for x, y in u["by_words"]] + [("grid", x, y) for x, y in u["by_grid"]]
            header = ["axis", "x", "mean_utilization"]
    ex.write_csv(out / f"{study}.csv", rows, header)
    ex.write_manifest(out / f"{study}.manifest.json", study, manifest)
    log.info("wrote %s", out / f"{study}.csv")
    return EXIT_OK


# -- parser ----------------------------------------------------------------


def _vocab_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vocab", help="word list, one word per line")
    p.add_argument("--random", type=int, metavar="N", help="sample N bundled words using --seed")
    p.add_argument("--seed", type=int, default=0, help="the only source of randomness (default 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="crossgen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="build a crossword from a vocabulary")
    _vocab_flags(g)
    g.add_argument("--config", help="JSON file of engine settings")
    g.add_argument("--strategy", choices=["letter", "pebble"])
    g.add_argument("--order", choices=["asc", "desc"])
    g.add_argument("--grid-policy", choices=["reset", "continue"])
    g.add_argument("--target-words", type=int)
    g.add_argument("--max-iter", type=int)
    g.add_argument("--ge-max", type=int, help="iterations per grid size (default 500)")
    g.add_argument("--tt", type=int, help="tabu tenure in moves")
    g.add_argument("--max-grid", type=int)
    g.add_argument("--grid-size", type=int, help="starting grid size")
    g.add_argument("--time-limit", type=float, help="wall-clock seconds; breaks reproducibility")
    g.add_argument("--crop", action="store_true", help="trim empty border lines from the result")
    g.add_argument("--out", help="output directory (puzzle.json, run_log.csv, grid.txt/svg)")
    g.add_argument("--format", choices=["json", "text", "svg"], default="json")
    g.set_defaults(func=cmd_generate)

    r = sub.add_parser("rank", help="intersection matrix and word ranks")
    _vocab_flags(r)
    r.add_argument("--strategy", choices=["letter", "pebble"])
    r.add_argument("--order", choices=["asc", "desc"])
    r.add_argument("--format", choices=["csv", "json"], default="csv")
    r.add_argument("--out")
    r.set_defaults(func=cmd_rank)

    c = sub.add_parser("clue", help="attach clues to a generated puzzle")
    c.add_argument("puzzle", help="puzzle JSON, or - for stdin")
    c.add_argument("--dict", help="TSV dictionary (default: bundled)")
    c.add_argument("--prefer", choices=[k.value for k in ClueKind], default=ClueKind.DEFINITION.value)
    c.add_argument("--format", choices=["json", "text"], default="json")
    c.add_argument("--out", help="output directory (clued.json, sheet.txt), or file with --format text")
    c.set_defaults(func=cmd_clue)

    d = sub.add_parser("render", help="draw a puzzle as text or SVG")
    d.add_argument("puzzle", help="puzzle JSON, or - for stdin")
    d.add_argument("--format", choices=["text", "svg"], default="text")
    d.add_argument("--unsolved", action="store_true", help="hide the letters")
    d.add_argument("--out")
    d.set_defaults(func=cmd_render)

    e = sub.add_parser("experiment", help="run a batch study and write CSV")
    e.add_argument("study", choices=STUDIES)
    _vocab_flags(e)
    e.add_argument("--samples", type=int, default=1000)
    e.add_argument("--exhaustive", action="store_true", help="enumerate every permutation")
    e.add_argument("--grid-size", type=int)
    e.add_argument("--budget", type=int, default=50, help="iterations per run")
    e.add_argument("--max-iter", type=int)
    e.add_argument("--ge-max", type=int)
    e.add_argument("--tt", type=int)
    e.add_argument("--strategy", choices=["letter", "pebble"])
    e.add_argument("--order", choices=["asc", "desc"])
    e.add_argument("--grid-policy", choices=["reset", "continue"])
    e.add_argument("--sizes", default="1..100")
    e.add_argument("--targets", default="5,10,15,20,25,30,35,40,45,50")
    e.add_argument("--vocabs", type=int, default=100)
    e.add_argument("--vocab-size", type=int, default=100)
    e.add_argument("--max-len", type=int, help="longest word when sampling with --random")
    e.add_argument("--bins", type=int, default=10)
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--out", help="output directory (default: results)")
    e.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except MissingEntriesError as exc:
        print(f"crossgen: {exc}", file=sys.stderr)
        return EXIT_DICT
    except DictionaryError as exc:
        print(f"crossgen: {exc}", file=sys.stderr)
        return EXIT_DICT
    except InvariantError as exc:
        print(f"crossgen: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, GridError) as exc:
        print(f"crossgen: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
