"""Batch studies: permutation order, ranking saturation, scalability, utilization.

Every study is a pure function of its arguments and seed. ``workers > 1``
fans independent runs out over processes; results are gathered in
submission order so output does not depend on scheduling.
"""

from __future__ import annotations

import csv
import json
import math
import random
import statistics
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .engine import GeneratorConfig, Policy, pick_word, place, run_generator
from .grid import Grid
from .ranking import Order, Strategy, pebble_sand_rank, ps_distance, sorted_list
from .vocab import sample_vocabulary

__all__ = [
    "ExperimentRecord",
    "SaturationCurve",
    "ScalabilityRow",
    "brute_fill",
    "perm_brute",
    "perm_backtrack",
    "rank_saturation",
    "size_effect",
    "distance_dist",
    "contour",
    "scalability",
    "utilization_study",
    "write_csv",
    "write_manifest",
]


@dataclass(frozen=True)
class ExperimentRecord:
    perm_id: int
    words_fitted: int
    distance: float
    iterations: int
    grid_size: int
    utilization: float


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def best_permutation(vocab: Sequence[str]) -> list[str]:
    """Pebble-and-sand ascending order, the reference for distances."""
    return sorted_list(vocab, pebble_sand_rank(vocab), Order.ASC)


def sample_permutations(vocab: Sequence[str], samples: int, seed: int,
                        exhaustive: bool = False) -> list[list[str]]:
    if exhaustive:
        from itertools import permutations
        return [list(p) for p in permutations(vocab)]
    rng = random.Random(seed)
    out = []
    for _ in range(samples):
        perm = list(vocab)
        rng.shuffle(perm)
        out.append(perm)
    return out


def brute_fill(order: Sequence[str], grid_size: int) -> tuple[Grid, int]:
    """Place words greedily in list order, no backtracking, until none fits.

    Returns the grid and the number of placements (iterations) made.
    """
    todo = list(order)
    grid = place(todo.pop(0), Grid(grid_size))
    steps = 1
    while todo:
        w = pick_word(grid, todo)
        if w is None:
            break
        grid = place(w, grid)
        todo.remove(w)
        steps += 1
    return grid, steps


def _distance(perm: Sequence[str], best: Sequence[str]) -> float:
    return ps_distance(perm, best) if len(best) >= 2 else 0.0


def _brute_job(args) -> ExperimentRecord:
    k, perm, best, grid_size = args
    grid, steps = brute_fill(perm, grid_size)
    return ExperimentRecord(k, len(grid), _distance(perm, best), steps, grid_size, grid.utilization())


def perm_brute(vocab: Sequence[str], grid_size: int = 13, samples: int = 1000, seed: int = 0,
               exhaustive: bool = False, workers: int = 1) -> list[ExperimentRecord]:
    """Words fitted by greedy placement for sampled permutations of ``vocab``."""
    best = best_permutation(vocab)
    perms = sample_permutations(vocab, samples, seed, exhaustive)
    return _map(_brute_job, [(k, p, best, grid_size) for k, p in enumerate(perms)], workers)


def _backtrack_job(args) -> ExperimentRecord:
    k, perm, best, grid_size, budget, tt = args
    _, steps = brute_fill(perm, grid_size)
    cfg = GeneratorConfig(max_iter=max(budget, steps), grid_size=grid_size, fixed_grid=True,
                          ranked=False, use_reconnect=False, tt=tt)
    res = run_generator(perm, cfg, order=perm)
    return ExperimentRecord(k, res.n_best, _distance(perm, best), res.iterations, grid_size,
                            res.best.utilization())


def perm_backtrack(vocab: Sequence[str], grid_size: int = 13, samples: int = 1000,
                   iter_budget: int = 50, seed: int = 0, exhaustive: bool = False,
                   tt: int | None = None, workers: int = 1) -> list[ExperimentRecord]:
    """As :func:`perm_brute`, continuing with LIFO and victim backtracking.

    The greedy phase is identical to the brute-force run; backtracking then
    continues until ``iter_budget`` total iterations, so a budget at or below
    the greedy step count reproduces the brute-force result.
    """
    best = best_permutation(vocab)
    perms = sample_permutations(vocab, samples, seed, exhaustive)
    jobs = [(k, p, best, grid_size, iter_budget, tt) for k, p in enumerate(perms)]
    return _map(_backtrack_job, jobs, workers)


@dataclass
class SaturationCurve:
    strategy: Strategy
    order: Order
    words: list[int]
    saturation_iter: int
    final_max: int
    saturated: bool


def rank_saturation(vocab: Sequence[str], strategy: Strategy | str, order: Order | str,
                    grid_size: int = 13, max_iter: int = 5000, window: float = 0.2,
                    tt: int | None = None) -> SaturationCurve:
    """Words in the grid per iteration for one long fixed-grid LIFO run.

    The saturation iteration is where the final maximum is first reached;
    ``saturated`` says whether it then held for ``window * max_iter``.
    """
    cfg = GeneratorConfig(strategy=strategy, order=order, max_iter=max_iter, grid_size=grid_size,
                          fixed_grid=True, use_victim=False, use_reconnect=False, tt=tt)
    res = run_generator(vocab, cfg)
    words = [row.n_words for row in res.log]
    top = max(words)
    sat = words.index(top) + 1
    return SaturationCurve(cfg.strategy, cfg.order, words, sat, top,
                           len(words) - sat >= window * max_iter)


@dataclass(frozen=True)
class SizeEffectRow:
    size: int
    asc_words: int
    desc_words: int
    winner: str


def _size_job(args) -> SizeEffectRow:
    size, seed, grid_size, budget, use_victim = args
    vocab = sample_vocabulary(size, seed + size, max_len=grid_size)
    got = {}
    for order in (Order.ASC, Order.DESC):
        cfg = GeneratorConfig(order=order, max_iter=budget, grid_size=grid_size, fixed_grid=True,
                              use_victim=use_victim, use_reconnect=False)
        got[order] = run_generator(vocab, cfg).n_best
    a, d = got[Order.ASC], got[Order.DESC]
    return SizeEffectRow(size, a, d, "ASC" if a > d else "DESC" if d > a else "TIE")


def size_effect(sizes: Iterable[int] = range(1, 101), seed: int = 0, grid_size: int = 13,
                iter_budget: int = 1000, use_victim: bool = False,
                workers: int = 1) -> list[SizeEffectRow]:
    """Pebble-and-sand ascending vs descending, one random vocabulary per size.

    Runs match :func:`rank_saturation`: fixed grid, LIFO backtracking only.
    """
    jobs = [(s, seed, grid_size, iter_budget, use_victim) for s in sizes]
    return _map(_size_job, jobs, workers)


def distance_dist(records: Sequence[ExperimentRecord], bins: int = 10) -> list[tuple[int, int]]:
    """Histogram of D(P) over ``bins`` equal-width bins on [0, 1]."""
    counts = Counter(min(int(r.distance * bins), bins - 1) for r in records)
    return [(b, counts.get(b, 0)) for b in range(bins)]


def contour(records: Sequence[ExperimentRecord], bins: int = 10) -> list[tuple[int, int, int]]:
    """Counts over (distance bin, words fitted), sorted, zero cells omitted."""
    if not records:
        raise ValueError("no records")
    counts = Counter((min(int(r.distance * bins), bins - 1), r.words_fitted) for r in records)
    return sorted((d, w, n) for (d, w), n in counts.items())


@dataclass(frozen=True)
class ScalabilityRow:
    target: int
    runs: int
    reached: int
    min_iter: int
    mean_iter: float
    max_iter: int
    mean_utilization: float
    mean_grid: float


def _scal_job(args) -> list[tuple[int, int | None, float, int]]:
    vocab, targets, policy, budget, ge_max = args
    cfg = GeneratorConfig(reset_policy=policy, target_words=max(targets), max_iter=budget,
                          ge_max=ge_max)
    res = run_generator(vocab, cfg)
    out = []
    for t in targets:
        hit = next((m for m in res.milestones if m.n_best >= t), None)
        if hit is None:
            out.append((t, None, res.best.utilization(), res.best.rows))
        else:
            out.append((t, hit.iteration, hit.utilization, hit.size))
    return out


def scalability(n_vocabs: int = 100, vocab_size: int = 100,
                targets: Sequence[int] = tuple(range(5, 55, 5)),
                policy: Policy | str = Policy.RESET, seed: int = 0, budget: int = 20000,
                ge_max: int = 500, workers: int = 1) -> list[ScalabilityRow]:
    """Iterations and utilization needed to reach each target word count.

    One run per vocabulary goes to the largest target; smaller targets read
    off the first iteration the best grid held that many words. Runs that
    never reach a target count as ``budget`` iterations.
    """
    policy = Policy(policy)
    if max(targets) > vocab_size:
        raise ValueError("targets exceed vocabulary size")
    vocabs = [sample_vocabulary(vocab_size, seed + k) for k in range(n_vocabs)]
    per_run = _map(_scal_job, [(v, tuple(targets), policy, budget, ge_max) for v in vocabs], workers)
    rows = []
    for j, t in enumerate(targets):
        cells = [run[j] for run in per_run]
        its = [budget if it is None else it for _, it, _, _ in cells]
        rows.append(ScalabilityRow(
            target=t,
            runs=len(cells),
            reached=sum(it is not None for _, it, _, _ in cells),
            min_iter=min(its),
            mean_iter=statistics.fmean(its),
            max_iter=max(its),
            mean_utilization=statistics.fmean(u for _, _, u, _ in cells),
            mean_grid=statistics.fmean(g for _, _, _, g in cells),
        ))
    return rows


def utilization_study(rows: Sequence[ScalabilityRow]) -> dict[str, list[tuple[float, float]]]:
    """Mean utilization against target words and against mean grid size."""
    return {
        "by_words": [(r.target, r.mean_utilization) for r in rows],
        "by_grid": sorted((r.mean_grid, r.mean_utilization) for r in rows),
    }


def linearity(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Coefficient of determination of a least-squares line through the points."""
    mx, my = statistics.fmean(xs), statistics.fmean(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    syy = sum((y - my) ** 2 for y in ys)
    if syy == 0:
        return 1.0
    return (sxy * sxy) / (sxx * syy) if sxx else 0.0


def write_csv(path: str | Path, rows: Iterable, header: Sequence[str] | None = None) -> Path:
    """Write dataclass instances or tuples to ``path`` with a header row."""
    rows = list(rows)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        if header is None and rows and hasattr(rows[0], "__dataclass_fields__"):
            header = [f.name for f in fields(rows[0])]
        if header:
            out.writerow(header)
        for r in rows:
            if hasattr(r, "__dataclass_fields__"):
                r = [v.value if hasattr(v, "value") else v for v in asdict(r).values()]
            out.writerow([_fmt(v) for v in r])
    return path


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}" if math.isfinite(v) else str(v)
    return v


def write_manifest(path: str | Path, study: str, config: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({"study": study, "config": config}, indent=2, sort_keys=True) + "\n")
    return path
