"""Strategic placement functions and the iterative generator loop.

The generator keeps a ranked working list ``L`` of unplaced words and
repeatedly picks the first placeable word, falls back to removing a victim
word that unblocks the list, and finally to LIFO wraparound. Every
``ge_max`` iterations (or when the list cycles back to its first word) the
grid grows by one row and column and is either reset or kept.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import re
import time
from collections import deque
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Collection, Iterable, Sequence

from .grid import ACROSS, DOWN, Anchor, Grid, GridError, Orientation
from .ranking import Order, Strategy, rank, sorted_list

log = logging.getLogger(__name__)

__all__ = [
    "Policy",
    "Action",
    "TabuList",
    "GeneratorConfig",
    "LogRow",
    "RunResult",
    "placeable",
    "pick_word",
    "place",
    "victim",
    "wraparound",
    "reconnect",
    "run_generator",
    "default_tenure",
]


class Policy(str, Enum):
    RESET = "reset"
    CONTINUE = "continue"


class Action(str, Enum):
    PLACE = "PLACE"
    VICTIM = "VICTIM"
    WRAP = "WRAP"
    RESET = "RESET"
    RESIZE = "RESIZE"
    RECONNECT = "RECONNECT"


# -- strategic functions ----------------------------------------------------


def placeable(word: str, grid: Grid) -> bool:
    return grid.placeable(word)


def pick_word(grid: Grid, words: Sequence[str], tabu: Collection[str] = ()) -> str | None:
    """First non-tabu word in ``words`` that has a legal position."""
    for w in words:
        if w not in tabu and grid.placeable(w):
            return w
    return None


def _position_key(grid: Grid, word: str, crossings: int, anchor: Anchor) -> tuple:
    r, c, o = anchor
    half = (len(word) - 1) / 2
    mr, mc = (r, c + half) if o is ACROSS else (r + half, c)
    cr, cc = (grid.rows - 1) / 2, (grid.cols - 1) / 2
    return (-crossings, (mr - cr) ** 2 + (mc - cc) ** 2, r, c, 0 if o is ACROSS else 1)


def best_position(word: str, grid: Grid) -> Anchor | None:
    """Position ``place`` would use, or None when the word is not placeable."""
    if word in grid:
        return None
    if not grid.placements:
        n = len(word)
        if n <= grid.cols:
            return ((grid.rows - 1) // 2, (grid.cols - n) // 2, ACROSS)
        if n <= grid.rows:
            return ((grid.rows - n) // 2, (grid.cols - 1) // 2, DOWN)
        return None
    scored = grid.scored_positions(word)
    if not scored:
        return None
    return min(scored, key=lambda ka: _position_key(grid, word, *ka))[1]


def place(word: str, grid: Grid) -> Grid:
    """Write ``word`` at its preferred legal position.

    Preference: most crossings, then word midpoint closest to the grid
    centre, then row, column, ACROSS before DOWN. An empty grid centres the
    word across.
    """
    anchor = best_position(word, grid)
    if anchor is None:
        raise GridError(f"{word} is not placeable")
    return grid.write(word, *anchor)


def victim(grid: Grid, words: Sequence[str], tabu: Collection[str] = (),
           prefer_connected: bool = True) -> str | None:
    """First placed word (by insertion order) whose removal lets a list word fit.

    With ``prefer_connected`` a removal that keeps the grid connected beats an
    earlier one that splits it.
    """
    eligible = [w for w in words if w not in tabu and w not in grid]
    if not eligible or not grid.placements:
        return None
    if len(grid) == 1:
        only = grid.placements[0].word
        empty = grid.remove(only)
        return only if any(empty.placeable(w) for w in eligible) else None
    if any(grid.placeable(w) for w in eligible):
        # Unusual outside the generator loop: test every removal directly.
        fallback = None
        for p in grid.placements:
            reduced = grid.remove(p.word)
            if any(reduced.placeable(w) for w in eligible):
                if not prefer_connected or reduced.connected:
                    return p.word
                fallback = fallback or p.word
        return fallback
    hits: dict[int, list[tuple[str, Anchor]]] = {}
    for w in eligible:
        for anchor in grid._victim_anchors(w):
            for seq in grid._resolvers(w, *anchor) or ():
                hits.setdefault(seq, []).append((w, anchor))
    fallback = None
    for p in grid.placements:
        trials = hits.get(p.seq)
        if not trials:
            continue
        reduced = grid.remove(p.word)
        if any(reduced.fits(w, *a) > 0 for w, a in trials):
            if not prefer_connected or reduced.connected:
                return p.word
            fallback = fallback or p.word
    return fallback


def wraparound(grid: Grid, words: Sequence[str]) -> tuple[Grid, list[str]]:
    """Remove the most recently placed word and append it to the list tail."""
    if not grid.placements:
        raise GridError("wraparound on an empty grid")
    last = max(grid.placements, key=lambda p: p.seq)
    return grid.remove(last.word), [*words, last.word]


def _bridge_slots(grid: Grid, lengths: Collection[int]) -> Iterable[tuple[Anchor, str]]:
    """Slots covering letters of two or more components, with regex patterns."""
    comp = {}
    for k, members in enumerate(grid.components()):
        for p in members:
            for cell in p.cells():
                comp.setdefault(cell, set()).add(k)
    seen = set()
    for orientation in (ACROSS, DOWN):
        lines, span = (grid.rows, grid.cols) if orientation is ACROSS else (grid.cols, grid.rows)
        for line in range(lines):
            def cell(t: int) -> tuple[int, int]:
                return (line, t) if orientation is ACROSS else (t, line)
            marks = [(t, comp[cell(t)]) for t in range(span) if cell(t) in comp]
            for a in range(len(marks)):
                for b in range(a + 1, len(marks)):
                    (x, ca), (y, cb) = marks[a], marks[b]
                    if ca == cb or ca & cb:
                        continue
                    for n in sorted(lengths):
                        if n < y - x + 1:
                            continue
                        for s in range(max(0, y - n + 1), min(x, span - n) + 1):
                            key = (orientation, line, s, n)
                            if key in seen:
                                continue
                            seen.add(key)
                            pattern = "".join(grid.letter(*cell(t)) or "." for t in range(s, s + n))
                            r, c = cell(s)
                            yield (r, c, orientation), pattern


def reconnect(grid: Grid, vocab: Iterable[str]) -> Grid:
    """Bridge disconnected components with unplaced words.

    Builds a letter pattern (fixed letters where the slot meets existing
    cells, wildcards elsewhere) for every slot spanning two components and
    writes the first vocabulary word matching a legal slot. Repeats until
    connected or no bridge exists.
    """
    pool = [w for w in vocab if w not in grid]
    while not grid.connected:
        by_len: dict[int, list[str]] = {}
        for w in pool:
            by_len.setdefault(len(w), []).append(w)
        bridged = False
        for anchor, pattern in _bridge_slots(grid, by_len):
            rx = re.compile(pattern)
            for w in by_len[len(pattern)]:
                if rx.fullmatch(w) and grid.fits(w, *anchor) > 0:
                    grid = grid.write(w, *anchor)
                    pool.remove(w)
                    bridged = True
                    break
            if bridged:
                break
        if not bridged:
            break
    return grid


# -- tabu ---------------------------------------------------------------------


class TabuList:
    """Recently removed words, each blocked for ``tenure`` further moves."""

    def __init__(self, tenure: int):
        if tenure < 0:
            raise ValueError("tenure must be non-negative")
        self.tenure = tenure
        self._items: deque[tuple[str, int]] = deque(maxlen=tenure or None)

    def push(self, word: str, move: int) -> None:
        if self.tenure == 0:
            return
        self._items = deque(((w, m) for w, m in self._items if w != word), maxlen=self.tenure)
        self._items.append((word, move))

    def blocked(self, move: int) -> frozenset[str]:
        """Words not yet eligible at move index ``move``."""
        return frozenset(w for w, m in self._items if move <= m + self.tenure)

    def clear(self) -> None:
        self._items.clear()

    def __len__(self) -> int:
        return len(self._items)


def default_tenure(vocab_size: int) -> int:
    return max(2, math.ceil(vocab_size / 10))


# -- generator -------------------------------------------------------------


@dataclass
class GeneratorConfig:
    strategy: Strategy = Strategy.PEBBLE_SAND
    order: Order = Order.ASC
    max_iter: int = 10000
    ge_max: int = 500
    reset_policy: Policy = Policy.RESET
    tt: int | None = None
    seed: int = 0
    target_words: int | None = None
    max_grid: int | None = None
    time_limit: float | None = None
    grid_size: int | None = None
    fixed_grid: bool = False
    ranked: bool = True
    use_victim: bool = True
    use_reconnect: bool = True

    def __post_init__(self):
        self.strategy = Strategy(self.strategy)
        self.order = Order(self.order)
        self.reset_policy = Policy(self.reset_policy)
        if self.max_iter < 0 or self.ge_max < 1:
            raise ValueError("max_iter must be >= 0 and ge_max >= 1")
        if self.tt is not None and self.tt < 0:
            raise ValueError("tt must be non-negative")

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("strategy", "order", "reset_policy"):
            d[k] = d[k].value
        return d


@dataclass(frozen=True)
class LogRow:
    iteration: int
    action: Action
    word: str
    n_words: int
    size: int
    connected: bool = True


@dataclass
class Milestone:
    n_best: int
    iteration: int
    size: int
    utilization: float


@dataclass
class RunResult:
    best: Grid
    n_best: int
    iterations: int
    final: Grid
    log: list[LogRow] = field(default_factory=list)
    milestones: list[Milestone] = field(default_factory=list)
    config: GeneratorConfig | None = None

    def first_hit(self, target: int) -> int | None:
        """Iteration at which the best grid first held ``target`` words."""
        for m in self.milestones:
            if m.n_best >= target:
                return m.iteration
        return None

    def log_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["iteration", "action", "word", "n_words", "N"])
        for row in self.log:
            out.writerow([row.iteration, row.action.value, row.word, row.n_words, row.size])
        return buf.getvalue()


Observer = Callable[[LogRow, Grid], None]


def run_generator(vocab: Sequence[str], config: GeneratorConfig | None = None,
                  observer: Observer | None = None, order: Sequence[str] | None = None) -> RunResult:
    """Generate a crossword from ``vocab``; always returns the best grid found.

    ``order`` bypasses ranking and uses the given permutation as the working
    list (used by the permutation studies).
    """
    cfg = config or GeneratorConfig()
    vocab = list(vocab)
    if not vocab:
        raise ValueError("empty vocabulary")
    longest = max(len(w) for w in vocab)
    size = cfg.grid_size or longest
    if size < longest:
        raise ValueError(f"grid size {size} cannot hold the longest word ({longest} letters)")
    if cfg.max_grid is not None and longest > cfg.max_grid:
        raise ValueError(f"word of {longest} letters exceeds max grid size {cfg.max_grid}")
    if order is not None:
        if sorted(order) != sorted(vocab):
            raise ValueError("order must be a permutation of the vocabulary")
        base = list(order)
    elif cfg.ranked:
        base = sorted_list(vocab, rank(vocab, cfg.strategy), cfg.order)
    else:
        base = list(vocab)
    tabu = TabuList(default_tenure(len(vocab)) if cfg.tt is None else cfg.tt)
    deadline = None if cfg.time_limit is None else time.monotonic() + cfg.time_limit

    todo = list(base)
    grid = Grid(size)
    best, n_best = grid, 0
    result = RunResult(best, 0, 0, grid, config=cfg)
    top, left_top = todo[0], False
    i = 0

    def record(action: Action, word: str) -> None:
        row = LogRow(i, action, word, len(grid), grid.rows, grid.connected)
        result.log.append(row)
        if observer is not None:
            observer(row, grid)

    def improve(g: Grid) -> None:
        nonlocal best, n_best
        if len(g) <= n_best:
            return
        g = g.largest_component()
        if len(g) > n_best:
            best, n_best = g, len(g)
            result.milestones.append(Milestone(n_best, i, g.rows, g.utilization()))

    def done() -> bool:
        if cfg.target_words is not None and n_best >= cfg.target_words:
            return True
        return deadline is not None and time.monotonic() >= deadline

    def try_reconnect() -> None:
        nonlocal grid, todo
        if not cfg.use_reconnect or grid.connected:
            return
        bridged = reconnect(grid, todo)
        if len(bridged) > len(grid):
            added = [w for w in bridged.words if w not in grid]
            grid = bridged
            todo = [w for w in todo if w not in added]
            for w in added:
                record(Action.RECONNECT, w)
            improve(grid)

    while todo and i < cfg.max_iter and not done():
        if not grid.placements:
            word = todo.pop(0)
            grid = place(word, grid)
            action = Action.PLACE
        else:
            blocked = tabu.blocked(i)
            word = pick_word(grid, todo, blocked)
            if word is not None:
                grid = place(word, grid)
                todo.remove(word)
                action = Action.PLACE
            else:
                word = victim(grid, todo, blocked) if cfg.use_victim else None
                if word is not None:
                    grid = grid.remove(word)
                    todo.append(word)
                    action = Action.VICTIM
                else:
                    grid, todo = wraparound(grid, todo)
                    word = todo[-1]
                    action = Action.WRAP
                tabu.push(word, i)
        i += 1
        record(action, word)
        improve(grid)
        if done() or cfg.fixed_grid:
            continue
        if todo and todo[0] != top:
            left_top = True
        cycled = left_top and bool(todo) and todo[0] == top
        if i % cfg.ge_max == 0 or cycled:
            try_reconnect()
            if cfg.max_grid is not None and grid.rows + 1 > cfg.max_grid:
                break
            if cfg.reset_policy is Policy.RESET:
                grid = Grid(grid.rows + 1)
                todo = list(base)
                tabu.clear()
                record(Action.RESET, "")
            else:
                grid = grid.resize(grid.rows + 1)
                for _ in range(grid.rows):
                    packed = grid.repack()
                    if packed is grid:
                        break
                    grid = packed
                record(Action.RESIZE, "")
            top, left_top = todo[0] if todo else "", False

    try_reconnect()
    result.best, result.n_best = best, n_best
    result.iterations, result.final = i, grid
    log.debug("generator finished: %d words after %d iterations", n_best, i)
    return result
