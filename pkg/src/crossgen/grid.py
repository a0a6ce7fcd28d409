"""Grid model, criss-cross validity rules and geometric operations.

Cells are addressed 0-based as ``(row, col)``. A cell without a letter is a
black square; black squares are never stored. Grids are immutable: every
operation returns a new ``Grid``.

Validity (checked by :func:`violations`):

* two placements writing the same cell write the same letter;
* every maximal horizontal/vertical run of two or more letters is exactly one
  placement, and every placement is such a run;
* no two orthogonally adjacent cells are both crossing cells, which keeps
  the grid valid after any single word is removed;
* optionally, the placements form one connected intersection graph.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Orientation",
    "Placement",
    "Grid",
    "GridError",
    "violations",
    "check_word",
]


class GridError(ValueError):
    """Raised for operations that would break the grid rules."""


class Orientation(str, Enum):
    ACROSS = "ACROSS"
    DOWN = "DOWN"

    @property
    def other(self) -> "Orientation":
        return Orientation.DOWN if self is Orientation.ACROSS else Orientation.ACROSS


ACROSS = Orientation.ACROSS
DOWN = Orientation.DOWN

Anchor = tuple[int, int, Orientation]


def check_word(text: str) -> str:
    """Normalise ``text`` to an uppercase word, raising on invalid input."""
    word = text.strip().upper()
    if len(word) < 2 or not word.isascii() or not word.isalpha():
        raise GridError(f"invalid word {text!r}: need 2+ letters A-Z")
    return word


@dataclass(frozen=True)
class Placement:
    word: str
    row: int
    col: int
    orientation: Orientation
    seq: int = 0

    def cells(self) -> list[tuple[int, int]]:
        if self.orientation is ACROSS:
            return [(self.row, self.col + k) for k in range(len(self.word))]
        return [(self.row + k, self.col) for k in range(len(self.word))]

    @property
    def anchor(self) -> Anchor:
        return (self.row, self.col, self.orientation)

    def to_dict(self) -> dict:
        return {
            "word": self.word,
            "row": self.row,
            "col": self.col,
            "orientation": self.orientation.value,
        }


class Grid:
    """An immutable ``rows x cols`` crossword grid.

    ``_across``/``_down`` hold, per flat cell index, the seq of the across or
    down placement covering the cell, or -1.
    """

    __slots__ = ("rows", "cols", "placements", "_letters", "_across", "_down",
                 "_next_seq", "__dict__")

    def __init__(self, rows: int, cols: int | None = None,
                 placements: Iterable[Placement] = ()):
        cols = rows if cols is None else cols
        if rows < 1 or cols < 1:
            raise GridError("grid dimensions must be positive")
        self.rows = rows
        self.cols = cols
        self.placements: tuple[Placement, ...] = ()
        self._letters = [""] * (rows * cols)
        self._across = [-1] * (rows * cols)
        self._down = [-1] * (rows * cols)
        self._next_seq = 0
        for p in placements:
            self._stamp(p)

    # -- construction helpers --------------------------------------------

    def _copy(self) -> "Grid":
        g = Grid.__new__(Grid)
        g.rows = self.rows
        g.cols = self.cols
        g.placements = self.placements
        g._letters = list(self._letters)
        g._across = list(self._across)
        g._down = list(self._down)
        g._next_seq = self._next_seq
        return g

    def _stamp(self, p: Placement) -> None:
        """Write ``p`` into this (still private) grid, checking only cell letters."""
        if p.row < 0 or p.col < 0:
            raise GridError(f"{p.word} out of bounds")
        if p.orientation is ACROSS:
            if p.row >= self.rows or p.col + len(p.word) > self.cols:
                raise GridError(f"{p.word} out of bounds")
            owners = self._across
        else:
            if p.col >= self.cols or p.row + len(p.word) > self.rows:
                raise GridError(f"{p.word} out of bounds")
            owners = self._down
        if any(q.word == p.word for q in self.placements):
            raise GridError(f"{p.word} already in grid")
        seq = max(p.seq, self._next_seq)
        p = Placement(p.word, p.row, p.col, p.orientation, seq)
        for (r, c), ch in zip(p.cells(), p.word):
            i = r * self.cols + c
            if self._letters[i] and self._letters[i] != ch:
                raise GridError(f"{p.word} conflicts with letter {self._letters[i]} at {(r, c)}")
            if owners[i] != -1:
                raise GridError(f"{p.word} overlaps a parallel word at {(r, c)}")
            self._letters[i] = ch
            owners[i] = seq
        self.placements = self.placements + (p,)
        self._next_seq = seq + 1

    # -- basic queries -----------------------------------------------------

    def __len__(self) -> int:
        return len(self.placements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        return (self.rows, self.cols, self.placements) == (other.rows, other.cols, other.placements)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.placements))

    def __repr__(self) -> str:
        return f"Grid({self.rows}x{self.cols}, {[p.word for p in self.placements]})"

    def letter(self, row: int, col: int) -> str:
        return self._letters[row * self.cols + col]

    @property
    def words(self) -> list[str]:
        return [p.word for p in self.placements]

    def placement(self, word: str) -> Placement:
        for p in self.placements:
            if p.word == word:
                return p
        raise KeyError(word)

    def __contains__(self, word: str) -> bool:
        return any(p.word == word for p in self.placements)

    def letter_count(self) -> int:
        return sum(1 for ch in self._letters if ch)

    def cell_rows(self) -> list[str]:
        """Rows of the grid as strings, ``'#'`` for black squares."""
        return ["".join(ch or "#" for ch in self._letters[r * self.cols:(r + 1) * self.cols])
                for r in range(self.rows)]

    @cached_property
    def _index(self) -> dict[str, list[int]]:
        where: dict[str, list[int]] = {}
        for i, ch in enumerate(self._letters):
            if ch:
                where.setdefault(ch, []).append(i)
        return where

    @cached_property
    def connected(self) -> bool:
        """Whether the placement intersection graph is connected."""
        if len(self.placements) < 2:
            return True
        adj: dict[int, set[int]] = {p.seq: set() for p in self.placements}
        for a, d in zip(self._across, self._down):
            if a != -1 and d != -1:
                adj[a].add(d)
                adj[d].add(a)
        start = self.placements[0].seq
        seen = {start}
        stack = [start]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == len(adj)

    def components(self) -> list[list[Placement]]:
        """Connected components of the intersection graph, in seq order."""
        by_seq = {p.seq: p for p in self.placements}
        parent = {s: s for s in by_seq}

        def find(s: int) -> int:
            while parent[s] != s:
                parent[s] = parent[parent[s]]
                s = parent[s]
            return s

        for a, d in zip(self._across, self._down):
            if a != -1 and d != -1:
                parent[find(a)] = find(d)
        groups: dict[int, list[Placement]] = {}
        for p in self.placements:
            groups.setdefault(find(p.seq), []).append(p)
        return list(groups.values())

    def largest_component(self) -> "Grid":
        """The biggest connected piece as its own grid (first in seq order on ties)."""
        if self.connected:
            return self
        keep = max(self.components(), key=len)
        seqs = {p.seq for p in keep}
        g = Grid(self.rows, self.cols)
        for p in self.placements:
            if p.seq in seqs:
                g._stamp(p)
        g._next_seq = self._next_seq
        return g

    # -- legality ------------------------------------------------------------

    def fits(self, word: str, row: int, col: int, orientation: Orientation) -> int:
        """Crossings made by writing ``word`` at the anchor, or -1 if illegal.

        Zero means legal but touching no existing letter, which only counts
        as a legal position on an empty grid.
        """
        rows, cols = self.rows, self.cols
        n = len(word)
        if row < 0 or col < 0:
            return -1
        letters, across, down = self._letters, self._across, self._down
        if orientation is ACROSS:
            if row >= rows or col + n > cols:
                return -1
            step, side, same, perp = 1, cols, across, down
            has_prev = col > 0
            has_next = col + n < cols
            side_lo = row > 0
            side_hi = row < rows - 1
        else:
            if col >= cols or row + n > rows:
                return -1
            step, side, same, perp = cols, 1, down, across
            has_prev = row > 0
            has_next = row + n < rows
            side_lo = col > 0
            side_hi = col < cols - 1
        start = row * cols + col
        if has_prev and letters[start - step]:
            return -1
        if has_next and letters[start + n * step]:
            return -1
        crossings = 0
        i = start
        for ch in word:
            cur = letters[i]
            if cur:
                if cur != ch or same[i] != -1:
                    return -1
                # the crossed word's neighbours must not be crossing cells
                if side_lo and across[i - side] != -1 and down[i - side] != -1:
                    return -1
                if side_hi and across[i + side] != -1 and down[i + side] != -1:
                    return -1
                crossings += 1
            else:
                if side_lo and letters[i - side]:
                    return -1
                if side_hi and letters[i + side]:
                    return -1
            i += step
        if crossings == n:
            return -1
        return crossings

    @cached_property
    def _cross_index(self) -> dict[str, list[tuple[int, int, Orientation]]]:
        """Per letter, single-word cells with the orientation a crosser needs."""
        where: dict[str, list[tuple[int, int, Orientation]]] = {}
        cols = self.cols
        for i, (ch, a, d) in enumerate(zip(self._letters, self._across, self._down)):
            if ch and (a == -1 or d == -1):
                where.setdefault(ch, []).append((i // cols, i % cols, DOWN if a != -1 else ACROSS))
        return where

    @cached_property
    def _memo(self) -> dict:
        return {}

    def _candidate_anchors(self, word: str) -> set[Anchor]:
        """Anchors where ``word`` crosses an existing letter perpendicularly."""
        key = ("anchors", word)
        found = self._memo.get(key)
        if found is not None:
            return found
        found = set()
        index = self._cross_index
        for k, ch in enumerate(word):
            for r, c, o in index.get(ch, ()):
                found.add((r - k, c, o) if o is DOWN else (r, c - k, o))
        self._memo[key] = found
        return found

    def legal_positions(self, word: str) -> list[Anchor]:
        """Every anchor where ``word`` can be written legally.

        On a non-empty grid the word must cross at least one existing letter;
        on an empty grid every in-bounds anchor qualifies. Sorted by
        ``(row, col, ACROSS before DOWN)``.
        """
        if word in self:
            return []
        if not self.placements:
            n = len(word)
            out = [(r, c, ACROSS) for r in range(self.rows) for c in range(self.cols - n + 1)]
            out += [(r, c, DOWN) for r in range(self.rows - n + 1) for c in range(self.cols)]
            return sorted(out, key=_anchor_key)
        return sorted((a for a in self._candidate_anchors(word) if self.fits(word, *a) > 0),
                      key=_anchor_key)

    def scored_positions(self, word: str) -> list[tuple[int, Anchor]]:
        """Legal anchors paired with their crossing counts."""
        if word in self or not self.placements:
            return [(0, a) for a in self.legal_positions(word)]
        out = []
        for a in self._candidate_anchors(word):
            k = self.fits(word, *a)
            if k > 0:
                out.append((k, a))
        return out

    def placeable(self, word: str) -> bool:
        """True if ``word`` has at least one legal position."""
        if word in self:
            return False
        if not self.placements:
            return len(word) <= max(self.rows, self.cols)
        key = ("placeable", word)
        hit = self._memo.get(key)
        if hit is None:
            fits = self.fits
            hit = self._memo[key] = any(fits(word, *a) > 0 for a in self._candidate_anchors(word))
        return hit

    def _victim_anchors(self, word: str) -> set[Anchor]:
        """Anchors that could become legal once a single word is removed.

        Adds parallel anchors through crossing cells to the usual
        perpendicular candidates: removing one of the two crossed words
        frees that direction.
        """
        found = set(self._candidate_anchors(word))
        cols = self.cols
        index = self._index
        across, down = self._across, self._down
        for k, ch in enumerate(word):
            for i in index.get(ch, ()):
                if across[i] != -1 and down[i] != -1:
                    r, c = divmod(i, cols)
                    found.add((r - k, c, DOWN))
                    found.add((r, c - k, ACROSS))
        return found

    def _resolvers(self, word: str, row: int, col: int, orientation: Orientation) -> set[int] | None:
        """Seqs of placements whose removal might make the anchor legal.

        A necessary condition only: every conflicting cell must change, and a
        cell changes only when a placement covering it goes away. Returns
        ``None`` if the anchor is already conflict-free and an empty set if
        no single removal can help (including out-of-bounds anchors).
        """
        rows, cols = self.rows, self.cols
        n = len(word)
        letters, across, down = self._letters, self._across, self._down
        if row < 0 or col < 0:
            return set()
        if orientation is ACROSS:
            if row >= rows or col + n > cols:
                return set()
            step, side, same = 1, cols, across
            has_prev, has_next = col > 0, col + n < cols
            side_lo, side_hi = row > 0, row < rows - 1
        else:
            if col >= cols or row + n > rows:
                return set()
            step, side, same = cols, 1, down
            has_prev, has_next = row > 0, row + n < rows
            side_lo, side_hi = col > 0, col < cols - 1
        cand: set[int] | None = None

        def clear(i: int) -> bool:
            # cell i must become empty: only possible if one word covers it
            nonlocal cand
            a, d = across[i], down[i]
            owners = {a} if d == -1 else ({d} if a == -1 else set())
            cand = owners if cand is None else cand & owners
            return bool(cand)

        def drop(owners: set[int]) -> bool:
            nonlocal cand
            cand = owners if cand is None else cand & owners
            return bool(cand)

        start = row * cols + col
        if has_prev and letters[start - step] and not clear(start - step):
            return set()
        if has_next and letters[start + n * step] and not clear(start + n * step):
            return set()
        i = start
        for ch in word:
            cur = letters[i]
            if cur:
                if cur != ch:
                    if not clear(i):
                        return set()
                elif same[i] != -1:
                    if not drop({same[i]}):
                        return set()
                else:
                    for j, ok in ((i - side, side_lo), (i + side, side_hi)):
                        if ok and across[j] != -1 and down[j] != -1 and not drop({across[j], down[j]}):
                            return set()
            else:
                for j, ok in ((i - side, side_lo), (i + side, side_hi)):
                    if ok and letters[j] and not clear(j):
                        return set()
            i += step
        return cand

    # -- operations ---------------------------------------------------------

    def write(self, word: str, row: int, col: int, orientation: Orientation | str) -> "Grid":
        """Return a new grid with ``word`` written at the anchor."""
        orientation = Orientation(orientation)
        word = check_word(word)
        if word in self:
            raise GridError(f"{word} already in grid")
        k = self.fits(word, row, col, orientation)
        if k < 0 or (k == 0 and self.placements):
            raise GridError(f"{word} cannot be written at {(row, col, orientation.value)}")
        g = self._copy()
        g._stamp(Placement(word, row, col, orientation, self._next_seq))
        return g

    def remove(self, word: str) -> "Grid":
        """Return a new grid without ``word``; crossing cells keep the other letter."""
        p = next((q for q in self.placements if q.word == word), None)
        if p is None:
            raise KeyError(f"{word} is not in the grid")
        g = self._copy()
        own, other = (g._across, g._down) if p.orientation is ACROSS else (g._down, g._across)
        for r, c in p.cells():
            i = r * self.cols + c
            own[i] = -1
            if other[i] == -1:
                g._letters[i] = ""
        g.placements = tuple(q for q in self.placements if q.word != word)
        return g

    def resize(self, rows: int, cols: int | None = None) -> "Grid":
        """Grow the grid; new rows/columns are added at the bottom/right."""
        cols = rows if cols is None else cols
        if rows < self.rows or cols < self.cols:
            raise GridError("resize cannot shrink a grid; use repack")
        if (rows, cols) == (self.rows, self.cols):
            return self
        return self.shifted(0, 0, rows, cols)

    def shifted(self, drow: int, dcol: int, rows: int | None = None,
                cols: int | None = None) -> "Grid":
        """Return the same placements offset by ``(drow, dcol)`` on a new canvas."""
        g = Grid(self.rows if rows is None else rows, self.cols if cols is None else cols)
        for p in self.placements:
            g._stamp(Placement(p.word, p.row + drow, p.col + dcol, p.orientation, p.seq))
        g._next_seq = self._next_seq
        return g

    def cropped(self) -> "Grid":
        """Smallest grid holding every placement, shifted to the origin."""
        if not self.placements:
            return self
        cells = [rc for p in self.placements for rc in p.cells()]
        r0 = min(r for r, _ in cells)
        c0 = min(c for _, c in cells)
        rows = max(r for r, _ in cells) - r0 + 1
        cols = max(c for _, c in cells) - c0 + 1
        return self.shifted(-r0, -c0, rows, cols)

    def repack(self, depth: int = 2) -> "Grid":
        """Move one empty boundary line to the opposite side.

        A side qualifies when its outermost line is all black, the opposite
        outermost line holds letters, and the move strictly reduces the
        difference in letters held by the outer ``depth`` lines of the two
        sides (so repeated calls terminate). Among qualifying sides the one
        with the fewest letters in its outer lines wins; ties go left, top,
        right, bottom.
        """
        if not self.placements:
            return self
        row_counts = [sum(1 for ch in self._letters[r * self.cols:(r + 1) * self.cols] if ch)
                      for r in range(self.rows)]
        col_counts = [sum(1 for r in range(self.rows) if self._letters[r * self.cols + c])
                      for c in range(self.cols)]
        # side: (lines from the boundary inward, opposite lines, shift)
        sides = [
            (col_counts, col_counts[::-1], (0, -1)),
            (row_counts, row_counts[::-1], (-1, 0)),
            (col_counts[::-1], col_counts, (0, 1)),
            (row_counts[::-1], row_counts, (1, 0)),
        ]
        best = None
        for rank, (lines, opposite, shift) in enumerate(sides):
            if lines[0] != 0 or opposite[0] == 0:
                continue
            weight = sum(lines[:depth])
            before = abs(weight - sum(opposite[:depth]))
            after = abs(sum(lines[1:depth + 1]) - sum([0, *opposite][:depth]))
            if after >= before:
                continue
            if best is None or weight < best[0]:
                best = (weight, rank, shift)
        if best is None:
            return self
        return self.shifted(*best[2])

    def utilization(self) -> float:
        """Fraction of cells holding a letter."""
        return self.letter_count() / (self.rows * self.cols)

    # -- serialisation ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "placements": [p.to_dict() for p in self.placements],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Grid":
        try:
            g = cls(int(data["rows"]), int(data["cols"]))
            for k, item in enumerate(data["placements"]):
                g._stamp(Placement(check_word(item["word"]), int(item["row"]), int(item["col"]),
                                   Orientation(item["orientation"]), k))
        except (KeyError, TypeError, ValueError) as exc:
            raise GridError(f"malformed grid: {exc}") from exc
        return g

    @classmethod
    def from_json(cls, text: str) -> "Grid":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GridError(f"malformed grid JSON: {exc}") from exc
        return cls.from_dict(data)


def _anchor_key(a: Anchor) -> tuple[int, int, int]:
    return (a[0], a[1], 0 if a[2] is ACROSS else 1)


def _runs(cells: dict[tuple[int, int], str], rows: int, cols: int) -> Iterator[Anchor]:
    """Maximal runs of 2+ letters as ``(row, col, orientation)`` with their text."""
    for r in range(rows):
        c = 0
        while c < cols:
            if (r, c) in cells:
                start = c
                while c < cols and (r, c) in cells:
                    c += 1
                if c - start >= 2:
                    yield (r, start, ACROSS, "".join(cells[(r, k)] for k in range(start, c)))
            c += 1
    for c in range(cols):
        r = 0
        while r < rows:
            if (r, c) in cells:
                start = r
                while r < rows and (r, c) in cells:
                    r += 1
                if r - start >= 2:
                    yield (start, c, DOWN, "".join(cells[(k, c)] for k in range(start, r)))
            r += 1


def violations(rows: int, cols: int, placements: Sequence[Placement],
               require_connected: bool = True) -> list[str]:
    """List every rule broken by ``placements`` on a ``rows x cols`` grid.

    Works from the placements alone, independently of :class:`Grid`
    internals, so it doubles as a brute-force oracle.
    """
    problems = []
    cells: dict[tuple[int, int], str] = {}
    cover: dict[tuple[int, int], list[Placement]] = {}
    words = [p.word for p in placements]
    if len(set(words)) != len(words):
        problems.append("duplicate words")
    for p in placements:
        for (r, c), ch in zip(p.cells(), p.word):
            if not (0 <= r < rows and 0 <= c < cols):
                problems.append(f"{p.word} out of bounds")
                break
            if cells.get((r, c), ch) != ch:
                problems.append(f"letter clash at {(r, c)}")
            cells[(r, c)] = ch
            cover.setdefault((r, c), []).append(p)
    runs = {(r, c, o, text) for r, c, o, text in _runs(cells, rows, cols)}
    placed = {(p.row, p.col, p.orientation, p.word) for p in placements}
    for extra in sorted(runs - placed, key=str):
        problems.append(f"stray run {extra[3]} at {extra[:2]}")
    for missing in sorted(placed - runs, key=str):
        problems.append(f"{missing[3]} is not a maximal run")
    crossing = {cell for cell, ps in cover.items() if len(ps) >= 2}
    for r, c in crossing:
        if (r, c + 1) in crossing or (r + 1, c) in crossing:
            problems.append(f"adjacent crossings at {(r, c)}")
    if require_connected and len(placements) >= 2:
        adj = {p.word: set() for p in placements}
        for ps in cover.values():
            for a in ps:
                for b in ps:
                    if a is not b:
                        adj[a.word].add(b.word)
        seen = {words[0]}
        stack = [words[0]]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) != len(adj):
            problems.append("disconnected")
    return problems
