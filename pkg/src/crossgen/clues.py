"""Clues from a dictionary file: verbatim definitions or blanked usages."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping

from .grid import ACROSS, Grid, GridError, Orientation, check_word

log = logging.getLogger(__name__)

__all__ = [
    "ClueKind",
    "DictionaryEntry",
    "Clue",
    "CluedPuzzle",
    "DictionaryError",
    "MissingEntriesError",
    "load_dictionary",
    "bundled_dictionary",
    "blank_usage",
    "make_clue",
    "number_grid",
    "clue_puzzle",
]


class DictionaryError(ValueError):
    pass


class MissingEntriesError(KeyError):
    def __init__(self, words):
        self.words = sorted(words)
        super().__init__(f"no dictionary entry for: {', '.join(self.words)}")

    def __str__(self) -> str:
        return self.args[0]


class ClueKind(str, Enum):
    DEFINITION = "DEFINITION"
    USAGE_BLANK = "USAGE_BLANK"


@dataclass
class DictionaryEntry:
    word: str
    definitions: list[str] = field(default_factory=list)
    usages: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Clue:
    word: str
    text: str
    kind: ClueKind
    number: int = 0
    direction: Orientation = ACROSS


def _mentions(word: str, text: str) -> bool:
    return re.search(rf"\b{word}\b", text, re.IGNORECASE) is not None


def _leaks(word: str, text: str) -> bool:
    return word.lower() in text.lower()


def load_dictionary(source: str | Path) -> dict[str, DictionaryEntry]:
    """Read a ``WORD<TAB>definition<TAB>usage`` file.

    Repeated headwords merge in file order. Definitions that mention the
    headword and usages that do not are dropped; malformed lines are skipped
    with a warning.
    """
    try:
        text = Path(source).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DictionaryError(f"cannot read dictionary {source}: {exc}") from exc
    entries: dict[str, DictionaryEntry] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2 or len(parts) > 3:
            log.warning("%s:%d: expected 2 or 3 tab-separated fields", source, lineno)
            continue
        try:
            word = check_word(parts[0])
        except GridError:
            log.warning("%s:%d: bad headword %r", source, lineno, parts[0])
            continue
        definition = parts[1].strip()
        usage = parts[2].strip() if len(parts) == 3 else ""
        entry = entries.setdefault(word, DictionaryEntry(word))
        if definition and not _mentions(word, definition):
            entry.definitions.append(definition)
        if usage and _mentions(word, usage):
            entry.usages.append(usage)
    if not entries:
        raise DictionaryError(f"dictionary {source} has no entries")
    return entries


def bundled_dictionary() -> dict[str, DictionaryEntry]:
    """The WordNet-derived dictionary shipped with the package."""
    with resources.as_file(resources.files("crossgen") / "data" / "dictionary.tsv") as path:
        return load_dictionary(path)


def blank_usage(word: str, text: str) -> str:
    """Replace each whole-word occurrence of ``word`` with one ``_`` per letter."""
    return re.sub(rf"\b{word}\b", "_" * len(word), text, flags=re.IGNORECASE)


def make_clue(word: str, entry: DictionaryEntry,
              prefer: ClueKind | str = ClueKind.DEFINITION) -> Clue:
    """Clue for ``word``, falling back to the other kind when needed.

    Candidates that would still reveal the answer as a substring are skipped.
    """
    prefer = ClueKind(prefer)
    definitions = [d for d in entry.definitions if not _leaks(word, d)]
    usages = [u for u in (blank_usage(word, u) for u in entry.usages) if not _leaks(word, u)]
    options = {ClueKind.DEFINITION: definitions, ClueKind.USAGE_BLANK: usages}
    other = ClueKind.USAGE_BLANK if prefer is ClueKind.DEFINITION else ClueKind.DEFINITION
    for kind in (prefer, other):
        if options[kind]:
            return Clue(word, options[kind][0], kind)
    raise DictionaryError(f"no usable clue text for {word}")


def number_grid(grid: Grid) -> dict[tuple[int, int], int]:
    """Standard numbering: word-start cells numbered in row-major order."""
    starts = sorted({(p.row, p.col) for p in grid.placements})
    return {cell: k for k, cell in enumerate(starts, 1)}


@dataclass
class CluedPuzzle:
    grid: Grid
    clues: list[Clue]

    @property
    def numbers(self) -> dict[tuple[int, int], int]:
        return number_grid(self.grid)

    def across(self) -> list[Clue]:
        return [c for c in self.clues if c.direction is ACROSS]

    def down(self) -> list[Clue]:
        return [c for c in self.clues if c.direction is not ACROSS]

    def to_dict(self) -> dict:
        numbers = self.numbers
        by_word = {p.word: p for p in self.grid.placements}
        return {
            "grid": {
                "rows": self.grid.rows,
                "cols": self.grid.cols,
                "cells": [row.translate(_HIDE) for row in self.grid.cell_rows()],
                "numbers": [{"number": n, "row": r, "col": c} for (r, c), n in numbers.items()],
            },
            "clues": [
                {
                    "number": c.number,
                    "direction": c.direction.value,
                    "text": c.text,
                    "kind": c.kind.value,
                    "row": by_word[c.word].row,
                    "col": by_word[c.word].col,
                    "length": len(c.word),
                }
                for c in self.clues
            ],
            "solution": self.grid.to_dict(),
        }

    def sheet(self) -> str:
        """Printable unsolved grid followed by the ACROSS and DOWN lists."""
        numbers = self.numbers
        lines = []
        for r in range(self.grid.rows):
            cells = []
            for c in range(self.grid.cols):
                if not self.grid.letter(r, c):
                    cells.append(" ##")
                elif (r, c) in numbers:
                    cells.append(f"{numbers[(r, c)]:>3}")
                else:
                    cells.append("  .")
            lines.append("".join(cells))
        for title, group in (("ACROSS", self.across()), ("DOWN", self.down())):
            lines += ["", title]
            lines += [f"{c.number:>3}. {c.text} ({len(c.word)})" for c in group]
        return "\n".join(lines) + "\n"


_HIDE = str.maketrans({chr(c): "." for c in range(ord("A"), ord("Z") + 1)})


def clue_puzzle(grid: Grid, dictionary: Mapping[str, DictionaryEntry],
                prefer: ClueKind | str = ClueKind.DEFINITION) -> CluedPuzzle:
    """Number ``grid`` and attach one clue per placement."""
    missing = [p.word for p in grid.placements if p.word not in dictionary]
    if missing:
        raise MissingEntriesError(missing)
    numbers = number_grid(grid)
    clues = []
    for p in sorted(grid.placements, key=lambda p: (p.orientation is not ACROSS, numbers[(p.row, p.col)])):
        base = make_clue(p.word, dictionary[p.word], prefer)
        clues.append(Clue(p.word, base.text, base.kind, numbers[(p.row, p.col)], p.orientation))
    return CluedPuzzle(grid, clues)
