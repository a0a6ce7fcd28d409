"""Word ranking: letter intersections, pebble-and-sand, and permutation distance."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .grid import check_word

__all__ = [
    "Strategy",
    "Order",
    "RankVector",
    "make_vocabulary",
    "intersection_count",
    "intersection_matrix",
    "letter_rank",
    "pebble_sand_rank",
    "rank",
    "sorted_list",
    "ps_distance",
    "rank_csv",
]


class Strategy(str, Enum):
    LETTER_INTERSECTIONS = "letter"
    PEBBLE_SAND = "pebble"


class Order(str, Enum):
    ASC = "asc"
    DESC = "desc"


@dataclass(frozen=True)
class RankVector:
    words: tuple[str, ...]
    scores: tuple[float, ...]
    strategy: Strategy

    def __getitem__(self, word: str) -> float:
        return self.scores[self.words.index(word)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.words, self.scores))


def make_vocabulary(words: Sequence[str]) -> list[str]:
    """Validate and uppercase ``words``, rejecting duplicates."""
    vocab = []
    seen = set()
    for raw in words:
        w = check_word(raw)
        if w in seen:
            raise ValueError(f"duplicate word {w}")
        seen.add(w)
        vocab.append(w)
    if not vocab:
        raise ValueError("empty vocabulary")
    return vocab


def intersection_count(a: str, b: str) -> int:
    """Number of distinct letters the two words share."""
    return len(set(a) & set(b))


def intersection_matrix(vocab: Sequence[str]) -> list[list[int]]:
    """Pairwise distinct shared-letter counts; the diagonal is zero."""
    sets = [set(w) for w in vocab]
    n = len(vocab)
    return [[0 if i == j else len(sets[i] & sets[j]) for j in range(n)] for i in range(n)]


def letter_rank(vocab: Sequence[str]) -> RankVector:
    """Score each word by its total shared-letter count with all other words."""
    m = intersection_matrix(vocab)
    return RankVector(tuple(vocab), tuple(float(sum(row)) for row in m),
                      Strategy.LETTER_INTERSECTIONS)


def pebble_sand_rank(vocab: Sequence[str]) -> RankVector:
    """Score each word by the share of the vocabulary it intersects.

    The denominator is the whole vocabulary, the word itself included.
    """
    m = intersection_matrix(vocab)
    n = len(vocab)
    scores = tuple(sum(1 for v in row if v > 0) / n for row in m)
    return RankVector(tuple(vocab), scores, Strategy.PEBBLE_SAND)


def rank(vocab: Sequence[str], strategy: Strategy | str = Strategy.PEBBLE_SAND) -> RankVector:
    strategy = Strategy(strategy)
    if strategy is Strategy.PEBBLE_SAND:
        return pebble_sand_rank(vocab)
    return letter_rank(vocab)


def sorted_list(vocab: Sequence[str], ranks: RankVector, order: Order | str = Order.ASC) -> list[str]:
    """Stable sort of ``vocab`` by score; ties keep vocabulary order."""
    order = Order(order)
    score = ranks.as_dict()
    missing = [w for w in vocab if w not in score]
    if missing:
        raise ValueError(f"no rank for {missing}")
    sign = 1 if order is Order.ASC else -1
    return sorted(vocab, key=lambda w: sign * score[w])


def ps_distance(perm: Sequence[str], best: Sequence[str]) -> float:
    """Normalised displacement of ``perm`` from ``best``.

    The normaliser is the displacement of the reversed ``best``, so the
    reversal scores exactly 1 and ``best`` itself 0.
    """
    if len(perm) != len(best) or set(perm) != set(best) or len(set(best)) != len(best):
        raise ValueError("permutations must cover the same distinct words")
    if len(best) < 2:
        raise ValueError("distance needs at least two words")
    n = len(best)
    pos_best = {w: i for i, w in enumerate(best)}
    num = sum(abs(i - pos_best[w]) for i, w in enumerate(perm))
    den = sum(abs((n - 1 - i) - i) for i in range(n))
    return num / den


def rank_csv(vocab: Sequence[str], strategy: Strategy | str = Strategy.PEBBLE_SAND,
             order: Order | str = Order.ASC) -> str:
    """Intersection matrix, scores and sorted position as CSV text."""
    vocab = list(vocab)
    m = intersection_matrix(vocab)
    ranks = rank(vocab, strategy)
    position = {w: k for k, w in enumerate(sorted_list(vocab, ranks, order))}
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["word", *vocab, "score", "position"])
    for w, row in zip(vocab, m):
        cells = ["-" if v == w else row[j] for j, v in enumerate(vocab)]
        out.writerow([w, *cells, f"{ranks[w]:.6g}", position[w]])
    return buf.getvalue()
