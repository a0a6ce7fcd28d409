"""Vocabulary files and the bundled word list."""

from __future__ import annotations

import random
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .ranking import make_vocabulary


def load_vocabulary(path: str | Path) -> list[str]:
    """One word per line; blank lines and ``#`` comments are ignored."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return make_vocabulary([ln for ln in lines if ln.strip() and not ln.lstrip().startswith("#")])


@lru_cache(maxsize=1)
def bundled_words() -> tuple[str, ...]:
    text = (resources.files("crossgen") / "data" / "words.txt").read_text(encoding="utf-8")
    return tuple(w for w in text.split() if w)


def sample_vocabulary(size: int, seed: int, max_len: int | None = None,
                      min_len: int = 3) -> list[str]:
    """``size`` distinct bundled words drawn with ``random.Random(seed)``."""
    pool = [w for w in bundled_words() if len(w) >= min_len and (max_len is None or len(w) <= max_len)]
    if size > len(pool):
        raise ValueError(f"only {len(pool)} bundled words satisfy the length limits")
    return random.Random(seed).sample(pool, size)
