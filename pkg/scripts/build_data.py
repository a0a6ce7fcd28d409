"""Regenerate the bundled word list and dictionary.

Usage: python scripts/build_data.py WORDNET_DIR [--count 6000]

WORDNET_DIR holds the WordNet 3.0 ``data.noun``/``data.verb``/``data.adj``/
``data.adv`` files. Word frequency ordering comes from ``wordfreq``; neither
is needed at runtime.
"""

import argparse
import re
from collections import defaultdict
from pathlib import Path

import wordfreq

OUT = Path(__file__).resolve().parents[1] / "src" / "crossgen" / "data"
BLOCK = {"nigger", "nigga", "fuck", "fucking", "shit", "cunt", "bitch", "whore",
         "slut", "fag", "faggot", "dick", "cock", "pussy", "rape", "retard"}


def parse_wordnet(root: Path):
    defs = defaultdict(list)
    uses = defaultdict(list)
    for pos in ("noun", "verb", "adj", "adv"):
        for line in (root / f"data.{pos}").read_text(encoding="latin-1").splitlines():
            if line.startswith("  "):
                continue
            head, _, gloss = line.partition(" | ")
            fields = head.split()
            n = int(fields[3], 16)
            lemmas = [re.sub(r"\(.*\)$", "", fields[4 + 2 * k]) for k in range(n)]
            parts = [p.strip() for p in gloss.strip().split(";")]
            definition = "; ".join(p for p in parts if not p.startswith('"'))
            examples = [p.strip('"') for p in parts if p.startswith('"')]
            for lemma in lemmas:
                if not lemma.isalpha() or not lemma.islower():
                    continue
                if definition:
                    defs[lemma].append(definition)
                for ex in examples:
                    if re.search(rf"\b{lemma}\b", ex, re.IGNORECASE):
                        uses[lemma].append(ex)
    return defs, uses


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("wordnet_dir", type=Path)
    ap.add_argument("--count", type=int, default=6000)
    args = ap.parse_args()
    defs, uses = parse_wordnet(args.wordnet_dir)
    chosen = []
    for word in wordfreq.top_n_list("en", 200000):
        if len(chosen) >= args.count:
            break
        if not (word.isascii() and word.isalpha() and 3 <= len(word) <= 12):
            continue
        if word in BLOCK or word not in defs:
            continue
        safe = [d for d in defs[word] if word not in d.lower()]
        if not safe:
            continue
        chosen.append(word)
    chosen.sort()
    (OUT / "words.txt").write_text("".join(w.upper() + "\n" for w in chosen))
    rows = []
    for word in chosen:
        safe = [d for d in defs[word] if word not in d.lower()]
        ex = uses.get(word, [])
        for k in range(min(3, max(len(safe), len(ex)))):
            d = safe[k] if k < len(safe) else ""
            u = ex[k] if k < len(ex) else ""
            rows.append(f"{word.upper()}\t{d}\t{u}\n")
    (OUT / "dictionary.tsv").write_text("".join(rows), encoding="utf-8")
    print(len(chosen), "words,", len(rows), "dictionary lines")


if __name__ == "__main__":
    main()
