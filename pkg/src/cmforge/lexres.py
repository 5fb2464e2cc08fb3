"""Lexical resources: translation lexicons, n-gram stores, transliteration.

Three independent stores back the mixing rules:

- :class:`LexTable` — per-source-word translation candidates with
  probabilities, truncated to the top-k most probable;
- :class:`NGramStore` — unigram/bigram frequencies with a Dice
  co-occurrence weight ``freq(x,y) / (freq(x)+freq(y))`` (as consumed by
  the disambiguation graph; the classical doubled variant sits behind a
  flag);
- :class:`TranslitTable` — an ordered greedy longest-match rule table
  mapping grapheme clusters to Latin strings, with zero built-in script
  knowledge.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import ResourceError

# ---------------------------------------------------------------------------
# lexical translation tables


@dataclass(frozen=True)
class LexTable:
    """Source word → candidate (target, p(tgt|src)) lists, best first."""

    forward: Mapping[str, tuple[tuple[str, float], ...]]
    top_k: int


def _fold(word: str) -> str:
    # lowercase folds Latin; Devanagari has no case and passes through
    return word.lower()


def lex_table_from_entries(
    entries: Iterable[tuple[str, str, float]], top_k: int = 5
) -> LexTable:
    """Build a LexTable from (src, tgt, prob) triples.

    Later duplicates of the same (src, tgt) pair win; candidate lists are
    sorted by probability descending (ties by target string) and cut to
    ``top_k``.
    """
    if top_k < 1:
        raise ValueError(f"top_k must be positive, got {top_k}")
    by_src: dict[str, dict[str, float]] = {}
    for src, tgt, prob in entries:
        by_src.setdefault(src, {})[tgt] = prob
    forward = {
        src: tuple(sorted(cands.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k])
        for src, cands in by_src.items()
    }
    return LexTable(forward=forward, top_k=top_k)


def load_lex_table(path: str | Path, top_k: int = 5) -> LexTable:
    """Read a 3-column TSV lexicon: src<TAB>tgt<TAB>prob."""
    path = Path(path)
    entries: list[tuple[str, str, float]] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ResourceError(f"{path}: line {lineno}: expected 3 columns, got {len(cols)}")
        try:
            prob = float(cols[2])
        except ValueError:
            raise ResourceError(f"{path}: line {lineno}: bad probability {cols[2]!r}") from None
        if not 0.0 < prob <= 1.0:
            raise ResourceError(f"{path}: line {lineno}: probability {prob} outside (0, 1]")
        src = unicodedata.normalize("NFC", cols[0])
        tgt = unicodedata.normalize("NFC", cols[1])
        entries.append((src, tgt, prob))
    return lex_table_from_entries(entries, top_k=top_k)


def dump_lex_table(table: LexTable) -> str:
    """Serialize a LexTable back to sorted TSV text."""
    lines = []
    for src in sorted(table.forward):
        for tgt, prob in table.forward[src]:
            lines.append(f"{src}\t{tgt}\t{prob!r}")
    return "\n".join(lines) + ("\n" if lines else "")


def translations_for(table: LexTable, word: str) -> list[tuple[str, float]]:
    """The stored candidate list for ``word`` (empty when absent)."""
    return list(table.forward.get(word, ()))


# ---------------------------------------------------------------------------
# n-gram stores and the Dice co-occurrence weight


@dataclass(frozen=True)
class NGramStore:
    """Case-folded unigram and bigram counts."""

    unigram: Mapping[str, int]
    bigram: Mapping[tuple[str, str], int]

    def unigram_count(self, word: str) -> int:
        return self.unigram.get(_fold(word), 0)

    def bigram_count(self, w1: str, w2: str) -> int:
        # order-insensitive: co-occurrence has no canonical direction
        a, b = _fold(w1), _fold(w2)
        return max(self.bigram.get((a, b), 0), self.bigram.get((b, a), 0))


def ngram_store_from_counts(
    unigram: Mapping[str, int], bigram: Mapping[tuple[str, str], int]
) -> NGramStore:
    """Build a store from in-memory counts (keys are case-folded here)."""
    uni: dict[str, int] = {}
    for w, c in unigram.items():
        key = _fold(unicodedata.normalize("NFC", w))
        uni[key] = uni.get(key, 0) + int(c)
    bi: dict[tuple[str, str], int] = {}
    for (w1, w2), c in bigram.items():
        key = (_fold(unicodedata.normalize("NFC", w1)), _fold(unicodedata.normalize("NFC", w2)))
        bi[key] = bi.get(key, 0) + int(c)
    return NGramStore(unigram=uni, bigram=bi)


def _parse_count(path: Path, lineno: int, text: str) -> int:
    try:
        count = int(text)
    except ValueError:
        raise ResourceError(f"{path}: line {lineno}: bad count {text!r}") from None
    if count < 1:
        raise ResourceError(f"{path}: line {lineno}: count must be >= 1, got {count}")
    return count


def load_ngrams(uni_path: str | Path, bi_path: str | Path, min_count: int = 1) -> NGramStore:
    """Read unigram "token<TAB>count" and bigram "tok1 tok2<TAB>count" TSVs.

    Duplicate entries are summed; entries below ``min_count`` are dropped
    after summing. All keys are NFC-normalized and case-folded.
    """
    uni_path, bi_path = Path(uni_path), Path(bi_path)
    uni: dict[str, int] = {}
    for lineno, line in enumerate(uni_path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ResourceError(f"{uni_path}: line {lineno}: expected 2 columns, got {len(cols)}")
        word = _fold(unicodedata.normalize("NFC", cols[0]))
        uni[word] = uni.get(word, 0) + _parse_count(uni_path, lineno, cols[1])
    bi: dict[tuple[str, str], int] = {}
    for lineno, line in enumerate(bi_path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ResourceError(f"{bi_path}: line {lineno}: expected 2 columns, got {len(cols)}")
        words = unicodedata.normalize("NFC", cols[0]).split()
        if len(words) != 2:
            raise ResourceError(f"{bi_path}: line {lineno}: expected 2 tokens, got {len(words)}")
        key = (_fold(words[0]), _fold(words[1]))
        bi[key] = bi.get(key, 0) + _parse_count(bi_path, lineno, cols[1])
    if min_count > 1:
        uni = {w: c for w, c in uni.items() if c >= min_count}
        bi = {k: c for k, c in bi.items() if c >= min_count}
    return NGramStore(unigram=uni, bigram=bi)


def dice(store: NGramStore, w1: str, w2: str, classical: bool = False) -> float:
    """Co-occurrence weight freq(w1,w2) / (freq(w1)+freq(w2)).

    Returns 0 when either unigram count is zero (so the denominator can
    never be). ``classical=True`` restores the conventional factor 2.
    """
    f1 = store.unigram_count(w1)
    f2 = store.unigram_count(w2)
    if f1 == 0 or f2 == 0:
        return 0.0
    f12 = store.bigram_count(w1, w2)
    num = 2 * f12 if classical else f12
    return num / (f1 + f2)


# ---------------------------------------------------------------------------
# table-driven transliteration


@dataclass(frozen=True)
class TranslitTable:
    """Ordered (source cluster → replacement) rules, greedy longest-match."""

    rules: tuple[tuple[str, str], ...]
    longest_first: bool = True

    def __post_init__(self) -> None:
        if not self.rules:
            raise ValueError("transliteration table has no rules")
        seen: set[str] = set()
        for src, _ in self.rules:
            if not src:
                raise ValueError("empty rule source")
            if src in seen:
                raise ValueError(f"duplicate rule source {src!r}")
            seen.add(src)


def load_translit_table(path: str | Path, longest_first: bool = True) -> TranslitTable:
    """Read "src<TAB>tgt" rule lines; tgt may be empty (deletion rule)."""
    path = Path(path)
    rules: list[tuple[str, str]] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ResourceError(f"{path}: line {lineno}: expected 2 columns, got {len(cols)}")
        src = unicodedata.normalize("NFC", cols[0])
        tgt = unicodedata.normalize("NFC", cols[1])
        if not src:
            raise ResourceError(f"{path}: line {lineno}: empty rule source")
        rules.append((src, tgt))
    try:
        return TranslitTable(rules=tuple(rules), longest_first=longest_first)
    except ValueError as exc:
        raise ResourceError(f"{path}: {exc}") from None


@lru_cache(maxsize=1)
def bundled_translit_table() -> TranslitTable:
    """The packaged Devanagari→Latin rule table."""
    with resources.as_file(resources.files("cmforge.data") / "translit_hi_latin.tsv") as p:
        return load_translit_table(p)


def transliterate(tab: TranslitTable, text: str) -> str:
    """Apply rules greedily left to right; unmatched characters pass through."""
    text = unicodedata.normalize("NFC", text)
    if tab.longest_first:
        by_len: dict[int, dict[str, str]] = {}
        for src, tgt in tab.rules:
            by_len.setdefault(len(src), {})[src] = tgt
        lengths = sorted(by_len, reverse=True)
    out: list[str] = []
    i = 0
    while i < len(text):
        matched: tuple[str, str] | None = None
        if tab.longest_first:
            for length in lengths:
                if length <= len(text) - i:
                    tgt = by_len[length].get(text[i : i + length])
                    if tgt is not None:
                        matched = (text[i : i + length], tgt)
                        break
        else:
            for src, tgt in tab.rules:
                if text.startswith(src, i):
                    matched = (src, tgt)
                    break
        if matched is None:
            out.append(text[i])
            i += 1
        else:
            out.append(matched[1])
            i += len(matched[0])
    return "".join(out)
