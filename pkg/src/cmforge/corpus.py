"""Corpus loading, tokenization and per-token language tagging.

Everything downstream works on the types defined here: plain tokens,
parallel sentence pairs, PoS/NE/NP-annotated sentences and QA records.
All text is NFC-normalized on the way in; tokens never contain
whitespace, and pure punctuation / numeral tokens carry the reserved
language tag "other".
"""

from __future__ import annotations

import json
import math
import random
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import FormatError

Span = tuple[int, int]
NESpan = tuple[int, int, str]

NE_TYPES = frozenset({"PER", "LOC", "ORG", "OTHER"})

#: languages written in Devanagari / Latin script that we recognise as
#: plausible declarations; anything else falls back to "hi" / "en".
_DEVANAGARI_LANGS = frozenset({"hi", "mr", "ne", "sa", "bho", "mai", "awa"})
_LATIN_LANGS = frozenset(
    {
        "en", "de", "fr", "es", "pt", "it", "nl", "da", "sv", "nb",
        "fi", "ro", "ca", "pl", "cs", "hu", "tr", "id", "ms", "sw",
    }
)


def _is_punct_char(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def is_pure_punct(surface: str) -> bool:
    """True when every character is Unicode punctuation (category P*)."""
    return bool(surface) and all(_is_punct_char(c) for c in surface)


def detect_lang(surface: str, declared: str = "en") -> str:
    """Assign a language tag to one token from its script.

    Majority-Devanagari tokens map to the declared language if that is a
    Devanagari-script language, else "hi"; majority-Latin tokens map to the
    declared language if Latin-script, else "en". Tokens without letters
    (digits, punctuation) are "other"; other scripts trust the declaration.
    """
    declared = declared.lower()
    letters = [c for c in surface if c.isalpha()]
    if not letters:
        return "other"
    deva = latin = 0
    for c in letters:
        name = unicodedata.name(c, "")
        if name.startswith("DEVANAGARI"):
            deva += 1
        elif name.startswith("LATIN"):
            latin += 1
    if deva * 2 >= len(letters) and deva >= latin:
        return declared if declared in _DEVANAGARI_LANGS else "hi"
    if latin * 2 >= len(letters):
        return declared if declared in _LATIN_LANGS else "en"
    return declared


@dataclass(frozen=True)
class Token:
    """One surface token. ``lang`` is "other" for punctuation/numerals."""

    surface: str
    lang: str
    index: int

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("empty token surface")
        if any(c.isspace() for c in self.surface):
            raise ValueError(f"token surface contains whitespace: {self.surface!r}")


def _split_punct(chunk: str) -> list[str]:
    # peel leading/trailing punctuation characters off as 1-char tokens;
    # internal punctuation ("India's", "7,238") stays attached
    lead: list[str] = []
    while len(chunk) > 1 and _is_punct_char(chunk[0]):
        lead.append(chunk[0])
        chunk = chunk[1:]
    trail: list[str] = []
    while len(chunk) > 1 and _is_punct_char(chunk[-1]):
        trail.append(chunk[-1])
        chunk = chunk[:-1]
    return lead + [chunk] + trail[::-1]


def tokenize(text: str, lang: str = "en") -> list[Token]:
    """Whitespace tokenizer with punctuation detachment.

    NFC-normalizes first, splits on Unicode whitespace, then peels leading
    and trailing punctuation (Unicode category P, which includes the
    Devanagari danda) into single-character tokens. Joining the surfaces
    with single spaces and re-tokenizing reproduces the same surfaces.
    """
    text = unicodedata.normalize("NFC", text)
    out: list[Token] = []
    for chunk in text.split():
        for piece in _split_punct(chunk):
            out.append(Token(piece, detect_lang(piece, lang), len(out)))
    return out


def surfaces(tokens: Sequence[Token]) -> list[str]:
    return [t.surface for t in tokens]


def render_tokens(token_surfaces: Sequence[str]) -> str:
    """Join tokens for display, re-attaching punctuation.

    Pure-punctuation tokens glue onto the preceding token ("tha ?" →
    "tha?"); opening brackets and initial quotes glue onto the following
    one. The canonical machine form remains the plain space-join.
    """
    parts: list[str] = []
    attach_next = False
    for s in token_surfaces:
        opening = is_pure_punct(s) and unicodedata.category(s[0]) in ("Ps", "Pi")
        closing = is_pure_punct(s) and not opening
        if parts and (attach_next or closing):
            parts[-1] += s
        else:
            parts.append(s)
        attach_next = opening
    return " ".join(parts)


@dataclass(frozen=True)
class ParallelPair:
    """A tokenized source sentence and its target-language counterpart."""

    id: str
    source: tuple[Token, ...]
    target: tuple[Token, ...]

    def __post_init__(self) -> None:
        if not self.source or not self.target:
            raise ValueError(f"pair {self.id}: empty side")


def load_parallel(path: str | Path, src_lang: str = "en", tgt_lang: str = "hi") -> list[ParallelPair]:
    """Read a UTF-8 TSV parallel corpus, one "source<TAB>target" per line.

    Blank lines are skipped; line k (1-based) becomes the pair with id
    str(k). A line without exactly one TAB is a format error.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8: {exc}") from None
    pairs: list[ParallelPair] = []
    for lineno, line in enumerate(raw.splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise FormatError(f"{path}: line {lineno}: expected 2 fields, got {len(fields)}")
        src = tokenize(fields[0], src_lang)
        tgt = tokenize(fields[1], tgt_lang)
        if not src or not tgt:
            raise FormatError(f"{path}: line {lineno}: empty side after tokenization")
        pairs.append(ParallelPair(str(lineno), tuple(src), tuple(tgt)))
    return pairs


def _check_spans(spans: Iterable[tuple], n: int, label: str) -> None:
    seen: list[Span] = []
    for sp in spans:
        start, end = sp[0], sp[1]
        if not (0 <= start < end <= n):
            raise ValueError(f"{label} span {sp} out of bounds for {n} tokens")
        for s0, e0 in seen:
            if start < e0 and s0 < end:
                raise ValueError(f"{label} spans overlap: {sp} vs ({s0}, {e0})")
        seen.append((start, end))


@dataclass(frozen=True)
class AnnotatedSentence:
    """Tokens plus aligned PoS labels, NE spans and noun-phrase spans."""

    tokens: tuple[Token, ...]
    pos: tuple[str, ...]
    ne_spans: tuple[NESpan, ...] = ()
    np_spans: tuple[Span, ...] = ()

    def __post_init__(self) -> None:
        if len(self.pos) != len(self.tokens):
            raise ValueError(
                f"{len(self.pos)} PoS labels for {len(self.tokens)} tokens"
            )
        _check_spans(self.ne_spans, len(self.tokens), "NE")
        _check_spans(self.np_spans, len(self.tokens), "NP")
        for _s, _e, typ in self.ne_spans:
            if typ not in NE_TYPES:
                raise ValueError(f"unknown NE type {typ!r}")

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    def ne_type_at(self, index: int) -> str | None:
        for s, e, typ in self.ne_spans:
            if s <= index < e:
                return typ
        return None


def bio_to_spans(labels: Sequence[str], typed: bool = True) -> list:
    """Decode BIO labels ("B-PER", "I-PER", "O"; bare "B"/"I" allowed).

    Returns [(start, end, type)] when ``typed`` else [(start, end)].
    An I- continuing nothing, or continuing a different type, is an error.
    """
    spans: list = []
    open_start: int | None = None
    open_type = ""

    def close(end: int) -> None:
        nonlocal open_start
        if open_start is not None:
            spans.append((open_start, end, open_type) if typed else (open_start, end))
            open_start = None

    for i, lab in enumerate(labels):
        if lab == "O":
            close(i)
        elif lab.startswith("B"):
            close(i)
            open_start, open_type = i, lab[2:] if len(lab) > 1 else ""
        elif lab.startswith("I"):
            typ = lab[2:] if len(lab) > 1 else ""
            if open_start is None or typ != open_type:
                raise FormatError(f"token {i}: {lab} without matching B-{typ}")
        else:
            raise FormatError(f"token {i}: bad BIO label {lab!r}")
    close(len(labels))
    return spans


def spans_to_bio(spans: Iterable[tuple], n: int) -> list[str]:
    """Encode (start, end[, type]) spans as BIO labels over n tokens."""
    labels = ["O"] * n
    for sp in spans:
        start, end = sp[0], sp[1]
        typ = f"-{sp[2]}" if len(sp) > 2 and sp[2] else ""
        labels[start] = f"B{typ}"
        for i in range(start + 1, end):
            labels[i] = f"I{typ}"
    return labels


def load_annotations(path: str | Path, lang: str = "en") -> list[AnnotatedSentence]:
    """Read CoNLL-style annotations: token<TAB>pos<TAB>ne-BIO<TAB>np-BIO.

    Blank lines separate sentences. Column count other than 4, or an
    inconsistent BIO sequence, is a format error naming the line.
    """
    path = Path(path)
    try:
        raw = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not valid UTF-8: {exc}") from None

    sentences: list[AnnotatedSentence] = []
    rows: list[tuple[list[str], int]] = []

    def flush() -> None:
        if not rows:
            return
        toks: list[Token] = []
        pos: list[str] = []
        ne_labels: list[str] = []
        np_labels: list[str] = []
        for cols, lineno in rows:
            surface = unicodedata.normalize("NFC", cols[0])
            if not surface or any(c.isspace() for c in surface):
                raise FormatError(f"{path}: line {lineno}: bad token {cols[0]!r}")
            toks.append(Token(surface, detect_lang(surface, lang), len(toks)))
            pos.append(cols[1])
            ne_labels.append(cols[2])
            np_labels.append(cols[3])
        first_line = rows[0][1]
        try:
            ne = bio_to_spans(ne_labels, typed=True)
            np = bio_to_spans(np_labels, typed=False)
            sent = AnnotatedSentence(tuple(toks), tuple(pos), tuple(ne), tuple(np))
        except (FormatError, ValueError) as exc:
            raise FormatError(f"{path}: sentence at line {first_line}: {exc}") from None
        sentences.append(sent)
        rows.clear()

    for lineno, line in enumerate(raw.splitlines(), 1):
        if not line.strip():
            flush()
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise FormatError(
                f"{path}: line {lineno}: expected 4 tab-separated columns, got {len(cols)}"
            )
        rows.append((cols, lineno))
    flush()
    return sentences


@dataclass(frozen=True)
class QARecord:
    """One question with its gold answers and supporting passage ids."""

    id: str
    question: AnnotatedSentence
    language: str
    qtype: str
    answers: tuple[str, ...]
    passage_ids: tuple[str, ...] = ()
    answer_type: str | None = None

    def __post_init__(self) -> None:
        if self.qtype not in ("factoid", "descriptive"):
            raise ValueError(f"record {self.id}: bad qtype {self.qtype!r}")


def load_qa_records(
    path: str | Path, require_answers: bool = False
) -> list[QARecord]:
    """Read QA records from JSON-lines.

    Required fields: id, question (string), language, qtype; optional:
    answers (list of strings), passage_ids, answer_type, and BIO arrays
    pos/ne/np aligned with the tokenized question.
    """
    path = Path(path)
    records: list[QARecord] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: line {lineno}: bad JSON: {exc}") from None
        try:
            lang = str(obj["language"])
            toks = tuple(tokenize(str(obj["question"]), lang))
            n = len(toks)
            pos = tuple(obj.get("pos", ["UNK"] * n))
            if len(pos) != n:
                raise FormatError(f"{len(pos)} pos labels for {n} tokens")
            ne = tuple(bio_to_spans(obj.get("ne", ["O"] * n), typed=True))
            np = tuple(bio_to_spans(obj.get("np", ["O"] * n), typed=False))
            question = AnnotatedSentence(toks, tuple(str(p) for p in pos), ne, np)
            answers = tuple(str(a) for a in obj.get("answers", []))
            if require_answers and not answers:
                raise FormatError("no gold answers")
            rec = QARecord(
                id=str(obj["id"]),
                question=question,
                language=lang,
                qtype=str(obj["qtype"]),
                answers=answers,
                passage_ids=tuple(str(p) for p in obj.get("passage_ids", [])),
                answer_type=(None if obj.get("answer_type") in (None, "") else str(obj["answer_type"])),
            )
        except KeyError as exc:
            raise FormatError(f"{path}: line {lineno}: missing field {exc}") from None
        except (FormatError, ValueError) as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from None
        records.append(rec)
    return records


def split_dataset(
    records: Sequence, ratios: tuple[float, float, float], seed: int
) -> tuple[list, list, list]:
    """Deterministic three-way split with largest-remainder sizing.

    The three parts partition the input; within each part the original
    order is kept. Fewer than 3 records cannot populate 3 parts.
    """
    if len(records) < 3:
        raise ValueError(f"need at least 3 records to split, got {len(records)}")
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ValueError(f"ratios must be 3 positive numbers, got {ratios!r}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {sum(ratios)!r}")

    n = len(records)
    exact = [r * n for r in ratios]
    sizes = [math.floor(x) for x in exact]
    # hand out the remainder by largest fractional part, earlier part first
    order = sorted(range(3), key=lambda i: (-(exact[i] - sizes[i]), i))
    for i in range(n - sum(sizes)):
        sizes[order[i % 3]] += 1

    idx = list(range(n))
    random.Random(seed).shuffle(idx)
    parts: list[list] = []
    at = 0
    for size in sizes:
        chosen = sorted(idx[at : at + size])
        parts.append([records[i] for i in chosen])
        at += size
    return parts[0], parts[1], parts[2]
