"""Candidate answer extraction, component scoring and ranking.

Factoid candidates are named-entity spans (or regex detections for
number/date-like types) pulled from annotated passage sentences;
descriptive candidates are the sentences themselves. Every candidate is
scored through five components — term coverage, proximity, n-gram
coverage, semantic similarity, pattern match — and ranked by a weighted
aggregate with separate factoid/descriptive weight vectors.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from . import CmforgeError, ResourceError
from .corpus import AnnotatedSentence, Token, bio_to_spans, tokenize
from .retrieval import EmbeddingLexicon, relevance

COMPONENTS = ("TCS", "PS", "NCS", "SSS", "PMS")

#: abbreviations that do not end a sentence when followed by "."
ABBREVIATIONS = frozenset(
    {"mr", "mrs", "ms", "dr", "prof", "st", "no", "vs", "etc", "eg", "ie", "fig", "approx", "jr", "sr"}
)
_SENTENCE_END = frozenset({".", "!", "?", "।"})


@dataclass(frozen=True)
class CandidateAnswer:
    text: str
    sentence_id: str
    passage_id: str
    ne_type: str | None = None
    component_scores: Mapping[str, float] = field(default_factory=dict)
    aggregate: float = 0.0


@dataclass(frozen=True)
class ScoringWeights:
    factoid: tuple[float, float, float, float] = (0.31, 0.18, 0.39, 0.12)
    descriptive: tuple[float, float, float, float, float] = (0.21, 0.09, 0.23, 0.19, 0.28)

    def __post_init__(self) -> None:
        if len(self.factoid) != 4 or len(self.descriptive) != 5:
            raise ValueError("factoid takes 4 weights, descriptive 5")
        if any(w < 0 for w in self.factoid + self.descriptive):
            raise ValueError("weights must be non-negative")


@dataclass(frozen=True)
class AnnotatedPassage:
    """A passage as an ordered list of annotated sentences."""

    id: str
    sentences: tuple[AnnotatedSentence, ...]


@dataclass(frozen=True)
class AnswerResult:
    """Ranked answers; descriptive questions also carry the assembled text."""

    answers: tuple[CandidateAnswer, ...]
    assembled: str | None = None
    no_answer: bool = False


# ---------------------------------------------------------------------------
# answer-type mapping and candidate extraction


def load_answer_types(path: str | Path) -> dict[str, dict[str, str]]:
    """Answer-type → extractor mapping: {"TYPE": {"ne": NE} | {"regex": pat}}."""
    path = Path(path)
    try:
        mapping = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ResourceError(f"{path}: bad JSON: {exc}") from None
    for key, entry in mapping.items():
        if not isinstance(entry, dict) or not ({"ne", "regex"} & entry.keys()):
            raise ResourceError(f"{path}: entry {key!r} needs an 'ne' or 'regex' field")
        if "regex" in entry:
            try:
                re.compile(entry["regex"])
            except re.error as exc:
                raise ResourceError(f"{path}: entry {key!r}: bad regex: {exc}") from None
    return {k.upper(): v for k, v in mapping.items()}


@lru_cache(maxsize=1)
def bundled_answer_types() -> dict[str, dict[str, str]]:
    with resources.as_file(resources.files("cmforge.data") / "answer_types.json") as p:
        return load_answer_types(p)


def _sentence_candidates(
    passage: AnnotatedPassage, k: int, sent: AnnotatedSentence,
    answer_type: str | None, qtype: str, type_map: Mapping[str, dict]
) -> list[CandidateAnswer]:
    sid = f"{passage.id}:{k}"
    if qtype == "descriptive":
        return [CandidateAnswer(text=sent.text(), sentence_id=sid, passage_id=passage.id)]
    entry = type_map[answer_type]
    out: list[CandidateAnswer] = []
    if "ne" in entry:
        surfaces = sent.surfaces()
        for s, e, typ in sent.ne_spans:
            if typ == entry["ne"]:
                out.append(
                    CandidateAnswer(
                        text=" ".join(surfaces[s:e]),
                        sentence_id=sid,
                        passage_id=passage.id,
                        ne_type=typ,
                    )
                )
    else:
        for match in re.finditer(entry["regex"], sent.text(), flags=re.IGNORECASE):
            out.append(
                CandidateAnswer(
                    text=match.group(0), sentence_id=sid, passage_id=passage.id
                )
            )
    return out


def extract_candidates(
    passages: Sequence[AnnotatedPassage],
    answer_type: str | None,
    qtype: str,
    type_map: Mapping[str, dict] | None = None,
) -> list[CandidateAnswer]:
    """Candidates in document order; sentence k of passage p is "p:k".

    Factoid questions need an answer type configured in the mapping;
    descriptive questions take every sentence as a candidate.
    """
    if qtype not in ("factoid", "descriptive"):
        raise ValueError(f"qtype must be factoid or descriptive, got {qtype!r}")
    if type_map is None:
        type_map = bundled_answer_types()
    if qtype == "factoid":
        if answer_type is None:
            raise CmforgeError(
                f"factoid extraction needs an answer type; configured: {sorted(type_map)}"
            )
        answer_type = answer_type.upper()
        if answer_type not in type_map:
            raise CmforgeError(
                f"unknown answer type {answer_type!r}; configured: {sorted(type_map)}"
            )
    out: list[CandidateAnswer] = []
    for passage in passages:
        for k, sent in enumerate(passage.sentences):
            out.extend(_sentence_candidates(passage, k, sent, answer_type, qtype, type_map))
    return out


def annotate_passage(
    passage_id: str,
    text: str,
    language: str = "en",
    ne_labels: Sequence[str] | None = None,
    pos_labels: Sequence[str] | None = None,
) -> AnnotatedPassage:
    """Tokenize, sentence-split and (optionally) NE/PoS-label a passage.

    Label sequences are BIO/PoS arrays aligned with the tokenization of
    the whole passage; they are sliced at sentence boundaries.
    """
    tokens = tokenize(text, language)
    for name, labels in (("ne", ne_labels), ("pos", pos_labels)):
        if labels is not None and len(labels) != len(tokens):
            raise ValueError(
                f"passage {passage_id}: {name} has {len(labels)} labels "
                f"for {len(tokens)} tokens"
            )
    sentences: list[AnnotatedSentence] = []
    offset = 0
    for sent_tokens in split_sentences(tokens):
        n = len(sent_tokens)
        pos = tuple(pos_labels[offset : offset + n]) if pos_labels else ("UNK",) * n
        spans: tuple = ()
        if ne_labels is not None:
            spans = tuple(bio_to_spans(ne_labels[offset : offset + n], typed=True))
        sentences.append(AnnotatedSentence(tokens=sent_tokens, pos=pos, ne_spans=spans))
        offset += n
    return AnnotatedPassage(id=passage_id, sentences=tuple(sentences))


def split_sentences(tokens: Sequence[Token]) -> list[tuple[Token, ...]]:
    """Split a token stream into sentences on . ! ? and the danda.

    A period after a known abbreviation or a single-letter initial does
    not split. Token indices restart at 0 in every sentence.
    """
    sentences: list[tuple[Token, ...]] = []
    cur: list[Token] = []
    for k, tok in enumerate(tokens):
        cur.append(Token(tok.surface, tok.lang, len(cur)))
        if tok.surface in _SENTENCE_END:
            prev = tokens[k - 1].surface if k > 0 else ""
            if tok.surface == "." and (
                prev.lower().rstrip(".") in ABBREVIATIONS
                or (len(prev) == 1 and prev.isalpha())
            ):
                continue
            sentences.append(tuple(cur))
            cur = []
    if cur:
        sentences.append(tuple(cur))
    return sentences


# ---------------------------------------------------------------------------
# pattern file


def load_patterns(path: str | Path) -> tuple[tuple[str, float], ...]:
    """Read "regex<TAB>weight" pattern lines; "<F>" marks the query slot."""
    path = Path(path)
    out: list[tuple[str, float]] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ResourceError(f"{path}: line {lineno}: expected 2 columns, got {len(cols)}")
        try:
            weight = float(cols[1])
        except ValueError:
            raise ResourceError(f"{path}: line {lineno}: bad weight {cols[1]!r}") from None
        try:
            re.compile(cols[0].replace("<F>", "x"))
        except re.error as exc:
            raise ResourceError(f"{path}: line {lineno}: bad regex: {exc}") from None
        out.append((cols[0], weight))
    return tuple(out)


@lru_cache(maxsize=1)
def bundled_patterns() -> tuple[tuple[str, float], ...]:
    with resources.as_file(resources.files("cmforge.data") / "answer_patterns.tsv") as p:
        return load_patterns(p)


def pattern_match_score(
    sentence_text: str, query_terms: Sequence[str], patterns: Sequence[tuple[str, float]]
) -> float:
    """Highest weight among patterns matching the sentence; 0 otherwise."""
    terms = [re.escape(t) for t in dict.fromkeys(q.lower() for q in query_terms)]
    if not terms:
        return 0.0
    slot = "(?:" + "|".join(terms) + ")"
    best = 0.0
    for pattern, weight in patterns:
        if re.search(pattern.replace("<F>", slot), sentence_text, flags=re.IGNORECASE):
            best = max(best, weight)
    return best


# ---------------------------------------------------------------------------
# component scoring


def _min_window(positions_by_term: list[list[int]]) -> int:
    # shortest token window covering at least one position of every term
    events = sorted(
        (pos, term_idx) for term_idx, positions in enumerate(positions_by_term) for pos in positions
    )
    need = len(positions_by_term)
    have: Counter = Counter()
    kinds = 0
    best = math.inf
    left = 0
    for right in range(len(events)):
        term = events[right][1]
        have[term] += 1
        if have[term] == 1:
            kinds += 1
        while kinds == need:
            best = min(best, events[right][0] - events[left][0] + 1)
            term_l = events[left][1]
            have[term_l] -= 1
            if have[term_l] == 0:
                kinds -= 1
            left += 1
    return int(best)


def _ngram_coverage(query: list[str], sent: list[str], n: int) -> float:
    total = len(query) - n + 1
    if total < 1:
        return 0.0
    q_counts = Counter(tuple(query[i : i + n]) for i in range(total))
    s_counts = Counter(tuple(sent[i : i + n]) for i in range(len(sent) - n + 1))
    common = sum(min(c, s_counts[g]) for g, c in q_counts.items())
    return common / total


def score_components(
    sentence_tokens: Sequence[str],
    query_terms: Sequence[str],
    idf: Mapping[str, float],
    default_idf: float,
    emb: EmbeddingLexicon | None = None,
    patterns: Sequence[tuple[str, float]] | None = None,
    max_ngram: int = 4,
) -> dict[str, float]:
    """The five per-sentence scores against a query.

    TCS: fraction of distinct query terms present. PS: present terms over
    the shortest window containing them all (0 when none). NCS: clipped
    n-gram coverage up to ``max_ngram``, divided by 1+2+..+max_ngram.
    SSS: relevance cosine clamped to [0, 1]. PMS: best matching pattern
    weight — only when a pattern set is supplied (descriptive questions).
    """
    if not query_terms:
        raise ValueError("empty query")
    query = [t.lower() for t in query_terms]
    sent = [t.lower() for t in sentence_tokens]
    distinct = list(dict.fromkeys(query))
    present = [t for t in distinct if t in set(sent)]

    tcs = len(present) / len(distinct)

    if present:
        positions = [[k for k, w in enumerate(sent) if w == t] for t in present]
        ps = len(present) / _min_window(positions)
    else:
        ps = 0.0

    cov = [_ngram_coverage(query, sent, n) for n in range(1, max_ngram + 1)]
    ncs = math.fsum(cov) / sum(range(1, max_ngram + 1))

    sss = max(0.0, relevance(query_terms, sentence_tokens, idf, default_idf, emb))

    pms = 0.0
    if patterns is not None:
        pms = pattern_match_score(" ".join(sentence_tokens), query_terms, patterns)

    return {"TCS": tcs, "PS": ps, "NCS": ncs, "SSS": sss, "PMS": pms}


def aggregate_score(
    components: Mapping[str, float], weights: ScoringWeights, qtype: str
) -> float:
    """Eq-weighted sum of the component scores for the question type."""
    if qtype == "factoid":
        w = weights.factoid
        keys = COMPONENTS[:4]
    elif qtype == "descriptive":
        w = weights.descriptive
        keys = COMPONENTS
    else:
        raise ValueError(f"qtype must be factoid or descriptive, got {qtype!r}")
    return sum(wk * components.get(key, 0.0) for wk, key in zip(w, keys))


def rank_answers(
    candidates: Sequence[CandidateAnswer],
    weights: ScoringWeights,
    qtype: str,
    tau: float = 0.9,
) -> AnswerResult:
    """Rank scored candidates.

    Factoid: all candidates ordered by aggregate (ties keep extraction
    order), best first. Descriptive: the top sentence plus every sentence
    scoring at least τ·max, assembled in document order (only the top one
    when the maximum is 0). Empty input gives an explicit no-answer.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    if not candidates:
        return AnswerResult(answers=(), assembled=None, no_answer=True)
    scored = [
        replace(c, aggregate=aggregate_score(c.component_scores, weights, qtype))
        for c in candidates
    ]
    if qtype == "factoid":
        order = sorted(range(len(scored)), key=lambda k: (-scored[k].aggregate, k))
        return AnswerResult(answers=tuple(scored[k] for k in order))
    best = max(c.aggregate for c in scored)
    if best > 0.0:
        chosen = [c for c in scored if c.aggregate >= tau * best]
    else:
        chosen = [scored[0]]
    return AnswerResult(
        answers=tuple(chosen),
        assembled=" ".join(c.text for c in chosen),
    )
