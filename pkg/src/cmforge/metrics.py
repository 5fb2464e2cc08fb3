"""Mixing-complexity and output-quality metrics.

Covers per-sentence/corpus mixing measures (CMI, SPF), translation
surface metrics (corpus BLEU with clipping and brevity penalty, ROUGE-L,
an exact-match METEOR variant), QA span metrics (normalized EM / bag-of-
tokens F1) and ranking metrics (P@k, R@k, MAP, MRR). All functions are
pure; corpus aggregation uses compensated summation.
"""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

from .mixer import TaggedSentence


@dataclass(frozen=True)
class MetricReport:
    """A named corpus-level score with its per-item breakdown."""

    name: str
    corpus_value: float
    per_item: tuple[tuple[str, float], ...] = ()
    params: Mapping[str, object] = field(default_factory=dict)


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else 0.0


# ---------------------------------------------------------------------------
# code-mixing complexity


def cmi(x: TaggedSentence, classic: bool = False) -> float:
    """Code-mixing index of one sentence, scaled to [0, 100).

    100·(N − max_lang)/N where max_lang is the largest per-language token
    count; "other"-tagged tokens count in N but belong to no language.
    A sentence with no language-tagged tokens scores 0. ``classic=True``
    removes "other" tokens from the denominator as well.
    """
    langs = [t.lang for t in x.tokens]
    n = len(langs)
    if n == 0:
        raise ValueError("empty sentence")
    counts = Counter(l for l in langs if l != "other")
    if not counts:
        return 0.0
    top = max(counts.values())
    if classic:
        content = sum(counts.values())
        return 100.0 * (content - top) / content
    return 100.0 * (n - top) / n


def spf(x: TaggedSentence) -> float:
    """Switch-point fraction: language switches per word boundary.

    Boundaries are counted between consecutive non-"other" tokens; fewer
    than two such tokens give 0.
    """
    langs = [t.lang for t in x.tokens if t.lang != "other"]
    if len(langs) < 2:
        return 0.0
    switches = sum(1 for a, b in zip(langs, langs[1:]) if a != b)
    return switches / (len(langs) - 1)


def cmi_corpus(sentences: Sequence[TaggedSentence], classic: bool = False) -> float:
    if not sentences:
        raise ValueError("empty corpus")
    return _mean([cmi(s, classic=classic) for s in sentences])


def spf_corpus(sentences: Sequence[TaggedSentence]) -> float:
    if not sentences:
        raise ValueError("empty corpus")
    return _mean([spf(s) for s in sentences])


# ---------------------------------------------------------------------------
# translation surface metrics


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _as_reference_sets(ref) -> list[list[str]]:
    # a single reference is a list of tokens; multi-reference a list of those
    if ref and isinstance(ref[0], (list, tuple)):
        return [list(r) for r in ref]
    return [list(ref)]


def bleu(
    candidates: Sequence[Sequence[str]],
    references: Sequence,
    n: int = 4,
    smooth: bool = False,
) -> float:
    """Corpus BLEU with modified (clipped) n-gram precision.

    ``references[i]`` is the token list for candidate i, or a list of
    several such lists. Geometric mean of orders 1..n with uniform
    weights; brevity penalty exp(1 − r/c) when c ≤ r (r picks, per item,
    the reference length closest to the candidate's, ties to the
    shorter). Any zero precision gives 0 unless ``smooth`` (add-one on
    orders ≥ 2).
    """
    if len(candidates) != len(references):
        raise ValueError(
            f"{len(candidates)} candidates vs {len(references)} references"
        )
    if not candidates:
        raise ValueError("empty corpus")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    matched = [0] * (n + 1)
    total = [0] * (n + 1)
    c_len = 0
    r_len = 0
    for cand, ref in zip(candidates, references):
        cand = list(cand)
        refs = _as_reference_sets(ref)
        if not refs or any(not r for r in refs):
            raise ValueError("empty reference")
        c_len += len(cand)
        r_len += min((abs(len(r) - len(cand)), len(r)) for r in refs)[1]
        for order in range(1, n + 1):
            cand_counts = _ngrams(cand, order)
            total[order] += sum(cand_counts.values())
            if not cand_counts:
                continue
            max_ref: Counter = Counter()
            for r in refs:
                for gram, cnt in _ngrams(r, order).items():
                    if cnt > max_ref[gram]:
                        max_ref[gram] = cnt
            matched[order] += sum(
                min(cnt, max_ref[gram]) for gram, cnt in cand_counts.items()
            )

    log_sum = 0.0
    orders_used = 0
    for order in range(1, n + 1):
        m, t = matched[order], total[order]
        if t == 0:
            # no candidate n-gram of this order exists anywhere: drop the
            # order rather than zeroing the whole corpus score
            continue
        if smooth and order >= 2:
            m, t = m + 1, t + 1
        if m == 0:
            return 0.0
        log_sum += math.log(m / t)
        orders_used += 1
    if c_len == 0 or orders_used == 0:
        return 0.0
    bp = 1.0 if c_len > r_len else math.exp(1.0 - r_len / c_len)
    return bp * math.exp(log_sum / orders_used)


class RougeScore(NamedTuple):
    precision: float
    recall: float
    f1: float


def _lcs_len(a: Sequence[str], b: Sequence[str]) -> int:
    # standard O(|a|·|b|) dynamic program, rolling row
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate: Sequence[str], reference: Sequence[str]) -> RougeScore:
    """ROUGE-L: precision/recall/F1 from the longest common subsequence."""
    if not reference:
        raise ValueError("empty reference")
    if not candidate:
        return RougeScore(0.0, 0.0, 0.0)
    lcs = _lcs_len(list(candidate), list(reference))
    p = lcs / len(candidate)
    r = lcs / len(reference)
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return RougeScore(p, r, f)


def _meteor_chunks(cand: list[str], ref: list[str]) -> tuple[int, int]:
    """Greedy longest-run alignment → (matched unigrams, chunk count)."""
    cand_free = [True] * len(cand)
    ref_free = [True] * len(ref)
    chunks = 0
    matches = 0
    while True:
        best_len, best = 0, None
        for i in range(len(cand)):
            for j in range(len(ref)):
                length = 0
                while (
                    i + length < len(cand)
                    and j + length < len(ref)
                    and cand_free[i + length]
                    and ref_free[j + length]
                    and cand[i + length] == ref[j + length]
                ):
                    length += 1
                if length > best_len:
                    best_len, best = length, (i, j)
        if best is None:
            return matches, chunks
        i, j = best
        for k in range(best_len):
            cand_free[i + k] = False
            ref_free[j + k] = False
        matches += best_len
        chunks += 1


def meteor_lite(
    candidate: Sequence[str],
    reference: Sequence[str],
    gamma: float = 0.5,
    beta: float = 3.0,
) -> float:
    """Exact-match METEOR: F_mean = 10PR/(9P+R) with fragmentation penalty.

    Unigrams match on case-folded surfaces only; the penalty is
    γ·(chunks/matches)^β over the greedy longest-run chunk alignment.
    """
    if not reference:
        raise ValueError("empty reference")
    cand = [t.lower() for t in candidate]
    ref = [t.lower() for t in reference]
    if not cand:
        return 0.0
    m, chunks = _meteor_chunks(cand, ref)
    if m == 0:
        return 0.0
    p = m / len(cand)
    r = m / len(ref)
    f_mean = 10 * p * r / (9 * p + r)
    penalty = gamma * (chunks / m) ** beta
    return f_mean * (1.0 - penalty)


# ---------------------------------------------------------------------------
# QA span metrics (normalized exact match and bag-of-tokens F1)


def normalize_answer(text: str) -> str:
    """Lowercase, strip punctuation and articles (a/an/the), squeeze spaces."""
    text = unicodedata.normalize("NFC", text).lower()
    text = "".join(c for c in text if not unicodedata.category(c).startswith("P"))
    tokens = [t for t in text.split() if t not in ("a", "an", "the")]
    return " ".join(tokens)


def em_score(prediction: str, golds: Sequence[str]) -> float:
    norm = normalize_answer(prediction)
    return 1.0 if any(norm == normalize_answer(g) for g in golds) else 0.0


def _f1_single(prediction: str, gold: str) -> float:
    pred = normalize_answer(prediction).split()
    gold_toks = normalize_answer(gold).split()
    if not pred or not gold_toks:
        return 1.0 if pred == gold_toks else 0.0
    common = sum((Counter(pred) & Counter(gold_toks)).values())
    if common == 0:
        return 0.0
    p = common / len(pred)
    r = common / len(gold_toks)
    return 2 * p * r / (p + r)


def f1_score(prediction: str, golds: Sequence[str]) -> float:
    return max(_f1_single(prediction, g) for g in golds) if golds else 0.0


def qa_span_metrics(
    predictions: Mapping[str, str], golds: Mapping[str, Sequence[str]]
) -> tuple[float, float]:
    """Corpus EM and F1 (means ×100) over the gold ids.

    A gold id with no prediction counts 0 for both metrics.
    """
    if not golds:
        raise ValueError("no gold records")
    ems = []
    f1s = []
    for qid, gold in golds.items():
        pred = predictions.get(qid)
        if pred is None:
            ems.append(0.0)
            f1s.append(0.0)
        else:
            ems.append(em_score(pred, gold))
            f1s.append(f1_score(pred, gold))
    return 100.0 * _mean(ems), 100.0 * _mean(f1s)


# ---------------------------------------------------------------------------
# ranking metrics


@dataclass(frozen=True)
class RankedList:
    """One query's ranking plus its relevant-item set."""

    query_id: str
    items: tuple[tuple[str, float], ...]
    relevant: frozenset[str]

    def __post_init__(self) -> None:
        scores = [s for _, s in self.items]
        if any(a < b for a, b in zip(scores, scores[1:])):
            raise ValueError(f"query {self.query_id}: scores increase down the ranking")


class RankMetrics(NamedTuple):
    p_at_k: float
    r_at_k: float
    map: float
    mrr: float


def rank_metrics(lists: Sequence[RankedList], k: int) -> RankMetrics:
    """P@k, R@k, MAP and MRR averaged over queries with relevant items.

    P@k divides by k even when fewer items were returned; AP divides by
    the full relevant-set size; reciprocal rank is 0 when no relevant
    item appears.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    p_list: list[float] = []
    r_list: list[float] = []
    ap_list: list[float] = []
    rr_list: list[float] = []
    for rl in lists:
        if not rl.relevant:
            continue
        ids = [item_id for item_id, _ in rl.items]
        top_hits = sum(1 for item_id in ids[:k] if item_id in rl.relevant)
        p_list.append(top_hits / k)
        r_list.append(top_hits / len(rl.relevant))
        hits = 0
        precisions = []
        for rank, item_id in enumerate(ids, 1):
            if item_id in rl.relevant:
                hits += 1
                precisions.append(hits / rank)
        ap_list.append(math.fsum(precisions) / len(rl.relevant))
        rr = 0.0
        for rank, item_id in enumerate(ids, 1):
            if item_id in rl.relevant:
                rr = 1.0 / rank
                break
        rr_list.append(rr)
    if not p_list:
        return RankMetrics(0.0, 0.0, 0.0, 0.0)
    return RankMetrics(_mean(p_list), _mean(r_list), _mean(ap_list), _mean(rr_list))
