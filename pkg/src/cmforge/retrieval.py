"""Passage indexing, BM25 retrieval, and biased snippet ranking.

The passage store is indexed at passage level into an inverted index
(lowercased terms, stopwords and punctuation dropped). Retrieval is a
Boolean OR prefilter followed by BM25 (k1=1.2, b=0.75). Snippet ranking
runs a query-biased random walk over the sentence-relevance graph: with
bias strength d, p(s|q) = d·b(s) + (1−d)·Σ_v A[s,v]·p(v), where the bias
b normalizes question relevance over all sentences and each column of A
normalizes relevance over the other sentences (no self-transitions).
Relevance itself is the cosine of tf·idf-weighted vectors — one-hot by
default, summed word embeddings when a lexicon is supplied.
"""

from __future__ import annotations

import json
import math
import struct
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import FormatError, ResourceError
from .corpus import AnnotatedSentence, is_pure_punct, tokenize

BM25_K1 = 1.2
BM25_B = 0.75

#: PoS prefixes counted as content words during query formulation
_CONTENT_POS_PREFIXES = ("NN", "VB", "JJ", "NOUN", "VERB", "ADJ", "NST", "PROPN")


# ---------------------------------------------------------------------------
# passages and stopwords


@dataclass(frozen=True)
class Passage:
    id: str
    article_id: str
    text: str
    language: str


def load_passages(path: str | Path) -> list[Passage]:
    """Read passages from JSON-lines {id, article_id, text, language}."""
    path = Path(path)
    out: list[Passage] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            out.append(
                Passage(
                    id=str(obj["id"]),
                    article_id=str(obj.get("article_id", obj["id"])),
                    text=str(obj["text"]),
                    language=str(obj.get("language", "en")),
                )
            )
        except (json.JSONDecodeError, KeyError) as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from None
    return out


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


@lru_cache(maxsize=None)
def bundled_stopwords(langs: tuple[str, ...] = ("en", "hi")) -> frozenset[str]:
    words: set[str] = set()
    for lang in langs:
        with resources.as_file(resources.files("cmforge.data") / f"stopwords_{lang}.txt") as p:
            words |= load_stopwords(p)
    return frozenset(words)


# ---------------------------------------------------------------------------
# inverted index + BM25


@dataclass(frozen=True)
class PassageIndex:
    postings: Mapping[str, tuple[tuple[str, int], ...]]
    doc_len: Mapping[str, int]
    df: Mapping[str, int]
    n_docs: int
    avg_len: float
    stopwords: frozenset[str]

    def idf(self, term: str) -> float:
        d = self.df.get(term.lower(), 0)
        return math.log((self.n_docs - d + 0.5) / (d + 0.5) + 1.0)

    def relevance_idf(self) -> tuple[dict[str, float], float]:
        """Eq-style idf table ln((N+1)/(df+1)) with unseen default ln(N+1)."""
        table = {
            t: math.log((self.n_docs + 1) / (d + 1)) for t, d in self.df.items()
        }
        return table, math.log(self.n_docs + 1)


def index_terms(text: str, language: str, stopwords: frozenset[str]) -> list[str]:
    """Lowercased indexable terms of a passage (no stopwords/punctuation)."""
    terms = []
    for tok in tokenize(text, language):
        low = tok.surface.lower()
        if is_pure_punct(tok.surface) or low in stopwords:
            continue
        terms.append(low)
    return terms


def build_index(
    passages: Sequence[Passage], stopwords: frozenset[str] | None = None
) -> PassageIndex:
    """Build the inverted index; stopwords default to the bundled lists."""
    if stopwords is None:
        stopwords = bundled_stopwords()
    doc_len: dict[str, int] = {}
    by_term: dict[str, dict[str, int]] = {}
    for p in passages:
        if p.id in doc_len:
            raise ValueError(f"duplicate passage id {p.id!r}")
        terms = index_terms(p.text, p.language, stopwords)
        doc_len[p.id] = len(terms)
        for tf_term, tf in Counter(terms).items():
            by_term.setdefault(tf_term, {})[p.id] = tf
    postings = {
        t: tuple(sorted(docs.items())) for t, docs in sorted(by_term.items())
    }
    df = {t: len(pl) for t, pl in postings.items()}
    n_docs = len(doc_len)
    avg_len = math.fsum(doc_len.values()) / n_docs if n_docs else 0.0
    return PassageIndex(
        postings=postings,
        doc_len=doc_len,
        df=df,
        n_docs=n_docs,
        avg_len=avg_len,
        stopwords=stopwords,
    )


@dataclass(frozen=True)
class Query:
    terms: tuple[str, ...]
    source_question_id: str = ""

    def __post_init__(self) -> None:
        for t in self.terms:
            if is_pure_punct(t):
                raise ValueError(f"punctuation term {t!r} in query")


def formulate_query(
    q: AnnotatedSentence,
    stopwords: frozenset[str] | None = None,
    question_id: str = "",
) -> Query:
    """Keep the noun/verb/adjective tokens, minus stopwords and punctuation.

    When the question carries no content-PoS information at all (every
    label is the loader's "UNK" placeholder), every non-stopword,
    non-punctuation token is kept instead.
    """
    if stopwords is None:
        stopwords = bundled_stopwords()
    has_pos = any(label != "UNK" for label in q.pos)
    terms: list[str] = []
    for tok, label in zip(q.tokens, q.pos):
        if is_pure_punct(tok.surface) or tok.surface.lower() in stopwords:
            continue
        if has_pos and not label.upper().startswith(_CONTENT_POS_PREFIXES):
            continue
        terms.append(tok.surface)
    return Query(terms=tuple(terms), source_question_id=question_id)


def bm25_score(
    index: PassageIndex,
    terms: Sequence[str],
    passage_id: str,
    k1: float = BM25_K1,
    b: float = BM25_B,
) -> float:
    """BM25 over distinct lowercased terms for one passage."""
    dl = index.doc_len.get(passage_id)
    if dl is None:
        raise KeyError(f"unknown passage id {passage_id!r}")
    norm = k1 * (1.0 - b + b * (dl / index.avg_len if index.avg_len else 0.0))
    score = 0.0
    for term in dict.fromkeys(t.lower() for t in terms):
        plist = index.postings.get(term)
        if not plist:
            continue
        tf = dict(plist).get(passage_id, 0)
        if tf == 0:
            continue
        score += index.idf(term) * tf * (k1 + 1.0) / (tf + norm)
    return score


def retrieve_passages(
    index: PassageIndex,
    query: Query,
    top_n: int = 30,
    k1: float = BM25_K1,
    b: float = BM25_B,
) -> list[tuple[str, float]]:
    """Boolean-OR candidates ranked by BM25; ties broken by passage id."""
    if top_n < 1:
        raise ValueError(f"top_n must be >= 1, got {top_n}")
    terms = list(dict.fromkeys(t.lower() for t in query.terms))
    candidates: set[str] = set()
    for term in terms:
        for pid, _ in index.postings.get(term, ()):
            candidates.add(pid)
    scored = [(pid, bm25_score(index, terms, pid, k1=k1, b=b)) for pid in candidates]
    scored.sort(key=lambda e: (-e[1], e[0]))
    return scored[:top_n]


# ---------------------------------------------------------------------------
# embeddings and the relevance score


@dataclass(frozen=True)
class EmbeddingLexicon:
    vectors: Mapping[str, np.ndarray]
    dim: int


def load_embeddings(path: str | Path) -> EmbeddingLexicon:
    """Read text-format embeddings: "count dim" header, then word v1..vD."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ResourceError(f"{path}: empty embedding file")
    header = lines[0].split()
    if len(header) != 2:
        raise ResourceError(f"{path}: bad header {lines[0]!r}")
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError:
        raise ResourceError(f"{path}: bad header {lines[0]!r}") from None
    vectors: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != dim + 1:
            raise ResourceError(
                f"{path}: line {lineno}: expected {dim} components, got {len(parts) - 1}"
            )
        try:
            vec = np.array([float(v) for v in parts[1:]], dtype=np.float64)
        except ValueError:
            raise ResourceError(f"{path}: line {lineno}: bad vector component") from None
        vectors[parts[0]] = vec
    if len(vectors) != count:
        raise ResourceError(f"{path}: header says {count} words, found {len(vectors)}")
    return EmbeddingLexicon(vectors=vectors, dim=dim)


def _sentence_vector(
    tokens: Sequence[str],
    idf: Mapping[str, float],
    default_idf: float,
    emb: EmbeddingLexicon | None,
    vocab: Sequence[str] | None,
) -> np.ndarray:
    tf = Counter(t.lower() for t in tokens)
    if emb is None:
        vec = np.zeros(len(vocab))
        for k, w in enumerate(vocab):
            if w in tf:
                vec[k] = math.log1p(tf[w]) * idf.get(w, default_idf)
        return vec
    vec = np.zeros(emb.dim)
    for w, count in tf.items():
        wv = emb.vectors.get(w)
        if wv is not None:
            vec += math.log1p(count) * idf.get(w, default_idf) * wv
    return vec


def relevance(
    x: Sequence[str],
    y: Sequence[str],
    idf: Mapping[str, float],
    default_idf: float,
    emb: EmbeddingLexicon | None = None,
) -> float:
    """Cosine of log(1+tf)·idf-weighted sentence vectors.

    One-hot vectors by default (the classic tf-idf cosine); with an
    embedding lexicon each word contributes its weighted vector, words
    outside the lexicon contribute nothing. Zero vectors give 0.
    """
    vocab = None
    if emb is None:
        vocab = sorted({t.lower() for t in x} | {t.lower() for t in y})
    vx = _sentence_vector(x, idf, default_idf, emb, vocab)
    vy = _sentence_vector(y, idf, default_idf, emb, vocab)
    nx = np.linalg.norm(vx)
    ny = np.linalg.norm(vy)
    if nx == 0.0 or ny == 0.0:
        return 0.0
    return float(min(1.0, max(-1.0, np.dot(vx, vy) / (nx * ny))))


# ---------------------------------------------------------------------------
# biased snippet ranking


@dataclass(frozen=True)
class SnippetRank:
    scores: Mapping[str, float]
    top: tuple[str, ...]
    d: float


def sentence_idf(sentences: Sequence[Sequence[str]]) -> tuple[dict[str, float], float]:
    """Per-sentence-set idf: ln((N+1)/(df+1)); unseen terms get ln(N+1)."""
    n = len(sentences)
    df: Counter = Counter()
    for toks in sentences:
        df.update({t.lower() for t in toks})
    idf = {t: math.log((n + 1) / (d + 1)) for t, d in df.items()}
    return idf, math.log(n + 1)


def snippet_rank(
    question: Sequence[str],
    sentences: Sequence[tuple[str, Sequence[str]]],
    d: float = 0.8,
    tol: float = 1e-8,
    max_iters: int = 200,
    emb: EmbeddingLexicon | None = None,
    top_k: int = 3,
) -> SnippetRank:
    """Rank sentences by the query-biased stationary distribution.

    ``sentences`` are (sentence_id, tokens) in document order. The walk
    mixes the normalized question-relevance bias (uniform when no
    sentence is relevant) with a column-stochastic, zero-diagonal
    sentence-similarity matrix (all-zero columns become uniform over the
    other sentences); power iteration stops when the L1 change drops
    below ``tol``.
    """
    if not sentences:
        raise ValueError("no sentences to rank")
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"d must be in [0, 1], got {d}")
    ids = [sid for sid, _ in sentences]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate sentence ids")
    n = len(sentences)
    if n == 1:
        return SnippetRank(scores={ids[0]: 1.0}, top=(ids[0],), d=d)

    toks = [list(t) for _, t in sentences]
    idf, default_idf = sentence_idf(toks)

    rel_q = np.array(
        [relevance(t, question, idf, default_idf, emb) for t in toks]
    )
    z = rel_q.sum()
    bias = rel_q / z if z > 0.0 else np.full(n, 1.0 / n)

    a = np.zeros((n, n))
    for v in range(n):
        col = np.array(
            [relevance(toks[s], toks[v], idf, default_idf, emb) if s != v else 0.0 for s in range(n)]
        )
        z = col.sum()
        if z > 0.0:
            a[:, v] = col / z
        else:
            a[:, v] = 1.0 / (n - 1)
            a[v, v] = 0.0

    p = np.full(n, 1.0 / n)
    for _ in range(max_iters):
        new = d * bias + (1.0 - d) * (a @ p)
        if np.abs(new - p).sum() < tol:
            p = new
            break
        p = new

    order = sorted(range(n), key=lambda s: (-p[s], s))
    return SnippetRank(
        scores={ids[s]: float(p[s]) for s in range(n)},
        top=tuple(ids[s] for s in order[:top_k]),
        d=d,
    )


# ---------------------------------------------------------------------------
# index persistence (deterministic binary artifact)

_MAGIC = b"CMFGIDX\x01"


def save_index(index: PassageIndex, path: str | Path) -> None:
    """Write the index as a stable, versioned binary artifact."""
    out = bytearray(_MAGIC)

    def put_str(s: str) -> None:
        b = s.encode("utf-8")
        out.extend(struct.pack(">H", len(b)))
        out.extend(b)

    doc_ids = sorted(index.doc_len)
    out.extend(struct.pack(">I", len(doc_ids)))
    for pid in doc_ids:
        put_str(pid)
        out.extend(struct.pack(">I", index.doc_len[pid]))
    stop = sorted(index.stopwords)
    out.extend(struct.pack(">I", len(stop)))
    for word in stop:
        put_str(word)
    doc_pos = {pid: k for k, pid in enumerate(doc_ids)}
    terms = sorted(index.postings)
    out.extend(struct.pack(">I", len(terms)))
    for term in terms:
        put_str(term)
        plist = index.postings[term]
        out.extend(struct.pack(">I", len(plist)))
        for pid, tf in plist:
            out.extend(struct.pack(">II", doc_pos[pid], tf))
    Path(path).write_bytes(bytes(out))


def load_index(path: str | Path) -> PassageIndex:
    data = Path(path).read_bytes()
    if not data.startswith(_MAGIC):
        raise FormatError(f"{path}: not a cmforge index file")
    off = len(_MAGIC)

    def get(fmt: str):
        nonlocal off
        size = struct.calcsize(fmt)
        vals = struct.unpack_from(fmt, data, off)
        off += size
        return vals

    def get_str() -> str:
        nonlocal off
        (length,) = get(">H")
        s = data[off : off + length].decode("utf-8")
        off += length
        return s

    (n_docs,) = get(">I")
    doc_ids: list[str] = []
    doc_len: dict[str, int] = {}
    for _ in range(n_docs):
        pid = get_str()
        (dl,) = get(">I")
        doc_ids.append(pid)
        doc_len[pid] = dl
    (n_stop,) = get(">I")
    stopwords = frozenset(get_str() for _ in range(n_stop))
    (n_terms,) = get(">I")
    postings: dict[str, tuple[tuple[str, int], ...]] = {}
    for _ in range(n_terms):
        term = get_str()
        (n_post,) = get(">I")
        plist = []
        for _ in range(n_post):
            doc_idx, tf = get(">II")
            plist.append((doc_ids[doc_idx], tf))
        postings[term] = tuple(plist)
    df = {t: len(pl) for t, pl in postings.items()}
    avg_len = math.fsum(doc_len.values()) / len(doc_len) if doc_len else 0.0
    return PassageIndex(
        postings=postings,
        doc_len=doc_len,
        df=df,
        n_docs=len(doc_len),
        avg_len=avg_len,
        stopwords=stopwords,
    )
