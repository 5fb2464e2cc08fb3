"""Code-mixed question and sentence generation.

Two generation paths share the lexical resources:

- question mixing walks an annotated source-language question token by
  token: person names are transliterated, nouns/adjectives/locations/
  organizations take their contextually best lexical translation (an
  iterative co-occurrence-graph disambiguation), everything else is
  transliterated;
- sentence mixing starts from the target side of a parallel pair and
  substitutes aligned target spans of English named entities, noun
  phrases (minus leading determiners) and adjectives with the English
  surface, first writer wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import FormatError, NoTranslationError
from .aligner import PhraseTable, lookup_aligned_span, lookup_containing_span
from .corpus import (
    AnnotatedSentence,
    ParallelPair,
    detect_lang,
    is_pure_punct,
    render_tokens,
)
from .lexres import LexTable, NGramStore, TranslitTable, dice, translations_for, transliterate

PROVENANCES = ("kept", "transliterated", "lexicon-translated", "phrase-substituted")

#: PoS labels whose tokens are lexicon-translated during question mixing
TRANSLATE_POS = frozenset({"NN", "NNP", "NST", "JJ"})
#: NE types (besides the PoS rule) that are lexicon-translated
TRANSLATE_NE = frozenset({"LOC", "ORG"})
#: determiner-like tags stripped from the front of noun phrases
DETERMINER_TAGS = frozenset({"DT", "PDT", "WDT", "DET", "PRP$"})
#: adjective tags eligible for single-token substitution
ADJECTIVE_TAGS = frozenset({"JJ", "JJR", "JJS", "ADJ"})


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    lang: str
    provenance: str

    def __post_init__(self) -> None:
        if not self.surface:
            raise ValueError("empty tagged-token surface")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"bad provenance {self.provenance!r}")


@dataclass(frozen=True)
class TaggedSentence:
    """A code-mixed sentence whose tokens carry language and provenance."""

    tokens: tuple[TaggedToken, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError("empty tagged sentence")

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def langs(self) -> list[str]:
        return [t.lang for t in self.tokens]

    def provenances(self) -> list[str]:
        return [t.provenance for t in self.tokens]

    def text(self) -> str:
        """Canonical space-joined token form."""
        return " ".join(t.surface for t in self.tokens)

    def render(self) -> str:
        """Display form with punctuation re-attached ("tha ?" → "tha?")."""
        return render_tokens(self.surfaces())


# ---------------------------------------------------------------------------
# iterative translation disambiguation


@dataclass(frozen=True)
class DisambigGraph:
    """Candidate graph over a context window.

    Nodes are translation candidates of the window tokens; edges carry
    Dice co-occurrence weights and never connect candidates of the same
    token. ``slots[k]`` lists the node ids of window slot k.
    """

    slots: tuple[tuple[int, ...], ...]
    center_slot: int
    surfaces: tuple[str, ...]
    lex_probs: tuple[float, ...]
    edges: tuple[tuple[tuple[int, float], ...], ...]

    def iterate(self, eps: float = 1e-4, max_iters: int = 100) -> tuple[list[float], int]:
        """Run w_i(m) = w_{i-1}(m) + Σ r[m,n]·w_{i-1}(n) to convergence.

        Weights renormalize per slot each round; stops when the largest
        per-node change drops below ``eps`` (or at ``max_iters``).
        Returns (final weights, iterations performed).
        """
        w = [0.0] * len(self.surfaces)
        for slot in self.slots:
            for node in slot:
                w[node] = 1.0 / len(slot)
        for it in range(1, max_iters + 1):
            new = [
                w[m] + sum(r * w[n] for n, r in self.edges[m])
                for m in range(len(w))
            ]
            for slot in self.slots:
                z = sum(new[n] for n in slot)
                if z > 0.0:
                    for n in slot:
                        new[n] /= z
            change = max(abs(a - b) for a, b in zip(new, w))
            w = new
            if change < eps:
                return w, it
        return w, max_iters


def build_disambig_graph(
    tokens: Sequence[str], index: int, lextable: LexTable, ngrams: NGramStore
) -> DisambigGraph:
    """Assemble the window {t_{i-1}, t_i, t_{i+1}} candidate graph.

    The window shrinks at sentence edges; window tokens without lexicon
    candidates contribute no slot. Raises when the center token itself
    has no candidates.
    """
    if not 0 <= index < len(tokens):
        raise IndexError(f"index {index} out of range for {len(tokens)} tokens")
    if not translations_for(lextable, tokens[index]):
        raise NoTranslationError(f"no lexicon candidates for {tokens[index]!r}")

    window = [p for p in (index - 1, index, index + 1) if 0 <= p < len(tokens)]
    surfaces: list[str] = []
    lex_probs: list[float] = []
    slots: list[tuple[int, ...]] = []
    center_slot = -1
    for pos in window:
        cands = translations_for(lextable, tokens[pos])
        if not cands:
            continue
        ids = []
        for tgt, prob in cands:
            ids.append(len(surfaces))
            surfaces.append(tgt)
            lex_probs.append(prob)
        if pos == index:
            center_slot = len(slots)
        slots.append(tuple(ids))

    edges: list[tuple[tuple[int, float], ...]] = []
    slot_of = {}
    for k, slot in enumerate(slots):
        for n in slot:
            slot_of[n] = k
    for m in range(len(surfaces)):
        nbrs = []
        for n in range(len(surfaces)):
            if slot_of[n] == slot_of[m]:
                continue
            r = dice(ngrams, surfaces[m], surfaces[n])
            if r > 0.0:
                nbrs.append((n, r))
        edges.append(tuple(nbrs))
    return DisambigGraph(
        slots=tuple(slots),
        center_slot=center_slot,
        surfaces=tuple(surfaces),
        lex_probs=tuple(lex_probs),
        edges=tuple(edges),
    )


def best_lexical_translation(
    tokens: Sequence[str],
    index: int,
    lextable: LexTable,
    ngrams: NGramStore,
    eps: float = 1e-4,
    max_iters: int = 100,
) -> str:
    """Contextually best translation of tokens[index].

    A single candidate is returned immediately (zero iterations);
    otherwise the disambiguation graph is iterated to convergence and the
    maximum-weight candidate of the center token wins, ties broken by
    lexicon probability then lexicographic order.
    """
    cands = translations_for(lextable, tokens[index])
    if not cands:
        raise NoTranslationError(f"no lexicon candidates for {tokens[index]!r}")
    if len(cands) == 1:
        return cands[0][0]
    graph = build_disambig_graph(tokens, index, lextable, ngrams)
    weights, _ = graph.iterate(eps=eps, max_iters=max_iters)
    center = graph.slots[graph.center_slot]
    best = min(
        center,
        key=lambda n: (-weights[n], -graph.lex_probs[n], graph.surfaces[n]),
    )
    return graph.surfaces[best]


# ---------------------------------------------------------------------------
# question mixing


def _transliterated_token(surface: str, lang: str, translit: TranslitTable, capitalize: bool = False) -> TaggedToken:
    out = transliterate(translit, surface) or surface
    if capitalize:
        out = out[:1].upper() + out[1:]
    out_lang = "other" if is_pure_punct(out) or lang == "other" else lang
    return TaggedToken(out, out_lang, "transliterated")


def generate_cm_question(
    q: AnnotatedSentence,
    lextable: LexTable,
    ngrams: NGramStore,
    translit: TranslitTable,
    eps: float = 1e-4,
    max_iters: int = 100,
) -> TaggedSentence:
    """Mix one annotated question, token by token.

    Rules, in order: PER entities transliterate (first letter uppercased);
    NN/NNP/NST/JJ tokens and LOC/ORG entities take their best lexical
    translation, falling back to transliteration when the lexicon offers
    nothing; all remaining tokens transliterate. Output length equals
    input length.
    """
    surfs = q.surfaces()
    out: list[TaggedToken] = []
    for i, tok in enumerate(q.tokens):
        ne = q.ne_type_at(i)
        if ne == "PER":
            out.append(_transliterated_token(tok.surface, tok.lang, translit, capitalize=True))
        elif q.pos[i] in TRANSLATE_POS or ne in TRANSLATE_NE:
            try:
                chosen = best_lexical_translation(surfs, i, lextable, ngrams, eps, max_iters)
                out.append(TaggedToken(chosen, detect_lang(chosen, "en"), "lexicon-translated"))
            except NoTranslationError:
                out.append(_transliterated_token(tok.surface, tok.lang, translit))
        else:
            out.append(_transliterated_token(tok.surface, tok.lang, translit))
    return TaggedSentence(tuple(out))


# ---------------------------------------------------------------------------
# sentence mixing


def _np_without_determiners(span: tuple[int, int], pos: Sequence[str]) -> tuple[int, int] | None:
    s, e = span
    while s < e and pos[s] in DETERMINER_TAGS:
        s += 1
    return (s, e) if s < e else None


def generate_cm_sentence(
    pair: ParallelPair,
    en_ann: AnnotatedSentence,
    phrases: PhraseTable,
    order: Sequence[str] = ("ne", "np", "adj"),
    exact_spans: bool = True,
) -> TaggedSentence:
    """Mix one parallel pair by aligned-span substitution.

    The output starts as the target sentence; named-entity spans
    (PER/LOC/ORG), determiner-stripped noun phrases, then adjectives from
    the annotated source side replace their aligned target spans with the
    source surface. Target positions consumed once are never re-replaced.
    ``exact_spans=False`` also accepts the tightest containing phrase.
    """
    if len(en_ann.tokens) != len(pair.source):
        raise ValueError(
            f"pair {pair.id}: annotation has {len(en_ann.tokens)} tokens, "
            f"source has {len(pair.source)}"
        )
    for kind in order:
        if kind not in ("ne", "np", "adj"):
            raise ValueError(f"bad substitution pass {kind!r}")
    lookup = lookup_aligned_span if exact_spans else lookup_containing_span

    def spans_for(kind: str) -> list[tuple[int, int]]:
        if kind == "ne":
            return [(s, e) for s, e, typ in en_ann.ne_spans if typ in ("PER", "LOC", "ORG")]
        if kind == "np":
            spans = (_np_without_determiners(sp, en_ann.pos) for sp in en_ann.np_spans)
            return [sp for sp in spans if sp is not None]
        return [(i, i + 1) for i, p in enumerate(en_ann.pos) if p in ADJECTIVE_TAGS]

    m = len(pair.target)
    claimed = [False] * m
    subs: list[tuple[int, int, tuple[int, int]]] = []  # (t1, t2, src span)
    for kind in order:
        for s1, s2 in spans_for(kind):
            tgt = lookup(phrases, (s1, s2))
            if tgt is None:
                continue
            t1, t2 = tgt
            if any(claimed[t1:t2]):
                continue
            for k in range(t1, t2):
                claimed[k] = True
            subs.append((t1, t2, (s1, s2)))
    subs.sort()

    out: list[TaggedToken] = []
    j = 0
    pending = list(subs)
    while j < m:
        if pending and pending[0][0] == j:
            t1, t2, (s1, s2) = pending.pop(0)
            for tok in pair.source[s1:s2]:
                out.append(TaggedToken(tok.surface, tok.lang, "phrase-substituted"))
            j = t2
        else:
            tok = pair.target[j]
            out.append(TaggedToken(tok.surface, tok.lang, "kept"))
            j += 1
    return TaggedSentence(tuple(out))


# ---------------------------------------------------------------------------
# batch TSV round-trip


def write_tagged_tsv(records: Iterable[tuple[str, TaggedSentence]]) -> str:
    """Serialize (id, sentence) records as id<TAB>text<TAB>langs<TAB>provenances."""
    lines = []
    for rec_id, sent in records:
        lines.append(
            "\t".join(
                (
                    rec_id,
                    sent.text(),
                    " ".join(sent.langs()),
                    " ".join(sent.provenances()),
                )
            )
        )
    return "\n".join(lines) + ("\n" if lines else "")


def read_tagged_tsv(text: str) -> list[tuple[str, TaggedSentence]]:
    """Parse the output of :func:`write_tagged_tsv`."""
    records: list[tuple[str, TaggedSentence]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise FormatError(f"line {lineno}: expected 4 columns, got {len(cols)}")
        rec_id, sent_text, langs_col, prov_col = cols
        surfaces = sent_text.split(" ")
        langs = langs_col.split(" ")
        provs = prov_col.split(" ")
        if not (len(surfaces) == len(langs) == len(provs)):
            raise FormatError(
                f"line {lineno}: column token counts differ "
                f"({len(surfaces)} surfaces, {len(langs)} langs, {len(provs)} provenances)"
            )
        try:
            toks = tuple(
                TaggedToken(s, l, p) for s, l, p in zip(surfaces, langs, provs)
            )
            records.append((rec_id, TaggedSentence(toks)))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    return records
