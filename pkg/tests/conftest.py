"""Shared fixtures: the curated mini-lexicon, n-gram stores, annotated
golden sentences and alignment links used across the suite."""

from __future__ import annotations

import pytest

from cmforge.aligner import AlignmentLinks
from cmforge.corpus import AnnotatedSentence, ParallelPair, bio_to_spans, tokenize
from cmforge.lexres import (
    bundled_translit_table,
    lex_table_from_entries,
    ngram_store_from_counts,
)


def annotated(text: str, lang: str, pos: str, ne: str, np_chunks: str | None = None) -> AnnotatedSentence:
    tokens = tuple(tokenize(text, lang))
    np_labels = np_chunks or " ".join(["O"] * len(tokens))
    return AnnotatedSentence(
        tokens=tokens,
        pos=tuple(pos.split()),
        ne_spans=tuple(bio_to_spans(ne.split(), typed=True)),
        np_spans=tuple(bio_to_spans(np_labels.split(), typed=False)),
    )


@pytest.fixture(scope="session")
def mini_lexicon():
    """Hindi→English lexical table curated for the golden questions.

    नाम is deliberately absent so the transliteration fallback fires.
    """
    return lex_table_from_entries(
        [
            ("सिएटल", "Seattle", 0.95),
            ("बेसबॉल", "baseball", 0.9),
            ("दल", "team", 0.5),
            ("दल", "party", 0.4),
            ("जन्म", "birth", 0.8),
            ("पूर्व", "East", 0.5),
            ("पूर्व", "BC", 0.4),
            ("शहर", "city", 0.9),
            ("स्कॉटलैंड", "Scotland", 0.95),
        ]
    )


@pytest.fixture(scope="session")
def mini_ngrams():
    return ngram_store_from_counts(
        {
            "baseball": 50, "team": 40, "party": 30, "city": 8, "east": 4,
            "scotland": 6, "bc": 10, "seattle": 20, "birth": 15,
        },
        {("baseball", "team"): 20, ("city", "east"): 2, ("east", "scotland"): 2},
    )


@pytest.fixture(scope="session")
def translit():
    return bundled_translit_table()


@pytest.fixture(scope="session")
def golden_question_gandhi():
    return annotated(
        "महात्मा गांधी का जन्म कब हुआ था ?", "hi",
        "NNP NNP PSP NN WQ VM VAUX SYM",
        "B-PER I-PER O O O O O O",
    )


@pytest.fixture(scope="session")
def golden_question_seattle():
    return annotated(
        "सिएटल में बेसबॉल दल का नाम क्या है ?", "hi",
        "NNP PSP NN NN PSP NN WQ VM SYM",
        "B-LOC O O O O O O O O",
    )


@pytest.fixture(scope="session")
def golden_pair_de():
    """English/German row: monotone identity alignment over 8 tokens."""
    pair = ParallelPair(
        "de1",
        tuple(tokenize("Democracy and Development go hand in hand .", "en")),
        tuple(tokenize("Demokratie und Entwicklung gehen Hand in Hand .", "de")),
    )
    ann = annotated(
        "Democracy and Development go hand in hand .", "en",
        "NN CC NN VBP NN IN NN .",
        "O O O O O O O O",
        "B O B O O O O O",
    )
    links = AlignmentLinks(frozenset((i, i) for i in range(8)), "de1")
    return pair, ann, links


@pytest.fixture(scope="session")
def golden_pair_hi():
    """English/Hindi row with a non-monotone gold alignment."""
    pair = ParallelPair(
        "hi1",
        tuple(tokenize("India's agriculture is their main strength .", "en")),
        tuple(tokenize("भारत की कृषि इसकी मुख्य ताकत है ।", "hi")),
    )
    ann = annotated(
        "India's agriculture is their main strength .", "en",
        "NNP NN VBZ PRP$ JJ NN .",
        "B-LOC O O O O O O",
        "B O O B I I O",
    )
    links = AlignmentLinks(
        frozenset({(0, 0), (0, 1), (1, 2), (2, 6), (3, 3), (4, 4), (5, 5), (6, 7)}),
        "hi1",
    )
    return pair, ann, links
