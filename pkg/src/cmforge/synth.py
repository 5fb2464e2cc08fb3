"""Deterministic synthetic corpora for tests and demos.

Three generators, all driven by a single seed:

* a bijective-dictionary parallel corpus with gold word alignments, for
  exercising the aligner end to end;
* a template-based English/Hindi parallel corpus rich in named entities,
  noun phrases and adjectives, with gold annotations, for exercising the
  code-mixing pipeline;
* a planted question-answering corpus of fact passages (each holding one
  planted answer near the question's content words) plus distractors.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Sequence

from .corpus import AnnotatedSentence, ParallelPair, spans_to_bio, tokenize

# ---------------------------------------------------------------------------
# bijective-dictionary corpus


def bijective_corpus(
    n_pairs: int = 500,
    vocab_size: int = 50,
    seed: int = 7,
    min_len: int = 3,
    max_len: int = 8,
) -> tuple[list[ParallelPair], dict[str, frozenset[tuple[int, int]]], dict[str, str]]:
    """Parallel pairs under a bijective word dictionary, with gold links.

    Every sentence samples distinct dictionary words; the target side is
    the translated words in a shuffled order, so the gold alignment is a
    permutation. Returns (pairs, gold links by pair id, the dictionary).
    """
    if not 1 <= min_len <= max_len <= vocab_size:
        raise ValueError("need 1 <= min_len <= max_len <= vocab_size")
    rng = random.Random(seed)
    dictionary = {f"src{k:02d}": f"tgt{k:02d}" for k in range(vocab_size)}
    src_words = sorted(dictionary)

    pairs: list[ParallelPair] = []
    gold: dict[str, frozenset[tuple[int, int]]] = {}
    for pid in range(1, n_pairs + 1):
        length = rng.randint(min_len, max_len)
        chosen = rng.sample(src_words, length)
        order = list(range(length))
        rng.shuffle(order)
        target = [""] * length
        links = set()
        for i, word in enumerate(chosen):
            j = order[i]
            target[j] = dictionary[word]
            links.add((i, j))
        pair = ParallelPair(
            id=str(pid),
            source=tuple(tokenize(" ".join(chosen))),
            target=tuple(tokenize(" ".join(target), lang="hi")),
        )
        pairs.append(pair)
        gold[pair.id] = frozenset(links)
    return pairs, gold, dictionary


# ---------------------------------------------------------------------------
# named-entity / noun-phrase rich parallel corpus

_NAMES = [
    ("Ram", "राम"), ("Sita", "सीता"), ("Arjun", "अर्जुन"),
    ("Meera", "मीरा"), ("Kabir", "कबीर"), ("Tara", "तारा"),
]
_PLACES = [
    ("Delhi", "दिल्ली"), ("Mumbai", "मुंबई"), ("Agra", "आगरा"),
    ("Jaipur", "जयपुर"), ("Pune", "पुणे"), ("Patna", "पटना"),
]
_NOUNS = [
    ("market", "बाज़ार"), ("school", "विद्यालय"), ("garden", "बगीचा"),
    ("temple", "मंदिर"), ("station", "स्टेशन"), ("book", "किताब"),
    ("song", "गीत"), ("letter", "पत्र"),
]
_ADJS = [
    ("big", "बड़ा"), ("old", "पुराना"), ("beautiful", "सुंदर"),
    ("new", "नया"), ("famous", "प्रसिद्ध"),
]
_VERBS = [
    ("visited", "गया"), ("saw", "देखा"), ("liked", "पसंद"),
    ("praised", "सराहा"), ("remembered", "याद"),
]
_WORD_MAP = dict(
    _NAMES + _PLACES + _NOUNS + _ADJS + _VERBS
    + [("the", "वह"), ("a", "एक"), ("in", "में"), ("near", "पास"),
       ("and", "और"), ("was", "था"), (".", "।")]
)


def _toy_sentence(rng: random.Random) -> tuple[list[str], list[str], list, list]:
    """One templated sentence: (words, pos, ne spans, np spans)."""
    name = rng.choice(_NAMES)[0]
    place = rng.choice(_PLACES)[0]
    noun = rng.choice(_NOUNS)[0]
    adj = rng.choice(_ADJS)[0]
    verb = rng.choice(_VERBS)[0]
    template = rng.randrange(4)
    if template == 0:
        words = [name, verb, "the", adj, noun, "in", place, "."]
        pos = ["NNP", "VBD", "DT", "JJ", "NN", "IN", "NNP", "."]
        ne = [(0, 1, "PER"), (6, 7, "LOC")]
        np = [(2, 5)]
    elif template == 1:
        words = [name, verb, "a", adj, noun, "."]
        pos = ["NNP", "VBD", "DT", "JJ", "NN", "."]
        ne = [(0, 1, "PER")]
        np = [(2, 5)]
    elif template == 2:
        adj2 = rng.choice(_ADJS)[0]
        words = ["the", adj, noun, "in", place, "was", adj2, "."]
        pos = ["DT", "JJ", "NN", "IN", "NNP", "VBD", "JJ", "."]
        ne = [(4, 5, "LOC")]
        np = [(0, 3)]
    else:
        name2 = rng.choice(_NAMES)[0]
        words = [name, "and", name2, verb, "the", noun, "near", place, "."]
        pos = ["NNP", "CC", "NNP", "VBD", "DT", "NN", "IN", "NNP", "."]
        ne = [(0, 1, "PER"), (2, 3, "PER"), (7, 8, "LOC")]
        np = [(4, 6)]
    return words, pos, ne, np


def toy_parallel_corpus(
    n_pairs: int = 1000, seed: int = 11
) -> tuple[list[ParallelPair], list[AnnotatedSentence]]:
    """Templated English sentences with word-for-word Hindi counterparts.

    Every sentence carries at least one named entity or noun phrase, so a
    phrase table learned from this corpus supports at least one span
    substitution per sentence. Returns (pairs, source-side annotations).
    """
    rng = random.Random(seed)
    pairs: list[ParallelPair] = []
    annotations: list[AnnotatedSentence] = []
    for pid in range(1, n_pairs + 1):
        words, pos, ne, np = _toy_sentence(rng)
        hindi = [_WORD_MAP[w] for w in words]
        source = tuple(tokenize(" ".join(words)))
        pairs.append(
            ParallelPair(
                id=str(pid),
                source=source,
                target=tuple(tokenize(" ".join(hindi), lang="hi")),
            )
        )
        annotations.append(
            AnnotatedSentence(
                tokens=source,
                pos=tuple(pos),
                ne_spans=tuple(ne),
                np_spans=tuple(np),
            )
        )
    return pairs, annotations


# ---------------------------------------------------------------------------
# planted question-answering corpus

# (question, answer type, planted answer entity with NE tag, fact sentence
#  words, decoy sentence words). The fact sentence carries the question's
# content words; the decoy holds a same-type entity with less overlap.
_QA_FACTS = [
    {
        "question": "Who discovered the vaccine for river fever ?",
        "answer_type": "PERSON",
        "answer": "Marcus Vellan",
        "fact": "Marcus Vellan discovered the vaccine for river fever .",
        "fact_ne": [("Marcus Vellan", "PER")],
        "decoy": "His rival Anton Brusk doubted the finding .",
        "decoy_ne": [("Anton Brusk", "PER")],
    },
    {
        "question": "Who composed the midnight harbour anthem ?",
        "answer_type": "PERSON",
        "answer": "Ilsa Ferren",
        "fact": "Ilsa Ferren composed the midnight harbour anthem .",
        "fact_ne": [("Ilsa Ferren", "PER")],
        "decoy": "Critic Paulo Dren reviewed it coldly .",
        "decoy_ne": [("Paulo Dren", "PER")],
    },
    {
        "question": "Who painted the copper meadow mural ?",
        "answer_type": "PERSON",
        "answer": "Devika Rao",
        "fact": "Devika Rao painted the copper meadow mural .",
        "fact_ne": [("Devika Rao", "PER")],
        "decoy": "Collector Omar Senn bought a sketch .",
        "decoy_ne": [("Omar Senn", "PER")],
    },
    {
        "question": "Who founded the glacier radio service ?",
        "answer_type": "PERSON",
        "answer": "Teodor Majek",
        "fact": "Teodor Majek founded the glacier radio service .",
        "fact_ne": [("Teodor Majek", "PER")],
        "decoy": "Engineer Lena Voss repaired the mast .",
        "decoy_ne": [("Lena Voss", "PER")],
    },
    {
        "question": "Where is the saffron lantern festival held ?",
        "answer_type": "LOCATION",
        "answer": "Kharanpur",
        "fact": "The saffron lantern festival is held in Kharanpur .",
        "fact_ne": [("Kharanpur", "LOC")],
        "decoy": "Pilgrims also pass through Dalvi on foot .",
        "decoy_ne": [("Dalvi", "LOC")],
    },
    {
        "question": "Where was the basalt observatory built ?",
        "answer_type": "LOCATION",
        "answer": "Mount Serrat",
        "fact": "The basalt observatory was built on Mount Serrat .",
        "fact_ne": [("Mount Serrat", "LOC")],
        "decoy": "Supplies came from the port of Velen .",
        "decoy_ne": [("Velen", "LOC")],
    },
    {
        "question": "Where does the amber fig orchard grow ?",
        "answer_type": "LOCATION",
        "answer": "Nivapur",
        "fact": "The amber fig orchard grows near Nivapur .",
        "fact_ne": [("Nivapur", "LOC")],
        "decoy": "Traders carry the fruit to Rokand weekly .",
        "decoy_ne": [("Rokand", "LOC")],
    },
    {
        "question": "How long is the cobalt canal bridge ?",
        "answer_type": "NUMBER",
        "answer": "310 m",
        "fact": "The cobalt canal bridge is 310 m long .",
        "fact_ne": [],
        "decoy": "Its toll booth processes 90 carts daily .",
        "decoy_ne": [],
    },
    {
        "question": "How many bells hang in the walnut tower ?",
        "answer_type": "NUMBER",
        "answer": "17",
        "fact": "Exactly 17 bells hang in the walnut tower .",
        "fact_ne": [],
        "decoy": "The chapel below seats 240 visitors .",
        "decoy_ne": [],
    },
    {
        "question": "When was the juniper treaty signed ?",
        "answer_type": "DATE",
        "answer": "March 1874",
        "fact": "The juniper treaty was signed in March 1874 .",
        "fact_ne": [],
        "decoy": "Border markers were replaced in 1902 .",
        "decoy_ne": [],
    },
]

_QA_DISTRACTORS = [
    "Granite quarry workers rested beside the silent kiln .",
    "A migrating heron circled the empty rice terraces twice .",
    "The union ledger listed nine unpaid carpentry invoices .",
    "Sailors mended torn canvas below the creaking deck .",
    "Wild rosemary spread across the abandoned railway cutting .",
    "The archivist stamped each brittle census page carefully .",
    "Two foxes crossed the frozen irrigation ditch at dawn .",
    "Monsoon clouds gathered over the shuttered spice stalls .",
    "A clockmaker oiled the museum's oldest escapement wheel .",
    "The lighthouse keeper logged a calm and moonless night .",
]


def _bio_for(words: Sequence[str], entities: Sequence[tuple[str, str]]) -> list[str]:
    spans = []
    for surface, tag in entities:
        entity_words = surface.split()
        for start in range(len(words) - len(entity_words) + 1):
            if words[start : start + len(entity_words)] == entity_words:
                spans.append((start, start + len(entity_words), tag))
                break
        else:
            raise ValueError(f"entity {surface!r} not found in {words}")
    return spans_to_bio(spans, len(words))


def planted_qa_corpus(seed: int = 3) -> tuple[list[dict], list[dict]]:
    """20 passages (10 fact + 10 distractor) and 10 factoid questions.

    Passages are JSON-ready dicts {id, article_id, text, language, ne};
    questions are {id, question, language, qtype, answer_type, answers,
    passage_ids}. The interleaving order is seeded but fixed.
    """
    rng = random.Random(seed)
    passages: list[dict] = []
    questions: list[dict] = []
    for k, fact in enumerate(_QA_FACTS):
        pid = f"p{k:02d}"
        fact_words = fact["fact"].split()
        decoy_words = fact["decoy"].split()
        ne = _bio_for(fact_words, fact["fact_ne"]) + _bio_for(decoy_words, fact["decoy_ne"])
        passages.append(
            {
                "id": pid,
                "article_id": f"a{k:02d}",
                "text": fact["fact"] + " " + fact["decoy"],
                "language": "en",
                "ne": ne,
            }
        )
        questions.append(
            {
                "id": f"q{k:02d}",
                "question": fact["question"],
                "language": "en",
                "qtype": "factoid",
                "answer_type": fact["answer_type"],
                "answers": [fact["answer"]],
                "passage_ids": [pid],
            }
        )
    for k, text in enumerate(_QA_DISTRACTORS):
        words = text.split()
        passages.append(
            {
                "id": f"p{10 + k:02d}",
                "article_id": f"a{10 + k:02d}",
                "text": text,
                "language": "en",
                "ne": ["O"] * len(words),
            }
        )
    rng.shuffle(passages)
    return passages, questions


# ---------------------------------------------------------------------------
# file writers matching the loaders' formats


def write_parallel_tsv(pairs: Sequence[ParallelPair], path: str | Path) -> None:
    lines = []
    for pair in pairs:
        src = " ".join(t.surface for t in pair.source)
        tgt = " ".join(t.surface for t in pair.target)
        lines.append(f"{src}\t{tgt}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_annotations_conll(
    annotations: Sequence[AnnotatedSentence], path: str | Path
) -> None:
    blocks = []
    for sent in annotations:
        ne = spans_to_bio(sent.ne_spans, len(sent.tokens))
        np = spans_to_bio(sent.np_spans, len(sent.tokens))
        rows = [
            "\t".join((tok.surface, tag, ne_label, np_label))
            for tok, tag, ne_label, np_label in zip(sent.tokens, sent.pos, ne, np)
        ]
        blocks.append("\n".join(rows))
    Path(path).write_text("\n\n".join(blocks) + "\n", encoding="utf-8")


def write_jsonl(records: Sequence[dict], path: str | Path) -> None:
    lines = [json.dumps(rec, ensure_ascii=False, sort_keys=True) for rec in records]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
