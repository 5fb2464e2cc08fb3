"""Command-line front door for the toolkit.

Every subcommand is a thin wrapper over the library: it loads inputs,
calls the corresponding library functions, writes the declared artifact,
and stores a run manifest next to it. Logs go to standard error; data
goes to files or standard output only. Exit codes: 0 success, 1 input
error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import traceback
from dataclasses import replace
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import CmforgeError, __version__
from .aligner import (
    align_pair,
    extract_phrases,
    links_to_pharaoh,
    load_model,
    save_model,
    train_model,
)
from .answerrank import (
    AnnotatedPassage,
    ScoringWeights,
    annotate_passage,
    bundled_answer_types,
    bundled_patterns,
    extract_candidates,
    load_answer_types,
    load_patterns,
    rank_answers,
    score_components,
)
from .config import (
    RunConfig,
    build_manifest,
    load_config_file,
    make_config,
    resolve_config_path,
    write_manifest,
)
from .corpus import AnnotatedSentence, load_annotations, load_parallel, load_qa_records, tokenize
from .lexres import (
    bundled_translit_table,
    load_lex_table,
    load_ngrams,
    load_translit_table,
)
from .metrics import (
    RankedList,
    bleu,
    cmi,
    cmi_corpus,
    meteor_lite,
    qa_span_metrics,
    rank_metrics,
    rouge_l,
    spf,
    spf_corpus,
)
from .mixer import generate_cm_question, generate_cm_sentence, read_tagged_tsv, write_tagged_tsv
from .retrieval import (
    EmbeddingLexicon,
    Passage,
    build_index,
    bundled_stopwords,
    formulate_query,
    load_embeddings,
    load_index,
    load_passages,
    load_stopwords,
    retrieve_passages,
    save_index,
    snippet_rank,
)

log = logging.getLogger("cmforge")


class UsageError(Exception):
    """Bad command line: print usage and exit 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# ---------------------------------------------------------------------------
# shared plumbing


def _config_from_args(args: argparse.Namespace, override_names: Sequence[str]) -> RunConfig:
    """Built-in defaults < config file (--config / environment) < flags."""
    path = resolve_config_path(getattr(args, "config", None))
    file_values = load_config_file(path) if path else None
    overrides = {name: getattr(args, name, None) for name in override_names}
    return make_config(file_values, overrides)


def _write_text_artifact(
    text: str, out: str | None, subcommand: str, cfg: RunConfig, inputs: Mapping[str, str]
) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        write_manifest(build_manifest(subcommand, cfg, inputs), out)
        log.info("%s: wrote %s", subcommand, out)
    else:
        sys.stdout.write(text)


def _json_report(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _read_jsonl(path: str | Path) -> list[dict]:
    rows: list[dict] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise CmforgeError(f"{path}: line {lineno}: bad JSON: {exc}") from None
    return rows


def _stopwords(cfg: RunConfig) -> frozenset[str]:
    if cfg.stopwords:
        return load_stopwords(cfg.stopwords)
    return bundled_stopwords()


def _embeddings(cfg: RunConfig) -> EmbeddingLexicon | None:
    return load_embeddings(cfg.embeddings) if cfg.embeddings else None


# ---------------------------------------------------------------------------
# alignment subcommands


def _cmd_align_train(args: argparse.Namespace) -> int:
    if not args.out:
        raise CmforgeError("align-train: --out is required (model file path)")
    cfg = _config_from_args(args, ("iterations", "tension", "null_mass"))
    pairs = load_parallel(args.pairs)
    model = train_model(
        pairs,
        iterations=cfg.iterations,
        tension=cfg.tension,
        null_mass=cfg.null_mass,
        direction=args.direction,
    )
    log.info(
        "align-train: %d pairs, %d iterations, log-likelihood %s",
        len(pairs), cfg.iterations, " -> ".join(f"{v:.2f}" for v in model.ll_history),
    )
    save_model(model, args.out)
    write_manifest(build_manifest("align-train", cfg, {"pairs": args.pairs}), args.out)
    return 0


def _cmd_align_apply(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, ("symmetrization",))
    mode = cfg.symmetrization
    pairs = load_parallel(args.pairs)
    fwd = load_model(args.fwd) if args.fwd else None
    rev = load_model(args.rev, direction="rev") if args.rev else None
    if mode in ("forward", "intersection") and fwd is None:
        raise CmforgeError(f"mode {mode!r} needs --fwd")
    if mode in ("reverse", "intersection") and rev is None:
        raise CmforgeError(f"mode {mode!r} needs --rev")
    lines = []
    for pair in pairs:
        links = align_pair(fwd, rev, pair, mode=mode)
        lines.append(f"{pair.id}\t{links_to_pharaoh(links)}")
    inputs = {"pairs": args.pairs}
    if args.fwd:
        inputs["fwd"] = args.fwd
    if args.rev:
        inputs["rev"] = args.rev
    _write_text_artifact("\n".join(lines) + "\n", args.out, "align-apply", cfg, inputs)
    return 0


# ---------------------------------------------------------------------------
# mixing subcommands


def _cmd_mix_sentence(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, ("max_phrase_len",))
    pairs = load_parallel(args.pairs)
    annotations = load_annotations(args.ann)
    if len(annotations) != len(pairs):
        raise CmforgeError(
            f"{args.ann}: {len(annotations)} annotated sentences for {len(pairs)} pairs"
        )
    fwd = load_model(args.align)
    rev = load_model(args.align_rev, direction="rev") if args.align_rev else None
    mode = "intersection" if rev is not None else "forward"
    records = []
    for pair, ann in zip(pairs, annotations):
        links = align_pair(fwd, rev, pair, mode=mode)
        phrases = extract_phrases(pair, links, max_len=cfg.max_phrase_len)
        records.append((pair.id, generate_cm_sentence(pair, ann, phrases)))
    inputs = {"pairs": args.pairs, "ann": args.ann, "align": args.align}
    if args.align_rev:
        inputs["align_rev"] = args.align_rev
    _write_text_artifact(write_tagged_tsv(records), args.out, "mix-sentence", cfg, inputs)
    return 0


def _cmd_mix_question(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, ("top_k", "eps", "max_iters", "translit"))
    records = load_qa_records(args.qa)
    table = load_lex_table(args.lexicon, top_k=cfg.top_k)
    ngrams = load_ngrams(args.unigrams, args.bigrams)
    translit = load_translit_table(cfg.translit) if cfg.translit else bundled_translit_table()
    rows = []
    for rec in records:
        mixed = generate_cm_question(
            rec.question, table, ngrams, translit, eps=cfg.eps, max_iters=cfg.max_iters
        )
        rows.append((rec.id, mixed))
    inputs = {
        "qa": args.qa,
        "lexicon": args.lexicon,
        "unigrams": args.unigrams,
        "bigrams": args.bigrams,
    }
    if cfg.translit:
        inputs["translit"] = cfg.translit
    _write_text_artifact(write_tagged_tsv(rows), args.out, "mix-question", cfg, inputs)
    return 0


def _cmd_mix_metrics(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, ())
    rows = read_tagged_tsv(Path(args.infile).read_text(encoding="utf-8"))
    sentences = [sent for _, sent in rows]
    report = {
        "sentences": len(sentences),
        "corpus_cmi": cmi_corpus(sentences),
        "corpus_spf": spf_corpus(sentences),
        "per_sentence": [
            {"id": rec_id, "cmi": cmi(sent), "spf": spf(sent)}
            for rec_id, sent in rows
        ],
    }
    _write_text_artifact(
        _json_report(report), args.out, "mix-metrics", cfg, {"in": args.infile}
    )
    return 0


# ---------------------------------------------------------------------------
# retrieval / question answering subcommands


def _cmd_index_build(args: argparse.Namespace) -> int:
    if not args.out:
        raise CmforgeError("index-build: --out is required (index file path)")
    cfg = _config_from_args(args, ("stopwords",))
    passages = load_passages(args.passages)
    index = build_index(passages, stopwords=_stopwords(cfg))
    save_index(index, args.out)
    inputs = {"passages": args.passages}
    if cfg.stopwords:
        inputs["stopwords"] = cfg.stopwords
    write_manifest(build_manifest("index-build", cfg, inputs), args.out)
    log.info("index-build: %d passages, %d terms", index.n_docs, len(index.postings))
    return 0


def _annotated_passages(path: str | Path) -> dict[str, AnnotatedPassage]:
    """Passages JSONL → sentence-split passages with optional NE labels."""
    out: dict[str, AnnotatedPassage] = {}
    for row in _read_jsonl(path):
        pid = str(row["id"])
        out[pid] = annotate_passage(
            pid,
            str(row["text"]),
            language=str(row.get("language", "en")),
            ne_labels=row.get("ne"),
            pos_labels=row.get("pos"),
        )
    return out


def _answer_one(
    q_ann: AnnotatedSentence,
    question_id: str,
    qtype: str,
    answer_type: str | None,
    index,
    annotated: Mapping[str, AnnotatedPassage],
    cfg: RunConfig,
    stopwords: frozenset[str],
    emb: EmbeddingLexicon | None,
    patterns,
    type_map,
    weights: ScoringWeights,
) -> dict:
    """Retrieve, extract, score and rank; JSON-ready result for one question."""
    query = formulate_query(q_ann, stopwords, question_id=question_id)
    ranked = retrieve_passages(index, query, top_n=cfg.top_n, k1=cfg.k1, b=cfg.b)
    top = [annotated[pid] for pid, _ in ranked if pid in annotated]
    candidates = extract_candidates(top, answer_type, qtype, type_map)
    result_base = {
        "question_id": question_id,
        "qtype": qtype,
        "query_terms": list(query.terms),
        "retrieved": [pid for pid, _ in ranked],
    }
    if not candidates or not query.terms:
        return dict(result_base, no_answer=True, answer=None, score=0.0)
    idf, default_idf = index.relevance_idf()
    sent_tokens = {
        f"{p.id}:{k}": [t.surface for t in s.tokens]
        for p in top
        for k, s in enumerate(p.sentences)
    }
    scored = [
        replace(
            c,
            component_scores=score_components(
                sent_tokens[c.sentence_id],
                query.terms,
                idf,
                default_idf,
                emb=emb,
                patterns=patterns if qtype == "descriptive" else None,
            ),
        )
        for c in candidates
    ]
    result = rank_answers(scored, weights, qtype, tau=cfg.tau)
    if result.no_answer:
        return dict(result_base, no_answer=True, answer=None, score=0.0)
    best = result.answers[0]
    if qtype == "factoid":
        return dict(
            result_base,
            no_answer=False,
            answer=best.text,
            score=best.aggregate,
            components=dict(best.component_scores),
            passage_id=best.passage_id,
            sentence_id=best.sentence_id,
        )
    top_score = max(a.aggregate for a in result.answers)
    return dict(
        result_base,
        no_answer=False,
        answer=result.assembled,
        score=top_score,
        sentences=[
            {
                "sentence_id": a.sentence_id,
                "passage_id": a.passage_id,
                "score": a.aggregate,
                "text": a.text,
            }
            for a in result.answers
        ],
    )


def _qa_context(args: argparse.Namespace, cfg: RunConfig):
    index = load_index(args.index)
    annotated = _annotated_passages(args.passages)
    stopwords = _stopwords(cfg)
    emb = _embeddings(cfg)
    patterns = load_patterns(cfg.patterns) if cfg.patterns else bundled_patterns()
    type_map = load_answer_types(cfg.answer_types) if cfg.answer_types else bundled_answer_types()
    return index, annotated, stopwords, emb, patterns, type_map


_QA_CONFIG_FLAGS = ("top_n", "tau", "k1", "b", "stopwords", "embeddings", "patterns", "answer_types")


def _cmd_qa_ask(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, _QA_CONFIG_FLAGS)
    index, annotated, stopwords, emb, patterns, type_map = _qa_context(args, cfg)
    tokens = tokenize(args.question, args.lang)
    if not tokens:
        raise CmforgeError("empty question")
    q_ann = AnnotatedSentence(tokens=tuple(tokens), pos=("UNK",) * len(tokens))
    answer = _answer_one(
        q_ann, "q0", args.qtype, args.answer_type, index, annotated,
        cfg, stopwords, emb, patterns, type_map, ScoringWeights(),
    )
    answer["question"] = args.question
    inputs = {"index": args.index, "passages": args.passages}
    _write_text_artifact(_json_report(answer), args.out, "qa-ask", cfg, inputs)
    return 0


def _cmd_qa_batch(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, _QA_CONFIG_FLAGS)
    index, annotated, stopwords, emb, patterns, type_map = _qa_context(args, cfg)
    records = load_qa_records(args.questions)
    lines = []
    for rec in records:
        answer = _answer_one(
            rec.question, rec.id, rec.qtype, rec.answer_type, index, annotated,
            cfg, stopwords, emb, patterns, type_map, ScoringWeights(),
        )
        lines.append(json.dumps(answer, sort_keys=True, ensure_ascii=False))
    inputs = {
        "index": args.index,
        "passages": args.passages,
        "questions": args.questions,
    }
    _write_text_artifact("\n".join(lines) + "\n", args.out, "qa-batch", cfg, inputs)
    return 0


def _cmd_snippet(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, ("d", "snippet_k", "top_n", "k1", "b", "stopwords", "embeddings"))
    annotated = _annotated_passages(args.passages)
    stopwords = _stopwords(cfg)
    emb = _embeddings(cfg)
    tokens = tokenize(args.question, args.lang)
    if not tokens:
        raise CmforgeError("empty question")
    q_ann = AnnotatedSentence(tokens=tuple(tokens), pos=("UNK",) * len(tokens))
    query = formulate_query(q_ann, stopwords)
    inputs = {"passages": args.passages}
    if args.passage_id:
        pid = args.passage_id
        if pid not in annotated:
            raise CmforgeError(f"passage id {pid!r} not in {args.passages}")
    else:
        if not args.index:
            raise CmforgeError("need --passage-id or --index to choose a passage")
        index = load_index(args.index)
        ranked = retrieve_passages(index, query, top_n=1, k1=cfg.k1, b=cfg.b)
        if not ranked:
            raise CmforgeError("no passage matches the question")
        pid = ranked[0][0]
        inputs["index"] = args.index
    passage = annotated[pid]
    sentences = [
        (f"{pid}:{k}", [t.surface for t in s.tokens])
        for k, s in enumerate(passage.sentences)
    ]
    ranked_snip = snippet_rank(
        list(query.terms), sentences, d=cfg.d, emb=emb, top_k=cfg.snippet_k
    )
    texts = dict(sentences)
    report = {
        "passage_id": pid,
        "question": args.question,
        "d": cfg.d,
        "top": [
            {"sentence_id": sid, "score": ranked_snip.scores[sid], "text": " ".join(texts[sid])}
            for sid in ranked_snip.top
        ],
    }
    _write_text_artifact(_json_report(report), args.out, "snippet", cfg, inputs)
    return 0


# ---------------------------------------------------------------------------
# evaluation subcommand


def _pair_by_id(
    preds: list[dict], golds: list[dict], pred_key: str, gold_keys: tuple[str, ...]
) -> list[tuple[str, Any, Any]]:
    gold_by_id: dict[str, Any] = {}
    for row in golds:
        rid = str(row.get("id", row.get("query_id", "")))
        for key in gold_keys:
            if key in row:
                gold_by_id[rid] = row[key]
                break
        else:
            raise CmforgeError(f"gold record {rid!r} missing {'/'.join(gold_keys)}")
    out = []
    for row in preds:
        rid = str(row.get("id", row.get("query_id", "")))
        if rid not in gold_by_id:
            raise CmforgeError(f"prediction {rid!r} has no gold record")
        if pred_key not in row:
            raise CmforgeError(f"prediction {rid!r} missing {pred_key!r}")
        out.append((rid, row[pred_key], gold_by_id[rid]))
    return out


def _as_refs(gold_value: Any) -> list[list[str]]:
    if isinstance(gold_value, str):
        return [gold_value.split()]
    return [str(v).split() for v in gold_value]


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = _config_from_args(args, ("bleu_n", "bleu_smooth", "rank_k"))
    preds = _read_jsonl(args.pred)
    golds = _read_jsonl(args.gold)
    metric = args.metric
    report: dict[str, Any] = {"metric": metric, "items": len(preds)}

    if metric == "bleu":
        rows = _pair_by_id(preds, golds, "text", ("texts", "text"))
        candidates = [text.split() for _, text, _ in rows]
        references = [_as_refs(gold) for _, _, gold in rows]
        report["value"] = bleu(candidates, references, n=cfg.bleu_n, smooth=cfg.bleu_smooth)
        report["params"] = {"n": cfg.bleu_n, "smooth": cfg.bleu_smooth}
    elif metric == "rouge-l":
        rows = _pair_by_id(preds, golds, "text", ("texts", "text"))
        per_item = []
        for rid, text, gold in rows:
            best = max(
                (rouge_l(text.split(), ref) for ref in _as_refs(gold)),
                key=lambda sc: sc.f1,
            )
            per_item.append({"id": rid, "precision": best.precision, "recall": best.recall, "f1": best.f1})
        report["value"] = sum(item["f1"] for item in per_item) / len(per_item) if per_item else 0.0
        report["per_item"] = per_item
    elif metric == "meteor":
        rows = _pair_by_id(preds, golds, "text", ("texts", "text"))
        per_item = []
        for rid, text, gold in rows:
            best = max(meteor_lite(text.split(), ref) for ref in _as_refs(gold))
            per_item.append({"id": rid, "score": best})
        report["value"] = sum(item["score"] for item in per_item) / len(per_item) if per_item else 0.0
        report["per_item"] = per_item
    elif metric == "squad":
        rows = _pair_by_id(preds, golds, "answer", ("answers",))
        predictions = {rid: str(text) for rid, text, _ in rows}
        gold_map = {rid: [str(g) for g in gold] for rid, _, gold in rows}
        em, f1 = qa_span_metrics(predictions, gold_map)
        report["value"] = {"em": em, "f1": f1}
    elif metric == "rank":
        rows = _pair_by_id(preds, golds, "items", ("relevant",))
        lists = [
            RankedList(
                query_id=rid,
                items=tuple((str(pid), float(score)) for pid, score in items),
                relevant=frozenset(str(r) for r in relevant),
            )
            for rid, items, relevant in rows
        ]
        rm = rank_metrics(lists, k=cfg.rank_k)
        report["value"] = {"p_at_k": rm.p_at_k, "r_at_k": rm.r_at_k, "map": rm.map, "mrr": rm.mrr}
        report["params"] = {"k": cfg.rank_k}
    else:  # argparse choices should prevent this
        raise CmforgeError(f"unknown metric {metric!r}")

    _write_text_artifact(
        _json_report(report), args.out, "eval", cfg, {"pred": args.pred, "gold": args.gold}
    )
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="config file (flat key = value); falls back to $CMFORGE_CONFIG")
    sub.add_argument("--out", help="artifact path (default: standard output where supported)")


def build_parser() -> _Parser:
    parser = _Parser(prog="cmforge", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def sub(name: str, help_text: str, func) -> argparse.ArgumentParser:
        p = subs.add_parser(
            name, help=help_text, description=help_text,
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        )
        p.set_defaults(func=func)
        _add_common(p)
        return p

    p = sub("align-train", "EM-train a lexical translation model on a parallel TSV corpus", _cmd_align_train)
    p.add_argument("--pairs", required=True, help="parallel corpus TSV (source<TAB>target)")
    p.add_argument("--direction", choices=("fwd", "rev"), default="fwd", help="conditioning direction")
    p.add_argument("--iterations", type=int, help="EM iterations (default 5)")
    p.add_argument("--tension", type=float, help="diagonal prior strength; 0 disables (default 4.0)")
    p.add_argument("--null-mass", type=float, dest="null_mass", help="NULL-link prior mass (default 0.08)")

    p = sub("align-apply", "Viterbi-align a parallel corpus with trained models", _cmd_align_apply)
    p.add_argument("--pairs", required=True, help="parallel corpus TSV")
    p.add_argument("--fwd", help="forward model file")
    p.add_argument("--rev", help="reverse model file")
    p.add_argument("--symmetrization", choices=("forward", "reverse", "intersection"),
                   help="link combination mode (default intersection)")

    p = sub("mix-sentence", "Generate code-mixed sentences by aligned span substitution", _cmd_mix_sentence)
    p.add_argument("--pairs", required=True, help="parallel corpus TSV")
    p.add_argument("--ann", required=True, help="source-side annotations (token/pos/ne/np CoNLL)")
    p.add_argument("--align", required=True, help="forward model file")
    p.add_argument("--align-rev", dest="align_rev", help="reverse model file (enables intersection)")
    p.add_argument("--max-phrase-len", type=int, dest="max_phrase_len", help="phrase length cap (default 7)")

    p = sub("mix-question", "Generate code-mixed questions from annotated questions", _cmd_mix_question)
    p.add_argument("--qa", required=True, help="questions JSONL (id/question/language/qtype [pos/ne])")
    p.add_argument("--lexicon", required=True, help="lexical translation table TSV")
    p.add_argument("--unigrams", required=True, help="unigram counts TSV")
    p.add_argument("--bigrams", required=True, help="bigram counts TSV")
    p.add_argument("--translit", help="transliteration rules TSV (default: bundled)")
    p.add_argument("--top-k", type=int, dest="top_k", help="lexicon candidates per word (default 5)")
    p.add_argument("--eps", type=float, help="disambiguation convergence threshold (default 1e-4)")
    p.add_argument("--max-iters", type=int, dest="max_iters", help="disambiguation iteration cap (default 100)")

    p = sub("mix-metrics", "Report corpus and per-sentence mixing metrics for tagged TSV", _cmd_mix_metrics)
    p.add_argument("--in", required=True, dest="infile", help="tagged TSV from mix-sentence/mix-question")

    p = sub("index-build", "Build the binary inverted index for a passage collection", _cmd_index_build)
    p.add_argument("--passages", required=True, help="passages JSONL (id/article_id/text/language)")
    p.add_argument("--stopwords", help="extra stopword file (default: bundled lists)")

    p = sub("qa-ask", "Answer a single question over an indexed passage collection", _cmd_qa_ask)
    p.add_argument("--index", required=True, help="binary index file")
    p.add_argument("--passages", required=True, help="passages JSONL (optional ne/pos labels)")
    p.add_argument("--question", required=True, help="question text")
    p.add_argument("--lang", default="en", help="question language")
    p.add_argument("--qtype", choices=("factoid", "descriptive"), default="factoid", help="question type")
    p.add_argument("--answer-type", dest="answer_type", help="expected answer type (factoid)")
    p.add_argument("--top-n", type=int, dest="top_n", help="passages to retrieve (default 30)")
    p.add_argument("--tau", type=float, help="descriptive closeness threshold (default 0.9)")
    p.add_argument("--k1", type=float, help="BM25 k1 (default 1.2)")
    p.add_argument("--b", type=float, help="BM25 b (default 0.75)")
    p.add_argument("--stopwords", help="stopword file (default: bundled)")
    p.add_argument("--embeddings", help="word-embedding text file for semantic scoring")
    p.add_argument("--patterns", help="answer pattern TSV (default: bundled)")
    p.add_argument("--answer-types", dest="answer_types", help="answer-type mapping JSON (default: bundled)")

    p = sub("qa-batch", "Answer a JSONL batch of questions", _cmd_qa_batch)
    p.add_argument("--index", required=True, help="binary index file")
    p.add_argument("--passages", required=True, help="passages JSONL")
    p.add_argument("--questions", required=True, help="questions JSONL")
    p.add_argument("--top-n", type=int, dest="top_n", help="passages to retrieve (default 30)")
    p.add_argument("--tau", type=float, help="descriptive closeness threshold (default 0.9)")
    p.add_argument("--k1", type=float, help="BM25 k1 (default 1.2)")
    p.add_argument("--b", type=float, help="BM25 b (default 0.75)")
    p.add_argument("--stopwords", help="stopword file (default: bundled)")
    p.add_argument("--embeddings", help="word-embedding text file for semantic scoring")
    p.add_argument("--patterns", help="answer pattern TSV (default: bundled)")
    p.add_argument("--answer-types", dest="answer_types", help="answer-type mapping JSON (default: bundled)")

    p = sub("snippet", "Rank a passage's sentences by query-biased random walk", _cmd_snippet)
    p.add_argument("--passages", required=True, help="passages JSONL")
    p.add_argument("--question", required=True, help="question text")
    p.add_argument("--lang", default="en", help="question language")
    p.add_argument("--passage-id", dest="passage_id", help="rank this passage (else retrieve with --index)")
    p.add_argument("--index", help="binary index file for picking the top passage")
    p.add_argument("--d", type=float, help="bias mixing weight (default 0.8)")
    p.add_argument("--snippet-k", type=int, dest="snippet_k", help="sentences to keep (default 3)")
    p.add_argument("--stopwords", help="stopword file (default: bundled)")
    p.add_argument("--embeddings", help="word-embedding text file for similarity")

    p = sub("eval", "Score predictions against gold references", _cmd_eval)
    p.add_argument("--metric", required=True, choices=("bleu", "rouge-l", "meteor", "squad", "rank"))
    p.add_argument("--pred", required=True, help="predictions JSONL")
    p.add_argument("--gold", required=True, help="gold JSONL")
    p.add_argument("--bleu-n", type=int, dest="bleu_n", help="maximum n-gram order (default 4)")
    p.add_argument("--smooth", action="store_const", const=True, dest="bleu_smooth",
                   help="add-one smoothing for n >= 2")
    p.add_argument("--k", type=int, dest="rank_k", help="cutoff for P@k / R@k (default 10)")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 1
    except (CmforgeError, OSError, ValueError, KeyError) as exc:
        log.error("%s", exc)
        return 1
    except Exception:  # pragma: no cover - defensive
        log.critical("internal error\n%s", traceback.format_exc())
        return 2


if __name__ == "__main__":
    sys.exit(main())
