"""Command-line checks: exit codes, artifacts and manifests, config
precedence, and equivalence between each subcommand and the library
calls it delegates to."""

from __future__ import annotations

import json

import pytest

from cmforge import __version__
from cmforge.aligner import align_pair, extract_phrases, links_to_pharaoh, load_model, pharaoh_to_links, train_model
from cmforge.cli import build_parser, main
from cmforge.config import config_hash, load_manifest, make_config
from cmforge.corpus import load_annotations, load_parallel
from cmforge.metrics import RankedList, bleu, cmi, cmi_corpus, meteor_lite, rank_metrics, spf
from cmforge.mixer import TaggedSentence, TaggedToken, generate_cm_sentence, read_tagged_tsv, write_tagged_tsv
from cmforge.retrieval import load_index
from cmforge.synth import (
    planted_qa_corpus,
    toy_parallel_corpus,
    write_annotations_conll,
    write_jsonl,
    write_parallel_tsv,
)

SUBCOMMANDS = (
    "align-train", "align-apply", "mix-sentence", "mix-question",
    "mix-metrics", "index-build", "qa-ask", "qa-batch", "snippet", "eval",
)

LEX_ROWS = (
    ("सिएटल", "Seattle", "0.95"),
    ("बेसबॉल", "baseball", "0.9"),
    ("दल", "team", "0.5"),
    ("दल", "party", "0.4"),
    ("जन्म", "birth", "0.8"),
    ("पूर्व", "East", "0.5"),
    ("पूर्व", "BC", "0.4"),
    ("शहर", "city", "0.9"),
    ("स्कॉटलैंड", "Scotland", "0.95"),
)
UNI_ROWS = (
    ("baseball", 50), ("team", 40), ("party", 30), ("city", 8), ("east", 4),
    ("scotland", 6), ("bc", 10), ("seattle", 20), ("birth", 15),
)
BI_ROWS = (("baseball team", 20), ("city east", 2), ("east scotland", 2))

GANDHI_Q = {
    "id": "g1",
    "question": "महात्मा गांधी का जन्म कब हुआ था ?",
    "language": "hi",
    "qtype": "factoid",
    "pos": ["NNP", "NNP", "PSP", "NN", "WQ", "VM", "VAUX", "SYM"],
    "ne": ["B-PER", "I-PER", "O", "O", "O", "O", "O", "O"],
}
SEATTLE_Q = {
    "id": "s1",
    "question": "सिएटल में बेसबॉल दल का नाम क्या है ?",
    "language": "hi",
    "qtype": "factoid",
    "pos": ["NNP", "PSP", "NN", "NN", "PSP", "NN", "WQ", "VM", "SYM"],
    "ne": ["B-LOC", "O", "O", "O", "O", "O", "O", "O", "O"],
}


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("CMFORGE_CONFIG", raising=False)


@pytest.fixture(scope="session")
def cli_work(tmp_path_factory):
    """Input files shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cliwork")
    pairs, annotations = toy_parallel_corpus(n_pairs=40, seed=11)
    write_parallel_tsv(pairs, root / "pairs.tsv")
    write_annotations_conll(annotations, root / "ann.conll")
    write_annotations_conll(annotations[:-1], root / "ann_short.conll")
    passages, questions = planted_qa_corpus()
    write_jsonl(passages, root / "passages.jsonl")
    write_jsonl(questions, root / "questions.jsonl")
    write_jsonl([GANDHI_Q, SEATTLE_Q], root / "mixq.jsonl")
    (root / "lex.tsv").write_text(
        "".join("\t".join(row) + "\n" for row in LEX_ROWS), encoding="utf-8"
    )
    (root / "uni.tsv").write_text(
        "".join(f"{w}\t{c}\n" for w, c in UNI_ROWS), encoding="utf-8"
    )
    (root / "bi.tsv").write_text(
        "".join(f"{w}\t{c}\n" for w, c in BI_ROWS), encoding="utf-8"
    )
    return root


@pytest.fixture(scope="session")
def fwd_model(cli_work):
    out = cli_work / "fwd.model"
    assert main(["align-train", "--pairs", str(cli_work / "pairs.tsv"), "--out", str(out)]) == 0
    return out


@pytest.fixture(scope="session")
def rev_model(cli_work):
    out = cli_work / "rev.model"
    argv = [
        "align-train", "--pairs", str(cli_work / "pairs.tsv"),
        "--direction", "rev", "--out", str(out),
    ]
    assert main(argv) == 0
    return out


@pytest.fixture(scope="session")
def index_file(cli_work):
    out = cli_work / "idx.bin"
    assert main(["index-build", "--passages", str(cli_work / "passages.jsonl"), "--out", str(out)]) == 0
    return out


def _write_jsonl(path, rows):
    write_jsonl(rows, path)
    return str(path)


class TestParserAndExitCodes:
    def test_parser_lists_all_subcommands(self):
        help_text = build_parser().format_help()
        for name in SUBCOMMANDS:
            assert name in help_text

    def test_no_arguments_is_usage_error(self, capsys):
        assert main([]) == 1
        assert "usage" in capsys.readouterr().err.lower()

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == 1

    def test_unknown_flag(self, cli_work):
        assert main(["mix-metrics", "--in", str(cli_work / "pairs.tsv"), "--bogus"]) == 1

    def test_missing_required_flag(self):
        assert main(["align-train"]) == 1

    def test_missing_out_is_clean_error(self, cli_work):
        assert main(["align-train", "--pairs", str(cli_work / "pairs.tsv")]) == 1
        assert main(["index-build", "--passages", str(cli_work / "passages.jsonl")]) == 1

    def test_missing_input_file(self, tmp_path):
        argv = [
            "align-train", "--pairs", str(tmp_path / "nope.tsv"),
            "--out", str(tmp_path / "m.tsv"),
        ]
        assert main(argv) == 1

    def test_bad_parameter_value(self, cli_work, tmp_path):
        argv = [
            "align-train", "--pairs", str(cli_work / "pairs.tsv"),
            "--iterations", "0", "--out", str(tmp_path / "m.tsv"),
        ]
        assert main(argv) == 1

    def test_version_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_unexpected_exception_is_exit_2(self, monkeypatch):
        import cmforge.cli as cli_module

        def boom(args):
            raise RuntimeError("wires crossed")

        monkeypatch.setattr(cli_module, "_cmd_mix_metrics", boom)
        assert main(["mix-metrics", "--in", "anything"]) == 2


class TestAlignTrain:
    def test_writes_model_and_manifest(self, cli_work, fwd_model):
        manifest = load_manifest(str(fwd_model) + ".manifest.json")
        assert manifest.subcommand == "align-train"
        assert set(manifest.inputs) == {"pairs"}
        assert manifest.version == __version__
        assert manifest.config_hash == config_hash(make_config(None, {}))

    def test_model_equals_library_training(self, cli_work, fwd_model):
        cfg = make_config(None, {})
        got = load_model(fwd_model)
        want = train_model(
            load_parallel(cli_work / "pairs.tsv"),
            iterations=cfg.iterations, tension=cfg.tension, null_mass=cfg.null_mass,
        )
        assert got.t == want.t
        assert got.tension == want.tension
        assert got.iterations == want.iterations

    def test_reverse_direction_flag(self, rev_model):
        assert load_model(rev_model, direction="rev").direction == "rev"


class TestAlignApply:
    def test_forward_mode_equals_library(self, cli_work, fwd_model, tmp_path):
        out = tmp_path / "links.tsv"
        argv = [
            "align-apply", "--pairs", str(cli_work / "pairs.tsv"),
            "--fwd", str(fwd_model), "--symmetrization", "forward",
            "--out", str(out),
        ]
        assert main(argv) == 0
        model = load_model(fwd_model)
        expected_lines = [
            f"{pair.id}\t{links_to_pharaoh(align_pair(model, None, pair, mode='forward'))}"
            for pair in load_parallel(cli_work / "pairs.tsv")
        ]
        assert out.read_text(encoding="utf-8") == "\n".join(expected_lines) + "\n"

    def test_stdout_mode_writes_no_manifest(self, cli_work, fwd_model, tmp_path, monkeypatch, capsys):
        monkeypatch.chdir(tmp_path)
        argv = [
            "align-apply", "--pairs", str(cli_work / "pairs.tsv"),
            "--fwd", str(fwd_model), "--symmetrization", "forward",
        ]
        assert main(argv) == 0
        captured = capsys.readouterr()
        assert captured.out.startswith("1\t")
        assert not list(tmp_path.glob("*.manifest.json"))

    def test_intersection_needs_both_models(self, cli_work, fwd_model):
        argv = [
            "align-apply", "--pairs", str(cli_work / "pairs.tsv"),
            "--fwd", str(fwd_model), "--symmetrization", "intersection",
        ]
        assert main(argv) == 1

    def test_intersection_lines_parse_as_links(self, cli_work, fwd_model, rev_model, tmp_path):
        out = tmp_path / "links.tsv"
        argv = [
            "align-apply", "--pairs", str(cli_work / "pairs.tsv"),
            "--fwd", str(fwd_model), "--rev", str(rev_model),
            "--out", str(out),
        ]
        assert main(argv) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 40
        for line in lines:
            rec_id, _, pharaoh = line.partition("\t")
            assert rec_id.isdigit()
            pharaoh_to_links(pharaoh, rec_id)  # must not raise


class TestMixSentence:
    def test_artifact_matches_library_pipeline(self, cli_work, fwd_model, tmp_path):
        out = tmp_path / "mixed.tsv"
        argv = [
            "mix-sentence", "--pairs", str(cli_work / "pairs.tsv"),
            "--ann", str(cli_work / "ann.conll"), "--align", str(fwd_model),
            "--out", str(out),
        ]
        assert main(argv) == 0
        cfg = make_config(None, {})
        model = load_model(fwd_model)
        records = []
        for pair, ann in zip(
            load_parallel(cli_work / "pairs.tsv"), load_annotations(cli_work / "ann.conll")
        ):
            links = align_pair(model, None, pair, mode="forward")
            phrases = extract_phrases(pair, links, max_len=cfg.max_phrase_len)
            records.append((pair.id, generate_cm_sentence(pair, ann, phrases)))
        assert out.read_text(encoding="utf-8") == write_tagged_tsv(records)

    def test_annotation_count_mismatch(self, cli_work, fwd_model, tmp_path):
        argv = [
            "mix-sentence", "--pairs", str(cli_work / "pairs.tsv"),
            "--ann", str(cli_work / "ann_short.conll"), "--align", str(fwd_model),
            "--out", str(tmp_path / "mixed.tsv"),
        ]
        assert main(argv) == 1


class TestMixQuestion:
    def _run(self, cli_work, out):
        return main([
            "mix-question", "--qa", str(cli_work / "mixq.jsonl"),
            "--lexicon", str(cli_work / "lex.tsv"),
            "--unigrams", str(cli_work / "uni.tsv"),
            "--bigrams", str(cli_work / "bi.tsv"),
            "--out", str(out),
        ])

    def test_golden_questions(self, cli_work, tmp_path):
        out = tmp_path / "mixedq.tsv"
        assert self._run(cli_work, out) == 0
        rows = dict(read_tagged_tsv(out.read_text(encoding="utf-8")))
        assert rows["g1"].render() == "Mahatma Gandhi ka birth kab hua tha?"
        assert rows["s1"].render() == "Seattle mein baseball team ka naam kya hai?"
        assert rows["g1"].provenances()[:2] == ["transliterated", "transliterated"]
        assert rows["s1"].langs()[0] == "en"

    def test_rerun_is_byte_identical(self, cli_work, tmp_path):
        out1, out2 = tmp_path / "a.tsv", tmp_path / "b.tsv"
        assert self._run(cli_work, out1) == 0
        assert self._run(cli_work, out2) == 0
        assert out1.read_bytes() == out2.read_bytes()
        identity1 = load_manifest(str(out1) + ".manifest.json").identity()
        identity2 = load_manifest(str(out2) + ".manifest.json").identity()
        assert identity1 == identity2


class TestMixMetrics:
    def test_report_matches_library_metrics(self, tmp_path):
        rows = [
            ("r1", TaggedSentence((
                TaggedToken("Good", "en", "lexicon-translated"),
                TaggedToken("माल", "hi", "kept"),
                TaggedToken("!", "other", "kept"),
            ))),
            ("r2", TaggedSentence((
                TaggedToken("सब", "hi", "kept"),
                TaggedToken("ठीक", "hi", "kept"),
            ))),
        ]
        infile = tmp_path / "tagged.tsv"
        infile.write_text(write_tagged_tsv(rows), encoding="utf-8")
        out = tmp_path / "report.json"
        assert main(["mix-metrics", "--in", str(infile), "--out", str(out)]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        sentences = [sent for _, sent in rows]
        assert report["sentences"] == 2
        assert report["corpus_cmi"] == cmi_corpus(sentences)
        assert [item["cmi"] for item in report["per_sentence"]] == [cmi(s) for s in sentences]
        assert [item["spf"] for item in report["per_sentence"]] == [spf(s) for s in sentences]

    def test_bad_tagged_file(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("only\ttwo\n", encoding="utf-8")
        assert main(["mix-metrics", "--in", str(bad), "--out", str(tmp_path / "r.json")]) == 1


class TestIndexAndQA:
    def test_index_loads_and_has_manifest(self, index_file):
        index = load_index(index_file)
        assert index.n_docs == 20
        manifest = load_manifest(str(index_file) + ".manifest.json")
        assert manifest.subcommand == "index-build"

    def test_index_build_deterministic(self, cli_work, index_file, tmp_path):
        out = tmp_path / "again.bin"
        assert main(["index-build", "--passages", str(cli_work / "passages.jsonl"), "--out", str(out)]) == 0
        assert out.read_bytes() == index_file.read_bytes()

    def test_qa_ask_answers_planted_question(self, cli_work, index_file, tmp_path):
        _, questions = planted_qa_corpus()
        q = questions[0]
        out = tmp_path / "answer.json"
        argv = [
            "qa-ask", "--index", str(index_file),
            "--passages", str(cli_work / "passages.jsonl"),
            "--question", q["question"], "--answer-type", q["answer_type"],
            "--out", str(out),
        ]
        assert main(argv) == 0
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["question_id"] == "q0"
        assert payload["no_answer"] is False
        assert payload["answer"] == q["answers"][0]
        assert payload["passage_id"] == q["passage_ids"][0]
        assert payload["retrieved"]
        assert set(payload["components"]) >= {"TCS", "PS", "NCS"}

    def test_qa_ask_empty_question(self, cli_work, index_file, tmp_path):
        argv = [
            "qa-ask", "--index", str(index_file),
            "--passages", str(cli_work / "passages.jsonl"),
            "--question", "", "--out", str(tmp_path / "a.json"),
        ]
        assert main(argv) == 1

    def test_qa_batch_answers_in_order(self, cli_work, index_file, tmp_path):
        out = tmp_path / "batch.jsonl"
        argv = [
            "qa-batch", "--index", str(index_file),
            "--passages", str(cli_work / "passages.jsonl"),
            "--questions", str(cli_work / "questions.jsonl"),
            "--out", str(out),
        ]
        assert main(argv) == 0
        _, questions = planted_qa_corpus()
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == len(questions)
        payloads = [json.loads(line) for line in lines]
        assert [p["question_id"] for p in payloads] == [q["id"] for q in questions]
        hits = sum(
            p["answer"] == q["answers"][0]
            for p, q in zip(payloads, questions)
            if not p["no_answer"]
        )
        assert hits >= 8

    def test_snippet_ranks_fact_sentence_first(self, cli_work, tmp_path):
        _, questions = planted_qa_corpus()
        q = questions[0]
        out = tmp_path / "snippet.json"
        argv = [
            "snippet", "--passages", str(cli_work / "passages.jsonl"),
            "--question", q["question"], "--passage-id", q["passage_ids"][0],
            "--out", str(out),
        ]
        assert main(argv) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["passage_id"] == q["passage_ids"][0]
        assert q["answers"][0] in report["top"][0]["text"]

    def test_snippet_via_index_picks_fact_passage(self, cli_work, index_file, tmp_path):
        _, questions = planted_qa_corpus()
        q = questions[0]
        out = tmp_path / "snippet.json"
        argv = [
            "snippet", "--passages", str(cli_work / "passages.jsonl"),
            "--question", q["question"], "--index", str(index_file),
            "--out", str(out),
        ]
        assert main(argv) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["passage_id"] == q["passage_ids"][0]

    def test_snippet_needs_passage_or_index(self, cli_work):
        argv = [
            "snippet", "--passages", str(cli_work / "passages.jsonl"),
            "--question", "who found river fever ?",
        ]
        assert main(argv) == 1

    def test_snippet_unknown_passage_id(self, cli_work):
        argv = [
            "snippet", "--passages", str(cli_work / "passages.jsonl"),
            "--question", "who found river fever ?", "--passage-id", "zz",
        ]
        assert main(argv) == 1


class TestEval:
    def test_bleu_identical_is_one(self, tmp_path):
        pred = _write_jsonl(tmp_path / "pred.jsonl", [{"id": "1", "text": "a b c d"}])
        gold = _write_jsonl(tmp_path / "gold.jsonl", [{"id": "1", "text": "a b c d"}])
        out = tmp_path / "r.json"
        assert main(["eval", "--metric", "bleu", "--pred", pred, "--gold", gold, "--out", str(out)]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["value"] == pytest.approx(1.0)
        assert report["items"] == 1

    def test_bleu_smoothing_flag(self, tmp_path):
        pred = _write_jsonl(tmp_path / "pred.jsonl", [{"id": "1", "text": "b a d c"}])
        gold = _write_jsonl(tmp_path / "gold.jsonl", [{"id": "1", "text": "a b c d"}])
        base = ["eval", "--metric", "bleu", "--pred", pred, "--gold", gold]
        out_raw, out_smooth = tmp_path / "raw.json", tmp_path / "smooth.json"
        assert main(base + ["--out", str(out_raw)]) == 0
        assert main(base + ["--smooth", "--out", str(out_smooth)]) == 0
        raw = json.loads(out_raw.read_text(encoding="utf-8"))
        smooth = json.loads(out_smooth.read_text(encoding="utf-8"))
        assert raw["value"] == 0.0
        assert smooth["value"] > 0.0
        assert smooth["value"] == pytest.approx(
            bleu([["b", "a", "d", "c"]], [[["a", "b", "c", "d"]]], smooth=True)
        )

    def test_rouge_and_meteor_identical(self, tmp_path):
        pred = _write_jsonl(tmp_path / "pred.jsonl", [{"id": "1", "text": "a b c d"}])
        gold = _write_jsonl(tmp_path / "gold.jsonl", [{"id": "1", "texts": ["a b c d", "x y"]}])
        out = tmp_path / "r.json"
        assert main(["eval", "--metric", "rouge-l", "--pred", pred, "--gold", gold, "--out", str(out)]) == 0
        assert json.loads(out.read_text(encoding="utf-8"))["value"] == pytest.approx(1.0)
        assert main(["eval", "--metric", "meteor", "--pred", pred, "--gold", gold, "--out", str(out)]) == 0
        want = meteor_lite(["a", "b", "c", "d"], ["a", "b", "c", "d"])
        assert json.loads(out.read_text(encoding="utf-8"))["value"] == pytest.approx(want)

    def test_squad_exact_match(self, tmp_path):
        pred = _write_jsonl(tmp_path / "pred.jsonl", [{"id": "1", "answer": "The Answer"}])
        gold = _write_jsonl(tmp_path / "gold.jsonl", [{"id": "1", "answers": ["answer"]}])
        out = tmp_path / "r.json"
        assert main(["eval", "--metric", "squad", "--pred", pred, "--gold", gold, "--out", str(out)]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["value"] == {"em": 100.0, "f1": 100.0}

    def test_rank_matches_library(self, tmp_path):
        pred = _write_jsonl(
            tmp_path / "pred.jsonl", [{"id": "q", "items": [["a", 2.0], ["b", 1.0]]}]
        )
        gold = _write_jsonl(tmp_path / "gold.jsonl", [{"id": "q", "relevant": ["b"]}])
        out = tmp_path / "r.json"
        argv = ["eval", "--metric", "rank", "--pred", pred, "--gold", gold, "--k", "2", "--out", str(out)]
        assert main(argv) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        want = rank_metrics(
            [RankedList("q", (("a", 2.0), ("b", 1.0)), frozenset({"b"}))], k=2
        )
        assert report["value"] == {
            "p_at_k": want.p_at_k, "r_at_k": want.r_at_k, "map": want.map, "mrr": want.mrr,
        }
        assert report["params"] == {"k": 2}

    def test_prediction_without_gold_fails(self, tmp_path):
        pred = _write_jsonl(tmp_path / "pred.jsonl", [{"id": "1", "text": "a"}])
        gold = _write_jsonl(tmp_path / "gold.jsonl", [{"id": "2", "text": "a"}])
        assert main(["eval", "--metric", "bleu", "--pred", pred, "--gold", gold]) == 1

    def test_bad_jsonl_fails(self, tmp_path):
        pred = tmp_path / "pred.jsonl"
        pred.write_text("{not json\n", encoding="utf-8")
        gold = _write_jsonl(tmp_path / "gold.jsonl", [{"id": "1", "text": "a"}])
        assert main(["eval", "--metric", "bleu", "--pred", str(pred), "--gold", gold]) == 1

    def test_unknown_metric_is_usage_error(self, tmp_path):
        pred = _write_jsonl(tmp_path / "pred.jsonl", [{"id": "1", "text": "a"}])
        assert main(["eval", "--metric", "wer", "--pred", pred, "--gold", pred]) == 1


class TestConfigPrecedence:
    def _train(self, cli_work, out, extra):
        argv = ["align-train", "--pairs", str(cli_work / "pairs.tsv"), "--out", str(out)]
        return main(argv + extra)

    def _header_iters(self, path):
        header = path.read_text(encoding="utf-8").splitlines()[0]
        return int(header.rpartition("#iters=")[2])

    def test_config_file_overrides_defaults(self, cli_work, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("iterations = 2\n", encoding="utf-8")
        out = tmp_path / "m.tsv"
        assert self._train(cli_work, out, ["--config", str(cfg)]) == 0
        assert self._header_iters(out) == 2

    def test_flag_overrides_config_file(self, cli_work, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("iterations = 2\n", encoding="utf-8")
        out = tmp_path / "m.tsv"
        assert self._train(cli_work, out, ["--config", str(cfg), "--iterations", "3"]) == 0
        assert self._header_iters(out) == 3

    def test_environment_config_fallback(self, cli_work, tmp_path, monkeypatch):
        cfg = tmp_path / "env.cfg"
        cfg.write_text("iterations = 2\n", encoding="utf-8")
        monkeypatch.setenv("CMFORGE_CONFIG", str(cfg))
        out = tmp_path / "m.tsv"
        assert self._train(cli_work, out, []) == 0
        assert self._header_iters(out) == 2

    def test_config_flag_beats_environment(self, cli_work, tmp_path, monkeypatch):
        env_cfg = tmp_path / "env.cfg"
        env_cfg.write_text("iterations = 2\n", encoding="utf-8")
        monkeypatch.setenv("CMFORGE_CONFIG", str(env_cfg))
        flag_cfg = tmp_path / "flag.cfg"
        flag_cfg.write_text("iterations = 4\n", encoding="utf-8")
        out = tmp_path / "m.tsv"
        assert self._train(cli_work, out, ["--config", str(flag_cfg)]) == 0
        assert self._header_iters(out) == 4

    def test_bad_config_file(self, cli_work, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("iterations = soon\n", encoding="utf-8")
        assert self._train(cli_work, tmp_path / "m.tsv", ["--config", str(cfg)]) == 1

    def test_manifest_keys(self, fwd_model):
        manifest_path = fwd_model.parent / (fwd_model.name + ".manifest.json")
        payload = json.loads(manifest_path.read_text(encoding="utf-8"))
        assert set(payload) == {"subcommand", "config_hash", "inputs", "version", "created"}
