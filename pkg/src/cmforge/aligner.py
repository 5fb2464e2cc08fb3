"""Word alignment and phrase extraction.

An IBM-Model-1 style EM trainer whose expected counts are reweighted by a
positional diagonal prior delta(i|j, m, n) ∝ exp(-tension·|i/n - j/m|);
tension 0 recovers pure IBM Model 1. A virtual NULL source position with
fixed prior mass lets target words go unaligned. Viterbi alignment runs
per direction; the default symmetrization is the precision-biased
intersection. Phrase extraction harvests alignment-consistent span pairs
(no link leaves the box, at least one link inside), including extensions
over unaligned boundary words.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import FormatError
from .corpus import ParallelPair

NULL_TOKEN = "<NULL>"
#: score floor for word pairs never seen together (keeps Viterbi total-order)
PROB_FLOOR = 1e-9


@dataclass(frozen=True)
class TranslationModel:
    """Lexical translation probabilities p(tgt | src) for one direction."""

    t: Mapping[tuple[str, str], float]
    vocab_src: frozenset[str]
    vocab_tgt: frozenset[str]
    tension: float
    direction: str  # "fwd": p(target-side | source-side); "rev": swapped
    null_mass: float = 0.08
    iterations: int = 0
    ll_history: tuple[float, ...] = ()

    def prob(self, src: str, tgt: str) -> float:
        """Model probability with a floor for unseen/unknown pairs."""
        return self.t.get((src, tgt), PROB_FLOOR)


@dataclass(frozen=True)
class AlignmentLinks:
    """Word links for one pair: (source index, target index)."""

    links: frozenset[tuple[int, int]]
    pair_id: str
    unknown_tokens: tuple[str, ...] = ()


@dataclass(frozen=True)
class PhraseTable:
    """Alignment-consistent phrase pairs as ((s1,s2),(t1,t2)) spans."""

    entries: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    max_len: int


def _prior_weights(n: int, j: int, m: int, tension: float, null_mass: float) -> tuple[list[float], float]:
    """Prior mass over source positions (plus NULL) for target position j."""
    if tension == 0.0:
        share = (1.0 - null_mass) / n
        return [share] * n, null_mass
    raw = [math.exp(-tension * abs((i + 1) / n - (j + 1) / m)) for i in range(n)]
    z = sum(raw)
    return [(1.0 - null_mass) * r / z for r in raw], null_mass


def _sides(pair: ParallelPair, direction: str) -> tuple[list[str], list[str]]:
    src = [t.surface for t in pair.source]
    tgt = [t.surface for t in pair.target]
    if direction == "rev":
        return tgt, src
    return src, tgt


def train_model(
    pairs: Sequence[ParallelPair],
    iterations: int = 5,
    tension: float = 4.0,
    null_mass: float = 0.08,
    direction: str = "fwd",
) -> TranslationModel:
    """EM-train lexical probabilities p(tgt|src) over a parallel corpus.

    The per-iteration corpus log-likelihood (computed in each E-step under
    the entering parameters) is recorded in ``ll_history``; with tension 0
    it is non-decreasing. Expected counts are reduced in corpus order so
    identical inputs give bit-identical models.
    """
    if not pairs:
        raise ValueError("cannot train on an empty corpus")
    if iterations < 1:
        raise ValueError(f"iterations must be >= 1, got {iterations}")
    if direction not in ("fwd", "rev"):
        raise ValueError(f"direction must be 'fwd' or 'rev', got {direction!r}")
    if not 0.0 <= null_mass < 1.0:
        raise ValueError(f"null_mass must be in [0, 1), got {null_mass}")
    if tension < 0.0:
        raise ValueError(f"tension must be non-negative, got {tension}")

    sides = [_sides(p, direction) for p in pairs]
    vocab_src: set[str] = set()
    vocab_tgt: set[str] = set()
    t: dict[tuple[str, str], float] = {}
    for src, tgt in sides:
        vocab_src.update(src)
        vocab_tgt.update(tgt)
    init = 1.0 / len(vocab_tgt)
    for src, tgt in sides:
        for w in tgt:
            t[(NULL_TOKEN, w)] = init
            for s in src:
                t[(s, w)] = init

    ll_history: list[float] = []
    for _ in range(iterations):
        counts: dict[tuple[str, str], float] = defaultdict(float)
        totals: dict[str, float] = defaultdict(float)
        ll = 0.0
        for src, tgt in sides:
            n, m = len(src), len(tgt)
            for j, w in enumerate(tgt):
                weights, w_null = _prior_weights(n, j, m, tension, null_mass)
                # NULL keys drop out of t when null_mass is 0, hence .get
                terms = [(NULL_TOKEN, w_null * t.get((NULL_TOKEN, w), 0.0))]
                terms += [(s, weights[i] * t[(s, w)]) for i, s in enumerate(src)]
                z = sum(v for _, v in terms)
                ll += math.log(z if z > 0.0 else PROB_FLOOR)
                for s, v in terms:
                    if v > 0.0:
                        c = v / z
                        counts[(s, w)] += c
                        totals[s] += c
        t = {key: counts[key] / totals[key[0]] for key in counts}
        ll_history.append(ll)

    return TranslationModel(
        t=t,
        vocab_src=frozenset(vocab_src),
        vocab_tgt=frozenset(vocab_tgt),
        tension=tension,
        direction=direction,
        null_mass=null_mass,
        iterations=iterations,
        ll_history=tuple(ll_history),
    )


def _viterbi(model: TranslationModel, src: list[str], tgt: list[str]) -> set[tuple[int, int]]:
    """Per-target-word argmax link; NULL (scanned first) keeps it unaligned.

    Ties keep the earliest-scanned option, so NULL beats any real position
    and the lowest source index wins among real ones.
    """
    n, m = len(src), len(tgt)
    links: set[tuple[int, int]] = set()
    for j, w in enumerate(tgt):
        weights, w_null = _prior_weights(n, j, m, model.tension, model.null_mass)
        best_i = -1
        best_v = w_null * model.prob(NULL_TOKEN, w)
        for i, s in enumerate(src):
            v = weights[i] * model.prob(s, w)
            if v > best_v:
                best_i, best_v = i, v
        if best_i >= 0:
            links.add((best_i, j))
    return links


def align_pair(
    model_fwd: TranslationModel | None,
    model_rev: TranslationModel | None,
    pair: ParallelPair,
    mode: str = "intersection",
) -> AlignmentLinks:
    """Viterbi-align one pair: forward, reverse, or their intersection."""
    if mode not in ("forward", "reverse", "intersection"):
        raise ValueError(f"mode must be forward/reverse/intersection, got {mode!r}")
    src = [t.surface for t in pair.source]
    tgt = [t.surface for t in pair.target]

    unknown: set[str] = set()
    fwd_links: set[tuple[int, int]] = set()
    rev_links: set[tuple[int, int]] = set()
    if mode in ("forward", "intersection"):
        if model_fwd is None:
            raise ValueError("forward model required")
        fwd_links = _viterbi(model_fwd, src, tgt)
        unknown.update(w for w in src if w not in model_fwd.vocab_src)
        unknown.update(w for w in tgt if w not in model_fwd.vocab_tgt)
    if mode in ("reverse", "intersection"):
        if model_rev is None:
            raise ValueError("reverse model required")
        flipped = _viterbi(model_rev, tgt, src)
        rev_links = {(j, i) for (i, j) in flipped}
        unknown.update(w for w in tgt if w not in model_rev.vocab_src)
        unknown.update(w for w in src if w not in model_rev.vocab_tgt)

    if mode == "forward":
        links = fwd_links
    elif mode == "reverse":
        links = rev_links
    else:
        links = fwd_links & rev_links
    return AlignmentLinks(
        links=frozenset(links), pair_id=pair.id, unknown_tokens=tuple(sorted(unknown))
    )


def extract_phrases(
    pair: ParallelPair, links: AlignmentLinks, max_len: int = 7
) -> PhraseTable:
    """Enumerate all alignment-consistent phrase pairs up to ``max_len``.

    A box (source span, target span) is consistent when every link from
    either span lands inside the other and at least one link is inside;
    target spans extend over adjacent unaligned words.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be positive, got {max_len}")
    n, m = len(pair.source), len(pair.target)
    lset = links.links
    for i, j in lset:
        if not (0 <= i < n and 0 <= j < m):
            raise ValueError(f"link ({i},{j}) out of bounds for {n}x{m} pair")

    tgt_aligned = [False] * m
    for _, j in lset:
        tgt_aligned[j] = True

    entries: set[tuple[tuple[int, int], tuple[int, int]]] = set()
    for s1 in range(n):
        for s2 in range(s1 + 1, min(n, s1 + max_len) + 1):
            proj = {j for (i, j) in lset if s1 <= i < s2}
            if not proj:
                continue
            t1, t2 = min(proj), max(proj) + 1
            back = {i for (i, j) in lset if t1 <= j < t2}
            if min(back) < s1 or max(back) >= s2:
                continue
            lo = t1
            while lo > 0 and not tgt_aligned[lo - 1]:
                lo -= 1
            hi = t2
            while hi < m and not tgt_aligned[hi]:
                hi += 1
            for a in range(lo, t1 + 1):
                for b in range(t2, hi + 1):
                    if b - a <= max_len:
                        entries.add(((s1, s2), (a, b)))
    return PhraseTable(entries=tuple(sorted(entries)), max_len=max_len)


def lookup_aligned_span(
    phrases: PhraseTable, source_span: tuple[int, int]
) -> tuple[int, int] | None:
    """Minimal target span whose phrase pair has exactly this source span."""
    matches = [tgt for src, tgt in phrases.entries if src == tuple(source_span)]
    if not matches:
        return None
    return min(matches, key=lambda sp: (sp[1] - sp[0], sp[0]))


def lookup_containing_span(
    phrases: PhraseTable, source_span: tuple[int, int]
) -> tuple[int, int] | None:
    """Like lookup_aligned_span but accepts the tightest containing phrase."""
    exact = lookup_aligned_span(phrases, source_span)
    if exact is not None:
        return exact
    s1, s2 = source_span
    candidates = [
        (src, tgt)
        for src, tgt in phrases.entries
        if src[0] <= s1 and s2 <= src[1]
    ]
    if not candidates:
        return None
    _, tgt = min(
        candidates, key=lambda e: (e[0][1] - e[0][0], e[0][0], e[1][1] - e[1][0], e[1][0])
    )
    return tgt


# ---------------------------------------------------------------------------
# serialization


def dump_model(model: TranslationModel) -> str:
    """Sorted 3-column TSV with a "#tension=<λ> #iters=<k>" header line."""
    lines = [f"#tension={model.tension!r} #iters={model.iterations}"]
    for src, tgt in sorted(model.t):
        lines.append(f"{src}\t{tgt}\t{model.t[(src, tgt)]!r}")
    return "\n".join(lines) + "\n"


def save_model(model: TranslationModel, path: str | Path) -> None:
    Path(path).write_text(dump_model(model), encoding="utf-8")


def load_model(
    path: str | Path, direction: str = "fwd", null_mass: float = 0.08
) -> TranslationModel:
    """Read a model dump produced by :func:`save_model`."""
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("#tension="):
        raise FormatError(f"{path}: missing model header line")
    try:
        fields = dict(part.split("=", 1) for part in lines[0].lstrip("#").split(" #"))
        tension = float(fields["tension"])
        iterations = int(fields["iters"])
    except (ValueError, KeyError) as exc:
        raise FormatError(f"{path}: bad model header: {exc}") from None
    t: dict[tuple[str, str], float] = {}
    vocab_src: set[str] = set()
    vocab_tgt: set[str] = set()
    for lineno, line in enumerate(lines[1:], 2):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise FormatError(f"{path}: line {lineno}: expected 3 columns, got {len(cols)}")
        try:
            prob = float(cols[2])
        except ValueError:
            raise FormatError(f"{path}: line {lineno}: bad probability {cols[2]!r}") from None
        t[(cols[0], cols[1])] = prob
        if cols[0] != NULL_TOKEN:
            vocab_src.add(cols[0])
        vocab_tgt.add(cols[1])
    return TranslationModel(
        t=t,
        vocab_src=frozenset(vocab_src),
        vocab_tgt=frozenset(vocab_tgt),
        tension=tension,
        direction=direction,
        null_mass=null_mass,
        iterations=iterations,
    )


def links_to_pharaoh(links: AlignmentLinks) -> str:
    """One pair's links as space-separated "i-j" tokens, sorted."""
    return " ".join(f"{i}-{j}" for i, j in sorted(links.links))


def pharaoh_to_links(line: str, pair_id: str) -> AlignmentLinks:
    links: set[tuple[int, int]] = set()
    for tok in line.split():
        try:
            i, j = tok.split("-")
            links.add((int(i), int(j)))
        except ValueError:
            raise FormatError(f"bad pharaoh token {tok!r}") from None
    return AlignmentLinks(links=frozenset(links), pair_id=pair_id)
