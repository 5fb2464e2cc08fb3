"""cmforge: code-mixed text synthesis, alignment, retrieval and answer ranking.

The package is organised around small, composable modules:

- :mod:`cmforge.corpus`     tokenization, language tagging, corpus IO
- :mod:`cmforge.lexres`     lexical resources (lexicons, n-gram stores, transliteration)
- :mod:`cmforge.aligner`    word alignment (EM with a positional prior) + phrase extraction
- :mod:`cmforge.mixer`      code-mixed question / sentence generation
- :mod:`cmforge.metrics`    mixing, translation-quality, QA and ranking metrics
- :mod:`cmforge.retrieval`  passage indexing, BM25 retrieval, snippet ranking
- :mod:`cmforge.answerrank` candidate extraction and answer scoring
- :mod:`cmforge.cli`        command-line front end
"""

from __future__ import annotations

__version__ = "0.1.0"


class CmforgeError(Exception):
    """Base class for all errors raised deliberately by this package."""


class FormatError(CmforgeError):
    """An input file or record does not follow the documented format."""


class ResourceError(CmforgeError):
    """A lexical resource (lexicon, n-gram store, rule table) is malformed."""


class NoTranslationError(CmforgeError):
    """The lexicon offers no candidate for the requested word."""
