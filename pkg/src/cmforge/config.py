"""Run configuration and reproducibility manifests.

A run is configured in three layers — built-in defaults, a flat
``key = value`` config file, then command-line flags — with later layers
winning. Every CLI run records a manifest (config hash, input digests,
toolkit version, timestamp) next to its artifact; two runs with the same
manifest identity must produce byte-identical artifacts.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, fields
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping, get_type_hints

from . import FormatError, __version__

#: environment variable consulted when no --config flag is given
ENV_CONFIG = "CMFORGE_CONFIG"


@dataclass
class RunConfig:
    """Tunable paths and parameters shared by the CLI subcommands."""

    # resource paths (None = not set / use the bundled resource)
    pairs: str | None = None
    annotations: str | None = None
    lexicon: str | None = None
    unigrams: str | None = None
    bigrams: str | None = None
    translit: str | None = None
    embeddings: str | None = None
    stopwords: str | None = None
    patterns: str | None = None
    answer_types: str | None = None
    # aligner
    iterations: int = 5
    tension: float = 4.0
    null_mass: float = 0.08
    symmetrization: str = "intersection"
    max_phrase_len: int = 7
    # mixer / disambiguation
    eps: float = 1e-4
    max_iters: int = 100
    top_k: int = 5
    # retrieval, snippets and answer ranking
    k1: float = 1.2
    b: float = 0.75
    top_n: int = 30
    d: float = 0.8
    snippet_k: int = 3
    tau: float = 0.9
    # metrics
    bleu_n: int = 4
    bleu_smooth: bool = False
    rank_k: int = 10
    # dataset split randomness
    seed: int = 0

    _PATH_FIELDS = (
        "pairs", "annotations", "lexicon", "unigrams", "bigrams",
        "translit", "embeddings", "stopwords", "patterns", "answer_types",
    )

    def validate(self) -> None:
        """Range-check every numeric parameter; collect all violations."""
        problems = []
        for name, ok, want in (
            ("iterations", self.iterations >= 1, ">= 1"),
            ("tension", self.tension >= 0, ">= 0"),
            ("null_mass", 0.0 <= self.null_mass < 1.0, "in [0, 1)"),
            ("symmetrization",
             self.symmetrization in ("forward", "reverse", "intersection"),
             "forward/reverse/intersection"),
            ("max_phrase_len", self.max_phrase_len >= 1, ">= 1"),
            ("eps", self.eps > 0, "> 0"),
            ("max_iters", self.max_iters >= 1, ">= 1"),
            ("top_k", self.top_k >= 1, ">= 1"),
            ("k1", self.k1 > 0, "> 0"),
            ("b", 0.0 <= self.b <= 1.0, "in [0, 1]"),
            ("top_n", self.top_n >= 1, ">= 1"),
            ("d", 0.0 <= self.d <= 1.0, "in [0, 1]"),
            ("snippet_k", self.snippet_k >= 1, ">= 1"),
            ("tau", 0.0 <= self.tau <= 1.0, "in [0, 1]"),
            ("bleu_n", self.bleu_n >= 1, ">= 1"),
            ("rank_k", self.rank_k >= 1, ">= 1"),
        ):
            if not ok:
                problems.append(f"{name} must be {want}, got {getattr(self, name)!r}")
        if problems:
            raise ValueError("; ".join(problems))

    def validate_paths(self) -> None:
        """Every configured path must exist."""
        missing = [
            f"{name} = {value}"
            for name in self._PATH_FIELDS
            if (value := getattr(self, name)) is not None and not Path(value).exists()
        ]
        if missing:
            raise FormatError("missing config paths: " + "; ".join(missing))


def parse_config_text(text: str, origin: str = "<config>") -> dict[str, str]:
    """Parse flat ``key = value`` lines; ``#`` comments and blanks skipped."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise FormatError(f"{origin}: line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise FormatError(f"{origin}: line {lineno}: empty key")
        if key in values:
            raise FormatError(f"{origin}: line {lineno}: duplicate key {key!r}")
        values[key] = value.strip()
    return values


def load_config_file(path: str | Path) -> dict[str, str]:
    path = Path(path)
    return parse_config_text(path.read_text(encoding="utf-8"), origin=str(path))


def _coerce(name: str, raw: str, hint: Any) -> Any:
    if hint is bool:
        low = raw.lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise FormatError(f"config key {name!r}: bad boolean {raw!r}")
    try:
        if hint is int:
            return int(raw)
        if hint is float:
            return float(raw)
    except ValueError:
        raise FormatError(f"config key {name!r}: bad {hint.__name__} {raw!r}") from None
    if hint is str:
        return raw
    # optional path fields: "none" or empty unsets them
    if raw.lower() == "none" or raw == "":
        return None
    return raw


def make_config(
    file_values: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> RunConfig:
    """Layer built-in defaults < config-file values < explicit overrides.

    Override entries that are None mean "not given" and are skipped.
    """
    hints = get_type_hints(RunConfig)
    known = {f.name for f in fields(RunConfig) if not f.name.startswith("_")}
    cfg = RunConfig()
    for name, raw in (file_values or {}).items():
        if name not in known:
            raise FormatError(f"unknown config key {name!r}")
        setattr(cfg, name, _coerce(name, raw, hints[name]))
    for name, value in (overrides or {}).items():
        if value is None:
            continue
        if name not in known:
            raise FormatError(f"unknown config key {name!r}")
        setattr(cfg, name, value)
    cfg.validate()
    return cfg


def resolve_config_path(flag_value: str | None) -> Path | None:
    """--config flag wins; otherwise the environment fallback, if set."""
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(ENV_CONFIG)
    return Path(env) if env else None


# ---------------------------------------------------------------------------
# manifests


def config_hash(cfg: RunConfig) -> str:
    payload = json.dumps(dataclasses.asdict(cfg), sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass(frozen=True)
class RunManifest:
    """What went into a run: enough to check that a re-run is identical."""

    subcommand: str
    config_hash: str
    inputs: Mapping[str, str]
    version: str = __version__
    created: str = ""

    def identity(self) -> dict:
        """Everything that determines the outputs (timestamp excluded)."""
        return {
            "subcommand": self.subcommand,
            "config_hash": self.config_hash,
            "inputs": dict(sorted(self.inputs.items())),
            "version": self.version,
        }

    def to_json(self) -> str:
        payload = dict(self.identity(), created=self.created)
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def build_manifest(
    subcommand: str, cfg: RunConfig, input_paths: Mapping[str, str | Path]
) -> RunManifest:
    return RunManifest(
        subcommand=subcommand,
        config_hash=config_hash(cfg),
        inputs={name: file_digest(p) for name, p in sorted(input_paths.items())},
        created=datetime.now(timezone.utc).isoformat(),
    )


def write_manifest(manifest: RunManifest, artifact_path: str | Path) -> Path:
    """Store the manifest next to its artifact as <artifact>.manifest.json."""
    path = Path(str(artifact_path) + ".manifest.json")
    path.write_text(manifest.to_json(), encoding="utf-8")
    return path


def load_manifest(path: str | Path) -> RunManifest:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    try:
        return RunManifest(
            subcommand=obj["subcommand"],
            config_hash=obj["config_hash"],
            inputs=dict(obj["inputs"]),
            version=obj["version"],
            created=obj.get("created", ""),
        )
    except KeyError as exc:
        raise FormatError(f"{path}: manifest missing field {exc}") from None
