"""Pipeline configuration: INI file with one section per stage.

Precedence: command-line flags beat config-file values, which beat the
defaults below.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field

from . import embedding, lstm


class ConfigError(Exception):
    """Invalid configuration; message lists the offending fields."""


@dataclass
class PipelineConfig:
    # paths
    input_csv: str | None = None
    stopwords: str | None = None  # None -> bundled default
    lexicon: str | None = None  # valence lexicon; None -> bundled default
    topic_lexicon: str | None = None  # keyword list; None -> bundled default
    outdir: str = "out"
    # ngram
    ngram_n: int = 2
    top_k: int = 50
    # sentiment
    alpha: float = 15.0
    # embedding
    dim: int = embedding.DEFAULT_DIM
    window: int = embedding.DEFAULT_WINDOW
    negatives: int = embedding.DEFAULT_NEGATIVES
    embed_epochs: int = embedding.DEFAULT_EPOCHS
    min_count: int = embedding.DEFAULT_MIN_COUNT
    max_len: int = 50
    embed_seed: int = 1
    embed_lr: float = embedding.DEFAULT_LR
    # training
    epochs: int = 30
    batch_size: int = 32
    split: float = 0.8
    seed: int = 1
    hidden: int = lstm.DEFAULT_HIDDEN
    lr: float = 1e-3

    def train_config(self) -> lstm.TrainConfig:
        return lstm.TrainConfig(
            epochs=self.epochs,
            batch_size=self.batch_size,
            split=self.split,
            seed=self.seed,
            hidden=self.hidden,
            lr=self.lr,
        )


_SCHEMA = {
    "paths": {
        "input_csv": str, "stopwords": str, "lexicon": str,
        "topic_lexicon": str, "outdir": str,
    },
    "ngram": {"ngram_n": int, "top_k": int},
    "sentiment": {"alpha": float},
    "embedding": {
        "dim": int, "window": int, "negatives": int, "embed_epochs": int,
        "min_count": int, "max_len": int, "embed_seed": int, "embed_lr": float,
    },
    "training": {
        "epochs": int, "batch_size": int, "split": float, "seed": int,
        "hidden": int, "lr": float,
    },
}


def load_config(path) -> PipelineConfig:
    """Parse an INI config file into a PipelineConfig."""
    parser = configparser.ConfigParser()
    read = parser.read(path, encoding="utf-8")
    if not read:
        raise ConfigError(f"config file not found: {path}")
    config = PipelineConfig()
    errors = []
    for section, fields in _SCHEMA.items():
        if not parser.has_section(section):
            continue
        for key in parser[section]:
            if key not in fields:
                errors.append(f"[{section}] unknown key {key!r}")
                continue
            raw = parser[section][key]
            try:
                setattr(config, key, fields[key](raw))
            except ValueError:
                errors.append(f"[{section}] {key}: cannot parse {raw!r} as {fields[key].__name__}")
    if errors:
        raise ConfigError("; ".join(errors))
    return config


def validate(config: PipelineConfig, require_input: bool = True) -> None:
    """Check path existence and basic value ranges; raise with every
    problem listed."""
    errors = []
    if require_input:
        if not config.input_csv:
            errors.append("paths.input_csv: required")
        elif not os.path.exists(config.input_csv):
            errors.append(f"paths.input_csv: no such file {config.input_csv!r}")
    for name in ("stopwords", "lexicon", "topic_lexicon"):
        value = getattr(config, name)
        if value is not None and not os.path.exists(value):
            errors.append(f"paths.{name}: no such file {value!r}")
    if config.ngram_n not in (1, 2, 3):
        errors.append(f"ngram.ngram_n: must be 1, 2 or 3, got {config.ngram_n}")
    if config.top_k < 0:
        errors.append("ngram.top_k: must be >= 0")
    if not 0.0 < config.split < 1.0:
        errors.append(f"training.split: must be in (0, 1), got {config.split}")
    for name in ("dim", "window", "negatives", "embed_epochs", "min_count",
                 "max_len", "epochs", "batch_size", "hidden"):
        if getattr(config, name) < 1:
            errors.append(f"{name}: must be >= 1")
    if errors:
        raise ConfigError("; ".join(errors))
