"""Loading, filtering and deduplication of the tweet CSV corpus.

The corpus is a UTF-8 CSV with a header row. Multi-valued cells
(hashtags, user_mentions) hold comma-separated values inside one cell.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("id", "original_text", "lang")

COLUMNS = (
    "id",
    "created_at",
    "source",
    "original_text",
    "lang",
    "favorite_count",
    "retweet_count",
    "original_author",
    "hashtags",
    "user_mentions",
    "place",
)


class CorpusError(Exception):
    """Fatal corpus problem: missing file or missing required column."""


@dataclass(frozen=True)
class TweetRecord:
    id: int
    created_at: str = ""
    source: str = ""
    original_text: str = ""
    lang: str = ""
    favorite_count: int = 0
    retweet_count: int = 0
    original_author: str = ""
    hashtags: tuple[str, ...] = field(default_factory=tuple)
    user_mentions: tuple[str, ...] = field(default_factory=tuple)
    place: str | None = None


def _split_multi(cell: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in cell.split(",") if part.strip())


@dataclass(frozen=True)
class LoadResult:
    records: tuple[TweetRecord, ...]
    skipped: int


def load_csv(path) -> LoadResult:
    """Read the corpus CSV, skipping (and counting) malformed rows.

    Raises CorpusError if the file is missing or a required column is
    absent from the header. Column order is irrelevant.
    """
    try:
        handle = open(path, newline="", encoding="utf-8")
    except FileNotFoundError as exc:
        raise CorpusError(f"corpus file not found: {path}") from exc

    records: list[TweetRecord] = []
    skipped = 0
    with handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise CorpusError(f"missing required column(s): {', '.join(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                record = _parse_row(row)
            except ValueError as exc:
                skipped += 1
                logger.warning("skipping row %d: %s", lineno, exc)
                continue
            records.append(record)
    return LoadResult(records=tuple(records), skipped=skipped)


def _parse_row(row: dict) -> TweetRecord:
    def get(name: str) -> str:
        value = row.get(name)
        return value if value is not None else ""

    text = get("original_text")
    if not text:
        raise ValueError("empty original_text")
    try:
        tweet_id = int(get("id"))
    except ValueError:
        raise ValueError(f"unparseable id {get('id')!r}")
    if tweet_id < 0:
        raise ValueError(f"negative id {tweet_id}")

    def count(name: str) -> int:
        raw = get(name).strip()
        if not raw:
            return 0
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"unparseable {name} {raw!r}")
        if value < 0:
            raise ValueError(f"negative {name} {value}")
        return value

    return TweetRecord(
        id=tweet_id,
        created_at=get("created_at"),
        source=get("source"),
        original_text=text,
        lang=get("lang"),
        favorite_count=count("favorite_count"),
        retweet_count=count("retweet_count"),
        original_author=get("original_author"),
        hashtags=_split_multi(get("hashtags")),
        user_mentions=_split_multi(get("user_mentions")),
        place=get("place") or None,
    )


def filter_english(records) -> tuple[TweetRecord, ...]:
    """Keep only records with lang == 'en', preserving order."""
    return tuple(r for r in records if r.lang == "en")


def dedupe(records) -> tuple[TweetRecord, ...]:
    """Drop repeated ids; the first occurrence of each id wins."""
    seen: set[int] = set()
    out: list[TweetRecord] = []
    for record in records:
        if record.id not in seen:
            seen.add(record.id)
            out.append(record)
    return tuple(out)


def write_csv(records, path) -> None:
    """Serialize records back to the same CSV dialect as the input."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.id,
                    r.created_at,
                    r.source,
                    r.original_text,
                    r.lang,
                    r.favorite_count,
                    r.retweet_count,
                    r.original_author,
                    ",".join(r.hashtags),
                    ",".join(r.user_mentions),
                    r.place or "",
                ]
            )
