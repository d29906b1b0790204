# storage/keyword_store.py
# Keyword DB file: a version header line, then tab-separated rows, one keyword per line.

from __future__ import annotations

import io
import re
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from domain.errors import KeywordDbFormatError, KeywordDbMigrationError
from domain.schemas import format_utc
from processing.keyword_db import DB_FORMAT_VERSION, AttackKeyword, KeywordDb, seed_db
from storage.atomic import atomic_write_text

HEADER_RE = re.compile(r"^# psp-keyword-db v(\d+)\s*$")
COLUMNS = [
    "tag",
    "scenario",
    "attacker_class",
    "vector",
    "origin",
    "source_run",
    "parent_tag",
    "added_at",
]
# header line + column line
FIRST_ROW_LINE = 3


def dump_db(db: KeywordDb) -> str:
    rows = [
        {
            "tag": k.tag,
            "scenario": k.scenario,
            "attacker_class": k.attacker_class.value,
            "vector": k.vector.value,
            "origin": k.origin,
            "source_run": k.source_run or "",
            "parent_tag": k.parent_tag or "",
            "added_at": format_utc(k.added_at),
        }
        for k in db.keywords
    ]
    df = pd.DataFrame(rows, columns=COLUMNS)
    body = df.to_csv(sep="\t", index=False, lineterminator="\n")
    return f"# psp-keyword-db v{db.version}\n{body}"


def save_db(db: KeywordDb, path: str | Path) -> None:
    atomic_write_text(path, dump_db(db))


def parse_db(text: str) -> KeywordDb:
    if not text.strip():
        raise KeywordDbFormatError(1, "empty file, expected version header")

    header, _, body = text.partition("\n")
    match = HEADER_RE.match(header)
    if match is None:
        raise KeywordDbFormatError(1, f"bad version header {header!r}")
    version = int(match.group(1))
    if version != DB_FORMAT_VERSION:
        raise KeywordDbMigrationError(version, DB_FORMAT_VERSION)

    try:
        df = pd.read_csv(io.StringIO(body), sep="\t", dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError:
        raise KeywordDbFormatError(2, "missing column header") from None
    except pd.errors.ParserError as exc:
        found = re.search(r"line (\d+)", str(exc))
        line_no = int(found.group(1)) + 1 if found else 2
        raise KeywordDbFormatError(line_no, str(exc).strip()) from exc

    if list(df.columns) != COLUMNS:
        raise KeywordDbFormatError(2, f"expected columns {', '.join(COLUMNS)}")

    keywords = []
    for offset, row in enumerate(df.to_dict(orient="records")):
        record = {k: (v if v != "" else None) for k, v in row.items()}
        try:
            keywords.append(AttackKeyword.model_validate(record))
        except ValidationError as exc:
            reason = "; ".join(
                f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors()
            )
            raise KeywordDbFormatError(FIRST_ROW_LINE + offset, reason) from exc

    return seed_db(keywords)


def load_db(path: str | Path) -> KeywordDb:
    return parse_db(Path(path).read_text(encoding="utf-8"))
