# domain/errors.py

from __future__ import annotations

from typing import Optional

EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_IO = 3


class PspError(Exception):
    """Base class for every error raised by the risk engine."""

    exit_code: int = EXIT_RUNTIME


# ---------- Configuration ----------

class ConfigurationError(PspError):
    """Feasibility tables or model coefficients are unusable."""

    exit_code = EXIT_VALIDATION


class ConfigValidationError(PspError):
    exit_code = EXIT_VALIDATION

    def __init__(self, diagnostics: list):
        self.diagnostics = diagnostics
        lines = "; ".join(str(d) for d in diagnostics)
        super().__init__(f"{len(diagnostics)} config violation(s): {lines}")


# ---------- Ingestion ----------

class CorpusFormatError(PspError):
    exit_code = EXIT_VALIDATION

    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        super().__init__(f"corpus line {line_no}: {reason}")


class DuplicatePostError(PspError):
    exit_code = EXIT_VALIDATION

    def __init__(self, post_id: str, first_line: Optional[int] = None,
                 second_line: Optional[int] = None):
        self.post_id = post_id
        self.first_line = first_line
        self.second_line = second_line
        where = f" on lines {first_line} and {second_line}" if first_line else ""
        super().__init__(f"duplicate post id {post_id!r}{where}")


class LiveSourceError(PspError):
    """Live source failed. Retryable errors may be attempted again later."""

    def __init__(self, message: str, retryable: bool = True,
                 retry_after: Optional[float] = None):
        self.retryable = retryable
        self.retry_after = retry_after
        super().__init__(message)


class RateLimitedError(LiveSourceError):
    def __init__(self, retry_after: float, message: str = "live source rate-limited"):
        super().__init__(f"{message} (retry after {retry_after:g}s)",
                         retryable=True, retry_after=retry_after)


# ---------- Keyword DB ----------

class KeywordDbError(PspError):
    exit_code = EXIT_VALIDATION


class DuplicateKeywordError(KeywordDbError):
    def __init__(self, collisions: list[str]):
        self.collisions = sorted(collisions)
        super().__init__(f"duplicate keyword tag(s): {', '.join(self.collisions)}")


class InvalidKeywordError(KeywordDbError):
    def __init__(self, tag: str):
        self.tag = tag
        super().__init__(
            f"invalid keyword tag {tag!r}: expected lowercase letters, digits or '_'"
        )


class KeywordDbFormatError(KeywordDbError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        super().__init__(f"keyword DB line {line_no}: {reason}")


class KeywordDbMigrationError(KeywordDbError):
    def __init__(self, found: int, supported: int):
        self.found = found
        self.supported = supported
        super().__init__(
            f"keyword DB format v{found} cannot be read by this version "
            f"(supports v{supported}); migrate the file first"
        )


# ---------- SAI ----------

class SaiIntegrityError(PspError):
    def __init__(self, tag: str):
        self.tag = tag
        super().__init__(f"matched keyword {tag!r} is not in the keyword DB")


# ---------- Financial ----------

class FinancialValidationError(PspError):
    exit_code = EXIT_VALIDATION


class CurrencyMismatchError(FinancialValidationError):
    pass


class MarginError(PspError):
    def __init__(self, ppia, vcu):
        super().__init__(
            f"attack unprofitable at any volume: PPIA {ppia} does not exceed VCU {vcu}"
        )


class InsufficientDataError(PspError):
    pass


# ---------- Pipeline ----------

class MissingArtifactError(PspError):
    def __init__(self, artifact: str, producer: str):
        self.artifact = artifact
        self.producer = producer
        super().__init__(f"missing {artifact}; run `psp {producer}` first")


class StaleArtifactError(PspError):
    """An intermediate file was produced from other inputs than the current run."""

    def __init__(self, artifact: str, producer: str):
        self.artifact = artifact
        self.producer = producer
        super().__init__(
            f"{artifact} was produced from different inputs (corpus, keyword DB, query, "
            f"window or SAI settings); rerun `psp {producer}` with the current options first"
        )


class StageError(PspError):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")
        if isinstance(cause, PspError):
            self.exit_code = cause.exit_code
        else:
            self.exit_code = EXIT_IO if isinstance(cause, OSError) else EXIT_RUNTIME
