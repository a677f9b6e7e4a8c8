import re
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

import config
from utils import sha256_text

SORRY_RE = re.compile(r"(?<![\w.'])(sorry|admit)(?![\w'!?])")


class VerificationStatus(str, Enum):
    VERIFIED = "verified"
    FAILED = "failed"
    TIMEOUT = "timeout"
    RESOURCE_EXHAUSTED = "resource-exhausted"
    PROTOCOL_ERROR = "protocol-error"

    def __str__(self):
        return self.value


class Severity(str, Enum):
    INFO = "info"
    WARNING = "warning"
    ERROR = "error"

    def __str__(self):
        return self.value


class ProofLimits(BaseModel):
    model_config = ConfigDict(frozen=True)

    timeout_s: float = config.TIMEOUT_S
    memory_bytes: int = config.MEMORY_LIMIT_BYTES

    @field_validator("timeout_s")
    @classmethod
    def _positive_timeout(cls, v):
        if v <= 0:
            raise ValueError("timeout must be positive")
        return v


class ProofJob(BaseModel):
    """One statement/proof pair to check. `statement` is the declaration up to (not including) `:=`."""

    model_config = ConfigDict(frozen=True)

    id: str
    statement: str
    proof: str
    limits: ProofLimits = Field(default_factory=ProofLimits)

    def source(self) -> str:
        return f"{self.statement} := {self.proof}"

    def fingerprint(self) -> str:
        return sha256_text(self.statement + "\x00" + self.proof)

    def contains_sorry(self) -> bool:
        return contains_sorry(self.proof)


class Diagnostic(BaseModel):
    model_config = ConfigDict(frozen=True)

    severity: Severity = Severity.ERROR
    message: str

    @classmethod
    def from_wire(cls, raw) -> "Diagnostic":
        if isinstance(raw, str):
            return cls(severity=Severity.ERROR, message=raw)
        severity = str(raw.get("severity", "error")).lower()
        if severity not in {s.value for s in Severity}:
            severity = Severity.ERROR.value
        text = raw.get("message", raw.get("data", ""))
        return cls(severity=Severity(severity), message=str(text))


class VerificationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    status: VerificationStatus
    diagnostics: List[Diagnostic] = []
    elapsed: float = 0.0
    contains_sorry: bool = False
    fingerprint: Optional[str] = None

    @model_validator(mode="after")
    def _verified_is_clean(self):
        if self.status == VerificationStatus.VERIFIED:
            if self.contains_sorry or any(d.severity == Severity.ERROR for d in self.diagnostics):
                raise ValueError("a verified result cannot carry errors or sorry")
        return self

    @property
    def verified(self) -> bool:
        return self.status == VerificationStatus.VERIFIED

    def well_formed(self) -> bool:
        """True when the backend elaborated the input without error diagnostics."""
        if self.status not in (VerificationStatus.VERIFIED, VerificationStatus.FAILED):
            return False
        return not self.errors()

    def errors(self) -> List[str]:
        return [d.message for d in self.diagnostics if d.severity == Severity.ERROR]

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationResult":
        return cls(**data)


def contains_sorry(proof: str) -> bool:
    from parsers.LeanLexer import strip_comments
    try:
        proof = strip_comments(proof)
    except Exception:
        pass
    return bool(SORRY_RE.search(proof))
