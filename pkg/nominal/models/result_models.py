# =========================================
# RESULT RECORDS FOR MACHINE-READABLE OUTPUT
# Nominal Equational Logic - reasoning kernel
# =========================================

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

# =========================================
# ENUMS
# =========================================

class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    PASS = "pass"
    FAIL = "fail"
    FOUND = "found"
    NOT_FOUND = "not found"

# =========================================
# RECORDS
# =========================================

class RecordBase(BaseModel):
    """Common configuration"""

    class Config:
        use_enum_values = True


class ErrorRecord(RecordBase):
    """A diagnostic, with a source position or a derivation path when known"""
    message: str
    line: Optional[int] = None
    column: Optional[int] = None
    path: List[int] = Field(default_factory=list)
    rule: Optional[str] = None
    atoms: List[str] = Field(default_factory=list)


class DecideRecord(RecordBase):
    """Empty-theory decision for one judgement"""
    judgement: str
    verdict: Verdict
    certificate: Optional[str] = None


class DerivationCheckRecord(RecordBase):
    """Kernel verdict on one named derivation"""
    name: str
    theory: str
    nodes: int = Field(0, ge=0)
    conclusion: Optional[str] = None
    verdict: Verdict
    error: Optional[ErrorRecord] = None


class CheckRecord(RecordBase):
    """Kernel verdicts on every derivation of a file"""
    file: str
    passed: int = Field(0, ge=0)
    failed: int = Field(0, ge=0)
    results: List[DerivationCheckRecord] = Field(default_factory=list)


class SearchRecord(RecordBase):
    """Outcome of a bounded search"""
    goal: str
    theory: str
    verdict: Verdict
    depth: Optional[int] = None
    derivation: Optional[str] = None


class CompileRecord(RecordBase):
    """Theory compilation summary"""
    source: str
    target: Optional[str] = None
    theory: str
    axioms_in: int = Field(0, ge=0)
    axioms_out: int = Field(0, ge=0)


class TranslateRecord(RecordBase):
    """The equation and freshness derivations for one NEL derivation"""
    name: str
    equation: str
    freshness: str


class EmbedRecord(RecordBase):
    """An NEoL derivation replayed as an NEL derivation"""
    name: str
    theory: str
    conclusion: str
    derivation: str

# =========================================
# ENVELOPE
# =========================================

class ResultResponse(BaseModel):
    """Generic command result"""
    success: bool = True
    message: str
    data: Optional[dict] = None
    count: Optional[int] = None
