from .io_schemas import (
    BasisFile,
    CertificateFile,
    CertificateRow,
    EnumerationFile,
    SearchCheckpoint,
    StateFile,
    StringFile,
    UnitaryFile,
)
from .record_schemas import (
    ConstructionKindEnum,
    EvidenceEnum,
    OutcomeRecord,
    RunManifest,
    ScanRecord,
    ScanSummary,
    parse_row,
)

__all__ = [
    "BasisFile",
    "CertificateFile",
    "CertificateRow",
    "EnumerationFile",
    "SearchCheckpoint",
    "StateFile",
    "StringFile",
    "UnitaryFile",
    "ConstructionKindEnum",
    "EvidenceEnum",
    "OutcomeRecord",
    "RunManifest",
    "ScanRecord",
    "ScanSummary",
    "parse_row",
]
