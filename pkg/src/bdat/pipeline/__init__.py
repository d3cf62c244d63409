from bdat.pipeline.config import Seeds, StageConfig
from bdat.pipeline.core import (
    CapacityError,
    Enrollment,
    Pipeline,
    VerifyResult,
    background_cohort,
    build_record,
    verify_batch,
    verify_record,
)
from bdat.pipeline.record import (
    BadMagicError,
    ChecksumError,
    MalformedSectionError,
    RecordFormatError,
    TemplateRecord,
    TrailingBytesError,
    TruncatedRecordError,
    UnknownVersionError,
    deserialize_record,
    serialize_record,
)
from bdat.pipeline.store import DuplicateUserError, StoreError, TemplateStore, UnknownUserError

__all__ = [
    "BadMagicError", "CapacityError", "ChecksumError", "DuplicateUserError", "Enrollment",
    "MalformedSectionError", "Pipeline", "RecordFormatError", "Seeds", "StageConfig",
    "StoreError", "TemplateRecord", "TemplateStore", "TrailingBytesError",
    "TruncatedRecordError", "UnknownUserError", "UnknownVersionError", "VerifyResult",
    "background_cohort", "build_record", "deserialize_record", "serialize_record",
    "verify_batch", "verify_record",
]
