//! Motion-vector sidecars (JSONL and the `MVS1` binary layout) and binary
//! netpbm frames.

mod binary;
mod jsonl;
mod pnm;

pub use binary::{parse_binary, write_binary, BINARY_HEADER_LEN, BINARY_MAGIC, BINARY_RECORD_LEN, BINARY_VERSION};
pub use jsonl::{parse_jsonl, write_jsonl};
pub use pnm::{read_ppm, write_pgm, write_ppm, Frame};

use std::io::Read;
use thiserror::Error;

use crate::types::{ClipMotionField, FieldError};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("missing header: {0}")]
    MissingHeader(String),
    #[error("invalid record{}: {source}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Validation {
        line: Option<usize>,
        #[source]
        source: FieldError,
    },
    #[error("bad magic {0:?}, expected \"MVS1\"")]
    BadMagic([u8; 4]),
    #[error("unsupported sidecar version {0}")]
    UnsupportedVersion(u32),
    #[error("stream truncated: {0}")]
    Truncated(String),
    #[error("header announces {declared} records but the stream continues past them")]
    RecordCountMismatch { declared: u64 },
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("malformed image header: {0}")]
    BadImageHeader(String),
}

impl IngestError {
    /// True for errors about content that parsed but broke a domain rule.
    pub fn is_validation(&self) -> bool {
        matches!(self, IngestError::Validation { .. })
    }
}

/// Reads either sidecar format, choosing by the leading magic bytes.
pub fn parse_sidecar(mut reader: impl Read, clip_id: &str) -> Result<ClipMotionField, IngestError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.starts_with(&BINARY_MAGIC) {
        parse_binary(bytes.as_slice(), clip_id)
    } else {
        let field = parse_jsonl(bytes.as_slice())?;
        if field.clip_id().is_empty() {
            Ok(field.with_clip_id(clip_id))
        } else {
            Ok(field)
        }
    }
}
