use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::types::{validate_vector, ClipMotionField, FrameSize, MotionVector};

#[derive(Serialize, Deserialize)]
struct Header {
    #[serde(default)]
    clip_id: String,
    width: u32,
    height: u32,
}

#[derive(Serialize, Deserialize)]
struct Record {
    f: u32,
    x: f64,
    y: f64,
    dx: f64,
    dy: f64,
}

/// Parses a JSONL sidecar: one header object (`clip_id`, `width`, `height`)
/// followed by one `{f, x, y, dx, dy}` object per line. Blank lines are
/// skipped.
pub fn parse_jsonl(reader: impl Read) -> Result<ClipMotionField, IngestError> {
    let mut lines = BufReader::new(reader).lines().enumerate();
    let mut header = None;
    for (idx, line) in lines.by_ref() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| IngestError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let is_header = value.get("width").is_some() && value.get("height").is_some();
        if !is_header {
            return Err(IngestError::MissingHeader(format!(
                "line {line_no} is not a header object with width and height"
            )));
        }
        let h: Header = serde_json::from_value(value).map_err(|e| IngestError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        header = Some(h);
        break;
    }
    let header = header.ok_or_else(|| IngestError::MissingHeader("empty stream".into()))?;
    let frame = FrameSize::new(header.width, header.height);

    let mut vectors = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let r: Record = serde_json::from_str(&line).map_err(|e| IngestError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let v = MotionVector::new(r.f, (r.x, r.y), (r.dx, r.dy));
        validate_vector(vectors.len(), &v, frame).map_err(|source| IngestError::Validation {
            line: Some(line_no),
            source,
        })?;
        vectors.push(v);
    }
    ClipMotionField::new(header.clip_id, frame, vectors)
        .map_err(|source| IngestError::Validation { line: None, source })
}

/// Writes `field` as JSONL with LF line endings. Floats use the shortest
/// representation that parses back to the same `f64`.
pub fn write_jsonl(field: &ClipMotionField, mut out: impl Write) -> std::io::Result<()> {
    let header = Header {
        clip_id: field.clip_id().to_string(),
        width: field.frame_size().width,
        height: field.frame_size().height,
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for v in field.vectors() {
        let r = Record {
            f: v.frame_index,
            x: v.x,
            y: v.y,
            dx: v.dx,
            dy: v.dy,
        };
        serde_json::to_writer(&mut out, &r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
