//! `MVS1` binary sidecar.
//!
//! Layout, all little-endian:
//!
//! | offset | size | field          |
//! |-------:|-----:|----------------|
//! | 0      | 4    | magic `MVS1`   |
//! | 4      | 4    | version (u32)  |
//! | 8      | 4    | width (u32)    |
//! | 12     | 4    | height (u32)   |
//! | 16     | 8    | record count   |
//!
//! followed by `record_count` records of `frame u32, x f32, y f32, dx f32, dy f32`.

use std::io::{self, Read, Write};

use super::IngestError;
use crate::types::{validate_vector, ClipMotionField, FrameSize, MotionVector};

pub const BINARY_MAGIC: [u8; 4] = *b"MVS1";
pub const BINARY_VERSION: u32 = 1;
pub const BINARY_HEADER_LEN: usize = 24;
pub const BINARY_RECORD_LEN: usize = 20;

fn read_exact_or_truncated(r: &mut impl Read, buf: &mut [u8], what: &str) -> Result<(), IngestError> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => IngestError::Truncated(what.to_string()),
        _ => IngestError::Io(e),
    })
}

/// Parses a binary sidecar. The format has no clip id, so the caller names it.
pub fn parse_binary(mut reader: impl Read, clip_id: &str) -> Result<ClipMotionField, IngestError> {
    let mut header = [0u8; BINARY_HEADER_LEN];
    read_exact_or_truncated(&mut reader, &mut header, "inside header")?;
    let magic: [u8; 4] = header[0..4].try_into().unwrap();
    if magic != BINARY_MAGIC {
        return Err(IngestError::BadMagic(magic));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != BINARY_VERSION {
        return Err(IngestError::UnsupportedVersion(version));
    }
    let frame = FrameSize::new(u32_at(8), u32_at(12));
    let count = u64::from_le_bytes(header[16..24].try_into().unwrap());

    let mut vectors = Vec::with_capacity(count.min(1 << 20) as usize);
    let mut rec = [0u8; BINARY_RECORD_LEN];
    for index in 0..count {
        read_exact_or_truncated(&mut reader, &mut rec, &format!("in record {index} of {count}"))?;
        let f32_at = |o: usize| f32::from_le_bytes(rec[o..o + 4].try_into().unwrap()) as f64;
        let v = MotionVector {
            frame_index: u32::from_le_bytes(rec[0..4].try_into().unwrap()),
            x: f32_at(4),
            y: f32_at(8),
            dx: f32_at(12),
            dy: f32_at(16),
        };
        validate_vector(vectors.len(), &v, frame)
            .map_err(|source| IngestError::Validation { line: None, source })?;
        vectors.push(v);
    }
    let mut probe = [0u8; 1];
    if reader.read(&mut probe)? != 0 {
        return Err(IngestError::RecordCountMismatch { declared: count });
    }
    ClipMotionField::new(clip_id, frame, vectors)
        .map_err(|source| IngestError::Validation { line: None, source })
}

/// Writes `field` in the binary layout; coordinates are narrowed to `f32`.
pub fn write_binary(field: &ClipMotionField, mut out: impl Write) -> io::Result<()> {
    let frame = field.frame_size();
    let mut header = Vec::with_capacity(BINARY_HEADER_LEN);
    header.extend_from_slice(&BINARY_MAGIC);
    header.extend_from_slice(&BINARY_VERSION.to_le_bytes());
    header.extend_from_slice(&frame.width.to_le_bytes());
    header.extend_from_slice(&frame.height.to_le_bytes());
    header.extend_from_slice(&(field.len() as u64).to_le_bytes());
    out.write_all(&header)?;
    for v in field.vectors() {
        let mut rec = [0u8; BINARY_RECORD_LEN];
        rec[0..4].copy_from_slice(&v.frame_index.to_le_bytes());
        for (k, value) in [v.x, v.y, v.dx, v.dy].into_iter().enumerate() {
            rec[4 + 4 * k..8 + 4 * k].copy_from_slice(&(value as f32).to_le_bytes());
        }
        out.write_all(&rec)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{parse_jsonl, write_jsonl};
    use proptest::prelude::*;

    fn bytes_of(field: &ClipMotionField) -> Vec<u8> {
        let mut buf = Vec::new();
        write_binary(field, &mut buf).unwrap();
        buf
    }

    #[test]
    fn header_only_file() {
        let mut buf = Vec::new();
        buf.extend_from_slice(b"MVS1");
        buf.extend_from_slice(&1u32.to_le_bytes());
        buf.extend_from_slice(&320u32.to_le_bytes());
        buf.extend_from_slice(&240u32.to_le_bytes());
        buf.extend_from_slice(&0u64.to_le_bytes());
        let field = parse_binary(buf.as_slice(), "x").unwrap();
        assert!(field.is_empty());
        assert_eq!(field.frame_size(), FrameSize::new(320, 240));
        assert_eq!(bytes_of(&field), buf);
    }

    #[test]
    fn exact_record_bytes() {
        let v = MotionVector::new(7, (1.5, 2.0), (-0.25, 3.0));
        let field = ClipMotionField::new("", FrameSize::new(4, 4), vec![v]).unwrap();
        let buf = bytes_of(&field);
        assert_eq!(buf.len(), BINARY_HEADER_LEN + BINARY_RECORD_LEN);
        assert_eq!(&buf[24..28], &7u32.to_le_bytes());
        assert_eq!(&buf[28..32], &1.5f32.to_le_bytes());
        assert_eq!(&buf[40..44], &3.0f32.to_le_bytes());
    }

    #[test]
    fn truncated_mid_record() {
        let vs = vec![MotionVector::new(0, (1.0, 1.0), (1.0, 1.0)); 2];
        let field = ClipMotionField::new("", FrameSize::new(4, 4), vs).unwrap();
        let buf = bytes_of(&field);
        let cut = &buf[..buf.len() - 7];
        assert!(matches!(parse_binary(cut, ""), Err(IngestError::Truncated(_))));
        assert!(matches!(parse_binary(&buf[..10], ""), Err(IngestError::Truncated(_))));
    }

    #[test]
    fn trailing_bytes_are_a_count_mismatch() {
        let field = ClipMotionField::new("", FrameSize::new(4, 4), vec![]).unwrap();
        let mut buf = bytes_of(&field);
        buf.extend_from_slice(&[0u8; BINARY_RECORD_LEN]);
        assert!(matches!(
            parse_binary(buf.as_slice(), ""),
            Err(IngestError::RecordCountMismatch { declared: 0 })
        ));
    }

    #[test]
    fn bad_magic_and_version() {
        let field = ClipMotionField::new("", FrameSize::new(4, 4), vec![]).unwrap();
        let mut buf = bytes_of(&field);
        buf[3] = b'2';
        assert!(matches!(parse_binary(buf.as_slice(), ""), Err(IngestError::BadMagic(_))));
        buf[3] = b'1';
        buf[4] = 2;
        assert!(matches!(parse_binary(buf.as_slice(), ""), Err(IngestError::UnsupportedVersion(2))));
    }

    #[test]
    fn out_of_bounds_record_is_rejected() {
        let field = ClipMotionField::new("", FrameSize::new(4, 4), vec![MotionVector::new(0, (3.0, 3.0), (0.0, 0.0))]).unwrap();
        let mut buf = bytes_of(&field);
        buf[28..32].copy_from_slice(&4.0f32.to_le_bytes());
        let err = parse_binary(buf.as_slice(), "").unwrap_err();
        assert!(err.is_validation());
    }

    fn arb_field() -> impl Strategy<Value = ClipMotionField> {
        (1u32..2000, 1u32..2000).prop_flat_map(|(w, h)| {
            let v = (0u32..100, 0.0..w as f64, 0.0..h as f64, -64.0..64.0f64, -64.0..64.0f64)
                .prop_map(|(f, x, y, dx, dy)| MotionVector::new(f, (x, y), (dx, dy)));
            proptest::collection::vec(v, 0..50).prop_filter_map("f32 rounding left the frame", move |vs| {
                let q: Vec<_> = vs.iter().map(MotionVector::quantized).collect();
                if q.iter().all(|v| FrameSize::new(w, h).contains(v.x, v.y)) {
                    ClipMotionField::new("p", FrameSize::new(w, h), vs).ok()
                } else {
                    None
                }
            })
        })
    }

    proptest! {
        #[test]
        fn binary_and_jsonl_agree_after_quantization(field in arb_field()) {
            let from_bin = parse_binary(bytes_of(&field).as_slice(), "p").unwrap();
            let mut text = Vec::new();
            write_jsonl(&field.quantized(), &mut text).unwrap();
            let from_json = parse_jsonl(text.as_slice()).unwrap();
            prop_assert_eq!(&from_bin, &field.quantized());
            prop_assert_eq!(from_bin, from_json);

            let mut full = Vec::new();
            write_jsonl(&field, &mut full).unwrap();
            prop_assert_eq!(parse_jsonl(full.as_slice()).unwrap(), field);
        }
    }
}
