use std::io::{Read, Write};

use super::IngestError;

/// Row-major 8-bit RGB image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub width: u32,
    pub height: u32,
    pub data: Vec<u8>,
}

impl Frame {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Self {
        assert_eq!(data.len(), width as usize * height as usize * 3, "RGB buffer size mismatch");
        Self { width, height, data }
    }

    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        let data = rgb.iter().copied().cycle().take(width as usize * height as usize * 3).collect();
        Self { width, height, data }
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let o = (y as usize * self.width as usize + x as usize) * 3;
        [self.data[o], self.data[o + 1], self.data[o + 2]]
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let o = (y as usize * self.width as usize + x as usize) * 3;
        self.data[o..o + 3].copy_from_slice(&rgb);
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32, IngestError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| IngestError::BadImageHeader(format!("expected {what}")))
    }
}

/// Reads a binary PPM (`P6`) with maxval 255.
pub fn read_ppm(mut reader: impl Read) -> Result<Frame, IngestError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() < 2 {
        return Err(IngestError::Truncated("missing PPM magic".into()));
    }
    if &bytes[..2] != b"P6" {
        return Err(IngestError::UnsupportedFormat(
            String::from_utf8_lossy(&bytes[..2]).into_owned(),
        ));
    }
    let mut cur = HeaderCursor { bytes: &bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if maxval != 255 {
        return Err(IngestError::UnsupportedFormat(format!("maxval {maxval}")));
    }
    if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(IngestError::BadImageHeader("no separator before pixel data".into()));
    }
    let start = cur.pos + 1;
    let len = width as usize * height as usize * 3;
    let data = bytes
        .get(start..start + len)
        .ok_or_else(|| IngestError::Truncated(format!("expected {len} bytes of pixel data")))?;
    Ok(Frame::new(width, height, data.to_vec()))
}

pub fn write_ppm(frame: &Frame, mut out: impl Write) -> std::io::Result<()> {
    write!(out, "P6\n{} {}\n255\n", frame.width, frame.height)?;
    out.write_all(&frame.data)
}

/// Writes a binary PGM (`P5`, maxval 255) from row-major gray bytes.
pub fn write_pgm(width: u32, height: u32, gray: &[u8], mut out: impl Write) -> std::io::Result<()> {
    assert_eq!(gray.len(), width as usize * height as usize);
    write!(out, "P5\n{width} {height}\n255\n")?;
    out.write_all(gray)
}
