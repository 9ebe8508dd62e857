//! Binary PGM (P5) reading and writing.
//!
//! The format is small enough that a hand-rolled codec is simpler than a
//! dependency, and it lets parse errors carry the exact byte offset, which
//! the CLI surfaces to users staring at a truncated file.

use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("{path}: {what} at byte {offset}")]
    Malformed { path: String, what: String, offset: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Raw samples, row-major from the top-left, `max_value` deciding the
/// on-disk width (one byte up to 255, two big-endian bytes above).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub max_value: u16,
    pub samples: Vec<u16>,
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a str,
}

impl<'a> Scanner<'a> {
    fn malformed(&self, what: &str, offset: usize) -> PgmError {
        PgmError::Malformed { path: self.path.to_string(), what: what.to_string(), offset }
    }

    /// Header fields are separated by whitespace runs; `#` starts a comment
    /// that runs to the end of its line.
    fn skip_separators(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64, PgmError> {
        self.skip_separators();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(&b) = self.bytes.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u64))
                .ok_or_else(|| self.malformed(&format!("oversized {what}"), start))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.malformed(&format!("expected {what}"), start));
        }
        Ok(value)
    }
}

pub fn read_pgm(path: &Path) -> Result<PgmImage, PgmError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| PgmError::Io { path: shown.clone(), source })?;
    let mut s = Scanner { bytes: &bytes, pos: 0, path: &shown };

    if bytes.get(..2) != Some(b"P5") {
        return Err(s.malformed("expected P5 magic", 0));
    }
    s.pos = 2;
    let width = s.number("width")? as usize;
    let height = s.number("height")? as usize;
    if width == 0 || height == 0 {
        return Err(s.malformed("zero image dimension", s.pos));
    }
    let max_pos = s.pos;
    let max_value = s.number("maximum sample value")?;
    if max_value == 0 || max_value > 65535 {
        return Err(s.malformed("maximum sample value outside 1..=65535", max_pos));
    }
    let max_value = max_value as u16;
    match s.bytes.get(s.pos) {
        Some(b) if b.is_ascii_whitespace() => s.pos += 1,
        _ => return Err(s.malformed("expected single whitespace before samples", s.pos)),
    }

    let per_sample = if max_value > 255 { 2 } else { 1 };
    let expected = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(per_sample))
        .ok_or_else(|| s.malformed("image dimensions overflow", 2))?;
    let payload = &bytes[s.pos.min(bytes.len())..];
    if payload.len() != expected {
        let what = format!("sample payload of {} bytes where {expected} were expected", payload.len());
        return Err(s.malformed(&what, s.pos));
    }
    let data_start = s.pos;
    let samples = if per_sample == 2 {
        payload
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect::<Vec<u16>>()
    } else {
        payload.iter().map(|&b| b as u16).collect()
    };
    if let Some(i) = samples.iter().position(|&v| v > max_value) {
        return Err(s.malformed("sample exceeds declared maximum", data_start + i * per_sample));
    }
    Ok(PgmImage { width, height, max_value, samples })
}

pub fn write_pgm(path: &Path, image: &PgmImage) -> Result<(), PgmError> {
    debug_assert!(image.samples.len() == image.width * image.height);
    debug_assert!(image.samples.iter().all(|&v| v <= image.max_value));
    let mut out = format!("P5\n{} {}\n{}\n", image.width, image.height, image.max_value).into_bytes();
    if image.max_value > 255 {
        out.extend(image.samples.iter().flat_map(|v| v.to_be_bytes()));
    } else {
        out.extend(image.samples.iter().map(|&v| v as u8));
    }
    std::fs::write(path, out).map_err(|source| PgmError::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn offset_of(err: PgmError) -> usize {
        match err {
            PgmError::Malformed { offset, .. } => offset,
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn round_trips_both_depths() {
        let dir = tempdir().unwrap();
        for max_value in [255u16, 65535] {
            let img = PgmImage {
                width: 3,
                height: 2,
                max_value,
                samples: vec![0, 1, 2, 250, 17, max_value],
            };
            let path = dir.path().join(format!("img_{max_value}.pgm"));
            write_pgm(&path, &img).unwrap();
            assert_eq!(read_pgm(&path).unwrap(), img);
        }
    }

    #[test]
    fn header_comments_are_skipped() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("c.pgm");
        std::fs::write(&path, b"P5\n# made by hand\n2 1\n# depth\n255\n\x05\x09").unwrap();
        let img = read_pgm(&path).unwrap();
        assert_eq!((img.width, img.height, img.max_value), (2, 1, 255));
        assert_eq!(img.samples, vec![5, 9]);
    }

    #[test]
    fn sixteen_bit_samples_are_big_endian() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("be.pgm");
        std::fs::write(&path, b"P5\n1 1\n65535\n\x01\x02").unwrap();
        assert_eq!(read_pgm(&path).unwrap().samples, vec![0x0102]);
    }

    #[test]
    fn bad_magic_points_at_byte_zero() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("x.pgm");
        std::fs::write(&path, b"P2\n1 1\n255\n0").unwrap();
        assert_eq!(offset_of(read_pgm(&path).unwrap_err()), 0);
    }

    #[test]
    fn truncated_payload_reports_data_offset() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("t.pgm");
        let bytes = b"P5\n2 2\n255\n\x01\x02\x03";
        std::fs::write(&path, bytes).unwrap();
        let err = read_pgm(&path).unwrap_err();
        let msg = err.to_string();
        assert_eq!(offset_of(err), bytes.len() - 3);
        assert!(msg.contains("3 bytes"), "{msg}");
    }

    #[test]
    fn missing_header_number_reports_offset() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("h.pgm");
        std::fs::write(&path, b"P5\n2 \xffrest").unwrap();
        let err = read_pgm(&path).unwrap_err();
        assert!(err.to_string().contains("height"), "{err}");
        assert_eq!(offset_of(err), 5);
    }

    #[test]
    fn oversized_max_value_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.pgm");
        std::fs::write(&path, b"P5\n1 1\n70000\n\x00\x00").unwrap();
        let err = read_pgm(&path).unwrap_err().to_string();
        assert!(err.contains("65535"), "{err}");
    }

    #[test]
    fn sample_above_declared_maximum_rejected() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.pgm");
        std::fs::write(&path, b"P5\n2 1\n100\n\x10\xf0").unwrap();
        let err = read_pgm(&path).unwrap_err();
        assert_eq!(offset_of(err), 12);
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = read_pgm(Path::new("/nonexistent/nowhere.pgm")).unwrap_err();
        assert!(matches!(err, PgmError::Io { .. }));
        assert!(err.to_string().contains("nowhere.pgm"));
    }
}
