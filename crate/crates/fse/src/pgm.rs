//! Binary PGM (`P5`, maxval 255) reading and writing.

use std::fs;
use std::io::{self, ErrorKind};
use std::path::Path;

use fse_core::Image;

use crate::{Error, Result};

pub fn read_pgm(path: impl AsRef<Path>) -> Result<Image> {
    decode_pgm(&fs::read(path)?)
}

/// Writes samples rounded to the nearest level (ties away from zero) and
/// clamped to `[0, 255]`.
pub fn write_pgm(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

pub fn encode_pgm(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.to_bytes());
    out
}

pub fn decode_pgm(data: &[u8]) -> Result<Image> {
    let mut header = Header { data, pos: 0 };
    match data.get(..2) {
        Some(b"P5") => header.pos = 2,
        Some([b'P', _]) => {
            return Err(Error::Format("only binary greymaps (P5) are supported".into()))
        }
        _ => return Err(Error::Format("missing PGM magic number".into())),
    }
    let width = header.number("width")?;
    let height = header.number("height")?;
    let maxval = header.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Format("zero image dimension".into()));
    }
    if maxval != 255 {
        return Err(Error::Unsupported(format!("maxval {maxval}, expected 255")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match data.get(header.pos) {
        Some(b) if b.is_ascii_whitespace() => header.pos += 1,
        Some(_) => return Err(Error::Format("no whitespace after maxval".into())),
        None => return Err(truncated()),
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let raster = data.get(header.pos..header.pos + len).ok_or_else(truncated)?;
    Ok(Image::from_bytes(width, height, raster)?)
}

fn truncated() -> Error {
    Error::Io(io::Error::new(ErrorKind::UnexpectedEof, "PGM raster is truncated"))
}

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_separators(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, field: &str) -> Result<usize> {
        let before = self.pos;
        self.skip_separators();
        if self.pos == before {
            return Err(Error::Format(format!("expected whitespace before {field}")));
        }
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.data.get(start) {
                None => truncated(),
                Some(_) => Error::Format(format!("malformed {field}")),
            });
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("{field} out of range")))
    }
}
