//! Netpbm graymap (PGM) reading and writing: plain `P2` and raw `P5`.
//!
//! Header tokens are separated by ASCII whitespace, `#` starts a comment that
//! runs to the end of the line, and `maxval` lies in `1..=65535`. Raw samples
//! take one byte when `maxval < 256` and two big-endian bytes otherwise.
//! Exactly one whitespace byte separates `maxval` from a raw raster.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// `P2`, ASCII samples.
    Plain,
    /// `P5`, binary samples.
    Raw,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PgmImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples, each `<= maxval`.
    pub pixels: Vec<u16>,
}

impl PgmImage {
    pub fn new(width: usize, height: usize, maxval: u16, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput(
                "image dimensions must be positive".into(),
            ));
        }
        if maxval == 0 {
            return Err(Error::InvalidInput("maxval must be in 1..=65535".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "{width}x{height} image needs {} samples, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(p) = pixels.iter().find(|&&p| p > maxval) {
            return Err(Error::InvalidInput(format!(
                "sample {p} exceeds maxval {maxval}"
            )));
        }
        Ok(Self {
            width,
            height,
            maxval,
            pixels,
        })
    }

    /// Samples divided by `maxval`, row-major, each in `[0, 1]`.
    pub fn to_unit_vector(&self) -> Vec<f64> {
        let m = f64::from(self.maxval);
        self.pixels.iter().map(|&p| f64::from(p) / m).collect()
    }

    /// Serialises the image in the given format.
    pub fn write_to(&self, mut out: impl Write, format: PgmFormat) -> std::io::Result<()> {
        match format {
            PgmFormat::Plain => {
                writeln!(out, "P2\n{} {}\n{}", self.width, self.height, self.maxval)?;
                for row in self.pixels.chunks(self.width) {
                    let line: Vec<String> = row.iter().map(|p| p.to_string()).collect();
                    writeln!(out, "{}", line.join(" "))?;
                }
            }
            PgmFormat::Raw => {
                write!(out, "P5\n{} {}\n{}\n", self.width, self.height, self.maxval)?;
                if self.maxval < 256 {
                    let bytes: Vec<u8> = self.pixels.iter().map(|&p| p as u8).collect();
                    out.write_all(&bytes)?;
                } else {
                    for &p in &self.pixels {
                        out.write_all(&p.to_be_bytes())?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path, format: PgmFormat) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&mut w, format)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn skip_whitespace(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn number(&mut self, what: &str) -> std::result::Result<u64, String> {
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.bytes.get(self.pos) {
                None => format!("unexpected end of file reading {what}"),
                Some(b) => format!("expected {what}, found byte 0x{b:02x}"),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse::<u64>()
            .map_err(|_| format!("{what} is out of range"))
    }
}

/// Parses a `P2` or `P5` graymap. Errors are plain messages; callers attach
/// the file path.
pub fn parse_pgm(bytes: &[u8]) -> std::result::Result<PgmImage, String> {
    let format = match bytes.get(..2) {
        Some(b"P2") => PgmFormat::Plain,
        Some(b"P5") => PgmFormat::Raw,
        Some(m) => {
            return Err(format!(
                "wrong magic number {:?}, expected P2 or P5",
                String::from_utf8_lossy(m)
            ))
        }
        None => return Err("file too short for a PGM header".into()),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err("magic number must be followed by whitespace".into());
    }
    cur.skip_whitespace_and_comments();
    let width = cur.number("width")?;
    cur.skip_whitespace_and_comments();
    let height = cur.number("height")?;
    cur.skip_whitespace_and_comments();
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(format!("invalid dimensions {width}x{height}"));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(format!("maxval {maxval} outside 1..=65535"));
    }
    let maxval = maxval as u16;
    let count = usize::try_from(width * height).map_err(|_| "image too large".to_string())?;

    let pixels = match format {
        PgmFormat::Raw => {
            if !cur
                .bytes
                .get(cur.pos)
                .is_some_and(|b| b.is_ascii_whitespace())
            {
                return Err("maxval must be followed by a single whitespace byte".into());
            }
            let start = cur.pos + 1;
            let per = if maxval < 256 { 1 } else { 2 };
            let raster = bytes
                .get(start..start + count * per)
                .ok_or_else(|| format!("raster truncated: need {} bytes", count * per))?;
            if per == 1 {
                raster.iter().map(|&b| u16::from(b)).collect::<Vec<_>>()
            } else {
                raster
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]))
                    .collect()
            }
        }
        PgmFormat::Plain => {
            let mut px = Vec::with_capacity(count);
            for i in 0..count {
                cur.skip_whitespace();
                let v = cur
                    .number("sample")
                    .map_err(|e| format!("sample {i}: {e}"))?;
                px.push(u16::try_from(v).map_err(|_| format!("sample {i} = {v} out of range"))?);
            }
            px
        }
    };
    if let Some((i, p)) = pixels.iter().enumerate().find(|(_, &p)| p > maxval) {
        return Err(format!("sample {i} = {p} exceeds maxval {maxval}"));
    }
    Ok(PgmImage {
        width: width as usize,
        height: height as usize,
        maxval,
        pixels,
    })
}

pub fn read_pgm(path: &Path) -> Result<PgmImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_pgm(&bytes).map_err(|m| Error::file(path, m))
}
