//! Netpbm PGM reading and writing.
//!
//! Category rasters are 8-bit (255 = background sentinel); depth rasters are
//! 16-bit with big-endian samples, storing millimeters. The reader accepts
//! both binary (P5) and ASCII (P2) variants.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PgmError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pgm {
    pub width: u32,
    pub height: u32,
    pub maxval: u16,
    /// Row-major samples; 8-bit files are widened.
    pub samples: Vec<u16>,
}

fn malformed(path: &Path, message: impl Into<String>) -> PgmError {
    PgmError::Malformed {
        path: path.to_owned(),
        message: message.into(),
    }
}

/// Pulls the next whitespace-separated header token, skipping `#` comments.
fn next_token<'a>(bytes: &'a [u8], pos: &mut usize) -> Option<&'a [u8]> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    if *pos >= bytes.len() {
        return None;
    }
    let start = *pos;
    while *pos < bytes.len() && !bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    Some(&bytes[start..*pos])
}

fn parse_dim(path: &Path, tok: Option<&[u8]>, what: &str) -> Result<u32, PgmError> {
    let tok = tok.ok_or_else(|| malformed(path, format!("missing {what}")))?;
    std::str::from_utf8(tok)
        .ok()
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| malformed(path, format!("bad {what}")))
}

pub fn read_pgm(path: &Path) -> Result<Pgm, PgmError> {
    let bytes = std::fs::read(path).map_err(|source| PgmError::Read {
        path: path.to_owned(),
        source,
    })?;
    let mut pos = 0usize;
    let magic = next_token(&bytes, &mut pos).ok_or_else(|| malformed(path, "empty file"))?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        other => {
            return Err(malformed(
                path,
                format!("unsupported magic {:?}", String::from_utf8_lossy(other)),
            ))
        }
    };
    let width = parse_dim(path, next_token(&bytes, &mut pos), "width")?;
    let height = parse_dim(path, next_token(&bytes, &mut pos), "height")?;
    let maxval = parse_dim(path, next_token(&bytes, &mut pos), "maxval")?;
    if width == 0 || height == 0 || maxval == 0 || maxval > 65535 {
        return Err(malformed(path, "dimensions or maxval out of range"));
    }
    let maxval = maxval as u16;
    let count = (width as usize) * (height as usize);
    let mut samples = Vec::with_capacity(count);
    if binary {
        // Exactly one whitespace byte separates maxval from the raster.
        pos += 1;
        if maxval > 255 {
            if bytes.len() < pos + 2 * count {
                return Err(malformed(path, "truncated 16-bit raster"));
            }
            for i in 0..count {
                samples.push(u16::from_be_bytes([bytes[pos + 2 * i], bytes[pos + 2 * i + 1]]));
            }
        } else {
            if bytes.len() < pos + count {
                return Err(malformed(path, "truncated raster"));
            }
            samples.extend(bytes[pos..pos + count].iter().map(|&b| b as u16));
        }
    } else {
        for _ in 0..count {
            let v = parse_dim(path, next_token(&bytes, &mut pos), "sample")?;
            samples.push(v as u16);
        }
    }
    if samples.iter().any(|&s| s > maxval) {
        return Err(malformed(path, "sample exceeds maxval"));
    }
    Ok(Pgm {
        width,
        height,
        maxval,
        samples,
    })
}

fn write_bytes(path: &Path, header: String, raster: &[u8]) -> Result<(), PgmError> {
    let mut out = Vec::with_capacity(header.len() + raster.len());
    out.write_all(header.as_bytes()).unwrap();
    out.write_all(raster).unwrap();
    std::fs::write(path, out).map_err(|source| PgmError::Write {
        path: path.to_owned(),
        source,
    })
}

pub fn write_pgm8(path: &Path, width: u32, height: u32, data: &[u8]) -> Result<(), PgmError> {
    assert_eq!(data.len(), (width as usize) * (height as usize));
    write_bytes(path, format!("P5\n{width} {height}\n255\n"), data)
}

pub fn write_pgm16(path: &Path, width: u32, height: u32, data: &[u16]) -> Result<(), PgmError> {
    assert_eq!(data.len(), (width as usize) * (height as usize));
    let mut raster = Vec::with_capacity(data.len() * 2);
    for &v in data {
        raster.extend_from_slice(&v.to_be_bytes());
    }
    write_bytes(path, format!("P5\n{width} {height}\n65535\n"), &raster)
}
