//! Binary PGM (`P5`, maxval 255) reader and writer.

use std::fs;
use std::path::Path;

use super::GrayImage;
use crate::error::{Error, Result};

struct Header {
    width: usize,
    height: usize,
    data_offset: usize,
}

fn skip_whitespace_and_comments(bytes: &[u8], mut pos: usize) -> usize {
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos < bytes.len() && bytes[pos] == b'#' {
            while pos < bytes.len() && bytes[pos] != b'\n' && bytes[pos] != b'\r' {
                pos += 1;
            }
        } else {
            return pos;
        }
    }
}

fn read_number(bytes: &[u8], pos: usize, what: &str) -> Result<(usize, usize)> {
    let start = skip_whitespace_and_comments(bytes, pos);
    let mut end = start;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == start {
        return Err(Error::parse(start, format!("expected {what}")));
    }
    let text = std::str::from_utf8(&bytes[start..end]).expect("ascii digits");
    let value = text
        .parse::<usize>()
        .map_err(|_| Error::parse(start, format!("{what} out of range")))?;
    Ok((value, end))
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        return Err(Error::parse(0, "missing P5 magic number"));
    }
    let (width, pos) = read_number(bytes, 2, "width")?;
    let (height, pos) = read_number(bytes, pos, "height")?;
    let maxval_at = skip_whitespace_and_comments(bytes, pos);
    let (maxval, pos) = read_number(bytes, pos, "maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::parse(pos, "image dimensions must be nonzero"));
    }
    if maxval != 255 {
        return Err(Error::parse(
            maxval_at,
            format!("unsupported maxval {maxval}, expected 255"),
        ));
    }
    // exactly one whitespace byte separates the header from the raster
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::parse(pos, "expected whitespace after maxval"));
    }
    Ok(Header {
        width,
        height,
        data_offset: pos + 1,
    })
}

pub fn pgm_decode(bytes: &[u8]) -> Result<GrayImage> {
    let h = parse_header(bytes)?;
    let len = h
        .width
        .checked_mul(h.height)
        .ok_or_else(|| Error::parse(h.data_offset, "image too large"))?;
    let available = bytes.len() - h.data_offset;
    if available < len {
        return Err(Error::parse(
            bytes.len(),
            format!("truncated raster: expected {len} bytes, found {available}"),
        ));
    }
    let pixels = bytes[h.data_offset..h.data_offset + len]
        .iter()
        .map(|&b| b as f64)
        .collect();
    GrayImage::new(h.width, h.height, pixels)
}

/// Pixels are rounded and clamped to `[0, 255]`.
pub fn pgm_encode(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(
        img.pixels()
            .iter()
            .map(|p| p.round().clamp(0.0, 255.0) as u8),
    );
    out
}

fn with_path(path: &Path) -> impl FnOnce(std::io::Error) -> std::io::Error + '_ {
    move |e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

pub fn pgm_read(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    pgm_decode(&fs::read(path).map_err(with_path(path))?)
}

pub fn pgm_write(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, pgm_encode(img)).map_err(with_path(path))?;
    Ok(())
}
