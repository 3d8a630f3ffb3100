//! Binary rasters, 3x3 morphology, and PGM file I/O.

use crate::error::{Error, Result};
use std::io::{Read, Write};
use std::path::Path;

/// Dense binary raster stored as packed 64-bit words, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BitMask {
    width: usize,
    height: usize,
    words: Vec<u64>,
}

impl BitMask {
    pub fn new(width: usize, height: usize) -> Self {
        let words = vec![0u64; (width * height + 63) / 64];
        BitMask {
            width,
            height,
            words,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    fn bit_index(&self, x: usize, y: usize) -> usize {
        y * self.width + x
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.width && y < self.height);
        let i = self.bit_index(x, y);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        debug_assert!(x < self.width && y < self.height);
        let i = self.bit_index(x, y);
        if v {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    /// Set when inside bounds; ignore otherwise.
    #[inline]
    pub fn set_clipped(&mut self, x: i64, y: i64) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.set(x as usize, y as usize, true);
        }
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn any(&self) -> bool {
        self.words.iter().any(|&w| w != 0)
    }

    /// Inclusive bounding box (x0, y0, x1, y1) of set pixels.
    pub fn bbox(&self) -> Option<(usize, usize, usize, usize)> {
        let (mut x0, mut y0) = (usize::MAX, usize::MAX);
        let (mut x1, mut y1) = (0usize, 0usize);
        let mut found = false;
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    found = true;
                    x0 = x0.min(x);
                    y0 = y0.min(y);
                    x1 = x1.max(x);
                    y1 = y1.max(y);
                }
            }
        }
        found.then_some((x0, y0, x1, y1))
    }

    pub fn dilate3x3(&self) -> BitMask {
        let mut out = BitMask::new(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                if !self.get(x, y) {
                    continue;
                }
                let y0 = y.saturating_sub(1);
                let y1 = (y + 1).min(self.height - 1);
                let x0 = x.saturating_sub(1);
                let x1 = (x + 1).min(self.width - 1);
                for yy in y0..=y1 {
                    for xx in x0..=x1 {
                        out.set(xx, yy, true);
                    }
                }
            }
        }
        out
    }

    pub fn erode3x3(&self) -> BitMask {
        let mut out = BitMask::new(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                let y0 = y.saturating_sub(1);
                let y1 = (y + 1).min(self.height - 1);
                let x0 = x.saturating_sub(1);
                let x1 = (x + 1).min(self.width - 1);
                let mut all = true;
                'win: for yy in y0..=y1 {
                    for xx in x0..=x1 {
                        if !self.get(xx, yy) {
                            all = false;
                            break 'win;
                        }
                    }
                }
                if all {
                    out.set(x, y, true);
                }
            }
        }
        out
    }

    /// One pass of 3x3 morphological closing (dilate, then erode).
    pub fn close3x3(&self) -> BitMask {
        self.dilate3x3().erode3x3()
    }

    /// Translate by whole pixels; pixels shifted outside the frame are lost.
    pub fn translate(&self, dx: i64, dy: i64) -> BitMask {
        let mut out = BitMask::new(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    out.set_clipped(x as i64 + dx, y as i64 + dy);
                }
            }
        }
        out
    }

    pub fn intersects(&self, other: &BitMask) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    pub fn intersection_count(&self, other: &BitMask) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// self AND NOT other.
    pub fn minus(&self, other: &BitMask) -> BitMask {
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(other.words.iter()) {
            *w &= !o;
        }
        out
    }

    pub fn union(&self, other: &BitMask) -> BitMask {
        let mut out = self.clone();
        for (w, o) in out.words.iter_mut().zip(other.words.iter()) {
            *w |= o;
        }
        out
    }

    pub fn is_subset_of(&self, other: &BitMask) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }
}

/// Write a binary mask as PGM P5, maxval 255, pixels 0 or 255.
pub fn write_pgm_mask(path: &Path, mask: &BitMask) -> Result<()> {
    let mut buf = Vec::with_capacity(32 + mask.width() * mask.height());
    buf.extend_from_slice(format!("P5\n{} {}\n255\n", mask.width(), mask.height()).as_bytes());
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            buf.push(if mask.get(x, y) { 255 } else { 0 });
        }
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a binary mask from PGM P5 maxval 255; nonzero bytes become set pixels.
pub fn read_pgm_mask(path: &Path) -> Result<BitMask> {
    let (w, h, maxval, data) = read_pgm_raw(path)?;
    if maxval != 255 {
        return Err(Error::Other(format!(
            "{}: expected 8-bit PGM mask, maxval {maxval}",
            path.display()
        )));
    }
    let mut mask = BitMask::new(w, h);
    for y in 0..h {
        for x in 0..w {
            if data[y * w + x] != 0 {
                mask.set(x, y, true);
            }
        }
    }
    Ok(mask)
}

/// Write a 16-bit grayscale PGM (P5, maxval 65535, big-endian samples).
pub fn write_pgm_u16(path: &Path, w: usize, h: usize, values: &[u16]) -> Result<()> {
    assert_eq!(values.len(), w * h);
    let mut buf = Vec::with_capacity(32 + 2 * values.len());
    buf.extend_from_slice(format!("P5\n{w} {h}\n65535\n").as_bytes());
    for v in values {
        buf.extend_from_slice(&v.to_be_bytes());
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a 16-bit grayscale PGM.
pub fn read_pgm_u16(path: &Path) -> Result<(usize, usize, Vec<u16>)> {
    let (w, h, maxval, data) = read_pgm_raw(path)?;
    if maxval != 65535 {
        return Err(Error::Other(format!(
            "{}: expected 16-bit PGM, maxval {maxval}",
            path.display()
        )));
    }
    let mut values = Vec::with_capacity(w * h);
    for chunk in data.chunks_exact(2) {
        values.push(u16::from_be_bytes([chunk[0], chunk[1]]));
    }
    Ok((w, h, values))
}

fn read_pgm_raw(path: &Path) -> Result<(usize, usize, u32, Vec<u8>)> {
    let mut file =
        std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)
        .map_err(|e| Error::io(path.display().to_string(), e))?;

    let bad = |msg: &str| Error::Other(format!("{}: {msg}", path.display()));
    // Header: magic, width, height, maxval as whitespace-separated tokens
    // (comments not supported; we never write them).
    let mut pos = 0usize;
    let mut token = |bytes: &[u8]| -> Option<(usize, usize)> {
        let mut start = pos;
        while start < bytes.len() && bytes[start].is_ascii_whitespace() {
            start += 1;
        }
        let mut end = start;
        while end < bytes.len() && !bytes[end].is_ascii_whitespace() {
            end += 1;
        }
        if start == end {
            return None;
        }
        pos = end;
        Some((start, end))
    };
    let (m0, m1) = token(&bytes).ok_or_else(|| bad("missing magic"))?;
    if &bytes[m0..m1] != b"P5" {
        return Err(bad("not a P5 PGM"));
    }
    let parse_num = |range: (usize, usize), bytes: &[u8]| -> Result<u64> {
        std::str::from_utf8(&bytes[range.0..range.1])
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| bad("bad header number"))
    };
    let w = parse_num(token(&bytes).ok_or_else(|| bad("missing width"))?, &bytes)? as usize;
    let h = parse_num(token(&bytes).ok_or_else(|| bad("missing height"))?, &bytes)? as usize;
    let maxval = parse_num(token(&bytes).ok_or_else(|| bad("missing maxval"))?, &bytes)? as u32;
    // Exactly one whitespace byte separates maxval from the raster.
    pos += 1;
    let sample_bytes = if maxval > 255 { 2 } else { 1 };
    let need = w * h * sample_bytes;
    if bytes.len() < pos + need {
        return Err(bad("truncated raster data"));
    }
    Ok((w, h, maxval, bytes[pos..pos + need].to_vec()))
}

/// Write ASCII `x y h label` lines for point-cloud debugging.
pub fn write_xyz_labels(
    path: &Path,
    points: impl Iterator<Item = (f64, f64, f64, String)>,
) -> Result<()> {
    let mut out = std::io::BufWriter::new(
        std::fs::File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?,
    );
    for (x, y, h, label) in points {
        writeln!(out, "{x} {y} {h} {label}").map_err(|e| Error::io(path.display().to_string(), e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_count() {
        let mut m = BitMask::new(70, 3);
        m.set(0, 0, true);
        m.set(69, 2, true);
        m.set(64, 1, true);
        assert!(m.get(0, 0) && m.get(69, 2) && m.get(64, 1));
        assert_eq!(m.count(), 3);
        m.set(64, 1, false);
        assert_eq!(m.count(), 2);
    }

    #[test]
    fn closing_fills_pinhole() {
        let mut m = BitMask::new(9, 9);
        for y in 2..7 {
            for x in 2..7 {
                m.set(x, y, true);
            }
        }
        m.set(4, 4, false); // pinhole
        let closed = m.close3x3();
        assert!(closed.get(4, 4));
        // Closing must not grow the solid block's bbox.
        assert_eq!(closed.bbox(), Some((2, 2, 6, 6)));
    }

    #[test]
    fn translate_clips() {
        let mut m = BitMask::new(4, 4);
        m.set(0, 0, true);
        m.set(3, 3, true);
        let t = m.translate(1, 1);
        assert!(!t.get(0, 0));
        assert!(t.get(1, 1));
        assert_eq!(t.count(), 1); // (3,3) fell off the frame
    }

    #[test]
    fn pgm_mask_round_trip() {
        let dir = std::env::temp_dir().join("sargis_pgm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m.pgm");
        let mut m = BitMask::new(13, 7);
        m.set(0, 0, true);
        m.set(12, 6, true);
        m.set(5, 3, true);
        write_pgm_mask(&path, &m).unwrap();
        let back = read_pgm_mask(&path).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn pgm_u16_round_trip() {
        let dir = std::env::temp_dir().join("sargis_pgm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("i.pgm");
        let vals: Vec<u16> = (0..12).map(|i| i * 5000).collect();
        write_pgm_u16(&path, 4, 3, &vals).unwrap();
        let (w, h, back) = read_pgm_u16(&path).unwrap();
        assert_eq!((w, h), (4, 3));
        assert_eq!(back, vals);
    }
}
