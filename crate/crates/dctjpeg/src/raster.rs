//! Raster images and binary PNM (PGM/PPM) input/output.
//!
//! PNM is the uncompressed interchange format of the toolkit: trivial to
//! parse, supported by everything, and byte-exact. Only the binary
//! variants with an 8-bit range are accepted (`P5` grayscale, `P6` RGB,
//! maxval 255).

use crate::error::{Error, Result};

/// Planar 8-bit image, one or three channels.
///
/// Samples are stored as row-major per-channel planes, each of exactly
/// `width * height` bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    planes: Vec<Vec<u8>>,
}

impl RasterImage {
    /// Builds an image from per-channel planes, validating the shape.
    pub fn new(width: usize, height: usize, planes: Vec<Vec<u8>>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::param(format!("image dimensions {width}x{height} must be nonzero")));
        }
        if planes.len() != 1 && planes.len() != 3 {
            return Err(Error::param(format!("{} channels, expected 1 or 3", planes.len())));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::param("plane size overflows".to_string()))?;
        for (i, plane) in planes.iter().enumerate() {
            if plane.len() != expected {
                return Err(Error::param(format!(
                    "plane {i} holds {} samples, expected {expected}",
                    plane.len()
                )));
            }
        }
        Ok(RasterImage { width, height, planes })
    }

    /// Single-plane grayscale constructor.
    pub fn gray(width: usize, height: usize, samples: Vec<u8>) -> Result<Self> {
        Self::new(width, height, vec![samples])
    }

    /// Three-plane RGB constructor.
    pub fn rgb(width: usize, height: usize, r: Vec<u8>, g: Vec<u8>, b: Vec<u8>) -> Result<Self> {
        Self::new(width, height, vec![r, g, b])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// 1 for grayscale, 3 for RGB.
    pub fn channels(&self) -> usize {
        self.planes.len()
    }

    pub fn plane(&self, channel: usize) -> &[u8] {
        &self.planes[channel]
    }

    pub fn planes(&self) -> &[Vec<u8>] {
        &self.planes
    }

    /// Raw pixel payload size in bytes (`channels * width * height`).
    pub fn payload_bytes(&self) -> usize {
        self.planes.len() * self.width * self.height
    }
}

/// Scanner over PNM header tokens: skips whitespace and `#` comment lines,
/// tracking the byte offset for error reports.
struct TokenScanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TokenScanner<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        TokenScanner { bytes, pos: 0 }
    }

    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::pnm(start, "unexpected end of header"));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let start_err = self.pos;
        let tok = self.token()?;
        let s = std::str::from_utf8(tok)
            .map_err(|_| Error::pnm(start_err, format!("{what} is not ASCII")))?;
        s.parse::<usize>()
            .map_err(|_| Error::pnm(start_err, format!("{what} `{s}` is not a number")))
    }
}

/// Parses a binary PGM (`P5`) or PPM (`P6`) file with maxval 255.
pub fn read_pnm(bytes: &[u8]) -> Result<RasterImage> {
    let mut scan = TokenScanner::new(bytes);
    let magic = scan.token().map_err(|_| Error::pnm(0, "empty input"))?;
    let channels = match magic {
        b"P5" => 1,
        b"P6" => 3,
        other => {
            let shown = String::from_utf8_lossy(other);
            return Err(Error::pnm(0, format!("unsupported magic `{shown}`, expected P5 or P6")));
        }
    };
    let width = scan.number("width")?;
    let height = scan.number("height")?;
    if width == 0 || height == 0 {
        return Err(Error::pnm(0, format!("dimensions {width}x{height} must be nonzero")));
    }
    let maxval_at = {
        scan.skip_separators();
        scan.pos
    };
    let maxval = scan.number("maxval")?;
    if maxval != 255 {
        return Err(Error::pnm(maxval_at, format!("maxval {maxval}, only 255 is supported")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if scan.pos >= bytes.len() || !bytes[scan.pos].is_ascii_whitespace() {
        return Err(Error::pnm(scan.pos, "missing separator after maxval"));
    }
    let data_start = scan.pos + 1;

    let n = width * height;
    let need = n * channels;
    let data = &bytes[data_start.min(bytes.len())..];
    if data.len() < need {
        return Err(Error::pnm(
            data_start + data.len(),
            format!("truncated pixel data: got {} of {need} bytes", data.len()),
        ));
    }
    let data = &data[..need];

    let planes = if channels == 1 {
        vec![data.to_vec()]
    } else {
        let mut r = Vec::with_capacity(n);
        let mut g = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for px in data.chunks_exact(3) {
            r.push(px[0]);
            g.push(px[1]);
            b.push(px[2]);
        }
        vec![r, g, b]
    };
    RasterImage::new(width, height, planes)
}

/// Serializes an image as binary PGM/PPM; `read_pnm` inverts this exactly.
pub fn write_pnm(image: &RasterImage) -> Vec<u8> {
    let magic = if image.channels() == 1 { "P5" } else { "P6" };
    let header = format!("{magic}\n{} {}\n255\n", image.width(), image.height());
    let mut out = Vec::with_capacity(header.len() + image.payload_bytes());
    out.extend_from_slice(header.as_bytes());
    if image.channels() == 1 {
        out.extend_from_slice(image.plane(0));
    } else {
        let (r, g, b) = (image.plane(0), image.plane(1), image.plane(2));
        for i in 0..r.len() {
            out.push(r[i]);
            out.push(g[i]);
            out.push(b[i]);
        }
    }
    out
}
