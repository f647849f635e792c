//! The three performance criteria: compression ratio, mean squared error,
//! and peak signal-to-noise ratio.

use crate::error::{Error, Result};
use crate::raster::RasterImage;

/// Sizes, ratio, and distortion of one compression run.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    /// Raw pixel payload size in bytes.
    pub n1: u64,
    /// Compressed size in bytes.
    pub n2: u64,
    pub cr: f64,
    pub mse: f64,
    /// Infinite for a perfect reconstruction.
    pub psnr: f64,
}

impl QualityReport {
    /// Builds a report from an original, its reconstruction, and the
    /// compressed byte count. `n1` is the raw pixel payload
    /// (`channels * width * height`), headers excluded.
    pub fn new(original: &RasterImage, decoded: &RasterImage, compressed_bytes: u64) -> Result<Self> {
        let n1 = original.payload_bytes() as u64;
        let cr = compression_ratio(n1, compressed_bytes)?;
        let mse_v = mse(original, decoded)?;
        Ok(QualityReport { n1, n2: compressed_bytes, cr, mse: mse_v, psnr: psnr_from_mse(mse_v) })
    }
}

/// `n1 / n2` as an exact real quotient.
pub fn compression_ratio(n1: u64, n2: u64) -> Result<f64> {
    if n2 == 0 {
        return Err(Error::param("compressed size is zero".to_string()));
    }
    Ok(n1 as f64 / n2 as f64)
}

fn check_shapes(x: &RasterImage, y: &RasterImage) -> Result<()> {
    if x.width() != y.width() || x.height() != y.height() || x.channels() != y.channels() {
        return Err(Error::Mismatch {
            reason: format!(
                "{}x{}x{} vs {}x{}x{}",
                x.width(),
                x.height(),
                x.channels(),
                y.width(),
                y.height(),
                y.channels()
            ),
        });
    }
    Ok(())
}

/// Mean squared sample error. Color images average over all three planes.
pub fn mse(x: &RasterImage, y: &RasterImage) -> Result<f64> {
    check_shapes(x, y)?;
    let mut acc = 0.0f64;
    for ch in 0..x.channels() {
        for (&a, &b) in x.plane(ch).iter().zip(y.plane(ch)) {
            let d = a as f64 - b as f64;
            acc += d * d;
        }
    }
    Ok(acc / (x.channels() * x.width() * x.height()) as f64)
}

fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    }
}

/// `10 log10(255^2 / MSE)` in decibels; identical images report infinity.
pub fn psnr(x: &RasterImage, y: &RasterImage) -> Result<f64> {
    Ok(psnr_from_mse(mse(x, y)?))
}
