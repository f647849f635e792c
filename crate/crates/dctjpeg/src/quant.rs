//! Coefficient quantization: the luminance/chrominance divisor tables, a
//! quality knob scaling them, and per-block quantize/dequantize.

use crate::dct::CoeffBlock;
use crate::error::{Error, Result};

/// Which component class a table is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableRole {
    Luminance,
    Chrominance,
}

/// Base luminance divisors.
pub const LUMINANCE_DIVISORS: [[u8; 8]; 8] = [
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
];

/// Base chrominance divisors.
pub const CHROMINANCE_DIVISORS: [[u8; 8]; 8] = [
    [17, 18, 24, 47, 99, 99, 99, 99],
    [18, 21, 26, 66, 99, 99, 99, 99],
    [24, 26, 56, 99, 99, 99, 99, 99],
    [47, 66, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
    [99, 99, 99, 99, 99, 99, 99, 99],
];

/// 8x8 matrix of integer divisors, each in [1, 255].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantTable {
    pub divisors: [[u8; 8]; 8],
    pub role: TableRole,
}

impl QuantTable {
    pub fn luminance() -> Self {
        QuantTable { divisors: LUMINANCE_DIVISORS, role: TableRole::Luminance }
    }

    pub fn chrominance() -> Self {
        QuantTable { divisors: CHROMINANCE_DIVISORS, role: TableRole::Chrominance }
    }

    /// Builds a table from raw divisors, rejecting zeros.
    pub fn from_divisors(divisors: [[u8; 8]; 8], role: TableRole) -> Result<Self> {
        if divisors.iter().flatten().any(|&d| d == 0) {
            return Err(Error::param("quantization divisor 0".to_string()));
        }
        Ok(QuantTable { divisors, role })
    }
}

/// 8x8 block of quantized coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizedBlock(pub [[i16; 8]; 8]);

/// Divides each coefficient by its divisor, rounding half away from zero.
pub fn quantize_block(coeffs: &CoeffBlock, table: &QuantTable) -> QuantizedBlock {
    let mut out = [[0i16; 8]; 8];
    for u in 0..8 {
        for v in 0..8 {
            out[u][v] = (coeffs.0[u][v] / table.divisors[u][v] as f64).round() as i16;
        }
    }
    QuantizedBlock(out)
}

/// Multiplies quantized values back by their divisors.
pub fn dequantize_block(block: &QuantizedBlock, table: &QuantTable) -> CoeffBlock {
    let mut out = [[0.0f64; 8]; 8];
    for u in 0..8 {
        for v in 0..8 {
            out[u][v] = block.0[u][v] as f64 * table.divisors[u][v] as f64;
        }
    }
    CoeffBlock(out)
}

/// Rescales a base table for a quality setting in [1, 100].
///
/// Follows the 5000/q convention: quality 50 reproduces the base table
/// exactly, 100 collapses every divisor to 1, 1 is the coarsest. The +50
/// before the integer division performs round-to-nearest.
pub fn scaled_table(base: &QuantTable, quality: u8) -> Result<QuantTable> {
    if !(1..=100).contains(&quality) {
        return Err(Error::param(format!("quality {quality} outside 1..=100")));
    }
    let scale: u32 = if quality < 50 { 5000 / quality as u32 } else { 200 - 2 * quality as u32 };
    let mut divisors = [[0u8; 8]; 8];
    for u in 0..8 {
        for v in 0..8 {
            let scaled = (base.divisors[u][v] as u32 * scale + 50) / 100;
            divisors[u][v] = scaled.clamp(1, 255) as u8;
        }
    }
    Ok(QuantTable { divisors, role: base.role })
}
