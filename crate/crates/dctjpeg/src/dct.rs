//! Forward and inverse 8x8 2D DCT.
//!
//! Two implementations live here side by side. `dct2_direct`/`idct2_direct`
//! evaluate the defining quadruple sums term by term, cosines and all; they
//! are the ground truth and stay in the crate permanently as the oracle for
//! everything else. `dct2_fast`/`idct2_fast` use the separable row-column
//! decomposition over a precomputed orthonormal basis table and must agree
//! with the direct evaluators to 1e-9.

use std::f64::consts::PI;
use std::sync::OnceLock;

pub const BLOCK_SIZE: usize = 8;

/// 8x8 block of spatial samples (level-shifted, nominally [-128, 127]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialBlock(pub [[f64; 8]; 8]);

/// 8x8 block of transform coefficients; `[0][0]` is the DC term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffBlock(pub [[f64; 8]; 8]);

impl SpatialBlock {
    pub fn from_i16(values: &[[i16; 8]; 8]) -> Self {
        let mut out = [[0.0; 8]; 8];
        for r in 0..8 {
            for c in 0..8 {
                out[r][c] = values[r][c] as f64;
            }
        }
        SpatialBlock(out)
    }

    /// Rounds each sample half away from zero into an integer block.
    pub fn to_i16(&self) -> [[i16; 8]; 8] {
        let mut out = [[0i16; 8]; 8];
        for r in 0..8 {
            for c in 0..8 {
                out[r][c] = self.0[r][c].round() as i16;
            }
        }
        out
    }
}

fn normalizer(k: usize) -> f64 {
    if k == 0 {
        1.0 / 2.0f64.sqrt()
    } else {
        1.0
    }
}

/// Forward transform by direct evaluation of the defining sum.
pub fn dct2_direct(block: &SpatialBlock) -> CoeffBlock {
    let n = BLOCK_SIZE as f64;
    let mut out = [[0.0; 8]; 8];
    for u in 0..8 {
        for v in 0..8 {
            let mut acc = 0.0;
            for x in 0..8 {
                for y in 0..8 {
                    acc += block.0[x][y]
                        * ((2 * x + 1) as f64 * u as f64 * PI / (2.0 * n)).cos()
                        * ((2 * y + 1) as f64 * v as f64 * PI / (2.0 * n)).cos();
                }
            }
            out[u][v] = 2.0 / n * normalizer(u) * normalizer(v) * acc;
        }
    }
    CoeffBlock(out)
}

/// Inverse transform by direct evaluation of the defining sum.
pub fn idct2_direct(coeffs: &CoeffBlock) -> SpatialBlock {
    let n = BLOCK_SIZE as f64;
    let mut out = [[0.0; 8]; 8];
    for x in 0..8 {
        for y in 0..8 {
            let mut acc = 0.0;
            for u in 0..8 {
                for v in 0..8 {
                    acc += normalizer(u)
                        * normalizer(v)
                        * coeffs.0[u][v]
                        * ((2 * x + 1) as f64 * u as f64 * PI / (2.0 * n)).cos()
                        * ((2 * y + 1) as f64 * v as f64 * PI / (2.0 * n)).cos();
                }
            }
            out[x][y] = 2.0 / n * acc;
        }
    }
    SpatialBlock(out)
}

/// Orthonormal 1D basis, `basis[k][x] = s(k) cos((2x+1) k pi / 16)`, so that
/// the 2D transform factors into `B f B^T`.
fn basis() -> &'static [[f64; 8]; 8] {
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut b = [[0.0; 8]; 8];
        for k in 0..8 {
            let scale = (2.0 / 8.0f64).sqrt() * normalizer(k);
            for x in 0..8 {
                b[k][x] = scale * ((2 * x + 1) as f64 * k as f64 * PI / 16.0).cos();
            }
        }
        b
    })
}

/// One-dimensional DCT of each row of `m` against the basis table.
/// `transpose` flips input indexing so the same kernel serves both passes.
fn rows_1d(m: &[[f64; 8]; 8], basis: &[[f64; 8]; 8], inverse: bool) -> [[f64; 8]; 8] {
    let mut out = [[0.0; 8]; 8];
    for r in 0..8 {
        let row = &m[r];
        for (k, out_v) in out[r].iter_mut().enumerate() {
            let mut acc = 0.0;
            if inverse {
                for x in 0..8 {
                    acc += basis[x][k] * row[x];
                }
            } else {
                let bk = &basis[k];
                for x in 0..8 {
                    acc += bk[x] * row[x];
                }
            }
            *out_v = acc;
        }
    }
    out
}

fn transpose(m: &[[f64; 8]; 8]) -> [[f64; 8]; 8] {
    let mut out = [[0.0; 8]; 8];
    for r in 0..8 {
        for c in 0..8 {
            out[c][r] = m[r][c];
        }
    }
    out
}

/// Forward transform via separable row-column passes.
pub fn dct2_fast(block: &SpatialBlock) -> CoeffBlock {
    let b = basis();
    // F = B f B^T: transform columns (rows of the transpose), then rows.
    let cols = rows_1d(&transpose(&block.0), b, false);
    CoeffBlock(rows_1d(&transpose(&cols), b, false))
}

/// Inverse transform via separable row-column passes.
pub fn idct2_fast(coeffs: &CoeffBlock) -> SpatialBlock {
    let b = basis();
    let cols = rows_1d(&transpose(&coeffs.0), b, true);
    SpatialBlock(rows_1d(&transpose(&cols), b, true))
}
