//! RGB <-> YCbCr conversion and the +/-128 level shift.
//!
//! The forward coefficients are kept exactly as printed in the tables this
//! codec is built around; the inverse is derived numerically from them at
//! startup rather than hard-coded. All narrowing from reals to integers
//! rounds half away from zero (`f64::round`), the one rule used across the
//! whole codebase.

use std::sync::OnceLock;

/// Forward conversion coefficients. Note the Cb row sums to -0.003, not 0,
/// so pure white converts to Cb = 127; that asymmetry is intentional and
/// covered by tests.
const FORWARD: [[f64; 3]; 3] = [
    [0.299, 0.587, 0.114],
    [-0.169, -0.334, 0.500],
    [0.500, -0.419, -0.081],
];

const OFFSET: [f64; 3] = [0.0, 128.0, 128.0];

/// Conversion matrix pair: the fixed forward coefficients plus their
/// numerically computed inverse.
#[derive(Debug, Clone)]
pub struct ColorMatrix {
    pub forward: [[f64; 3]; 3],
    pub offset: [f64; 3],
    pub inverse: [[f64; 3]; 3],
}

impl ColorMatrix {
    fn compute() -> Self {
        let inverse = invert_3x3(&FORWARD).expect("forward color matrix is singular");
        ColorMatrix { forward: FORWARD, offset: OFFSET, inverse }
    }
}

/// Shared matrix pair, inverted once on first use.
pub fn matrix() -> &'static ColorMatrix {
    static MATRIX: OnceLock<ColorMatrix> = OnceLock::new();
    MATRIX.get_or_init(ColorMatrix::compute)
}

/// Gauss-Jordan elimination with partial pivoting.
fn invert_3x3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    // Augmented [m | I].
    let mut a = [[0.0f64; 6]; 3];
    for r in 0..3 {
        a[r][..3].copy_from_slice(&m[r]);
        a[r][3 + r] = 1.0;
    }
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        let scale = a[col][col];
        for v in a[col].iter_mut() {
            *v /= scale;
        }
        for row in 0..3 {
            if row != col {
                let factor = a[row][col];
                for k in 0..6 {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
    }
    let mut inv = [[0.0f64; 3]; 3];
    for r in 0..3 {
        inv[r].copy_from_slice(&a[r][3..]);
    }
    Some(inv)
}

fn clamp_u8(x: f64) -> u8 {
    x.round().clamp(0.0, 255.0) as u8
}

/// RGB sample triple to YCbCr, rounded and clamped to [0, 255].
pub fn rgb_to_ycbcr(r: u8, g: u8, b: u8) -> (u8, u8, u8) {
    let m = matrix();
    let v = [r as f64, g as f64, b as f64];
    let mut out = [0u8; 3];
    for row in 0..3 {
        let x = m.forward[row][0] * v[0] + m.forward[row][1] * v[1] + m.forward[row][2] * v[2]
            + m.offset[row];
        out[row] = clamp_u8(x);
    }
    (out[0], out[1], out[2])
}

/// YCbCr sample triple back to RGB through the computed inverse.
pub fn ycbcr_to_rgb(y: u8, cb: u8, cr: u8) -> (u8, u8, u8) {
    let m = matrix();
    let v = [y as f64 - m.offset[0], cb as f64 - m.offset[1], cr as f64 - m.offset[2]];
    let mut out = [0u8; 3];
    for row in 0..3 {
        let x = m.inverse[row][0] * v[0] + m.inverse[row][1] * v[1] + m.inverse[row][2] * v[2];
        out[row] = clamp_u8(x);
    }
    (out[0], out[1], out[2])
}

/// Centers samples on zero: [0, 255] -> [-128, 127].
pub fn level_shift_forward(samples: &[u8]) -> Vec<i16> {
    samples.iter().map(|&s| s as i16 - 128).collect()
}

/// Undoes the level shift, clamping reconstruction overshoot back into
/// [0, 255].
pub fn level_shift_inverse(values: &[i16]) -> Vec<u8> {
    values.iter().map(|&v| (v as i32 + 128).clamp(0, 255) as u8).collect()
}
