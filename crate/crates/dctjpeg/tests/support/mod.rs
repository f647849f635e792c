//! Shared helpers for the integration suites: deterministic synthetic
//! images with natural-photo statistics (smooth multi-scale structure,
//! moderate detail), plus diff utilities.
#![allow(dead_code)] // each test binary uses a different subset

use dctjpeg::RasterImage;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Multi-octave value noise in [0, 1]: coarse random lattices upsampled
/// bilinearly, finer octaves fading out. Smooth like photographic content.
fn value_noise(w: usize, h: usize, rng: &mut StdRng) -> Vec<f64> {
    let mut acc = vec![0.0f64; w * h];
    let mut total = 0.0f64;
    let mut amplitude = 1.0f64;
    for cell in [64usize, 28, 12, 5] {
        let gw = w.div_ceil(cell) + 2;
        let gh = h.div_ceil(cell) + 2;
        let lattice: Vec<f64> = (0..gw * gh).map(|_| rng.random_range(-1.0..1.0)).collect();
        for y in 0..h {
            let fy = y as f64 / cell as f64;
            let y0 = fy.floor() as usize;
            let ty = fy - y0 as f64;
            for x in 0..w {
                let fx = x as f64 / cell as f64;
                let x0 = fx.floor() as usize;
                let tx = fx - x0 as f64;
                let at = |gx: usize, gy: usize| lattice[gy * gw + gx];
                let top = at(x0, y0) * (1.0 - tx) + at(x0 + 1, y0) * tx;
                let bottom = at(x0, y0 + 1) * (1.0 - tx) + at(x0 + 1, y0 + 1) * tx;
                acc[y * w + x] += amplitude * (top * (1.0 - ty) + bottom * ty);
            }
        }
        total += amplitude;
        amplitude *= 0.5;
    }
    let mut out = acc;
    for v in out.iter_mut() {
        *v = (*v / total + 1.0) / 2.0;
    }
    out
}

fn to_u8(v: f64) -> u8 {
    (v * 255.0).round().clamp(0.0, 255.0) as u8
}

/// Grayscale synthetic "photograph": cloudy structure over a soft
/// illumination gradient.
pub fn natural_gray(w: usize, h: usize, seed: u64) -> RasterImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let field = value_noise(w, h, &mut rng);
    let mut samples = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let shade = 0.15 * (x as f64 / w as f64) + 0.10 * (y as f64 / h as f64);
            let v = 0.08 + 0.72 * field[y * w + x] + shade;
            samples.push(to_u8(v));
        }
    }
    RasterImage::gray(w, h, samples).unwrap()
}

/// Color synthetic "photograph": a luminance field plus two smoother,
/// lower-amplitude chroma fields.
pub fn natural_rgb(w: usize, h: usize, seed: u64) -> RasterImage {
    let mut rng = StdRng::seed_from_u64(seed);
    let luma = value_noise(w, h, &mut rng);
    let chroma_a = value_noise(w, h, &mut rng);
    let chroma_b = value_noise(w, h, &mut rng);
    let mut r = Vec::with_capacity(w * h);
    let mut g = Vec::with_capacity(w * h);
    let mut b = Vec::with_capacity(w * h);
    for i in 0..w * h {
        let l = 0.10 + 0.70 * luma[i];
        let ca = (chroma_a[i] - 0.5) * 0.45;
        let cb = (chroma_b[i] - 0.5) * 0.35;
        r.push(to_u8(l + ca));
        g.push(to_u8(l - 0.4 * ca + 0.5 * cb));
        b.push(to_u8(l - cb));
    }
    RasterImage::rgb(w, h, r, g, b).unwrap()
}

/// Largest per-channel absolute sample difference.
pub fn max_abs_diff(a: &RasterImage, b: &RasterImage) -> i32 {
    assert_eq!(a.channels(), b.channels());
    let mut worst = 0;
    for ch in 0..a.channels() {
        for (&x, &y) in a.plane(ch).iter().zip(b.plane(ch)) {
            worst = worst.max((x as i32 - y as i32).abs());
        }
    }
    worst
}

/// Interleaves planes into the packed layout the `image` crate uses.
pub fn interleave(img: &RasterImage) -> Vec<u8> {
    let n = img.width() * img.height();
    let mut out = Vec::with_capacity(n * img.channels());
    for i in 0..n {
        for ch in 0..img.channels() {
            out.push(img.plane(ch)[i]);
        }
    }
    out
}
