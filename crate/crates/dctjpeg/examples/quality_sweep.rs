//! Sweep the quality knob and watch the rate-distortion trade-off: the
//! quantization tables scale with quality, so file size and PSNR move in
//! opposite directions.
//!
//!     cargo run --example quality_sweep

use dctjpeg::quant::{scaled_table, QuantTable};
use dctjpeg::{decode_image, encode_image, metrics, EncodeParams, RasterImage};

fn sample_gray(w: usize, h: usize) -> RasterImage {
    let mut samples = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let ripple = (x as f64 / 9.0).sin() * (y as f64 / 13.0).cos() * 28.0;
            let ramp = 120.0 + 70.0 * (x + y) as f64 / (w + h) as f64;
            samples.push((ramp + ripple).clamp(0.0, 255.0) as u8);
        }
    }
    RasterImage::gray(w, h, samples).unwrap()
}

fn main() {
    // How the luminance DC divisor moves with quality.
    println!("quality -> DC divisor (base table entry 16):");
    for q in [1u8, 10, 25, 50, 75, 90, 100] {
        let table = scaled_table(&QuantTable::luminance(), q).unwrap();
        println!("  q{q:>3}: {}", table.divisors[0][0]);
    }

    let image = sample_gray(256, 256);
    println!("\nquality    bytes      cr     psnr");
    for q in [1u8, 10, 25, 50, 75, 90, 100] {
        let bytes = encode_image(&image, &EncodeParams { quality: q, ..Default::default() })
            .expect("encode");
        let decoded = decode_image(&bytes).expect("decode");
        let cr = metrics::compression_ratio(image.payload_bytes() as u64, bytes.len() as u64)
            .expect("cr");
        let psnr = metrics::psnr(&image, &decoded).expect("psnr");
        println!("  q{q:>3} {:>8} {:>7.2} {:>7.2} dB", bytes.len(), cr, psnr);
    }
}
