//! Encode an image to an in-memory JFIF stream, decode it back, and report
//! sizes, compression ratio, MSE, and PSNR.
//!
//!     cargo run --example roundtrip

use dctjpeg::{decode_image, encode_image, EncodeParams, QualityReport, RasterImage};

/// Small synthetic photo stand-in: smooth ramps with a disc in the middle.
fn sample_rgb(w: usize, h: usize) -> RasterImage {
    let n = w * h;
    let (mut r, mut g, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 - w as f64 / 2.0;
            let dy = y as f64 - h as f64 / 2.0;
            let disc = if (dx * dx + dy * dy).sqrt() < w as f64 / 4.0 { 60.0 } else { 0.0 };
            r.push((40.0 + 160.0 * x as f64 / w as f64 + disc) as u8);
            g.push((30.0 + 140.0 * y as f64 / h as f64 + disc) as u8);
            b.push((90.0 + 0.3 * disc) as u8);
        }
    }
    RasterImage::rgb(w, h, r, g, b).unwrap()
}

fn main() {
    let image = sample_rgb(160, 120);

    for quality in [25u8, 50, 85] {
        let params = EncodeParams { quality, ..Default::default() };
        let bytes = encode_image(&image, &params).expect("encode");
        let decoded = decode_image(&bytes).expect("decode");
        let report = QualityReport::new(&image, &decoded, bytes.len() as u64).expect("report");
        println!(
            "quality {quality:>3}: {} raw -> {} compressed  (cr {:.1}, mse {:.2}, psnr {:.2} dB)",
            report.n1, report.n2, report.cr, report.mse, report.psnr
        );
    }

    // Grayscale runs through the same pipeline without color conversion.
    let gray = RasterImage::gray(64, 64, (0..64 * 64).map(|i| (i % 251) as u8).collect()).unwrap();
    let bytes = encode_image(&gray, &EncodeParams::default()).expect("encode gray");
    let decoded = decode_image(&bytes).expect("decode gray");
    let report = QualityReport::new(&gray, &decoded, bytes.len() as u64).expect("report");
    println!(
        "grayscale  : {} raw -> {} compressed  (cr {:.1}, psnr {:.2} dB)",
        report.n1, report.n2, report.cr, report.psnr
    );
}
