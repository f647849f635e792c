//! Compare 4:4:4 and 4:2:0 chroma handling: halving the chroma resolution
//! buys file size at a small cost in color fidelity.
//!
//!     cargo run --example subsampling

use dctjpeg::{decode_image, encode_image, metrics, EncodeParams, RasterImage, Subsampling};

/// Colorful test card: hue varies smoothly, luminance ramps diagonally.
fn sample_rgb(w: usize, h: usize) -> RasterImage {
    let n = w * h;
    let (mut r, mut g, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for y in 0..h {
        for x in 0..w {
            let t = x as f64 / w as f64 * std::f64::consts::TAU;
            let l = 90.0 + 90.0 * (x + y) as f64 / (w + h) as f64;
            r.push((l + 60.0 * t.sin()).clamp(0.0, 255.0) as u8);
            g.push((l + 60.0 * (t + 2.1).sin()).clamp(0.0, 255.0) as u8);
            b.push((l + 60.0 * (t + 4.2).sin()).clamp(0.0, 255.0) as u8);
        }
    }
    RasterImage::rgb(w, h, r, g, b).unwrap()
}

fn main() {
    let image = sample_rgb(200, 144);
    println!("scheme   bytes      cr    psnr");
    for (name, subsampling) in [("4:4:4", Subsampling::S444), ("4:2:0", Subsampling::S420)] {
        let params = EncodeParams { subsampling, ..Default::default() };
        let bytes = encode_image(&image, &params).expect("encode");
        let decoded = decode_image(&bytes).expect("decode");
        let cr = metrics::compression_ratio(image.payload_bytes() as u64, bytes.len() as u64)
            .expect("cr");
        let psnr = metrics::psnr(&image, &decoded).expect("psnr");
        println!("{name}  {:>7}  {:>6.2}  {:>6.2} dB", bytes.len(), cr, psnr);
    }
    println!("\n4:2:0 stores chroma at quarter resolution (2x2 box average on the");
    println!("way in, pixel replication on the way out), so the luma channel is");
    println!("untouched while both chroma planes shrink fourfold before coding.");
}
