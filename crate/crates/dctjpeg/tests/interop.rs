//! Cross-implementation checks for the color paths against the `image`
//! crate's JPEG codec.
//!
//! Grayscale files agree with the reference decoder within +/-1 (that is
//! asserted in the acceptance suite). Color cannot be held to +/-1: our
//! inverse color matrix is computed from our forward coefficients, while
//! reference decoders use the standard BT.601 inverse (the blue-channel
//! row differs by up to 0.53% of luma), and 4:2:0 chroma is upsampled
//! here by replication where references smooth. These tests pin the
//! bounds those differences actually produce.

mod support;

use dctjpeg::{decode_image, encode_image, metrics, EncodeParams, RasterImage, Subsampling};
use image::codecs::jpeg::JpegEncoder;
use image::ImageEncoder;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use support::{interleave, max_abs_diff, natural_gray, natural_rgb};

fn reference_decode_rgb(bytes: &[u8]) -> RasterImage {
    let rgb = image::load_from_memory(bytes).expect("reference decode").to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let raw = rgb.into_raw();
    let n = w * h;
    let mut planes: Vec<Vec<u8>> = (0..3).map(|_| Vec::with_capacity(n)).collect();
    for px in raw.chunks_exact(3) {
        for ch in 0..3 {
            planes[ch].push(px[ch]);
        }
    }
    RasterImage::new(w, h, planes).unwrap()
}

fn fraction_above(a: &RasterImage, b: &RasterImage, threshold: i32) -> f64 {
    let mut above = 0usize;
    let mut total = 0usize;
    for ch in 0..a.channels() {
        for (&x, &y) in a.plane(ch).iter().zip(b.plane(ch)) {
            if (x as i32 - y as i32).abs() > threshold {
                above += 1;
            }
            total += 1;
        }
    }
    above as f64 / total as f64
}

#[test]
fn color_444_files_read_back_close_to_reference() {
    for (w, h, seed) in [(512usize, 512usize, 44u64), (96, 80, 66)] {
        let img = natural_rgb(w, h, seed);
        for quality in [10u8, 50, 90] {
            let params = EncodeParams { quality, ..Default::default() };
            let bytes = encode_image(&img, &params).unwrap();
            let ours = decode_image(&bytes).unwrap();
            let theirs = reference_decode_rgb(&bytes);
            assert_eq!((theirs.width(), theirs.height()), (w, h));

            let worst = max_abs_diff(&ours, &theirs);
            assert!(worst <= 5, "q{quality} {w}x{h}: reference diff {worst} > 5");
            let loose = fraction_above(&ours, &theirs, 1);
            assert!(loose <= 0.03, "q{quality} {w}x{h}: {loose:.4} of samples beyond +/-1");
        }
    }
}

#[test]
fn color_420_files_read_back_close_to_reference() {
    let img = natural_rgb(256, 256, 77);
    let params = EncodeParams { subsampling: Subsampling::S420, ..Default::default() };
    let bytes = encode_image(&img, &params).unwrap();
    let ours = decode_image(&bytes).unwrap();
    let theirs = reference_decode_rgb(&bytes);
    // Replication vs smoothing upsamplers split mostly at chroma edges.
    let worst = max_abs_diff(&ours, &theirs);
    assert!(worst <= 10, "4:2:0 reference diff {worst} > 10");
    assert!(fraction_above(&ours, &theirs, 2) <= 0.02);
    // Both decoders reconstruct the original about equally well.
    let ours_psnr = metrics::psnr(&img, &ours).unwrap();
    let theirs_psnr = metrics::psnr(&img, &theirs).unwrap();
    assert!((ours_psnr - theirs_psnr).abs() <= 1.0, "{ours_psnr:.2} vs {theirs_psnr:.2} dB");
}

#[test]
fn color_quality_and_size_track_the_knob() {
    let img = natural_rgb(256, 192, 88);
    let mut prev_psnr = 0.0;
    let mut prev_size = 0usize;
    for quality in [10u8, 50, 90] {
        let params = EncodeParams { quality, ..Default::default() };
        let bytes = encode_image(&img, &params).unwrap();
        let decoded = decode_image(&bytes).unwrap();
        let psnr = metrics::psnr(&img, &decoded).unwrap();
        assert!(psnr > prev_psnr, "PSNR fell from {prev_psnr:.2} to {psnr:.2} at q{quality}");
        assert!(bytes.len() > prev_size);
        prev_psnr = psnr;
        prev_size = bytes.len();
    }
    assert!(prev_psnr >= 30.0, "quality 90 color PSNR {prev_psnr:.2} dB");
}

#[test]
fn reference_encoded_files_decode_here() {
    for quality in [50u8, 80, 95] {
        for (w, h) in [(64usize, 48usize), (129, 65)] {
            let img = natural_rgb(w, h, 99);
            let mut jpeg = Vec::new();
            JpegEncoder::new_with_quality(&mut jpeg, quality)
                .write_image(&interleave(&img), w as u32, h as u32, image::ExtendedColorType::Rgb8)
                .unwrap();
            let ours = decode_image(&jpeg).unwrap();
            assert_eq!((ours.width(), ours.height(), ours.channels()), (w, h, 3));
            let theirs = reference_decode_rgb(&jpeg);
            let worst = max_abs_diff(&ours, &theirs);
            assert!(worst <= 6, "q{quality} {w}x{h}: decoders disagree by {worst}");

            let gray = natural_gray(w, h, 7);
            let mut jpeg = Vec::new();
            JpegEncoder::new_with_quality(&mut jpeg, quality)
                .write_image(gray.plane(0), w as u32, h as u32, image::ExtendedColorType::L8)
                .unwrap();
            let ours = decode_image(&jpeg).unwrap();
            let theirs = image::load_from_memory(&jpeg).unwrap().to_luma8();
            for (&t, &m) in theirs.as_raw().iter().zip(ours.plane(0)) {
                assert!((t as i32 - m as i32).abs() <= 1);
            }
        }
    }
}

#[test]
fn color_decoder_survives_corruption() {
    let img = natural_rgb(48, 40, 123);
    for subsampling in [Subsampling::S444, Subsampling::S420] {
        let params = EncodeParams { subsampling, ..Default::default() };
        let base = encode_image(&img, &params).unwrap();
        let mut rng = StdRng::seed_from_u64(0xc0de);
        for trial in 0..3000 {
            let mut mutated = base.clone();
            if rng.random_range(0u8..2) == 0 {
                let keep = rng.random_range(0..mutated.len());
                mutated.truncate(keep);
            } else {
                let at = rng.random_range(0..mutated.len());
                mutated[at] = rng.random();
            }
            let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
                decode_image(&mutated)
            }));
            assert!(outcome.is_ok(), "decoder panicked on color mutation {trial}");
        }
    }
}
