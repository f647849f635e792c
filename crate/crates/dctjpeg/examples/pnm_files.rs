//! Read and write the PNM interchange formats (binary PGM/PPM) and run a
//! file-based compress/decompress cycle in a temporary directory.
//!
//!     cargo run --example pnm_files

use std::fs;

use dctjpeg::{decode_image, encode_image, read_pnm, write_pnm, EncodeParams, RasterImage};

fn main() {
    let dir = std::env::temp_dir().join("dctjpeg-pnm-example");
    fs::create_dir_all(&dir).expect("create temp dir");

    // A gradient PPM on disk.
    let n = 48 * 32;
    let image = RasterImage::rgb(
        48,
        32,
        (0..n).map(|i| (i * 5 % 256) as u8).collect(),
        (0..n).map(|i| (i * 3 % 256) as u8).collect(),
        (0..n).map(|i| (255 - i % 256) as u8).collect(),
    )
    .unwrap();
    let ppm_path = dir.join("gradient.ppm");
    fs::write(&ppm_path, write_pnm(&image)).expect("write ppm");
    println!("wrote {}", ppm_path.display());

    // Read it back: bit-exact.
    let loaded = read_pnm(&fs::read(&ppm_path).expect("read ppm")).expect("parse ppm");
    assert_eq!(loaded, image);
    println!(
        "read back {}x{}x{}, bit-exact",
        loaded.width(),
        loaded.height(),
        loaded.channels()
    );

    // Through the codec and back out as files.
    let jpg_path = dir.join("gradient.jpg");
    let bytes = encode_image(&loaded, &EncodeParams::default()).expect("encode");
    fs::write(&jpg_path, &bytes).expect("write jpg");
    let decoded = decode_image(&fs::read(&jpg_path).expect("read jpg")).expect("decode");
    let out_path = dir.join("decoded.ppm");
    fs::write(&out_path, write_pnm(&decoded)).expect("write decoded");
    println!(
        "{} ({} bytes) -> {} -> {}",
        ppm_path.file_name().unwrap().to_string_lossy(),
        image.payload_bytes(),
        jpg_path.file_name().unwrap().to_string_lossy(),
        out_path.file_name().unwrap().to_string_lossy()
    );

    // Malformed input is rejected with a byte position.
    match read_pnm(b"P4 2 2 255 \x00") {
        Err(e) => println!("rejecting a P4 bitmap: {e}"),
        Ok(_) => unreachable!(),
    }
}
