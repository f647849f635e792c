//! Parse an encoded stream back into its container model and list what the
//! file actually carries: dimensions, sampling factors, quantization and
//! Huffman tables, and the entropy payload.
//!
//!     cargo run --example markers

use dctjpeg::container::parse_stream;
use dctjpeg::{encode_image, EncodeParams, RasterImage, Subsampling};

fn main() {
    let n = 96 * 64;
    let image = RasterImage::rgb(
        96,
        64,
        (0..n).map(|i| (i % 256) as u8).collect(),
        (0..n).map(|i| (i / 96 * 3) as u8).collect(),
        vec![128; n],
    )
    .unwrap();
    let params = EncodeParams { subsampling: Subsampling::S420, ..Default::default() };
    let bytes = encode_image(&image, &params).expect("encode");
    println!("encoded {} bytes\n", bytes.len());

    let model = parse_stream(&bytes).expect("parse");
    println!(
        "frame: {}x{}, {} components",
        model.frame.width,
        model.frame.height,
        model.frame.components.len()
    );
    for c in &model.frame.components {
        println!(
            "  component {}: sampling {}x{}, quantization table {}",
            c.id, c.h_sampling, c.v_sampling, c.quant_id
        );
    }

    for slot in &model.quant {
        println!("\nquantization table {} (top-left 4x4):", slot.id);
        for row in &slot.table.divisors[..4] {
            println!(
                "  {}",
                row[..4].iter().map(|d| format!("{d:>4}")).collect::<Vec<_>>().join(" ")
            );
        }
    }

    println!();
    for slot in &model.huffman {
        let (counts, symbols) = slot.spec.dht_parts().expect("dht");
        println!(
            "huffman table ({:?}, id {}): {} symbols, lengths {}..{}",
            slot.class,
            slot.id,
            symbols.len(),
            counts.iter().position(|&c| c > 0).map(|i| i + 1).unwrap_or(0),
            16 - counts.iter().rev().position(|&c| c > 0).unwrap_or(16),
        );
    }

    println!("\nscan bindings:");
    for b in &model.scan {
        println!("  component {} -> DC table {}, AC table {}", b.component_id, b.dc_id, b.ac_id);
    }
    println!("\nentropy payload: {} bytes (byte-stuffed)", model.entropy.len());
}
