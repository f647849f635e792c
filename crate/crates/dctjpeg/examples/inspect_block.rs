//! Walk a single 8x8 block through the encoder stages: level-shifted
//! samples, DCT coefficients, quantized coefficients, and the zigzag scan.
//!
//!     cargo run --example inspect_block

use dctjpeg::dct::{dct2_fast, SpatialBlock};
use dctjpeg::entropy::zigzag_scan;
use dctjpeg::quant::{quantize_block, scaled_table, QuantTable};

fn main() {
    // A diagonal gradient block, as a codec would see it after the -128
    // level shift.
    let mut samples = [[0.0f64; 8]; 8];
    for (y, row) in samples.iter_mut().enumerate() {
        for (x, v) in row.iter_mut().enumerate() {
            *v = (16 * (x + y)) as f64 - 128.0;
        }
    }

    println!("level-shifted samples:");
    for row in &samples {
        println!("  {}", row.iter().map(|v| format!("{v:>6.0}")).collect::<Vec<_>>().join(" "));
    }

    let coeffs = dct2_fast(&SpatialBlock(samples));
    println!("\nDCT coefficients (DC top-left, energy packed into low frequencies):");
    for row in &coeffs.0 {
        println!("  {}", row.iter().map(|v| format!("{v:>8.2}")).collect::<Vec<_>>().join(" "));
    }

    let table = scaled_table(&QuantTable::luminance(), 50).unwrap();
    let quantized = quantize_block(&coeffs, &table);
    println!("\nquantized coefficients (quality 50 luminance table):");
    for row in &quantized.0 {
        println!("  {}", row.iter().map(|v| format!("{v:>5}")).collect::<Vec<_>>().join(" "));
    }

    let seq = zigzag_scan(&quantized);
    println!("\nzigzag scan (low frequencies first, long zero tail compresses well):");
    for chunk in seq.chunks(16) {
        println!("  {}", chunk.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
    }
    let trailing = seq.iter().rev().take_while(|&&v| v == 0).count();
    println!("\n{trailing} trailing zeros collapse into a single end-of-block symbol");
}
