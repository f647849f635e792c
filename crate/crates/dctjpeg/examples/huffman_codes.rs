//! Build a Huffman code from symbol frequencies the way the encoder does:
//! lowest-two merging for optimal lengths, then canonical codeword
//! assignment, then a bit-exact round trip of a coefficient stream.
//!
//!     cargo run --example huffman_codes

use dctjpeg::entropy::{
    bit_decode, bit_encode, build_huffman_lengths, canonicalize, count_symbols, encoder_spec,
    magnitude_size, runlength_encode, CoefficientSymbol, FrequencyTable,
};

fn main() {
    // The classic skewed alphabet: frequent symbols earn short codes.
    let freqs = FrequencyTable::from_counts([(b'a' as u16, 5u64), (b'b' as u16, 2), (b'c' as u16, 1), (b'd' as u16, 1)])
        .unwrap();
    let lengths = build_huffman_lengths(&freqs).unwrap();
    let spec = canonicalize(&lengths).unwrap();
    println!("symbol  count  length  canonical code");
    for (&sym, &count) in freqs.counts() {
        let cw = spec.codeword(sym).unwrap();
        println!(
            "  '{}'     {count}      {}      {:0width$b}",
            sym as u8 as char,
            cw.len,
            cw.bits,
            width = cw.len as usize
        );
    }
    let total: u64 = freqs.counts().iter().map(|(&s, &c)| c * lengths[&s] as u64).sum();
    println!("weighted length: {total} bits (minimal for these counts)\n");

    // Now the real alphabet: DC differences and AC run/size symbols from a
    // sparse coefficient block.
    let mut ac = [0i16; 63];
    ac[0] = 12;
    ac[5] = -3;
    ac[30] = 1;
    let dc_diff = -9i16;
    let mut stream = vec![CoefficientSymbol::Dc {
        size: magnitude_size(dc_diff).unwrap(),
        amplitude: dc_diff,
    }];
    stream.extend(runlength_encode(&ac).unwrap());
    println!("coefficient symbols: {stream:?}");

    let spec = encoder_spec(&count_symbols(&stream)).unwrap();
    let bytes = bit_encode(&stream, &spec).unwrap();
    println!("packed into {} bytes: {:02x?}", bytes.len(), bytes);

    let decoded = bit_decode(&bytes, &spec, stream.len()).unwrap();
    assert_eq!(decoded, stream);
    println!("decoded back to the identical symbol stream");
}
