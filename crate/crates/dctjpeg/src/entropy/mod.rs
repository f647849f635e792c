//! Entropy stage: zigzag ordering, DC differential prediction, AC
//! run-length symbolization, Huffman code construction, and bit-level
//! encode/decode of symbol streams.

pub mod bits;
pub mod huffman;

pub use bits::{BitReader, BitWriter};
pub use huffman::{
    build_huffman_lengths, canonicalize, encoder_spec, Codeword, FrequencyTable, HuffmanDecoder,
    HuffmanSpec, MAX_CODE_LENGTH,
};

use crate::error::{Error, Result};
use crate::quant::QuantizedBlock;

/// Scan position -> row-major index. Walks the anti-diagonals of the 8x8
/// block, alternating direction, low frequencies first.
pub const ZIGZAG: [usize; 64] = [
    0, 1, 8, 16, 9, 2, 3, 10, //
    17, 24, 32, 25, 18, 11, 4, 5, //
    12, 19, 26, 33, 40, 48, 41, 34, //
    27, 20, 13, 6, 7, 14, 21, 28, //
    35, 42, 49, 56, 57, 50, 43, 36, //
    29, 22, 15, 23, 30, 37, 44, 51, //
    58, 59, 52, 45, 38, 31, 39, 46, //
    53, 60, 61, 54, 47, 55, 62, 63,
];

/// Reads a block out along the zigzag path; index 0 is the DC coefficient.
pub fn zigzag_scan(block: &QuantizedBlock) -> [i16; 64] {
    let mut out = [0i16; 64];
    for (k, &nat) in ZIGZAG.iter().enumerate() {
        out[k] = block.0[nat / 8][nat % 8];
    }
    out
}

/// Exact inverse permutation of [`zigzag_scan`].
pub fn inverse_zigzag(seq: &[i16; 64]) -> QuantizedBlock {
    let mut out = [[0i16; 8]; 8];
    for (k, &nat) in ZIGZAG.iter().enumerate() {
        out[nat / 8][nat % 8] = seq[k];
    }
    QuantizedBlock(out)
}

/// First value verbatim, then successive differences.
pub fn dc_differential_encode(values: &[i16]) -> Vec<i16> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev = 0i16;
    for &v in values {
        out.push(v.saturating_sub(prev));
        prev = v;
    }
    out
}

/// Running sum; inverse of [`dc_differential_encode`].
pub fn dc_differential_decode(diffs: &[i16]) -> Vec<i16> {
    let mut out = Vec::with_capacity(diffs.len());
    let mut acc = 0i16;
    for &d in diffs {
        acc = acc.saturating_add(d);
        out.push(acc);
    }
    out
}

/// One entropy-coded unit: a DC difference, or an AC coefficient together
/// with the count of zeros preceding it.
///
/// An AC `(run, size)` of `(0, 0)` is end-of-block; `(15, 0)` escapes a run
/// of sixteen zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientSymbol {
    Dc { size: u8, amplitude: i16 },
    Ac { run: u8, size: u8, amplitude: i16 },
}

pub const EOB: CoefficientSymbol = CoefficientSymbol::Ac { run: 0, size: 0, amplitude: 0 };
pub const ZRL: CoefficientSymbol = CoefficientSymbol::Ac { run: 15, size: 0, amplitude: 0 };

/// Magnitude category: the number of bits needed for `v`'s amplitude.
/// Categories stop at 11 (values up to +/-2047).
pub fn magnitude_size(v: i16) -> Result<u8> {
    let mag = (v as i32).unsigned_abs();
    if mag >= 2048 {
        return Err(Error::coding(format!("amplitude {v} exceeds category range")));
    }
    Ok((32 - mag.leading_zeros()) as u8)
}

/// Amplitude bit pattern: nonnegative values are stored verbatim, negative
/// values as `v + 2^size - 1` (the low `size` bits of one less than the
/// absolute value, complemented).
pub fn amplitude_bits(v: i16, size: u8) -> u16 {
    if v < 0 {
        (v as i32 + (1i32 << size) - 1) as u16
    } else {
        v as u16
    }
}

/// Inverse of [`amplitude_bits`].
pub fn amplitude_value(bits: u16, size: u8) -> i16 {
    if size == 0 {
        0
    } else if (bits as i32) < (1i32 << (size - 1)) {
        (bits as i32 + 1 - (1i32 << size)) as i16
    } else {
        bits as i16
    }
}

/// Turns the 63 AC coefficients of a block (zigzag order) into run-length
/// symbols. Trailing zeros collapse into end-of-block.
pub fn runlength_encode(ac: &[i16; 63]) -> Result<Vec<CoefficientSymbol>> {
    let mut out = Vec::new();
    let mut run = 0u8;
    for &v in ac {
        if v == 0 {
            run += 1;
            continue;
        }
        while run >= 16 {
            out.push(ZRL);
            run -= 16;
        }
        let size = magnitude_size(v)?;
        out.push(CoefficientSymbol::Ac { run, size, amplitude: v });
        run = 0;
    }
    if run > 0 {
        out.push(EOB);
    }
    Ok(out)
}

/// Exact inverse of [`runlength_encode`].
pub fn runlength_decode(symbols: &[CoefficientSymbol]) -> Result<[i16; 63]> {
    let mut out = [0i16; 63];
    let mut idx = 0usize;
    let mut iter = symbols.iter();
    while let Some(sym) = iter.next() {
        let (run, size, amplitude) = match *sym {
            CoefficientSymbol::Ac { run, size, amplitude } => (run, size, amplitude),
            CoefficientSymbol::Dc { .. } => {
                return Err(Error::coding("DC symbol inside an AC run".to_string()));
            }
        };
        if size == 0 {
            match run {
                0 => {
                    // End-of-block: the remaining slots stay zero.
                    if iter.next().is_some() {
                        return Err(Error::coding("symbols after end-of-block".to_string()));
                    }
                    return Ok(out);
                }
                15 => {
                    // ZRL: sixteen zeros.
                    idx += 16;
                    if idx > 63 {
                        return Err(Error::coding("zero run overflows the block".to_string()));
                    }
                    continue;
                }
                other => {
                    return Err(Error::coding(format!("invalid zero-size run {other}")));
                }
            }
        }
        idx += run as usize;
        if idx >= 63 {
            return Err(Error::coding("coefficients overflow the block".to_string()));
        }
        out[idx] = amplitude;
        idx += 1;
    }
    if idx != 63 {
        return Err(Error::coding("symbol stream ended before the block".to_string()));
    }
    Ok(out)
}

/// Huffman alphabet value of a symbol. DC sizes are namespaced above the
/// AC run/size byte so one table can describe a mixed stream.
pub fn symbol_value(sym: &CoefficientSymbol) -> u16 {
    match *sym {
        CoefficientSymbol::Dc { size, .. } => 0x100 | size as u16,
        CoefficientSymbol::Ac { run, size, .. } => ((run as u16) << 4) | size as u16,
    }
}

/// Counts alphabet values over a symbol stream.
pub fn count_symbols(symbols: &[CoefficientSymbol]) -> FrequencyTable {
    let mut freqs = FrequencyTable::new();
    for sym in symbols {
        freqs.record(symbol_value(sym));
    }
    freqs
}

/// Packs a symbol stream as Huffman codewords plus amplitude bits,
/// MSB-first, 1-padded, byte-stuffed.
pub fn bit_encode(symbols: &[CoefficientSymbol], spec: &HuffmanSpec) -> Result<Vec<u8>> {
    let mut writer = BitWriter::new();
    for sym in symbols {
        write_symbol(&mut writer, sym, spec)?;
    }
    Ok(writer.finish())
}

pub(crate) fn write_symbol(
    writer: &mut BitWriter,
    sym: &CoefficientSymbol,
    spec: &HuffmanSpec,
) -> Result<()> {
    let value = symbol_value(sym);
    let cw = spec
        .codeword(value)
        .ok_or_else(|| Error::coding(format!("symbol {value:#x} not in the code table")))?;
    writer.put_bits(cw.bits, cw.len);
    let (size, amplitude) = match *sym {
        CoefficientSymbol::Dc { size, amplitude } => (size, amplitude),
        CoefficientSymbol::Ac { size, amplitude, .. } => (size, amplitude),
    };
    if magnitude_size(amplitude)? != size {
        return Err(Error::coding(format!("amplitude {amplitude} does not fit category {size}")));
    }
    if size > 0 {
        writer.put_bits(amplitude_bits(amplitude, size), size);
    }
    Ok(())
}

/// Decodes `count` symbols back out of a [`bit_encode`] stream.
pub fn bit_decode(bytes: &[u8], spec: &HuffmanSpec, count: usize) -> Result<Vec<CoefficientSymbol>> {
    let decoder = HuffmanDecoder::new(spec);
    let mut reader = BitReader::new(bytes);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(read_symbol(&mut reader, &decoder)?);
    }
    Ok(out)
}

pub(crate) fn read_symbol(
    reader: &mut BitReader,
    decoder: &HuffmanDecoder,
) -> Result<CoefficientSymbol> {
    let value = decoder.decode(reader)?;
    if value & 0x100 != 0 {
        let size = (value & 0xFF) as u8;
        let amplitude = amplitude_value(reader.get_bits(size)?, size);
        Ok(CoefficientSymbol::Dc { size, amplitude })
    } else {
        let run = (value >> 4) as u8;
        let size = (value & 0xF) as u8;
        let amplitude = amplitude_value(reader.get_bits(size)?, size);
        Ok(CoefficientSymbol::Ac { run, size, amplitude })
    }
}
