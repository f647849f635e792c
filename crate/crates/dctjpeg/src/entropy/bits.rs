//! MSB-first bit packing with JPEG byte stuffing.
//!
//! Every 0xFF produced in the entropy stream is followed by a stuffed 0x00
//! on write; the reader collapses the pair. The final partial byte is
//! padded with 1-bits.

use crate::error::{Error, Result};

#[derive(Debug, Default)]
pub struct BitWriter {
    out: Vec<u8>,
    acc: u8,
    filled: u8,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    fn push_byte(&mut self, byte: u8) {
        self.out.push(byte);
        if byte == 0xFF {
            self.out.push(0x00);
        }
    }

    /// Writes the low `count` bits of `bits`, most significant first.
    pub fn put_bits(&mut self, bits: u16, count: u8) {
        debug_assert!(count <= 16);
        for i in (0..count).rev() {
            let bit = ((bits >> i) & 1) as u8;
            self.acc = (self.acc << 1) | bit;
            self.filled += 1;
            if self.filled == 8 {
                let byte = self.acc;
                self.acc = 0;
                self.filled = 0;
                self.push_byte(byte);
            }
        }
    }

    /// Pads the last byte with 1-bits and returns the stuffed stream.
    pub fn finish(mut self) -> Vec<u8> {
        if self.filled > 0 {
            let pad = 8 - self.filled;
            let byte = (self.acc << pad) | ((1u16 << pad) - 1) as u8;
            self.push_byte(byte);
        }
        self.out
    }
}

#[derive(Debug)]
pub struct BitReader<'a> {
    data: &'a [u8],
    /// Index of the next unread byte.
    pos: usize,
    cur: u8,
    left: u8,
    consumed_bits: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader { data, pos: 0, cur: 0, left: 0, consumed_bits: 0 }
    }

    /// Bits consumed so far; used to position error reports.
    pub fn bit_position(&self) -> usize {
        self.consumed_bits
    }

    fn load_byte(&mut self) -> Result<()> {
        if self.pos >= self.data.len() {
            return Err(Error::entropy(self.consumed_bits, "unexpected end of data"));
        }
        let byte = self.data[self.pos];
        self.pos += 1;
        if byte == 0xFF {
            match self.data.get(self.pos) {
                Some(0x00) => self.pos += 1,
                Some(other) => {
                    return Err(Error::entropy(
                        self.consumed_bits,
                        format!("marker byte 0xFF{other:02X} inside entropy data"),
                    ));
                }
                None => {
                    return Err(Error::entropy(self.consumed_bits, "truncated byte stuffing"));
                }
            }
        }
        self.cur = byte;
        self.left = 8;
        Ok(())
    }

    pub fn get_bit(&mut self) -> Result<u8> {
        if self.left == 0 {
            self.load_byte()?;
        }
        self.left -= 1;
        self.consumed_bits += 1;
        Ok((self.cur >> self.left) & 1)
    }

    /// Reads `count` bits MSB-first.
    pub fn get_bits(&mut self, count: u8) -> Result<u16> {
        debug_assert!(count <= 16);
        let mut v = 0u16;
        for _ in 0..count {
            v = (v << 1) | self.get_bit()? as u16;
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lone_zero_bit_pads_to_0x7f() {
        let mut w = BitWriter::new();
        w.put_bits(0, 1);
        assert_eq!(w.finish(), vec![0x7F]);
    }

    #[test]
    fn eight_one_bits_get_stuffed() {
        let mut w = BitWriter::new();
        for _ in 0..8 {
            w.put_bits(1, 1);
        }
        assert_eq!(w.finish(), vec![0xFF, 0x00]);
    }

    #[test]
    fn padding_that_forms_0xff_is_stuffed_too() {
        let mut w = BitWriter::new();
        w.put_bits(0b111, 3);
        assert_eq!(w.finish(), vec![0xFF, 0x00]);
    }

    #[test]
    fn reader_collapses_stuffing() {
        let mut r = BitReader::new(&[0xFF, 0x00, 0x80]);
        assert_eq!(r.get_bits(8).unwrap(), 0xFF);
        assert_eq!(r.get_bit().unwrap(), 1);
    }

    #[test]
    fn reader_rejects_marker_and_eof() {
        let mut r = BitReader::new(&[0xFF, 0xD9]);
        assert!(matches!(r.get_bit(), Err(Error::Entropy { .. })));

        let mut r = BitReader::new(&[0xAB]);
        r.get_bits(8).unwrap();
        let err = r.get_bit().unwrap_err();
        assert!(matches!(err, Error::Entropy { bit: 8, .. }));
    }

    #[test]
    fn writer_reader_round_trip() {
        let chunks: Vec<(u16, u8)> =
            vec![(0b1, 1), (0b1111_1111, 8), (0, 3), (0b10_1010, 6), (0xFFFF, 16), (5, 11)];
        let mut w = BitWriter::new();
        for &(bits, n) in &chunks {
            w.put_bits(bits, n);
        }
        let bytes = w.finish();
        let mut r = BitReader::new(&bytes);
        for &(bits, n) in &chunks {
            assert_eq!(r.get_bits(n).unwrap(), bits & ((1u32 << n) - 1) as u16);
        }
    }
}
