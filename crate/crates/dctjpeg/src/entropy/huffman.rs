//! Huffman code construction: frequency counting, the classic lowest-two
//! merge, canonical code assignment with a 16-bit depth cap, and the
//! table forms used by DHT segments.

use std::collections::BTreeMap;

use super::bits::BitReader;
use crate::error::{Error, Result};

/// Baseline depth cap; canonical tables must be serializable as 16
/// count-per-length bytes.
pub const MAX_CODE_LENGTH: u8 = 16;

/// Internal symbol used to keep the all-ones codeword unassigned in
/// encoder-built tables. It never appears in a serialized table.
const RESERVE_SYMBOL: u16 = u16::MAX;

/// Occurrence counts per symbol. Symbols are `u16` so alphabets beyond a
/// byte (and the internal reserve symbol) fit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<u16, u64>,
}

impl FrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts<I: IntoIterator<Item = (u16, u64)>>(pairs: I) -> Result<Self> {
        let mut t = Self::new();
        for (sym, count) in pairs {
            if count == 0 {
                return Err(Error::coding(format!("zero count for symbol {sym}")));
            }
            t.record_count(sym, count);
        }
        Ok(t)
    }

    pub fn record(&mut self, symbol: u16) {
        self.record_count(symbol, 1);
    }

    pub fn record_count(&mut self, symbol: u16, count: u64) {
        *self.counts.entry(symbol).or_insert(0) += count;
    }

    pub fn counts(&self) -> &BTreeMap<u16, u64> {
        &self.counts
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Leaf depths from the textbook construction: repeatedly merge the two
/// least-frequent parentless nodes until a single root remains. Ties pick
/// the node created earliest (leaves first, in symbol order), which makes
/// the output deterministic. A single-symbol alphabet gets length 1.
pub fn build_huffman_lengths(freqs: &FrequencyTable) -> Result<BTreeMap<u16, u8>> {
    if freqs.is_empty() {
        return Err(Error::coding("empty frequency table"));
    }

    struct Node {
        count: u64,
        parent: Option<usize>,
        symbol: Option<u16>,
    }

    let mut nodes: Vec<Node> = freqs
        .counts
        .iter()
        .map(|(&symbol, &count)| Node { count, parent: None, symbol: Some(symbol) })
        .collect();

    if nodes.len() == 1 {
        let symbol = nodes[0].symbol.unwrap();
        return Ok(BTreeMap::from([(symbol, 1)]));
    }

    let mut roots: Vec<usize> = (0..nodes.len()).collect();
    while roots.len() > 1 {
        // Two smallest by (count, creation index); creation index is the
        // node's position in `nodes`.
        let mut best = [usize::MAX, usize::MAX];
        for pos in 0..roots.len() {
            let better = |a: usize, b: usize| {
                (nodes[roots[a]].count, roots[a]) < (nodes[roots[b]].count, roots[b])
            };
            if best[0] == usize::MAX || better(pos, best[0]) {
                best[1] = best[0];
                best[0] = pos;
            } else if best[1] == usize::MAX || better(pos, best[1]) {
                best[1] = pos;
            }
        }
        let (a, b) = (roots[best[0]], roots[best[1]]);
        let merged = nodes.len();
        nodes.push(Node { count: nodes[a].count + nodes[b].count, parent: None, symbol: None });
        nodes[a].parent = Some(merged);
        nodes[b].parent = Some(merged);
        // Remove the higher list position first so the lower stays valid.
        let (hi, lo) = if best[0] > best[1] { (best[0], best[1]) } else { (best[1], best[0]) };
        roots.swap_remove(hi);
        roots.swap_remove(lo);
        roots.push(merged);
    }

    let mut lengths = BTreeMap::new();
    for i in 0..nodes.len() {
        if let Some(symbol) = nodes[i].symbol {
            let mut depth = 0u8;
            let mut at = i;
            while let Some(p) = nodes[at].parent {
                depth += 1;
                at = p;
            }
            lengths.insert(symbol, depth);
        }
    }
    Ok(lengths)
}

/// One canonical codeword: `len` significant bits in the low bits of `bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Codeword {
    pub len: u8,
    pub bits: u16,
}

/// A canonical prefix code: codewords assigned in (length, symbol) order,
/// numerically increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanSpec {
    codes: BTreeMap<u16, Codeword>,
}

// Kraft sums are compared in fixed point with this many fractional bits so
// the check is exact for any length the tree builder can produce.
const KRAFT_FRACTION_BITS: u32 = 100;
const KRAFT_ONE: u128 = 1 << KRAFT_FRACTION_BITS;

fn kraft_sum<'a, I: Iterator<Item = &'a u8>>(lengths: I) -> Result<u128> {
    let mut sum: u128 = 0;
    for &len in lengths {
        if len == 0 || len as u32 > KRAFT_FRACTION_BITS {
            return Err(Error::coding(format!("code length {len} out of range")));
        }
        sum += 1u128 << (KRAFT_FRACTION_BITS - len as u32);
    }
    Ok(sum)
}

/// Caps lengths at 16 bits. Overlong leaves move up to the cap, then other
/// leaves are pushed down (longest first) until the Kraft inequality holds
/// again.
fn limit_lengths(lengths: &BTreeMap<u16, u8>) -> BTreeMap<u16, u8> {
    let mut limited: BTreeMap<u16, u8> = lengths
        .iter()
        .map(|(&sym, &len)| (sym, len.min(MAX_CODE_LENGTH)))
        .collect();
    let target = 1u128 << MAX_CODE_LENGTH;
    let mut kraft: u128 =
        limited.values().map(|&len| 1u128 << (MAX_CODE_LENGTH - len) as u32).sum();
    while kraft > target {
        // Demote the deepest symbol still below the cap (largest symbol
        // value on ties).
        let (&sym, &len) = limited
            .iter()
            .filter(|(_, &len)| len < MAX_CODE_LENGTH)
            .max_by_key(|(&sym, &len)| (len, sym))
            .expect("alphabet of <= 2^16 symbols always fits in 16-bit codes");
        limited.insert(sym, len + 1);
        kraft -= 1u128 << (MAX_CODE_LENGTH - len - 1) as u32;
    }
    limited
}

/// Reassigns codewords canonically from a symbol -> length map.
///
/// Lengths deeper than 16 bits are first folded back to the cap. Inputs
/// violating the Kraft inequality are rejected.
pub fn canonicalize(lengths: &BTreeMap<u16, u8>) -> Result<HuffmanSpec> {
    if lengths.is_empty() {
        return Err(Error::coding("no code lengths"));
    }
    if kraft_sum(lengths.values())? > KRAFT_ONE {
        return Err(Error::coding("code lengths violate the Kraft inequality"));
    }
    let limited = if lengths.values().any(|&l| l > MAX_CODE_LENGTH) {
        limit_lengths(lengths)
    } else {
        lengths.clone()
    };

    let mut order: Vec<(u8, u16)> = limited.iter().map(|(&sym, &len)| (len, sym)).collect();
    order.sort_unstable();

    let mut codes = BTreeMap::new();
    let mut code: u32 = 0;
    let mut prev_len = 0u8;
    for (len, sym) in order {
        code <<= len - prev_len;
        prev_len = len;
        if code >= 1u32 << len {
            return Err(Error::coding("canonical code space exhausted"));
        }
        codes.insert(sym, Codeword { len, bits: code as u16 });
        code += 1;
    }
    Ok(HuffmanSpec { codes })
}

/// Builds the canonical code an encoder should use for `freqs`: optimal
/// lengths from the actual counts, with one slot sacrificed so that no
/// real symbol receives the all-ones codeword (decoders reserve it).
pub fn encoder_spec(freqs: &FrequencyTable) -> Result<HuffmanSpec> {
    let mut padded = freqs.clone();
    if padded.counts.contains_key(&RESERVE_SYMBOL) {
        return Err(Error::coding("symbol value reserved for internal use"));
    }
    padded.record_count(RESERVE_SYMBOL, 1);
    let mut lengths = build_huffman_lengths(&padded)?;
    // Depth-limit while the reserve symbol still occupies its slot, then
    // drop it: the freed leaf keeps the code space incomplete, so the
    // canonical tail can never reach the all-ones pattern.
    if lengths.values().any(|&l| l > MAX_CODE_LENGTH) {
        lengths = limit_lengths(&lengths);
    }
    lengths.remove(&RESERVE_SYMBOL);
    let spec = canonicalize(&lengths)?;
    for (sym, cw) in spec.codes() {
        if cw.bits as u32 == (1u32 << cw.len) - 1 {
            return Err(Error::coding(format!("symbol {sym} was assigned the all-ones codeword")));
        }
    }
    Ok(spec)
}

impl HuffmanSpec {
    pub fn codes(&self) -> &BTreeMap<u16, Codeword> {
        &self.codes
    }

    pub fn codeword(&self, symbol: u16) -> Option<Codeword> {
        self.codes.get(&symbol).copied()
    }

    /// Symbol -> length view.
    pub fn lengths(&self) -> BTreeMap<u16, u8> {
        self.codes.iter().map(|(&sym, cw)| (sym, cw.len)).collect()
    }

    /// Symbols in canonical (length, value) order.
    fn canonical_symbols(&self) -> Vec<(u8, u16)> {
        let mut order: Vec<(u8, u16)> = self.codes.iter().map(|(&sym, cw)| (cw.len, sym)).collect();
        order.sort_unstable();
        order
    }

    /// DHT representation: 16 per-length counts plus symbols in canonical
    /// order. Fails if a symbol does not fit in a byte.
    pub fn dht_parts(&self) -> Result<([u8; 16], Vec<u8>)> {
        let mut counts = [0u8; 16];
        let mut symbols = Vec::with_capacity(self.codes.len());
        for (len, sym) in self.canonical_symbols() {
            if sym > 0xFF {
                return Err(Error::coding(format!("symbol {sym} does not fit a DHT byte")));
            }
            if counts[len as usize - 1] == u8::MAX {
                return Err(Error::coding(format!("more than 255 codes of length {len}")));
            }
            counts[len as usize - 1] += 1;
            symbols.push(sym as u8);
        }
        Ok((counts, symbols))
    }

    /// Rebuilds a spec from DHT data, validating code-space consistency.
    pub fn from_dht_parts(counts: &[u8; 16], symbols: &[u8]) -> Result<Self> {
        let total: usize = counts.iter().map(|&c| c as usize).sum();
        if total != symbols.len() {
            return Err(Error::coding(format!(
                "DHT declares {total} codes but carries {} symbols",
                symbols.len()
            )));
        }
        if total == 0 {
            return Err(Error::coding("DHT with no codes"));
        }
        let mut lengths = BTreeMap::new();
        let mut it = symbols.iter();
        for (i, &count) in counts.iter().enumerate() {
            for _ in 0..count {
                let sym = *it.next().expect("sized above") as u16;
                if lengths.insert(sym, i as u8 + 1).is_some() {
                    return Err(Error::coding(format!("symbol {sym} listed twice in DHT")));
                }
            }
        }
        canonicalize(&lengths)
    }
}

/// Decoding tables in the canonical min-code/max-code form.
#[derive(Debug, Clone)]
pub struct HuffmanDecoder {
    /// Per length 1..=16: smallest code value, largest code value + 1, and
    /// the index of the first symbol of that length.
    min_code: [u32; 17],
    max_code: [u32; 17],
    first_index: [usize; 17],
    symbols: Vec<u16>,
}

impl HuffmanDecoder {
    pub fn new(spec: &HuffmanSpec) -> Self {
        let mut min_code = [u32::MAX; 17];
        let mut max_code = [0u32; 17];
        let mut first_index = [0usize; 17];
        let mut symbols = Vec::with_capacity(spec.codes.len());
        for (len, sym) in spec.canonical_symbols() {
            let cw = spec.codes[&sym];
            let l = len as usize;
            if min_code[l] == u32::MAX {
                min_code[l] = cw.bits as u32;
                first_index[l] = symbols.len();
            }
            max_code[l] = cw.bits as u32 + 1;
            symbols.push(sym);
        }
        HuffmanDecoder { min_code, max_code, first_index, symbols }
    }

    /// Reads one codeword from the bit stream.
    pub fn decode(&self, reader: &mut BitReader) -> Result<u16> {
        let start = reader.bit_position();
        let mut code = 0u32;
        for len in 1..=MAX_CODE_LENGTH as usize {
            code = (code << 1) | reader.get_bit()? as u32;
            if self.min_code[len] != u32::MAX && code < self.max_code[len] {
                if code < self.min_code[len] {
                    break;
                }
                let idx = self.first_index[len] + (code - self.min_code[len]) as usize;
                return Ok(self.symbols[idx]);
            }
        }
        Err(Error::entropy(start, "codeword not in table"))
    }
}
