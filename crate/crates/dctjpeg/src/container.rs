//! JFIF container: marker-segment serialization and parsing.
//!
//! The writer emits exactly the baseline single-scan layout: SOI, APP0,
//! one DQT per quantization table, SOF0, one DHT per Huffman table, SOS,
//! the stuffed entropy payload, EOI. The parser accepts that layout plus
//! anything skippable (APPn, COM, DRI, restart markers) and reports
//! everything else as a positioned error.

use crate::entropy::{HuffmanSpec, ZIGZAG};
use crate::error::{Error, Result};
use crate::quant::{QuantTable, TableRole};

pub const MARKER_PREFIX: u8 = 0xFF;
pub const SOI: u8 = 0xD8;
pub const EOI: u8 = 0xD9;
pub const APP0: u8 = 0xE0;
pub const DQT: u8 = 0xDB;
pub const SOF0: u8 = 0xC0;
pub const DHT: u8 = 0xC4;
pub const SOS: u8 = 0xDA;
pub const DRI: u8 = 0xDD;
pub const COM: u8 = 0xFE;

/// One source component as declared in the frame header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameComponent {
    pub id: u8,
    pub h_sampling: u8,
    pub v_sampling: u8,
    pub quant_id: u8,
}

/// Frame geometry; sample precision is always 8 in baseline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameInfo {
    pub width: u16,
    pub height: u16,
    pub components: Vec<FrameComponent>,
}

/// Huffman table class: DC difference codes or AC run/size codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableClass {
    Dc,
    Ac,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanSlot {
    pub class: TableClass,
    pub id: u8,
    pub spec: HuffmanSpec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantSlot {
    pub id: u8,
    pub table: QuantTable,
}

/// Component-to-table bindings from the scan header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanBinding {
    pub component_id: u8,
    pub dc_id: u8,
    pub ac_id: u8,
}

/// Everything a stream carries: metadata, tables, and the raw (still
/// stuffed) entropy payload. Serialization is a pure function of this
/// model, so write -> parse -> write is byte-identical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamModel {
    pub frame: FrameInfo,
    pub quant: Vec<QuantSlot>,
    pub huffman: Vec<HuffmanSlot>,
    pub scan: Vec<ScanBinding>,
    pub entropy: Vec<u8>,
    /// Parse-side notes (duplicate table ids, skipped segments); never
    /// fatal, never serialized.
    pub warnings: Vec<String>,
}

fn push_segment(out: &mut Vec<u8>, marker: u8, payload: &[u8]) {
    out.push(MARKER_PREFIX);
    out.push(marker);
    let len = (payload.len() + 2) as u16;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(payload);
}

/// Serializes the model into a JFIF byte stream.
pub fn write_stream(model: &StreamModel) -> Result<Vec<u8>> {
    let frame = &model.frame;
    if frame.width == 0 || frame.height == 0 {
        return Err(Error::param("frame dimensions must be nonzero".to_string()));
    }
    if frame.components.is_empty() || frame.components.len() > 4 {
        return Err(Error::param(format!("{} components", frame.components.len())));
    }
    for slot in &model.quant {
        if slot.id > 3 {
            return Err(Error::param(format!("quantization table id {} > 3", slot.id)));
        }
    }
    for slot in &model.huffman {
        if slot.id > 3 {
            return Err(Error::param(format!("huffman table id {} > 3", slot.id)));
        }
    }

    let mut out = Vec::new();
    out.push(MARKER_PREFIX);
    out.push(SOI);

    // APP0: JFIF 1.01, dimensionless 1:1 density, no thumbnail.
    let mut app0 = Vec::with_capacity(14);
    app0.extend_from_slice(b"JFIF\0");
    app0.extend_from_slice(&[0x01, 0x01, 0x00]);
    app0.extend_from_slice(&1u16.to_be_bytes());
    app0.extend_from_slice(&1u16.to_be_bytes());
    app0.extend_from_slice(&[0, 0]);
    push_segment(&mut out, APP0, &app0);

    for slot in &model.quant {
        let mut payload = Vec::with_capacity(65);
        payload.push(slot.id); // high nibble 0: 8-bit precision
        for &nat in ZIGZAG.iter() {
            payload.push(slot.table.divisors[nat / 8][nat % 8]);
        }
        push_segment(&mut out, DQT, &payload);
    }

    let mut sof = Vec::with_capacity(6 + 3 * frame.components.len());
    sof.push(8); // sample precision
    sof.extend_from_slice(&frame.height.to_be_bytes());
    sof.extend_from_slice(&frame.width.to_be_bytes());
    sof.push(frame.components.len() as u8);
    for c in &frame.components {
        sof.push(c.id);
        sof.push((c.h_sampling << 4) | c.v_sampling);
        sof.push(c.quant_id);
    }
    push_segment(&mut out, SOF0, &sof);

    for slot in &model.huffman {
        let (counts, symbols) = slot.spec.dht_parts()?;
        let class = match slot.class {
            TableClass::Dc => 0u8,
            TableClass::Ac => 1u8,
        };
        let mut payload = Vec::with_capacity(17 + symbols.len());
        payload.push((class << 4) | slot.id);
        payload.extend_from_slice(&counts);
        payload.extend_from_slice(&symbols);
        push_segment(&mut out, DHT, &payload);
    }

    let mut sos = Vec::with_capacity(4 + 2 * model.scan.len());
    sos.push(model.scan.len() as u8);
    for b in &model.scan {
        sos.push(b.component_id);
        sos.push((b.dc_id << 4) | b.ac_id);
    }
    sos.extend_from_slice(&[0, 63, 0]); // full spectral band, no approximation
    push_segment(&mut out, SOS, &sos);

    out.extend_from_slice(&model.entropy);
    out.push(MARKER_PREFIX);
    out.push(EOI);
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn u8(&mut self, what: &str) -> Result<u8> {
        let b = self
            .bytes
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::stream(self.pos, format!("truncated {what}")))?;
        self.pos += 1;
        Ok(b)
    }

    fn u16(&mut self, what: &str) -> Result<u16> {
        let hi = self.u8(what)?;
        let lo = self.u8(what)?;
        Ok(u16::from_be_bytes([hi, lo]))
    }

    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        if self.pos + n > self.bytes.len() {
            return Err(Error::stream(self.bytes.len(), format!("truncated {what}")));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }
}

/// Parses a baseline JFIF stream back into its model.
pub fn parse_stream(bytes: &[u8]) -> Result<StreamModel> {
    let mut cur = Cursor { bytes, pos: 0 };
    if bytes.len() < 2 || bytes[0] != MARKER_PREFIX || bytes[1] != SOI {
        return Err(Error::stream(0, "not a JPEG stream (missing SOI)"));
    }
    cur.pos = 2;

    let mut frame: Option<FrameInfo> = None;
    let mut quant: Vec<QuantSlot> = Vec::new();
    let mut huffman: Vec<HuffmanSlot> = Vec::new();
    let mut warnings: Vec<String> = Vec::new();

    loop {
        let marker_at = cur.pos;
        let prefix = cur.u8("marker")?;
        if prefix != MARKER_PREFIX {
            return Err(Error::stream(marker_at, format!("expected marker, found {prefix:#04x}")));
        }
        let mut marker = cur.u8("marker")?;
        // Fill bytes before a marker are legal.
        while marker == MARKER_PREFIX {
            marker = cur.u8("marker")?;
        }

        match marker {
            SOS => {
                let scan = parse_sos(&mut cur)?;
                let (entropy, warn) = read_entropy(&mut cur)?;
                warnings.extend(warn);
                let frame = frame
                    .ok_or_else(|| Error::stream(marker_at, "scan before frame header"))?;
                return Ok(StreamModel { frame, quant, huffman, scan, entropy, warnings });
            }
            EOI => {
                return Err(Error::stream(marker_at, "end of image before any scan"));
            }
            SOF0 => {
                if frame.is_some() {
                    return Err(Error::stream(marker_at, "second frame header"));
                }
                frame = Some(parse_sof0(&mut cur)?);
            }
            m if (0xC1..=0xCF).contains(&m) && m != DHT && m != 0xC8 => {
                // SOF1..SOF15 (minus DHT/JPG): a real frame type we do not do.
                return Err(Error::unsupported(
                    marker_at,
                    format!("non-baseline frame marker 0xFF{m:02X}"),
                ));
            }
            DQT => parse_dqt(&mut cur, &mut quant, &mut warnings)?,
            DHT => parse_dht(&mut cur, &mut huffman, &mut warnings)?,
            m if (0xE0..=0xEF).contains(&m) || m == COM || m == DRI || m == 0xDC => {
                // APPn, comments, restart interval, DNL: skip by length.
                let at = cur.pos;
                let len = cur.u16("segment length")? as usize;
                if len < 2 {
                    return Err(Error::stream(at, format!("segment length {len} < 2")));
                }
                cur.take(len - 2, "skipped segment")?;
                if m == DRI {
                    warnings.push("restart interval ignored".to_string());
                }
            }
            other => {
                return Err(Error::stream(marker_at, format!("unexpected marker 0xFF{other:02X}")));
            }
        }
    }
}

fn parse_sof0(cur: &mut Cursor) -> Result<FrameInfo> {
    let at = cur.pos;
    let len = cur.u16("SOF0 length")? as usize;
    let precision = cur.u8("SOF0 precision")?;
    if precision != 8 {
        return Err(Error::unsupported(at, format!("{precision}-bit samples (baseline is 8)")));
    }
    let height = cur.u16("SOF0 height")?;
    let width = cur.u16("SOF0 width")?;
    if width == 0 || height == 0 {
        return Err(Error::stream(at, format!("frame dimensions {width}x{height}")));
    }
    let n = cur.u8("SOF0 component count")? as usize;
    if len != 8 + 3 * n {
        return Err(Error::stream(at, format!("SOF0 length {len} for {n} components")));
    }
    let mut components = Vec::with_capacity(n);
    for _ in 0..n {
        let id = cur.u8("component id")?;
        let sampling = cur.u8("sampling factors")?;
        let quant_id = cur.u8("component table id")?;
        let (h, v) = (sampling >> 4, sampling & 0xF);
        if h == 0 || v == 0 {
            return Err(Error::stream(cur.pos, format!("zero sampling factor on component {id}")));
        }
        components.push(FrameComponent { id, h_sampling: h, v_sampling: v, quant_id });
    }
    if components.is_empty() {
        return Err(Error::stream(at, "frame with no components"));
    }
    Ok(FrameInfo { width, height, components })
}

fn parse_dqt(cur: &mut Cursor, quant: &mut Vec<QuantSlot>, warnings: &mut Vec<String>) -> Result<()> {
    let at = cur.pos;
    let len = cur.u16("DQT length")? as usize;
    if len < 2 {
        return Err(Error::stream(at, "DQT length < 2"));
    }
    let mut remaining = len - 2;
    // A segment may carry several tables back to back.
    while remaining > 0 {
        let pq_tq = cur.u8("DQT table header")?;
        let (precision, id) = (pq_tq >> 4, pq_tq & 0xF);
        if precision != 0 {
            return Err(Error::unsupported(cur.pos - 1, "16-bit quantization table"));
        }
        if id > 3 {
            return Err(Error::stream(cur.pos - 1, format!("quantization table id {id}")));
        }
        let zz = cur.take(64, "DQT divisors")?;
        let mut divisors = [[0u8; 8]; 8];
        for (k, &nat) in ZIGZAG.iter().enumerate() {
            if zz[k] == 0 {
                return Err(Error::stream(cur.pos - 64 + k, "zero quantization divisor"));
            }
            divisors[nat / 8][nat % 8] = zz[k];
        }
        let role = if id == 0 { TableRole::Luminance } else { TableRole::Chrominance };
        if quant.iter().any(|s| s.id == id) {
            warnings.push(format!("quantization table {id} redefined"));
            quant.retain(|s| s.id != id);
        }
        quant.push(QuantSlot { id, table: QuantTable::from_divisors(divisors, role)? });
        remaining = remaining
            .checked_sub(65)
            .ok_or_else(|| Error::stream(at, "DQT length disagrees with its tables"))?;
    }
    Ok(())
}

fn parse_dht(
    cur: &mut Cursor,
    huffman: &mut Vec<HuffmanSlot>,
    warnings: &mut Vec<String>,
) -> Result<()> {
    let at = cur.pos;
    let len = cur.u16("DHT length")? as usize;
    if len < 2 {
        return Err(Error::stream(at, "DHT length < 2"));
    }
    let mut remaining = len - 2;
    while remaining > 0 {
        let tc_th = cur.u8("DHT table header")?;
        let (class_bits, id) = (tc_th >> 4, tc_th & 0xF);
        let class = match class_bits {
            0 => TableClass::Dc,
            1 => TableClass::Ac,
            other => {
                return Err(Error::stream(cur.pos - 1, format!("huffman table class {other}")));
            }
        };
        if id > 3 {
            return Err(Error::stream(cur.pos - 1, format!("huffman table id {id}")));
        }
        let counts_slice = cur.take(16, "DHT length counts")?;
        let mut counts = [0u8; 16];
        counts.copy_from_slice(counts_slice);
        let total: usize = counts.iter().map(|&c| c as usize).sum();
        let symbols = cur.take(total, "DHT symbols")?;
        let spec = HuffmanSpec::from_dht_parts(&counts, symbols)
            .map_err(|e| Error::stream(at, format!("bad DHT: {e}")))?;
        if huffman.iter().any(|s| s.class == class && s.id == id) {
            warnings.push(format!("huffman table ({class:?}, {id}) redefined"));
            huffman.retain(|s| !(s.class == class && s.id == id));
        }
        huffman.push(HuffmanSlot { class, id, spec });
        remaining = remaining
            .checked_sub(17 + total)
            .ok_or_else(|| Error::stream(at, "DHT length disagrees with its tables"))?;
    }
    Ok(())
}

fn parse_sos(cur: &mut Cursor) -> Result<Vec<ScanBinding>> {
    let at = cur.pos;
    let len = cur.u16("SOS length")? as usize;
    let n = cur.u8("SOS component count")? as usize;
    if len != 6 + 2 * n {
        return Err(Error::stream(at, format!("SOS length {len} for {n} components")));
    }
    if n == 0 || n > 4 {
        return Err(Error::stream(at, format!("scan with {n} components")));
    }
    let mut scan = Vec::with_capacity(n);
    for _ in 0..n {
        let component_id = cur.u8("scan component id")?;
        let tables = cur.u8("scan table ids")?;
        scan.push(ScanBinding { component_id, dc_id: tables >> 4, ac_id: tables & 0xF });
    }
    let ss = cur.u8("spectral start")?;
    let se = cur.u8("spectral end")?;
    let a = cur.u8("approximation")?;
    if (ss, se, a) != (0, 63, 0) {
        return Err(Error::unsupported(at, "partial spectral selection or approximation"));
    }
    Ok(scan)
}

/// Collects entropy-coded bytes until the next real marker, verifying the
/// stream ends with EOI. Restart markers are dropped from the payload.
fn read_entropy(cur: &mut Cursor) -> Result<(Vec<u8>, Vec<String>)> {
    let mut warnings = Vec::new();
    let mut data = Vec::new();
    loop {
        let at = cur.pos;
        let b = cur.u8("entropy data")?;
        if b != MARKER_PREFIX {
            data.push(b);
            continue;
        }
        let next = cur.u8("entropy data")?;
        match next {
            0x00 => {
                data.push(0xFF);
                data.push(0x00);
            }
            0xD0..=0xD7 => {
                warnings.push(format!("restart marker 0xFF{next:02X} skipped"));
            }
            EOI => return Ok((data, warnings)),
            other => {
                return Err(Error::stream(
                    at,
                    format!("unexpected marker 0xFF{other:02X} inside the scan"),
                ));
            }
        }
    }
}
