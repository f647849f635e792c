//! The full compression and decompression pipelines: block segmentation,
//! color handling, per-block transform and quantization, MCU-interleaved
//! entropy coding, and the exact reversal of all of it.

use rayon::prelude::*;

use crate::color;
use crate::container::{
    self, FrameComponent, FrameInfo, HuffmanSlot, QuantSlot, ScanBinding, StreamModel, TableClass,
};
use crate::dct::{dct2_fast, idct2_fast, SpatialBlock};
use crate::entropy::{
    amplitude_bits, amplitude_value, dc_differential_decode, dc_differential_encode, encoder_spec,
    inverse_zigzag, runlength_decode, runlength_encode, symbol_value, zigzag_scan, BitReader,
    BitWriter, CoefficientSymbol, FrequencyTable, HuffmanDecoder, HuffmanSpec,
};
use crate::error::{Error, Result};
use crate::quant::{dequantize_block, quantize_block, scaled_table, QuantTable, QuantizedBlock};
use crate::raster::RasterImage;

/// Chroma subsampling scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Subsampling {
    /// Full-resolution chroma.
    #[default]
    S444,
    /// 2x2 box-averaged chroma.
    S420,
}

/// Encoder settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodeParams {
    /// Quality 1..=100; 50 uses the base quantization tables unchanged.
    pub quality: u8,
    pub subsampling: Subsampling,
    /// Run the per-block transform stage on a thread pool. Output bytes
    /// are identical either way.
    pub parallel: bool,
}

impl Default for EncodeParams {
    fn default() -> Self {
        EncodeParams { quality: 50, subsampling: Subsampling::S444, parallel: false }
    }
}

/// An image plane cut into 8x8 tiles, padded by edge replication.
/// `width`/`height` keep the pre-padding size so merging can crop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGrid {
    pub blocks_per_row: usize,
    pub blocks_per_col: usize,
    pub blocks: Vec<[[i16; 8]; 8]>,
    pub width: usize,
    pub height: usize,
}

/// Pads to multiples of 8 by replicating the last column and row, then
/// tiles row-major.
pub fn split_into_blocks(plane: &[i16], width: usize, height: usize) -> BlockGrid {
    assert!(width > 0 && height > 0, "plane must be at least 1x1");
    assert_eq!(plane.len(), width * height);
    let blocks_per_row = width.div_ceil(8);
    let blocks_per_col = height.div_ceil(8);
    let mut blocks = Vec::with_capacity(blocks_per_row * blocks_per_col);
    for by in 0..blocks_per_col {
        for bx in 0..blocks_per_row {
            let mut block = [[0i16; 8]; 8];
            for (dy, row) in block.iter_mut().enumerate() {
                let sy = (by * 8 + dy).min(height - 1);
                for (dx, v) in row.iter_mut().enumerate() {
                    let sx = (bx * 8 + dx).min(width - 1);
                    *v = plane[sy * width + sx];
                }
            }
            blocks.push(block);
        }
    }
    BlockGrid { blocks_per_row, blocks_per_col, blocks, width, height }
}

/// Inverse of [`split_into_blocks`]: reassembles the plane and crops the
/// padding away.
pub fn merge_blocks(grid: &BlockGrid) -> Vec<i16> {
    let mut plane = vec![0i16; grid.width * grid.height];
    for by in 0..grid.blocks_per_col {
        for bx in 0..grid.blocks_per_row {
            let block = &grid.blocks[by * grid.blocks_per_row + bx];
            for dy in 0..8 {
                let y = by * 8 + dy;
                if y >= grid.height {
                    break;
                }
                for dx in 0..8 {
                    let x = bx * 8 + dx;
                    if x >= grid.width {
                        break;
                    }
                    plane[y * grid.width + x] = block[dy][dx];
                }
            }
        }
    }
    plane
}

/// 2x2 box average with half-away-from-zero rounding; odd edges replicate.
/// Returns the plane and its new dimensions.
pub fn chroma_downsample(plane: &[u8], width: usize, height: usize) -> (Vec<u8>, usize, usize) {
    let out_w = width.div_ceil(2);
    let out_h = height.div_ceil(2);
    let mut out = Vec::with_capacity(out_w * out_h);
    for y in 0..out_h {
        for x in 0..out_w {
            let mut sum = 0u32;
            for dy in 0..2 {
                let sy = (2 * y + dy).min(height - 1);
                for dx in 0..2 {
                    let sx = (2 * x + dx).min(width - 1);
                    sum += plane[sy * width + sx] as u32;
                }
            }
            out.push(((sum + 2) / 4) as u8);
        }
    }
    (out, out_w, out_h)
}

/// Pixel-replication upsample to the requested dimensions.
pub fn chroma_upsample(
    plane: &[u8],
    width: usize,
    height: usize,
    out_w: usize,
    out_h: usize,
) -> Vec<u8> {
    let mut out = Vec::with_capacity(out_w * out_h);
    for y in 0..out_h {
        let sy = (y / 2).min(height - 1);
        for x in 0..out_w {
            let sx = (x / 2).min(width - 1);
            out.push(plane[sy * width + sx]);
        }
    }
    out
}

/// Replicates the last row/column out to `(to_w, to_h)`.
fn pad_plane(plane: &[u8], width: usize, height: usize, to_w: usize, to_h: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(to_w * to_h);
    for y in 0..to_h {
        let sy = y.min(height - 1);
        for x in 0..to_w {
            let sx = x.min(width - 1);
            out.push(plane[sy * width + sx]);
        }
    }
    out
}

const MAX_DIMENSION: usize = 65535;

struct PlannedComponent {
    /// Sampling factors as they go into SOF0.
    sampling: (u8, u8),
    quant_id: u8,
    blocks_per_row: usize,
    blocks_per_col: usize,
    blocks: Vec<QuantizedBlock>,
}

fn transform_blocks(grid: &BlockGrid, table: &QuantTable, parallel: bool) -> Vec<QuantizedBlock> {
    let apply =
        |b: &[[i16; 8]; 8]| quantize_block(&dct2_fast(&SpatialBlock::from_i16(b)), table);
    if parallel {
        grid.blocks.par_iter().map(apply).collect()
    } else {
        grid.blocks.iter().map(apply).collect()
    }
}

/// Scan order: for each MCU, each component contributes its `h * v`
/// blocks row-major. Returns (component, block index) pairs.
fn scan_sequence(
    samplings: &[(u8, u8)],
    grids: &[(usize, usize)],
    mcus_x: usize,
    mcus_y: usize,
) -> Vec<(usize, usize)> {
    let mut seq = Vec::new();
    for my in 0..mcus_y {
        for mx in 0..mcus_x {
            for (ci, &(h, v)) in samplings.iter().enumerate() {
                let (bpr, _) = grids[ci];
                for dy in 0..v as usize {
                    for dx in 0..h as usize {
                        let row = my * v as usize + dy;
                        let col = mx * h as usize + dx;
                        seq.push((ci, row * bpr + col));
                    }
                }
            }
        }
    }
    seq
}

/// Component index -> (DC, AC) table id: luminance uses pair 0, chroma
/// shares pair 1.
fn table_pair(comp_idx: usize) -> u8 {
    if comp_idx == 0 {
        0
    } else {
        1
    }
}

/// Runs the forward pipeline and serializes a baseline JFIF stream.
/// Encoding is deterministic: identical input and parameters produce
/// byte-identical output.
pub fn encode_image(image: &RasterImage, params: &EncodeParams) -> Result<Vec<u8>> {
    if image.width() > MAX_DIMENSION || image.height() > MAX_DIMENSION {
        return Err(Error::param(format!(
            "image {}x{} exceeds the {MAX_DIMENSION} limit",
            image.width(),
            image.height()
        )));
    }
    let lum_table = scaled_table(&QuantTable::luminance(), params.quality)?;
    let chrom_table = scaled_table(&QuantTable::chrominance(), params.quality)?;

    let (w, h) = (image.width(), image.height());
    let color_input = image.channels() == 3;
    let subsampling = if color_input { params.subsampling } else { Subsampling::S444 };

    // Component planes in coding order: samples, width, height, sampling.
    type ComponentPlane = (Vec<u8>, usize, usize, (u8, u8));
    let mut planes: Vec<ComponentPlane> = Vec::new();
    if color_input {
        let n = w * h;
        let (rp, gp, bp) = (image.plane(0), image.plane(1), image.plane(2));
        let mut y = Vec::with_capacity(n);
        let mut cb = Vec::with_capacity(n);
        let mut cr = Vec::with_capacity(n);
        for i in 0..n {
            let (yv, cbv, crv) = color::rgb_to_ycbcr(rp[i], gp[i], bp[i]);
            y.push(yv);
            cb.push(cbv);
            cr.push(crv);
        }
        match subsampling {
            Subsampling::S444 => {
                planes.push((y, w, h, (1, 1)));
                planes.push((cb, w, h, (1, 1)));
                planes.push((cr, w, h, (1, 1)));
            }
            Subsampling::S420 => {
                // Luma is padded to the 16-pixel MCU boundary up front so
                // its block grid lines up with the subsampled chroma grid.
                let (yw, yh) = (w.div_ceil(16) * 16, h.div_ceil(16) * 16);
                let y = pad_plane(&y, w, h, yw, yh);
                let (cb, cw, ch) = chroma_downsample(&cb, w, h);
                let (cr, _, _) = chroma_downsample(&cr, w, h);
                planes.push((y, yw, yh, (2, 2)));
                planes.push((cb, cw, ch, (1, 1)));
                planes.push((cr, cw, ch, (1, 1)));
            }
        }
    } else {
        planes.push((image.plane(0).to_vec(), w, h, (1, 1)));
    }

    let components: Vec<PlannedComponent> = planes
        .iter()
        .enumerate()
        .map(|(ci, (plane, pw, ph, sampling))| {
            let shifted = color::level_shift_forward(plane);
            let grid = split_into_blocks(&shifted, *pw, *ph);
            let table = if ci == 0 { &lum_table } else { &chrom_table };
            PlannedComponent {
                sampling: *sampling,
                quant_id: table_pair(ci),
                blocks_per_row: grid.blocks_per_row,
                blocks_per_col: grid.blocks_per_col,
                blocks: transform_blocks(&grid, table, params.parallel),
            }
        })
        .collect();

    // MCU geometry comes from the luma grid.
    let (h0, v0) = components[0].sampling;
    let mcus_x = components[0].blocks_per_row / h0 as usize;
    let mcus_y = components[0].blocks_per_col / v0 as usize;
    let samplings: Vec<(u8, u8)> = components.iter().map(|c| c.sampling).collect();
    let grids: Vec<(usize, usize)> =
        components.iter().map(|c| (c.blocks_per_row, c.blocks_per_col)).collect();
    let seq = scan_sequence(&samplings, &grids, mcus_x, mcus_y);

    // DC prediction runs per component along the scan order.
    let mut dc_by_comp: Vec<Vec<i16>> = vec![Vec::new(); components.len()];
    for &(ci, bi) in &seq {
        dc_by_comp[ci].push(components[ci].blocks[bi].0[0][0]);
    }
    let diffs_by_comp: Vec<Vec<i16>> =
        dc_by_comp.iter().map(|dc| dc_differential_encode(dc)).collect();

    // Pass 1: symbolize every block and gather per-table statistics.
    let n_pairs = if color_input { 2 } else { 1 };
    let mut dc_freqs = vec![FrequencyTable::new(); n_pairs];
    let mut ac_freqs = vec![FrequencyTable::new(); n_pairs];
    let mut coded: Vec<(u8, i16, Vec<CoefficientSymbol>)> = Vec::with_capacity(seq.len());
    let mut cursors = vec![0usize; components.len()];
    for &(ci, bi) in &seq {
        let pair = table_pair(ci) as usize;
        let diff = diffs_by_comp[ci][cursors[ci]];
        cursors[ci] += 1;
        let dc_size = crate::entropy::magnitude_size(diff)?;
        let zz = zigzag_scan(&components[ci].blocks[bi]);
        let ac: [i16; 63] = zz[1..].try_into().expect("63 AC coefficients");
        let symbols = runlength_encode(&ac)?;
        dc_freqs[pair].record(dc_size as u16);
        for sym in &symbols {
            ac_freqs[pair].record(symbol_value(sym));
        }
        coded.push((dc_size, diff, symbols));
    }

    let dc_specs: Vec<HuffmanSpec> =
        dc_freqs.iter().map(encoder_spec).collect::<Result<_>>()?;
    let ac_specs: Vec<HuffmanSpec> =
        ac_freqs.iter().map(encoder_spec).collect::<Result<_>>()?;

    // Pass 2: emit the scan.
    let mut writer = BitWriter::new();
    for (&(ci, _), (dc_size, diff, symbols)) in seq.iter().zip(&coded) {
        let pair = table_pair(ci) as usize;
        put_coded(&mut writer, &dc_specs[pair], *dc_size as u16, *dc_size, *diff)?;
        for sym in symbols {
            let (size, amplitude) = match *sym {
                CoefficientSymbol::Ac { size, amplitude, .. } => (size, amplitude),
                CoefficientSymbol::Dc { .. } => unreachable!("runlength emits AC symbols"),
            };
            put_coded(&mut writer, &ac_specs[pair], symbol_value(sym), size, amplitude)?;
        }
    }
    let entropy = writer.finish();

    // Container model.
    let mut quant = vec![QuantSlot { id: 0, table: lum_table }];
    if color_input {
        quant.push(QuantSlot { id: 1, table: chrom_table });
    }
    let mut huffman = Vec::new();
    for pair in 0..n_pairs {
        huffman.push(HuffmanSlot {
            class: TableClass::Dc,
            id: pair as u8,
            spec: dc_specs[pair].clone(),
        });
        huffman.push(HuffmanSlot {
            class: TableClass::Ac,
            id: pair as u8,
            spec: ac_specs[pair].clone(),
        });
    }
    let frame = FrameInfo {
        width: w as u16,
        height: h as u16,
        components: components
            .iter()
            .enumerate()
            .map(|(ci, c)| FrameComponent {
                id: ci as u8 + 1,
                h_sampling: c.sampling.0,
                v_sampling: c.sampling.1,
                quant_id: c.quant_id,
            })
            .collect(),
    };
    let scan = (0..components.len())
        .map(|ci| ScanBinding {
            component_id: ci as u8 + 1,
            dc_id: table_pair(ci),
            ac_id: table_pair(ci),
        })
        .collect();

    container::write_stream(&StreamModel {
        frame,
        quant,
        huffman,
        scan,
        entropy,
        warnings: vec![],
    })
}

fn put_coded(
    writer: &mut BitWriter,
    spec: &HuffmanSpec,
    value: u16,
    size: u8,
    amplitude: i16,
) -> Result<()> {
    let cw = spec
        .codeword(value)
        .ok_or_else(|| Error::coding(format!("symbol {value:#x} missing from its table")))?;
    writer.put_bits(cw.bits, cw.len);
    if size > 0 {
        writer.put_bits(amplitude_bits(amplitude, size), size);
    }
    Ok(())
}

/// Decodes a baseline JFIF stream produced by [`encode_image`] (or any
/// other single-scan baseline encoder within the same sampling subset).
pub fn decode_image(bytes: &[u8]) -> Result<RasterImage> {
    let model = container::parse_stream(bytes)?;
    let frame = &model.frame;
    let (w, h) = (frame.width as usize, frame.height as usize);

    let n_comps = frame.components.len();
    if n_comps != 1 && n_comps != 3 {
        return Err(Error::unsupported(0, format!("{n_comps}-component frame")));
    }
    let samplings: Vec<(u8, u8)> =
        frame.components.iter().map(|c| (c.h_sampling, c.v_sampling)).collect();
    let supported = matches!(
        samplings.as_slice(),
        [(1, 1)] | [(1, 1), (1, 1), (1, 1)] | [(2, 2), (1, 1), (1, 1)]
    );
    if !supported {
        return Err(Error::unsupported(0, format!("sampling factors {samplings:?}")));
    }

    // Resolve table bindings.
    let mut quant_tables = Vec::with_capacity(n_comps);
    let mut decoders = Vec::with_capacity(n_comps);
    for comp in &frame.components {
        let binding = model
            .scan
            .iter()
            .find(|b| b.component_id == comp.id)
            .ok_or_else(|| Error::coding(format!("component {} missing from scan", comp.id)))?;
        let quant = model
            .quant
            .iter()
            .rev()
            .find(|s| s.id == comp.quant_id)
            .map(|s| s.table.clone())
            .ok_or_else(|| Error::coding(format!("quantization table {} undefined", comp.quant_id)))?;
        let dc = model
            .huffman
            .iter()
            .rev()
            .find(|s| s.class == TableClass::Dc && s.id == binding.dc_id)
            .map(|s| HuffmanDecoder::new(&s.spec))
            .ok_or_else(|| Error::coding(format!("DC table {} undefined", binding.dc_id)))?;
        let ac = model
            .huffman
            .iter()
            .rev()
            .find(|s| s.class == TableClass::Ac && s.id == binding.ac_id)
            .map(|s| HuffmanDecoder::new(&s.spec))
            .ok_or_else(|| Error::coding(format!("AC table {} undefined", binding.ac_id)))?;
        quant_tables.push(quant);
        decoders.push((dc, ac));
    }

    let (h0, v0) = samplings[0];
    let mcus_x = w.div_ceil(8 * h0 as usize);
    let mcus_y = h.div_ceil(8 * v0 as usize);
    let grids: Vec<(usize, usize)> = samplings
        .iter()
        .map(|&(ch, cv)| (mcus_x * ch as usize, mcus_y * cv as usize))
        .collect();
    let seq = scan_sequence(&samplings, &grids, mcus_x, mcus_y);

    // Read every block's symbols off the scan.
    let mut reader = BitReader::new(&model.entropy);
    let mut dc_diffs: Vec<Vec<i16>> = vec![Vec::new(); n_comps];
    let mut acs: Vec<Vec<[i16; 63]>> = vec![Vec::new(); n_comps];
    for &(ci, _) in &seq {
        let (dc_decoder, ac_decoder) = &decoders[ci];
        let (diff, ac) = read_block(&mut reader, dc_decoder, ac_decoder)?;
        dc_diffs[ci].push(diff);
        acs[ci].push(ac);
    }

    // Undo DC prediction and rebuild each component plane.
    let mut planes: Vec<Vec<u8>> = Vec::with_capacity(n_comps);
    let mut block_cursors = vec![0usize; n_comps];
    let dcs: Vec<Vec<i16>> = dc_diffs.iter().map(|d| dc_differential_decode(d)).collect();
    let mut grids_out: Vec<BlockGrid> = frame
        .components
        .iter()
        .enumerate()
        .map(|(ci, comp)| {
            let (bpr, bpc) = grids[ci];
            // True component extent before padding.
            let cw = (w * comp.h_sampling as usize).div_ceil(h0 as usize);
            let ch = (h * comp.v_sampling as usize).div_ceil(v0 as usize);
            BlockGrid {
                blocks_per_row: bpr,
                blocks_per_col: bpc,
                blocks: vec![[[0i16; 8]; 8]; bpr * bpc],
                width: cw,
                height: ch,
            }
        })
        .collect();

    for &(ci, bi) in &seq {
        let k = block_cursors[ci];
        block_cursors[ci] += 1;
        let mut zz = [0i16; 64];
        zz[0] = dcs[ci][k];
        zz[1..].copy_from_slice(&acs[ci][k]);
        let quantized = inverse_zigzag(&zz);
        let coeffs = dequantize_block(&quantized, &quant_tables[ci]);
        grids_out[ci].blocks[bi] = idct2_fast(&coeffs).to_i16();
    }

    for grid in &grids_out {
        let merged = merge_blocks(grid);
        planes.push(color::level_shift_inverse(&merged));
    }

    if n_comps == 1 {
        return RasterImage::gray(w, h, planes.remove(0));
    }

    // Bring chroma back to full resolution if it was subsampled.
    if samplings[0] == (2, 2) {
        for ci in 1..3 {
            let cw = grids_out[ci].width;
            let ch = grids_out[ci].height;
            planes[ci] = chroma_upsample(&planes[ci], cw, ch, w, h);
        }
    }

    let n = w * h;
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for i in 0..n {
        let (rv, gv, bv) = color::ycbcr_to_rgb(planes[0][i], planes[1][i], planes[2][i]);
        r.push(rv);
        g.push(gv);
        b.push(bv);
    }
    RasterImage::rgb(w, h, r, g, b)
}

/// Reads one block's DC difference and AC coefficients from the scan.
fn read_block(
    reader: &mut BitReader,
    dc_decoder: &HuffmanDecoder,
    ac_decoder: &HuffmanDecoder,
) -> Result<(i16, [i16; 63])> {
    let at = reader.bit_position();
    let dc_size = dc_decoder.decode(reader)?;
    if dc_size > 11 {
        return Err(Error::entropy(at, format!("DC size category {dc_size} out of range")));
    }
    let diff = amplitude_value(reader.get_bits(dc_size as u8)?, dc_size as u8);

    let mut symbols = Vec::new();
    let mut filled = 0usize; // AC slots consumed, 63 total
    while filled < 63 {
        let at = reader.bit_position();
        let value = ac_decoder.decode(reader)?;
        let run = (value >> 4) as u8;
        let size = (value & 0xF) as u8;
        if size == 0 && run != 0 && run != 15 {
            return Err(Error::entropy(at, format!("invalid zero-size run {run}")));
        }
        if size > 11 {
            return Err(Error::entropy(at, format!("AC size category {size} out of range")));
        }
        let amplitude = amplitude_value(reader.get_bits(size)?, size);
        symbols.push(CoefficientSymbol::Ac { run, size, amplitude });
        if (run, size) == (0, 0) {
            break; // end of block
        }
        filled += if size == 0 { 16 } else { run as usize + 1 };
        if filled > 63 {
            return Err(Error::entropy(at, "coefficients overflow the block"));
        }
    }
    let ac = runlength_decode(&symbols).map_err(|e| match e {
        Error::Coding { reason } => Error::entropy(at, reason),
        other => other,
    })?;
    Ok((diff, ac))
}

/// Pipeline stages that [`inspect_block`] can expose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InspectStage {
    /// Transform coefficients before quantization.
    Dct,
    /// Quantized coefficients.
    Quant,
    /// Quantized coefficients in scan order.
    Zigzag,
}

/// One intermediate 8x8 view of the pipeline.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum InspectData {
    Coefficients([[f64; 8]; 8]),
    Quantized([[i16; 8]; 8]),
    Sequence([i16; 64]),
}

/// Recomputes the named encoder intermediate for one luminance block.
/// RGB inputs are converted to YCbCr first; the block grid is the plain
/// 8-pixel tiling of the luminance plane.
pub fn inspect_block(
    image: &RasterImage,
    quality: u8,
    stage: InspectStage,
    block_row: usize,
    block_col: usize,
) -> Result<InspectData> {
    let (w, h) = (image.width(), image.height());
    let luma: Vec<u8> = if image.channels() == 1 {
        image.plane(0).to_vec()
    } else {
        let (r, g, b) = (image.plane(0), image.plane(1), image.plane(2));
        (0..w * h).map(|i| color::rgb_to_ycbcr(r[i], g[i], b[i]).0).collect()
    };
    let grid = split_into_blocks(&color::level_shift_forward(&luma), w, h);
    if block_row >= grid.blocks_per_col || block_col >= grid.blocks_per_row {
        return Err(Error::param(format!(
            "block ({block_row},{block_col}) outside the {}x{} grid",
            grid.blocks_per_col, grid.blocks_per_row
        )));
    }
    let block = &grid.blocks[block_row * grid.blocks_per_row + block_col];
    let coeffs = dct2_fast(&SpatialBlock::from_i16(block));
    if let InspectStage::Dct = stage {
        return Ok(InspectData::Coefficients(coeffs.0));
    }
    let table = scaled_table(&QuantTable::luminance(), quality)?;
    let quantized = quantize_block(&coeffs, &table);
    match stage {
        InspectStage::Dct => unreachable!(),
        InspectStage::Quant => Ok(InspectData::Quantized(quantized.0)),
        InspectStage::Zigzag => Ok(InspectData::Sequence(zigzag_scan(&quantized))),
    }
}
