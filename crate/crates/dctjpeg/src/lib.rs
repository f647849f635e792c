//! A baseline JPEG/JFIF codec built stage by stage: PNM ingestion, RGB to
//! YCbCr conversion, 8x8 DCT, quantization, zigzag ordering, run-length
//! and Huffman entropy coding, and the marker-segment container - plus the
//! inverse chain and a compression-quality metrics toolkit (CR, MSE, PSNR).
//!
//! The high-level entry points are [`encode_image`] and [`decode_image`];
//! each pipeline stage is also usable (and inspectable) on its own. See
//! the `examples/` directory for one runnable walkthrough per capability,
//! and the `dctjpeg` binary for the command-line interface.

// 8x8 matrix math reads best with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod codec;
pub mod color;
pub mod container;
pub mod dct;
pub mod entropy;
pub mod error;
pub mod metrics;
pub mod quant;
pub mod raster;

pub use codec::{
    decode_image, encode_image, inspect_block, EncodeParams, InspectData, InspectStage,
    Subsampling,
};
pub use error::{Error, Result};
pub use metrics::{compression_ratio, mse, psnr, QualityReport};
pub use raster::{read_pnm, write_pnm, RasterImage};
