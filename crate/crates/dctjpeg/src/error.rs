//! Error type shared across the codec.

/// Errors produced by any stage of the pipeline.
///
/// Parsing errors carry the byte (or bit) position at which the input
/// stopped making sense, so a corrupt file can be diagnosed without a
/// hex editor.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed PNM input.
    #[error("pnm error at byte {offset}: {reason}")]
    Pnm { offset: usize, reason: String },

    /// Structurally invalid JFIF stream (bad framing, truncated segment, ...).
    #[error("stream error at byte {offset}: {reason}")]
    Stream { offset: usize, reason: String },

    /// Valid JPEG construct that is outside the baseline subset we handle.
    #[error("unsupported feature at byte {offset}: {reason}")]
    Unsupported { offset: usize, reason: String },

    /// Corrupt entropy-coded data; position is a bit offset into the scan.
    #[error("entropy error at bit {bit}: {reason}")]
    Entropy { bit: usize, reason: String },

    /// Symbolization or code-construction failure (Kraft violation,
    /// amplitude out of category range, empty alphabet, ...).
    #[error("coding error: {reason}")]
    Coding { reason: String },

    /// Caller-supplied parameter out of range.
    #[error("invalid parameter: {reason}")]
    Param { reason: String },

    /// Operands with incompatible shapes (metrics over unlike images).
    #[error("shape mismatch: {reason}")]
    Mismatch { reason: String },
}

impl Error {
    pub(crate) fn pnm(offset: usize, reason: impl Into<String>) -> Self {
        Error::Pnm { offset, reason: reason.into() }
    }

    pub(crate) fn stream(offset: usize, reason: impl Into<String>) -> Self {
        Error::Stream { offset, reason: reason.into() }
    }

    pub(crate) fn unsupported(offset: usize, reason: impl Into<String>) -> Self {
        Error::Unsupported { offset, reason: reason.into() }
    }

    pub(crate) fn entropy(bit: usize, reason: impl Into<String>) -> Self {
        Error::Entropy { bit, reason: reason.into() }
    }

    pub(crate) fn coding(reason: impl Into<String>) -> Self {
        Error::Coding { reason: reason.into() }
    }

    pub(crate) fn param(reason: impl Into<String>) -> Self {
        Error::Param { reason: reason.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
