//! Pushdown compressors, LZ78, and the experiments that separate them.

pub mod alphabet;
pub mod format;
pub mod harness;
pub mod lz78;
pub mod pdc;
pub mod pumping;
pub mod ratio;
pub mod sequences;
pub mod zoo;

pub use alphabet::{binary_string, binary_word, Alphabet, Sym};
pub use format::{parse_pdc, print_pdc};
pub use pdc::{Input, Mode, PdcBuilder, PdcSpec, RunError, RunResult, Runner};
pub use ratio::CompressionRatio;
