use std::fmt;

/// `output / (input · log₂|Σ|)`, kept as its exact parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressionRatio {
    pub output_len: u64,
    pub input_len: u64,
    pub alphabet_size: usize,
}

impl CompressionRatio {
    pub fn new(output_len: u64, input_len: u64, alphabet_size: usize) -> Self {
        Self { output_len, input_len, alphabet_size }
    }

    pub fn value(&self) -> f64 {
        let scale = (self.alphabet_size as f64).log2();
        self.output_len as f64 / (self.input_len as f64 * scale)
    }
}

impl fmt::Display for CompressionRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet_size == 2 {
            write!(f, "{}/{} = {:.6}", self.output_len, self.input_len, self.value())
        } else {
            write!(f, "{}/({}·log2 {}) = {:.6}", self.output_len, self.input_len, self.alphabet_size, self.value())
        }
    }
}
