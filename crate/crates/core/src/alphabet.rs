//! Finite input alphabets. Words are stored as symbol indices.

use std::fmt;

use thiserror::Error;

/// Index of a symbol in its [`Alphabet`].
pub type Sym = u8;

/// Characters that carry meaning in the machine text format and therefore
/// cannot be alphabet symbols.
pub const RESERVED: &[char] = &['-', '$', '\'', '#'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphabetError {
    #[error("alphabet needs at least two symbols, got {0}")]
    TooSmall(usize),
    #[error("alphabet has more than 255 symbols")]
    TooLarge,
    #[error("symbol {0:?} appears twice in the alphabet")]
    Duplicate(char),
    #[error("symbol {0:?} is reserved")]
    Reserved(char),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
}

/// An ordered input alphabet Σ. Symbol order fixes the index of each symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, AlphabetError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.len() < 2 {
            return Err(AlphabetError::TooSmall(symbols.len()));
        }
        if symbols.len() > 255 {
            return Err(AlphabetError::TooLarge);
        }
        for (i, &c) in symbols.iter().enumerate() {
            if RESERVED.contains(&c) || c.is_whitespace() {
                return Err(AlphabetError::Reserved(c));
            }
            if symbols[..i].contains(&c) {
                return Err(AlphabetError::Duplicate(c));
            }
        }
        Ok(Self { symbols })
    }

    /// The alphabet `{0, 1}`.
    pub fn binary() -> Self {
        Self { symbols: vec!['0', '1'] }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn char_of(&self, s: Sym) -> char {
        self.symbols[s as usize]
    }

    pub fn index_of(&self, c: char) -> Option<Sym> {
        self.symbols.iter().position(|&x| x == c).map(|i| i as Sym)
    }

    /// `log2 |Σ|`, the per-symbol scaling used by compression ratios.
    pub fn log2_size(&self) -> f64 {
        (self.symbols.len() as f64).log2()
    }

    pub fn encode(&self, text: &str) -> Result<Vec<Sym>, AlphabetError> {
        text.chars()
            .map(|c| self.index_of(c).ok_or(AlphabetError::UnknownSymbol(c)))
            .collect()
    }

    pub fn decode(&self, word: &[Sym]) -> String {
        word.iter().map(|&s| self.char_of(s)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses a word over `{0, 1}`; `None` if any other character occurs.
pub fn binary_word(text: &str) -> Option<Vec<Sym>> {
    Alphabet::binary().encode(text).ok()
}

/// Renders a word over `{0, 1}`.
pub fn binary_string(word: &[Sym]) -> String {
    Alphabet::binary().decode(word)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_alphabets() {
        assert_eq!(Alphabet::new("0".chars()), Err(AlphabetError::TooSmall(1)));
        assert_eq!(Alphabet::new("00".chars()), Err(AlphabetError::Duplicate('0')));
        assert_eq!(Alphabet::new("0$".chars()), Err(AlphabetError::Reserved('$')));
    }

    #[test]
    fn encode_decode() {
        let abc = Alphabet::new("abc".chars()).unwrap();
        let w = abc.encode("cab").unwrap();
        assert_eq!(w, vec![2, 0, 1]);
        assert_eq!(abc.decode(&w), "cab");
        assert_eq!(abc.encode("d"), Err(AlphabetError::UnknownSymbol('d')));
        assert!((abc.log2_size() - 3f64.log2()).abs() < 1e-12);
    }
}
