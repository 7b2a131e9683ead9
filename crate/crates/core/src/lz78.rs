//! LZ78 parsing and a bit-exact phrase code.
//!
//! The parse is greedy: each new phrase is the longest phrase already in the
//! dictionary extended by one symbol. Phrase `j` (1-indexed, counting any
//! preloaded phrases) is coded as its back-reference in `⌈log₂ j⌉` bits
//! followed by its literal in `⌈log₂|Σ|⌉` bits. One flag bit closes the
//! stream: `0` if the last phrase is complete, `1` if the input ended inside
//! it, in which case that phrase carries only its back-reference. The decoder
//! recognises the last phrase from the number of bits left.

use thiserror::Error;

use crate::alphabet::Sym;
use crate::ratio::CompressionRatio;

/// `⌈log₂ n⌉` for `n ≥ 1`.
pub fn ceil_log2(n: u64) -> u32 {
    debug_assert!(n >= 1);
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Phrase {
    /// Index of the extended phrase; 0 is the empty phrase.
    pub back_ref: usize,
    /// `None` only for an incomplete final phrase.
    pub literal: Option<Sym>,
}

/// Phrase list of a parse. Indices continue after `seed_count` preloaded phrases.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LzParse {
    pub phrases: Vec<Phrase>,
    pub seed_count: usize,
}

impl LzParse {
    /// `P(x)`, counting an incomplete final phrase.
    pub fn phrase_count(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_complete(&self) -> bool {
        self.phrases.last().is_none_or(|p| p.literal.is_some())
    }

    /// Expands every phrase of the parse (seeded phrases are not included).
    pub fn expansions(&self, dict: &LzDictionary) -> Vec<Vec<Sym>> {
        self.phrases
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut e = dict.expand(p.back_ref);
                if let Some(b) = p.literal {
                    e.push(b);
                }
                debug_assert!(p.literal.is_some() || i + 1 == self.phrases.len());
                e
            })
            .collect()
    }
}

/// Prefix-closed phrase dictionary stored as a trie. Node 0 is the empty phrase.
#[derive(Debug, Clone)]
pub struct LzDictionary {
    sigma: usize,
    children: Vec<u32>,
    parent: Vec<(u32, Sym)>,
}

impl LzDictionary {
    pub fn new(sigma: usize) -> Self {
        assert!(sigma >= 2, "alphabet needs at least two symbols");
        Self { sigma, children: vec![0; sigma], parent: vec![(0, 0)] }
    }

    /// Dictionary preloaded with `phrases` and all of their prefixes.
    pub fn seeded<'a>(sigma: usize, phrases: impl IntoIterator<Item = &'a [Sym]>) -> Self {
        let mut d = Self::new(sigma);
        for p in phrases {
            let mut node = 0;
            for &b in p {
                node = match d.child(node, b) {
                    Some(c) => c,
                    None => d.insert(node, b),
                };
            }
        }
        d
    }

    /// Number of nonempty phrases.
    pub fn len(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn child(&self, node: usize, b: Sym) -> Option<usize> {
        match self.children[node * self.sigma + b as usize] {
            0 => None,
            c => Some(c as usize),
        }
    }

    fn insert(&mut self, node: usize, b: Sym) -> usize {
        let id = self.parent.len();
        self.children[node * self.sigma + b as usize] = id as u32;
        self.children.extend(std::iter::repeat_n(0, self.sigma));
        self.parent.push((node as u32, b));
        id
    }

    pub fn expand(&self, mut node: usize) -> Vec<Sym> {
        let mut out = Vec::new();
        while node != 0 {
            let (p, b) = self.parent[node];
            out.push(b);
            node = p as usize;
        }
        out.reverse();
        out
    }
}

/// Streaming parser: feed symbols one at a time and read the phrase count or
/// the code length of the prefix seen so far.
#[derive(Debug, Clone)]
pub struct LzMeter {
    dict: LzDictionary,
    node: usize,
    phrases: Vec<Phrase>,
    keep_phrases: bool,
    seed_count: usize,
    complete_count: u64,
    complete_bits: u64,
    literal_bits: u64,
    consumed: u64,
}

impl LzMeter {
    pub fn new(sigma: usize) -> Self {
        Self::from_dictionary(LzDictionary::new(sigma))
    }

    pub fn from_dictionary(dict: LzDictionary) -> Self {
        let literal_bits = ceil_log2(dict.sigma() as u64) as u64;
        let seed_count = dict.len();
        Self {
            dict,
            node: 0,
            phrases: Vec::new(),
            keep_phrases: true,
            seed_count,
            complete_count: 0,
            complete_bits: 0,
            literal_bits,
            consumed: 0,
        }
    }

    /// Skips recording the phrase list; counts and lengths remain exact.
    pub fn without_phrases(mut self) -> Self {
        self.keep_phrases = false;
        self
    }

    pub fn push(&mut self, b: Sym) {
        self.consumed += 1;
        if let Some(c) = self.dict.child(self.node, b) {
            self.node = c;
            return;
        }
        let index = self.seed_count as u64 + self.complete_count + 1;
        self.complete_bits += ceil_log2(index) as u64 + self.literal_bits;
        self.complete_count += 1;
        if self.keep_phrases {
            self.phrases.push(Phrase { back_ref: self.node, literal: Some(b) });
        }
        self.dict.insert(self.node, b);
        self.node = 0;
    }

    pub fn extend(&mut self, word: &[Sym]) {
        word.iter().for_each(|&b| self.push(b));
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn phrase_count(&self) -> u64 {
        self.complete_count + u64::from(self.node != 0)
    }

    /// `|LZ(x)|` in bits for the prefix consumed so far.
    pub fn output_bits(&self) -> u64 {
        if self.node != 0 {
            let index = self.seed_count as u64 + self.complete_count + 1;
            self.complete_bits + 1 + ceil_log2(index) as u64
        } else if self.complete_count > 0 {
            self.complete_bits + 1
        } else {
            0
        }
    }

    pub fn dictionary(&self) -> &LzDictionary {
        &self.dict
    }

    pub fn parse(&self) -> LzParse {
        let mut phrases = self.phrases.clone();
        if self.node != 0 {
            phrases.push(Phrase { back_ref: self.node, literal: None });
        }
        LzParse { phrases, seed_count: self.seed_count }
    }
}

pub fn lz_parse(x: &[Sym], sigma: usize) -> LzParse {
    let mut m = LzMeter::new(sigma);
    m.extend(x);
    m.parse()
}

/// Parse of `x` continuing from a preloaded dictionary.
pub fn lz_parse_seeded(x: &[Sym], dict: LzDictionary) -> LzParse {
    let mut m = LzMeter::from_dictionary(dict);
    m.extend(x);
    m.parse()
}

/// `|LZ(x)|` in bits, computed without building the bit string.
pub fn lz_output_length(x: &[Sym], sigma: usize) -> u64 {
    let mut m = LzMeter::new(sigma).without_phrases();
    m.extend(x);
    m.output_bits()
}

pub fn lz_output_length_seeded(x: &[Sym], dict: LzDictionary) -> u64 {
    let mut m = LzMeter::from_dictionary(dict).without_phrases();
    m.extend(x);
    m.output_bits()
}

/// `|LZ(prefix)| / (|prefix| · log₂|Σ|)`; `None` for the empty prefix.
pub fn lz_ratio_at(prefix: &[Sym], sigma: usize) -> Option<CompressionRatio> {
    if prefix.is_empty() {
        return None;
    }
    Some(CompressionRatio::new(lz_output_length(prefix, sigma), prefix.len() as u64, sigma))
}

fn push_bits(out: &mut Vec<bool>, value: u64, width: u32) {
    for i in (0..width).rev() {
        out.push((value >> i) & 1 == 1);
    }
}

pub fn lz_encode(x: &[Sym], sigma: usize) -> Vec<bool> {
    let parse = lz_parse(x, sigma);
    let lit = ceil_log2(sigma as u64);
    let mut bits = Vec::new();
    for (i, p) in parse.phrases.iter().enumerate() {
        push_bits(&mut bits, p.back_ref as u64, ceil_log2(i as u64 + 1));
        if let Some(b) = p.literal {
            push_bits(&mut bits, b as u64, lit);
        }
    }
    if !parse.phrases.is_empty() {
        bits.push(!parse.is_complete());
    }
    bits
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LzError {
    #[error("malformed stream: {0}")]
    Malformed(String),
}

pub fn lz_decode(bits: &[bool], sigma: usize) -> Result<Vec<Sym>, LzError> {
    let lit = ceil_log2(sigma as u64) as usize;
    let mut dict = LzDictionary::new(sigma);
    let mut out = Vec::new();
    let Some((&flag, body)) = bits.split_last() else {
        return Ok(out);
    };
    let mut pos = 0;
    let read = |pos: &mut usize, width: usize| -> u64 {
        let v = body[*pos..*pos + width].iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        *pos += width;
        v
    };
    let mut j: u64 = 1;
    loop {
        let ref_bits = ceil_log2(j) as usize;
        let left = body.len() - pos;
        let is_last = left <= ref_bits + lit;
        let complete = !(is_last && flag);
        if is_last {
            let need = ref_bits + if complete { lit } else { 0 };
            if left != need {
                return Err(LzError::Malformed(format!("final phrase {j} expects {need} bits, found {left}")));
            }
        }
        let back_ref = read(&mut pos, ref_bits) as usize;
        if back_ref > dict.len() {
            return Err(LzError::Malformed(format!("phrase {j} refers to phrase {back_ref}")));
        }
        let mut phrase = dict.expand(back_ref);
        if complete {
            let b = read(&mut pos, lit);
            if b >= sigma as u64 {
                return Err(LzError::Malformed(format!("literal {b} outside the alphabet")));
            }
            let b = b as Sym;
            if dict.child(back_ref, b).is_some() {
                return Err(LzError::Malformed(format!("phrase {j} repeats an earlier phrase")));
            }
            dict.insert(back_ref, b);
            phrase.push(b);
        } else if back_ref == 0 {
            return Err(LzError::Malformed("empty final phrase".to_string()));
        }
        out.extend_from_slice(&phrase);
        if is_last {
            return Ok(out);
        }
        j += 1;
    }
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn bits_from_str(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::binary_word;
    use crate::sequences::random_word;

    fn w(s: &str) -> Vec<Sym> {
        binary_word(s).unwrap()
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!([1, 2, 3, 4, 5, 8, 9].map(ceil_log2), [0, 1, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn parse_examples() {
        let p = lz_parse(&w("001"), 2);
        assert_eq!(
            p.phrases,
            vec![Phrase { back_ref: 0, literal: Some(0) }, Phrase { back_ref: 1, literal: Some(1) }]
        );
        let p = lz_parse(&w("0000"), 2);
        assert_eq!(p.phrase_count(), 3);
        assert!(!p.is_complete());
        assert_eq!(p.phrases[2], Phrase { back_ref: 1, literal: None });
        assert_eq!(lz_parse(&[], 2).phrase_count(), 0);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(bits_to_string(&lz_encode(&w("001"), 2)), "0110");
        assert_eq!(bits_to_string(&lz_encode(&w("0000"), 2)), "010011");
        assert!(lz_encode(&[], 2).is_empty());
        assert_eq!(lz_output_length(&w("001"), 2), 4);
        let r = lz_ratio_at(&w("001"), 2).unwrap();
        assert_eq!((r.output_len, r.input_len), (4, 3));
        assert!(lz_ratio_at(&[], 2).is_none());
    }

    #[test]
    fn decode_rejects_truncation() {
        let bits = lz_encode(&w("0100110"), 2);
        assert!(lz_decode(&bits[..bits.len() - 1], 2).is_err());
        assert_eq!(lz_decode(&lz_encode(&w("0000"), 2), 2).unwrap(), w("0000"));
    }

    #[test]
    fn exhaustive_round_trip_to_length_12() {
        for len in 0..=12 {
            for v in 0u32..(1 << len) {
                let x: Vec<Sym> = (0..len).map(|i| ((v >> i) & 1) as Sym).collect();
                let bits = lz_encode(&x, 2);
                assert_eq!(bits.len() as u64, lz_output_length(&x, 2));
                assert_eq!(lz_decode(&bits, 2).unwrap(), x);
            }
        }
    }

    #[test]
    fn ternary_round_trip() {
        for seed in 0..50 {
            let x: Vec<Sym> = random_word(200, seed).iter().zip(random_word(200, seed + 1000)).map(|(a, b)| a + b).collect();
            assert_eq!(lz_decode(&lz_encode(&x, 3), 3).unwrap(), x);
        }
    }

    #[test]
    fn parse_reconstructs_input_and_phrases_are_distinct() {
        for seed in 0..20 {
            let x = random_word(300, seed);
            let mut m = LzMeter::new(2);
            m.extend(&x);
            let parse = m.parse();
            let ex = parse.expansions(m.dictionary());
            assert_eq!(ex.concat(), x);
            let complete: Vec<_> = ex.iter().zip(&parse.phrases).filter(|(_, p)| p.literal.is_some()).map(|(e, _)| e).collect();
            let set: std::collections::HashSet<_> = complete.iter().collect();
            assert_eq!(set.len(), complete.len());
            for (i, p) in parse.phrases.iter().enumerate() {
                assert!(p.back_ref <= i);
            }
        }
    }

    #[test]
    fn seeded_parse_uses_preloaded_phrases() {
        let seeds = [w("0"), w("1"), w("00"), w("01"), w("10"), w("11")];
        let dict = LzDictionary::seeded(2, seeds.iter().map(|s| s.as_slice()));
        assert_eq!(dict.len(), 6);
        let p = lz_parse_seeded(&w("010110"), dict.clone());
        assert_eq!(p.phrase_count(), 2);
        // Phrase 7 and 8 overall: 3 bits of back-reference each, 1 literal bit.
        assert_eq!(lz_output_length_seeded(&w("010110"), dict), 4 + 4 + 1);
    }
}
