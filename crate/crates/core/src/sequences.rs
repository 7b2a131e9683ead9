//! Finite prefixes of the infinite sequences used in the experiments, as
//! lazily expanded segment lists with labelled checkpoints.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::alphabet::Sym;
use crate::lz78::LzMeter;
use crate::pdc::{Mode, PdcSpec, RunError};
use crate::pumping::{default_dmin, family_constants, find_pumpable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("block {0} has an empty repeated word")]
    EmptyUnit(usize),
    #[error("section n={n} has {pairs} reverse pairs, fewer than v={v}")]
    TooSmall { n: usize, pairs: usize, v: usize },
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("repetition count for block {block} would exceed the cap {cap}")]
    BudgetExceeded { block: usize, cap: u64 },
    #[error("no pumping decomposition found at stage {0}")]
    PumpingFailure(usize),
    #[error(transparent)]
    Run(#[from] RunError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Literal(Vec<Sym>),
    Repeat { unit: Vec<Sym>, count: u64 },
}

impl Segment {
    pub fn len(&self) -> u64 {
        match self {
            Segment::Literal(w) => w.len() as u64,
            Segment::Repeat { unit, count } => unit.len() as u64 * count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    /// Number of symbols before the checkpoint.
    pub position: u64,
    pub label: String,
}

/// A finite word described by segments, with checkpoints at strictly
/// increasing positive positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CheckpointedStream {
    segments: Vec<Segment>,
    checkpoints: Vec<Checkpoint>,
    len: u64,
}

impl CheckpointedStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push_literal(&mut self, w: &[Sym]) {
        if w.is_empty() {
            return;
        }
        if let Some(Segment::Literal(last)) = self.segments.last_mut() {
            last.extend_from_slice(w);
        } else {
            self.segments.push(Segment::Literal(w.to_vec()));
        }
        self.len += w.len() as u64;
    }

    pub fn push_repeat(&mut self, unit: &[Sym], count: u64) {
        if unit.is_empty() || count == 0 {
            return;
        }
        self.segments.push(Segment::Repeat { unit: unit.to_vec(), count });
        self.len += unit.len() as u64 * count;
    }

    /// Labels the current end of the stream. A checkpoint at position 0 or at
    /// the position of the previous checkpoint is dropped.
    pub fn mark(&mut self, label: impl Into<String>) {
        if self.len == 0 || self.checkpoints.last().is_some_and(|c| c.position == self.len) {
            return;
        }
        self.checkpoints.push(Checkpoint { position: self.len, label: label.into() });
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    pub fn iter(&self) -> impl Iterator<Item = Sym> + '_ {
        self.segments.iter().flat_map(|s| -> Box<dyn Iterator<Item = Sym> + '_> {
            match s {
                Segment::Literal(w) => Box::new(w.iter().copied()),
                Segment::Repeat { unit, count } => {
                    Box::new((0..*count).flat_map(move |_| unit.iter().copied()))
                }
            }
        })
    }

    /// The first `min(n, len)` symbols.
    pub fn prefix(&self, n: u64) -> Vec<Sym> {
        self.iter().take(n.min(self.len) as usize).collect()
    }

    pub fn to_vec(&self) -> Vec<Sym> {
        self.prefix(self.len)
    }

    /// `position,label` lines.
    pub fn checkpoints_csv(&self) -> String {
        self.checkpoints.iter().map(|c| format!("{},{}\n", c.position, c.label)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub t: Vec<Sym>,
    pub u: Vec<Sym>,
    pub n: u64,
}

impl Block {
    pub fn len(&self) -> u64 {
        self.t.len() as u64 + self.u.len() as u64 * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `t₁u₁^{n₁} t₂u₂^{n₂} …`
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepetitionRecipe {
    pub blocks: Vec<Block>,
}

impl RepetitionRecipe {
    pub fn validate(&self) -> Result<(), SeqError> {
        match self.blocks.iter().position(|b| b.u.is_empty()) {
            Some(i) => Err(SeqError::EmptyUnit(i + 1)),
            None => Ok(()),
        }
    }

    /// Length of `t₁u₁^{n₁} … t_iu_i^{n_i}`.
    pub fn prefix_len(&self, blocks: usize) -> u64 {
        self.blocks[..blocks].iter().map(Block::len).sum()
    }
}

/// Stream of a recipe. Checkpoints: `B{i}:r{m}` after `t_i u_i^m` for each
/// power of two `m < n_i`, and `B{i}:end` at each block end.
pub fn repetitive_stream(r: &RepetitionRecipe) -> Result<CheckpointedStream, SeqError> {
    r.validate()?;
    let mut s = CheckpointedStream::new();
    for (i, b) in r.blocks.iter().enumerate() {
        let i = i + 1;
        s.push_literal(&b.t);
        let mut done = 0;
        let mut m = 1;
        while m < b.n {
            s.push_repeat(&b.u, m - done);
            s.mark(format!("B{i}:r{m}"));
            done = m;
            m *= 2;
        }
        s.push_repeat(&b.u, b.n - done);
        s.mark(format!("B{i}:end"));
    }
    Ok(s)
}

/// Picks repetition counts so that the LZ78 ratio at the end of block `i` is
/// at most `4/(i+1)` and the ratio after `z_{i-1} t_i u_i^j` is at most
/// `8/(i+1)` for every `j < n_i` (`i ≥ 2`). Each `n_i` is found by doubling;
/// when an intermediate bound fails the previous block is lengthened.
pub fn choose_repetition_counts(
    pairs: &[(Vec<Sym>, Vec<Sym>)],
    depth: usize,
    sigma: usize,
    cap: u64,
) -> Result<RepetitionRecipe, SeqError> {
    if depth > pairs.len() {
        return Err(SeqError::BadParams(format!("depth {depth} exceeds the {} pairs given", pairs.len())));
    }
    if let Some(i) = pairs[..depth].iter().position(|(_, u)| u.is_empty()) {
        return Err(SeqError::EmptyUnit(i + 1));
    }
    let mut counts = vec![1u64; depth];
    // meters[i] is the LZ state after the first i blocks.
    let mut meters = vec![LzMeter::new(sigma).without_phrases()];
    let scale = (sigma as f64).log2();
    let ratio = |m: &LzMeter| m.output_bits() as f64 / (m.consumed() as f64 * scale);
    let mut i = 0;
    while i < depth {
        let block = i + 1;
        let (t, u) = &pairs[i];
        let end_bound = 4.0 / (block as f64 + 1.0);
        let mid_bound = 8.0 / (block as f64 + 1.0);
        let mut m = meters[i].clone();
        m.extend(t);
        let mut n = counts[i];
        let mut j = 0;
        let mut mid_failed = false;
        loop {
            while j < n {
                if block > 1 && ratio(&m) > mid_bound {
                    mid_failed = true;
                    break;
                }
                m.extend(u);
                j += 1;
            }
            if mid_failed || ratio(&m) <= end_bound {
                break;
            }
            if n.saturating_mul(2) > cap {
                return Err(SeqError::BudgetExceeded { block, cap });
            }
            n *= 2;
        }
        if mid_failed {
            let prev = i - 1;
            if counts[prev].saturating_mul(2) > cap {
                return Err(SeqError::BudgetExceeded { block: prev + 1, cap });
            }
            counts[prev] *= 2;
            meters.truncate(prev + 1);
            i = prev;
            continue;
        }
        counts[i] = n;
        meters.push(m);
        i += 1;
    }
    let blocks = pairs[..depth]
        .iter()
        .zip(counts)
        .map(|((t, u), n)| Block { t: t.clone(), u: u.clone(), n })
        .collect();
    Ok(RepetitionRecipe { blocks })
}

/// All binary words of length `n` without a run of `k` ones, in
/// lexicographic order.
pub fn enumerate_t(n: usize, k: usize) -> Vec<Vec<Sym>> {
    fn go(n: usize, k: usize, run: usize, cur: &mut Vec<Sym>, out: &mut Vec<Vec<Sym>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        cur.push(0);
        go(n, k, 0, cur, out);
        cur.pop();
        if run + 1 < k {
            cur.push(1);
            go(n, k, run + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Flag length `f(n)`: `f(k) = 2k`, `f(n+1) = f(n) + v + 1`.
pub fn flag_length(n: usize, k: usize, v: usize) -> usize {
    assert!(n >= k);
    2 * k + (n - k) * (v + 1)
}

fn reversed(w: &[Sym]) -> Vec<Sym> {
    w.iter().rev().copied().collect()
}

/// Layout of section `S_n`: the palindrome zone, `v` X/Y zone pairs and the
/// flag lengths `f(n) … f(n)+v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZonePlan {
    pub n: usize,
    pub k: usize,
    pub v: usize,
    pub a: Vec<Vec<Sym>>,
    pub x: Vec<Vec<Vec<Sym>>>,
    pub y: Vec<Vec<Vec<Sym>>>,
    pub flags: Vec<usize>,
}

impl ZonePlan {
    pub fn a_text(&self) -> Vec<Sym> {
        self.a.concat()
    }

    pub fn x_text(&self, i: usize) -> Vec<Sym> {
        self.x[i].concat()
    }

    pub fn y_text(&self, i: usize) -> Vec<Sym> {
        self.y[i].concat()
    }
}

/// Words of `T_n` that start and end with `0`, split into palindromes and
/// reverse pairs.
fn restricted_universe(n: usize, k: usize) -> (Vec<Vec<Sym>>, Vec<(Vec<Sym>, Vec<Sym>)>) {
    let mut a = Vec::new();
    let mut pairs = Vec::new();
    for w in enumerate_t(n, k) {
        if w.first() != Some(&0) || w.last() != Some(&0) {
            continue;
        }
        let r = reversed(&w);
        if r == w {
            a.push(w);
        } else if w < r {
            pairs.push((w, r));
        }
    }
    (a, pairs)
}

fn check_zone_params(k: usize, v: usize) -> Result<(), SeqError> {
    if k < 2 || v < 1 {
        return Err(SeqError::BadParams(format!("need k ≥ 2 and v ≥ 1, got k={k}, v={v}")));
    }
    Ok(())
}

fn plan_from_pairs(n: usize, k: usize, v: usize, a: Vec<Vec<Sym>>, pairs: &[(Vec<Sym>, Vec<Sym>)]) -> ZonePlan {
    let per_zone = pairs.len() / v;
    let mut x = Vec::with_capacity(v);
    let mut y = Vec::with_capacity(v);
    for i in 0..v {
        let end = if i + 1 == v { pairs.len() } else { (i + 1) * per_zone };
        let zone = &pairs[i * per_zone..end];
        x.push(zone.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>());
        y.push(zone.iter().rev().map(|(_, q)| q.clone()).collect::<Vec<_>>());
    }
    let f = flag_length(n, k, v);
    ZonePlan { n, k, v, a, x, y, flags: (0..=v).map(|j| f + j).collect() }
}

/// Zone layout of `S_n` over the words of `T_n` that start and end with `0`.
/// Zone `i` receives `⌊pairs/v⌋` consecutive pairs, the last zone also the
/// remainder.
pub fn zone_split(n: usize, k: usize, v: usize) -> Result<ZonePlan, SeqError> {
    check_zone_params(k, v)?;
    if n < k {
        return Err(SeqError::BadParams(format!("section index {n} is below k={k}")));
    }
    let (a, pairs) = restricted_universe(n, k);
    if pairs.len() < v {
        return Err(SeqError::TooSmall { n, pairs: pairs.len(), v });
    }
    Ok(plan_from_pairs(n, k, v, a, &pairs))
}

/// Like [`zone_split`], but fills every zone even when there are fewer than
/// `v` reverse pairs: pairs are reused cyclically, and without any pair a
/// palindrome serves as its own reversal.
fn padded_plan(n: usize, k: usize, v: usize) -> ZonePlan {
    let (a, mut pairs) = restricted_universe(n, k);
    if pairs.len() < v {
        let pool = if pairs.is_empty() {
            a.iter().map(|p| (p.clone(), p.clone())).collect::<Vec<_>>()
        } else {
            pairs.clone()
        };
        pairs = pool.iter().cycle().take(v).cloned().collect();
    }
    plan_from_pairs(n, k, v, a, &pairs)
}

/// The zone sequence up to section `S_{n_max}`: all words of each length
/// `1..k` in lexicographic order, the flags `1^k … 1^{2k-1}`, then
/// `S_k … S_{n_max}`, each `S_n = A 1^{f(n)} X₁ 1^{f(n)+1} Y₁ … X_v 1^{f(n)+v} Y_v`.
///
/// Checkpoints: `early:S{n}` and `early:1^{j}` in the prefix, then for each
/// section `S{n}:A`, `S{n}:F0`, and `S{n}:X{j}`, `S{n}:F{j}`, `S{n}:Y{j}` for
/// `j = 1..v`, where `F{j}` closes the flag after `X{j}`.
pub fn build_s(k: usize, v: usize, n_max: usize) -> Result<CheckpointedStream, SeqError> {
    check_zone_params(k, v)?;
    if n_max < k {
        return Err(SeqError::BadParams(format!("n_max={n_max} is below k={k}")));
    }
    let mut s = CheckpointedStream::new();
    for n in 1..k {
        for w in 0..1u64 << n {
            let word: Vec<Sym> = (0..n).rev().map(|i| ((w >> i) & 1) as Sym).collect();
            s.push_literal(&word);
        }
        s.mark(format!("early:S{n}"));
    }
    for j in k..2 * k {
        s.push_literal(&vec![1; j]);
        s.mark(format!("early:1^{j}"));
    }
    for n in k..=n_max {
        let plan = padded_plan(n, k, v);
        s.push_literal(&plan.a_text());
        s.mark(format!("S{n}:A"));
        s.push_literal(&vec![1; plan.flags[0]]);
        s.mark(format!("S{n}:F0"));
        for j in 0..v {
            s.push_literal(&plan.x_text(j));
            s.mark(format!("S{n}:X{}", j + 1));
            s.push_literal(&vec![1; plan.flags[j + 1]]);
            s.mark(format!("S{n}:F{}", j + 1));
            s.push_literal(&plan.y_text(j));
            s.mark(format!("S{n}:Y{}", j + 1));
        }
    }
    Ok(s)
}

/// Deterministic pseudorandom binary word (ChaCha8 seeded from `seed`), the
/// computable stand-in for an incompressible word.
pub fn random_word(len: usize, seed: u64) -> Vec<Sym> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0..2) as Sym).collect()
}

/// Least `n ≥ 1` with `(1-1/k)·n|u| > (1-2/k)·(|t| + n|u|)`.
pub fn least_dominant_count(stage: usize, t_len: usize, u_len: usize) -> u64 {
    assert!(stage >= 1 && u_len >= 1);
    let (k, t, u) = (stage as u64, t_len as u64, u_len as u64);
    // Multiply through by k: (k-1)·n·u > (k-2)·(t + n·u)  ⟺  n·u > (k-2)·t.
    if k <= 2 {
        return 1;
    }
    ((k - 2) * t / u + 1).max(1)
}

/// Draws one pseudorandom word per stage, pumps it for the whole family and
/// picks counts with, for every stage `k`:
/// 1. `n_k ≥ n′_k` (see [`least_dominant_count`]);
/// 2. block `k` longer than all previous blocks together;
/// 3. block `k` longer than `k` times `t_{k+1} u_{k+1}^{n′_{k+1}}`;
/// 4. block `k` at least `min_block` symbols long.
///
/// Only lower bounds constrain the counts, so `min_block` just moves the
/// prefix into a range where LZ78's dictionary has had time to pay off.
pub fn pd_hard_blocks(
    family: &[PdcSpec],
    stages: usize,
    word_len: usize,
    min_block: u64,
    seed: u64,
) -> Result<RepetitionRecipe, SeqError> {
    if family.iter().any(|m| m.mode() != Mode::Plain) {
        return Err(SeqError::BadParams("pd_hard_blocks needs plain-mode machines".to_string()));
    }
    let constants = family_constants(family);
    let mut parts = Vec::with_capacity(stages);
    for stage in 1..=stages {
        let w = random_word(word_len, seed.wrapping_add(stage as u64));
        let d = default_dmin(&constants, w.len());
        let dec = find_pumpable(family, &w, d)?.ok_or(SeqError::PumpingFailure(stage))?;
        parts.push((dec.t, dec.u));
    }
    let minimal: Vec<u64> = parts.iter().enumerate().map(|(i, (t, u))| least_dominant_count(i + 1, t.len(), u.len())).collect();
    let mut blocks: Vec<Block> = Vec::with_capacity(stages);
    let mut total = 0u64;
    for (i, (t, u)) in parts.iter().enumerate() {
        let stage = (i + 1) as u64;
        let (t_len, u_len) = (t.len() as u64, u.len() as u64);
        let mut need_len = (total + 1).max(min_block);
        if let Some((t2, u2)) = parts.get(i + 1) {
            let next_min = t2.len() as u64 + u2.len() as u64 * minimal[i + 1];
            need_len = need_len.max(stage * next_min + 1);
        }
        let by_len = need_len.saturating_sub(t_len).div_ceil(u_len);
        let n = minimal[i].max(by_len);
        let b = Block { t: t.clone(), u: u.clone(), n };
        total += b.len();
        blocks.push(b);
    }
    Ok(RepetitionRecipe { blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{binary_string, binary_word};
    use crate::lz78::{lz_output_length, LzDictionary};

    fn bw(s: &str) -> Vec<Sym> {
        binary_word(s).unwrap()
    }

    fn strings(ws: &[Vec<Sym>]) -> Vec<String> {
        ws.iter().map(|w| binary_string(w)).collect()
    }

    fn has_run(w: &[Sym], k: usize) -> bool {
        w.windows(k).any(|x| x.iter().all(|&b| b == 1))
    }

    #[test]
    fn repetitive_stream_examples() {
        let r = RepetitionRecipe { blocks: vec![Block { t: vec![], u: bw("01"), n: 3 }] };
        assert_eq!(binary_string(&repetitive_stream(&r).unwrap().to_vec()), "010101");
        let r = RepetitionRecipe {
            blocks: vec![Block { t: bw("1"), u: bw("0"), n: 2 }, Block { t: vec![], u: bw("11"), n: 1 }],
        };
        let s = repetitive_stream(&r).unwrap();
        assert_eq!(binary_string(&s.to_vec()), "10011");
        assert_eq!(binary_string(&s.prefix(3)), "100");
        let labels: Vec<_> = s.checkpoints().iter().map(|c| (c.position, c.label.as_str())).collect();
        assert_eq!(labels, vec![(2, "B1:r1"), (3, "B1:end"), (5, "B2:end")]);
        let bad = RepetitionRecipe { blocks: vec![Block { t: vec![], u: vec![], n: 1 }] };
        assert_eq!(repetitive_stream(&bad), Err(SeqError::EmptyUnit(1)));
    }

    #[test]
    fn choose_counts_trivial_case() {
        let r = choose_repetition_counts(&[(vec![], bw("0"))], 1, 2, 1 << 20).unwrap();
        assert_eq!(r.blocks[0].n, 1);
    }

    #[test]
    fn choose_counts_meets_bounds_on_random_pairs() {
        let pairs: Vec<_> = (0..3u64)
            .map(|s| (random_word(5 + s as usize * 3, 100 + s), random_word(3 + s as usize, 200 + s)))
            .collect();
        let r = choose_repetition_counts(&pairs, 3, 2, 1 << 24).unwrap();
        let word = repetitive_stream(&r).unwrap().to_vec();
        let mut prev = f64::INFINITY;
        for i in 1..=3 {
            let len = r.prefix_len(i) as usize;
            let ratio = lz_output_length(&word[..len], 2) as f64 / len as f64;
            assert!(ratio <= 4.0 / (i as f64 + 1.0), "block {i}: {ratio}");
            assert!(ratio <= prev);
            prev = ratio;
            let start = r.prefix_len(i - 1) as usize + r.blocks[i - 1].t.len();
            if i > 1 {
                for j in 0..r.blocks[i - 1].n as usize {
                    let end = start + j * r.blocks[i - 1].u.len();
                    let mid = lz_output_length(&word[..end], 2) as f64 / end as f64;
                    assert!(mid <= 8.0 / (i as f64 + 1.0));
                }
            }
        }
    }

    #[test]
    fn choose_counts_respects_cap() {
        let pairs = vec![(random_word(16, 1), random_word(8, 2)), (random_word(16, 3), random_word(8, 4))];
        assert!(matches!(choose_repetition_counts(&pairs, 2, 2, 4), Err(SeqError::BudgetExceeded { .. })));
    }

    #[test]
    fn enumerate_t_examples() {
        assert_eq!(strings(&enumerate_t(2, 2)), vec!["00", "01", "10"]);
        assert_eq!(enumerate_t(3, 2).len(), 5);
        assert_eq!(enumerate_t(0, 2), vec![Vec::<Sym>::new()]);
    }

    #[test]
    fn enumerate_t_matches_brute_force() {
        for k in 2..=4 {
            for n in 0..=12 {
                let brute: Vec<Vec<Sym>> = (0..1u32 << n)
                    .map(|v| (0..n).rev().map(|i| ((v >> i) & 1) as Sym).collect::<Vec<_>>())
                    .filter(|w| !has_run(w, k))
                    .collect();
                assert_eq!(enumerate_t(n, k), brute, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn t_n_lower_bound_and_extension() {
        for k in 2..=4 {
            for n in 0..=20 {
                let t = enumerate_t(n, k).len() as f64;
                assert!(t >= 2f64.powf((1.0 - 1.0 / k as f64) * n as f64), "n={n} k={k}");
            }
            for n in 1..=16 {
                let shorter: std::collections::HashSet<_> = enumerate_t(n - 1, k).into_iter().collect();
                assert!(enumerate_t(n, k).iter().all(|x| shorter.contains(&x[..n - 1])));
            }
        }
    }

    #[test]
    fn zone_split_example() {
        let p = zone_split(4, 2, 1).unwrap();
        assert_eq!(strings(&p.a), vec!["0000"]);
        assert_eq!(strings(&p.x[0]), vec!["0010"]);
        assert_eq!(strings(&p.y[0]), vec!["0100"]);
        assert_eq!(p.flags, vec![8, 9]);
        assert!(matches!(zone_split(3, 2, 1), Err(SeqError::TooSmall { .. })));
    }

    #[test]
    fn flag_lengths() {
        assert_eq!([2, 3, 4].map(|n| flag_length(n, 2, 1)), [4, 6, 8]);
    }

    #[test]
    fn zone_plans_are_consistent() {
        for (k, v) in [(2, 1), (2, 3), (3, 2), (4, 4)] {
            for n in k..=12 {
                let Ok(p) = zone_split(n, k, v) else { continue };
                for i in 0..v {
                    assert_eq!(p.y_text(i), reversed(&p.x_text(i)));
                    assert!(!has_run(&p.x_text(i), k) && !has_run(&p.y_text(i), k));
                    assert!(!p.x[i].is_empty());
                    assert_eq!(p.x[i][0][0], 0);
                    assert_eq!(p.y[i][0][0], 0);
                }
                assert!(!has_run(&p.a_text(), k));
                assert!(p.a.iter().all(|w| *w == reversed(w)));
                let total: usize = p.a.len() + 2 * p.x.iter().map(Vec::len).sum::<usize>();
                let universe = enumerate_t(n, k).into_iter().filter(|w| w[0] == 0 && w[n - 1] == 0).count();
                assert_eq!(total, universe);
            }
        }
    }

    #[test]
    fn build_s_examples() {
        let s = build_s(2, 1, 4).unwrap();
        let text = binary_string(&s.to_vec());
        assert!(text.starts_with("0111111"));
        let s4 = format!("0000{}0010{}0100", "1".repeat(8), "1".repeat(9));
        assert!(text.ends_with(&s4));
        let pos = |label: &str| s.checkpoints().iter().find(|c| c.label == label).unwrap().position as usize;
        assert_eq!(&text[pos("S3:Y1")..], s4);
        assert_eq!(pos("S4:F1"), text.len() - 4);
        let positions: Vec<_> = s.checkpoints().iter().map(|c| c.position).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn build_s_sections_parse_into_zone_words() {
        let (k, v) = (2, 1);
        let s = build_s(k, v, 8).unwrap();
        let word = s.to_vec();
        let pos = |label: &str| s.checkpoints().iter().find(|c| c.label == label).unwrap().position as usize;
        for n in 4..=8 {
            let start = pos(&format!("S{}:Y{v}", n - 1));
            let end = pos(&format!("S{n}:Y{v}"));
            let mut seeds: Vec<Vec<Sym>> = (1..n).flat_map(|j| enumerate_t(j, k)).collect();
            seeds.extend((1..flag_length(n, k, v)).map(|m| vec![1; m]));
            let dict = LzDictionary::seeded(2, seeds.iter().map(|w| w.as_slice()));
            let mut meter = LzMeter::from_dictionary(dict);
            meter.extend(&word[start..end]);
            let plan = zone_split(n, k, v).unwrap();
            let mut expected: Vec<Vec<Sym>> = plan.a.clone();
            for j in 0..v {
                expected.push(vec![1; plan.flags[j]]);
                expected.extend(plan.x[j].iter().cloned());
                expected.push(vec![1; plan.flags[j + 1]]);
                expected.extend(plan.y[j].iter().cloned());
            }
            let parse = meter.parse();
            assert!(parse.is_complete());
            assert_eq!(parse.expansions(meter.dictionary()), expected, "section {n}");
        }
    }

    #[test]
    fn build_s_pads_small_sections() {
        let s = build_s(4, 4, 6).unwrap();
        for n in 4..=6 {
            for j in 1..=4 {
                assert!(s.checkpoints().iter().any(|c| c.label == format!("S{n}:Y{j}")));
            }
        }
    }

    #[test]
    fn random_words_are_reproducible_and_distinct() {
        assert_eq!(random_word(64, 7), random_word(64, 7));
        // Only 256 words of length 8 exist, so 100 seeds collide there by the
        // birthday bound; distinctness is checked from length 32 up.
        let long: std::collections::HashSet<_> = (0..100).map(|s| random_word(32, s)).collect();
        assert_eq!(long.len(), 100);
    }

    #[test]
    fn random_words_resist_lz() {
        for seed in 0..5 {
            let w = random_word(1 << 15, seed);
            assert!(lz_output_length(&w, 2) as f64 / w.len() as f64 >= 0.8);
        }
    }

    #[test]
    fn least_dominant_count_is_least() {
        for stage in 1..8 {
            for t in 0..20 {
                for u in 1..6 {
                    let n = least_dominant_count(stage, t, u);
                    // Scaled by k: (k-1)·n|u| > (k-2)·(|t| + n|u|).
                    let holds = |n: u64| {
                        let (k, t, u, n) = (stage as i64, t as i64, u as i64, n as i64);
                        (k - 1) * n * u > (k - 2) * (t + n * u)
                    };
                    assert!(holds(n), "stage {stage} t {t} u {u}");
                    assert!(n == 1 || !holds(n - 1));
                }
            }
        }
    }
}
