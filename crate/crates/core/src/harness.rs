//! Ratio experiments: per-checkpoint compression ratios for PDCs and LZ78
//! over checkpointed streams, tail estimates, and the preset separations.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::alphabet::{Alphabet, Sym};
use crate::lz78::LzMeter;
use crate::pdc::{Mode, PdcSpec, RunError, Runner};
use crate::ratio::CompressionRatio;
use crate::sequences::{build_s, pd_hard_blocks, random_word, repetitive_stream, CheckpointedStream, SeqError};
use crate::zoo::{builtin_machines, family_by_name, make_unary_squeezer, make_zone_compressor, zone_error_state, ZoneCompressorParams};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Seq(#[from] SeqError),
    #[error("{0}")]
    Params(String),
}

#[derive(Debug, Clone, Copy)]
pub enum Compressor<'a> {
    Pdc(&'a PdcSpec),
    Lz { sigma: usize },
}

impl Compressor<'_> {
    pub fn name(&self) -> String {
        match self {
            Compressor::Pdc(m) => m.name().to_string(),
            Compressor::Lz { .. } => "lz78".to_string(),
        }
    }

    fn sigma(&self) -> usize {
        match self {
            Compressor::Pdc(m) => m.alphabet().len(),
            Compressor::Lz { sigma } => *sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioRow {
    pub position: u64,
    pub output_bits: u64,
    pub ratio: f64,
    pub label: Option<String>,
}

enum Meter<'a> {
    Pdc(Runner<'a>),
    Lz(LzMeter),
}

impl Meter<'_> {
    fn push(&mut self, b: Sym) -> Result<(), RunError> {
        match self {
            Meter::Pdc(r) => r.feed(b),
            Meter::Lz(m) => {
                m.push(b);
                Ok(())
            }
        }
    }

    fn bits(&self) -> Result<u64, RunError> {
        match self {
            Meter::Pdc(r) if r.spec().mode() == Mode::Endmark => {
                let mut done = r.clone();
                done.end()?;
                Ok(done.output_len())
            }
            Meter::Pdc(r) => Ok(r.output_len()),
            Meter::Lz(m) => Ok(m.output_bits()),
        }
    }
}

/// One row per checkpoint at or before `limit`, plus a final unlabelled row
/// at `limit` (clamped to the stream length) unless a checkpoint sits there.
///
/// Plain machines and LZ78 are metered in one pass. An endmarked machine's
/// row is the output of a copy of the running configuration after reading
/// `⊣`, which equals a fresh run on the prefix.
pub fn ratio_series(c: Compressor<'_>, stream: &CheckpointedStream, limit: u64) -> Result<Vec<RatioRow>, RunError> {
    let limit = limit.min(stream.len());
    let sigma = c.sigma();
    let mut meter = match c {
        Compressor::Pdc(m) => Meter::Pdc(Runner::counting(m)?),
        Compressor::Lz { sigma } => Meter::Lz(LzMeter::new(sigma).without_phrases()),
    };
    let mut marks = stream.checkpoints().iter().filter(|cp| cp.position <= limit).peekable();
    let mut rows = Vec::new();
    let row = |pos: u64, bits: u64, label: Option<String>| RatioRow {
        position: pos,
        output_bits: bits,
        ratio: CompressionRatio::new(bits, pos, sigma).value(),
        label,
    };
    for (i, b) in stream.iter().take(limit as usize).enumerate() {
        meter.push(b)?;
        let pos = i as u64 + 1;
        if let Some(cp) = marks.next_if(|cp| cp.position == pos) {
            rows.push(row(pos, meter.bits()?, Some(cp.label.clone())));
        }
    }
    if limit > 0 && rows.last().is_none_or(|r| r.position != limit) {
        rows.push(row(limit, meter.bits()?, None));
    }
    Ok(rows)
}

pub fn rows_csv(rows: &[RatioRow]) -> String {
    let mut s = String::from("n,bits,ratio,label\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{:.6},{}", r.position, r.output_bits, r.ratio, r.label.as_deref().unwrap_or(""));
    }
    s
}

/// Finite surrogates for liminf and limsup: min and max ratio over rows at
/// positions `≥ burn_in · last position`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub liminf_estimate: f64,
    pub limsup_estimate: f64,
    pub burn_in: f64,
}

pub fn tail_estimates(rows: &[RatioRow], burn_in: f64) -> Option<TailEstimate> {
    let last = rows.last()?.position as f64;
    let tail = rows.iter().filter(|r| r.position as f64 >= burn_in * last).map(|r| r.ratio);
    let (lo, hi) = tail.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    Some(TailEstimate { liminf_estimate: lo, limsup_estimate: hi, burn_in })
}

pub const TAIL_CAVEAT: &str =
    "note: tail min/max over finite prefixes stand in for liminf/limsup; they are estimates, not limits";

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub rows: Vec<RatioRow>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub title: String,
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
    pub series: Vec<Series>,
}

impl Report {
    fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), ..Default::default() }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        for l in &self.lines {
            writeln!(f, "{l}")?;
        }
        for c in &self.checks {
            writeln!(f, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        writeln!(f, "{TAIL_CAVEAT}")?;
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// Every builtin plain machine with `k` states has `|C(w)| ≥ |w|/(2k)`
    /// for `|w| ≥ k`: exhaustive to `max_len`, plus `samples` random words
    /// of length `k..4k` per machine.
    Lemma1Floor { max_len: usize, samples: usize, seed: u64 },
    /// `|C(0ⁿ⊣)|/n` of the unary squeezer against `1/k²`.
    Lemma2Limit { ks: Vec<usize>, n: u64 },
    LzBeatsPd { family: String, stages: usize, word_len: usize, min_block: u64, seed: u64 },
    PdBeatsLz { k: usize, v: usize, v_prime: usize, n_max: usize },
}

pub const PRESET_NAMES: [&str; 4] = ["lemma1-floor", "lemma2-limit", "lz-beats-pd", "pd-beats-lz"];

impl Preset {
    pub fn lemma1_floor() -> Self {
        Preset::Lemma1Floor { max_len: 14, samples: 2000, seed: 1 }
    }

    pub fn lemma2_limit(k: usize) -> Self {
        Preset::Lemma2Limit { ks: vec![k], n: 100_000 }
    }

    pub fn lz_beats_pd() -> Self {
        Preset::LzBeatsPd { family: "identity+walker".to_string(), stages: 3, word_len: 2048, min_block: 1 << 14, seed: 7 }
    }

    pub fn pd_beats_lz() -> Self {
        Preset::PdBeatsLz { k: 4, v: 4, v_prime: 16, n_max: 16 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Lemma1Floor { .. } => PRESET_NAMES[0],
            Preset::Lemma2Limit { .. } => PRESET_NAMES[1],
            Preset::LzBeatsPd { .. } => PRESET_NAMES[2],
            Preset::PdBeatsLz { .. } => PRESET_NAMES[3],
        }
    }

    pub fn run(&self) -> Result<Report, HarnessError> {
        match self {
            Preset::Lemma1Floor { max_len, samples, seed } => lemma1_floor(*max_len, *samples, *seed),
            Preset::Lemma2Limit { ks, n } => lemma2_limit(ks, *n),
            Preset::LzBeatsPd { family, stages, word_len, min_block, seed } => {
                lz_beats_pd(family, *stages, *word_len, *min_block, *seed)
            }
            Preset::PdBeatsLz { k, v, v_prime, n_max } => pd_beats_lz(*k, *v, *v_prime, *n_max),
        }
    }
}

/// Smallest `|C(w)|/|w|` over all words of length `lo..=hi`, with a word
/// attaining it.
fn exhaustive_min_ratio(m: &PdcSpec, lo: usize, hi: usize) -> Result<Option<(f64, Vec<Sym>)>, RunError> {
    fn walk<'a>(
        r: &Runner<'a>,
        word: &mut Vec<Sym>,
        lo: usize,
        hi: usize,
        best: &mut Option<(f64, Vec<Sym>)>,
    ) -> Result<(), RunError> {
        if word.len() >= lo.max(1) {
            let ratio = r.output_len() as f64 / word.len() as f64;
            if best.as_ref().is_none_or(|(b, _)| ratio < *b) {
                *best = Some((ratio, word.clone()));
            }
        }
        if word.len() == hi {
            return Ok(());
        }
        for b in 0..r.spec().alphabet().len() as Sym {
            let mut next = r.clone();
            next.feed(b)?;
            word.push(b);
            walk(&next, word, lo, hi, best)?;
            word.pop();
        }
        Ok(())
    }
    let mut best = None;
    if lo <= hi {
        walk(&Runner::counting(m)?, &mut Vec::new(), lo, hi, &mut best)?;
    }
    Ok(best)
}

fn lemma1_floor(max_len: usize, samples: usize, seed: u64) -> Result<Report, HarnessError> {
    let mut rep = Report::new(format!("lemma1-floor: |C(w)|/|w| >= 1/(2k) for |w| >= k, exhaustive to {max_len}"));
    for m in builtin_machines().iter().filter(|m| m.mode() == Mode::Plain && m.alphabet() == &Alphabet::binary()) {
        let k = m.state_count();
        let floor = 1.0 / (2 * k) as f64;
        match exhaustive_min_ratio(m, k, max_len)? {
            Some((ratio, w)) => rep.check(
                format!("{} exhaustive", m.name()),
                ratio >= floor,
                format!("k={k} min ratio {ratio:.4} at |w|={} (floor {floor:.4})", w.len()),
            ),
            None => rep.line(format!("{}: k={k} exceeds length {max_len}, exhaustive range empty", m.name())),
        }
        let mut min = f64::INFINITY;
        for s in 0..samples as u64 {
            let len = k + (s as usize * 7919) % (3 * k + 1);
            let w = random_word(len, seed.wrapping_mul(1_000_003).wrapping_add(s));
            let mut r = Runner::counting(m)?;
            r.feed_all(&w)?;
            min = min.min(r.output_len() as f64 / len as f64);
        }
        if samples > 0 {
            rep.check(
                format!("{} sampled", m.name()),
                min >= floor,
                format!("k={k} min ratio {min:.4} over {samples} random words of length {k}..{} (floor {floor:.4})", 4 * k),
            );
        }
    }
    Ok(rep)
}

/// Zeros with a checkpoint every `n/64` symbols.
fn zero_stream(n: u64) -> CheckpointedStream {
    let mut s = CheckpointedStream::new();
    let step = (n / 64).max(1);
    while s.len() < n {
        s.push_repeat(&[0], step.min(n - s.len()));
        s.mark(format!("0^{}", s.len()));
    }
    s
}

fn lemma2_limit(ks: &[usize], n: u64) -> Result<Report, HarnessError> {
    if n == 0 || ks.iter().any(|&k| k < 2) {
        return Err(HarnessError::Params("lemma2-limit needs n > 0 and every k >= 2".to_string()));
    }
    let mut rep = Report::new(format!("lemma2-limit: |C(0^n$)|/n of the unary squeezer against 1/k^2, n = {n}"));
    let stream = zero_stream(n);
    for &k in ks {
        let m = make_unary_squeezer(k);
        let rows = ratio_series(Compressor::Pdc(&m), &stream, n)?;
        let target = 1.0 / (k * k) as f64;
        rep.line(format!("k={k}:   n       |C|     ratio"));
        let mut p = 100;
        while p <= n {
            let ratio = crate::pdc::ratio_at(&m, &vec![0; p as usize])?;
            rep.line(format!("     {p:>7} {:>7}  {:.6}", ratio.output_len, ratio.value()));
            p *= 10;
        }
        let last = rows.last().expect("nonempty stream").ratio;
        let tail = tail_estimates(&rows, 0.5).expect("rows");
        rep.line(format!(
            "k={k}: tail (burn-in 0.5) min {:.6} max {:.6}",
            tail.liminf_estimate, tail.limsup_estimate
        ));
        let rel = (last - target).abs() / target;
        rep.check(
            format!("k={k} within 2% of 1/k^2"),
            rel <= 0.02,
            format!("ratio {last:.6} vs {target:.6} (relative error {:.3}%)", rel * 100.0),
        );
        rep.series.push(Series { name: m.name().to_string(), rows });
    }
    Ok(rep)
}

fn lz_beats_pd(family: &str, stages: usize, word_len: usize, min_block: u64, seed: u64) -> Result<Report, HarnessError> {
    let fam = family_by_name(family).ok_or_else(|| HarnessError::Params(format!("unknown family `{family}`")))?;
    if fam.mode() != Mode::Plain {
        return Err(HarnessError::Params(format!("family `{family}` is not plain-mode")));
    }
    let recipe = pd_hard_blocks(&fam.members, stages, word_len, min_block, seed)?;
    let stream = repetitive_stream(&recipe)?;
    let mut rep = Report::new(format!(
        "lz-beats-pd: family {family}, {stages} stages, words of length {word_len}, seed {seed}"
    ));
    for (i, b) in recipe.blocks.iter().enumerate() {
        rep.line(format!("block {}: |t|={} |u|={} n={}", i + 1, b.t.len(), b.u.len(), b.n));
    }
    rep.line(format!("prefix length {}", stream.len()));
    let lz = ratio_series(Compressor::Lz { sigma: 2 }, &stream, stream.len())?;
    let lz_final = lz.last().map_or(f64::NAN, |r| r.ratio);
    rep.line(format!("lz78 final ratio {lz_final:.4}"));
    for m in &fam.members {
        let rows = ratio_series(Compressor::Pdc(m), &stream, stream.len())?;
        let fin = rows.last().map_or(f64::NAN, |r| r.ratio);
        rep.check(
            format!("lz78 below {}", m.name()),
            lz_final < fin,
            format!("lz78 {lz_final:.4} vs {} {fin:.4}", m.name()),
        );
        rep.series.push(Series { name: m.name().to_string(), rows });
    }
    rep.series.push(Series { name: "lz78".to_string(), rows: lz });
    Ok(rep)
}

fn is_flag_after_x(label: &str) -> bool {
    label
        .split_once(":F")
        .is_some_and(|(head, j)| !head.starts_with("early") && j.parse::<usize>().is_ok_and(|j| j >= 1))
}

fn pd_beats_lz(k: usize, v: usize, v_prime: usize, n_max: usize) -> Result<Report, HarnessError> {
    let params = ZoneCompressorParams::new(k, v, v_prime).map_err(HarnessError::Params)?;
    let zone = make_zone_compressor(params);
    let stream = build_s(k, v, n_max)?;
    let mut rep = Report::new(format!("pd-beats-lz: zone compressor {params} on S up to section {n_max}"));
    rep.line(format!("prefix length {}", stream.len()));
    let (zone_rows, lz_rows) = rayon::join(
        || ratio_series(Compressor::Pdc(&zone), &stream, stream.len()),
        || ratio_series(Compressor::Lz { sigma: 2 }, &stream, stream.len()),
    );
    let (zone_rows, lz_rows) = (zone_rows?, lz_rows?);
    let idx = zone_rows
        .iter()
        .rposition(|r| r.label.as_deref().is_some_and(is_flag_after_x))
        .ok_or_else(|| HarnessError::Params("stream has no flag-after-X checkpoint".to_string()))?;
    let (z, l) = (&zone_rows[idx], &lz_rows[idx]);
    let label = z.label.clone().unwrap_or_default();
    rep.line(format!("at {label} (n={}): zone {:.4}, lz78 {:.4}", z.position, z.ratio, l.ratio));
    rep.check("zone ratio <= 0.70", z.ratio <= 0.70, format!("{:.4} at {label}", z.ratio));
    rep.check(
        "lz78 exceeds zone by >= 0.15",
        l.ratio >= z.ratio + 0.15,
        format!("lz78 {:.4} - zone {:.4} = {:.4}", l.ratio, z.ratio, l.ratio - z.ratio),
    );
    let (pass, detail) = corruption_check(&zone, &stream, n_max)?;
    rep.check("corrupted Y zone switches to identity", pass, detail);
    rep.series.push(Series { name: zone.name().to_string(), rows: zone_rows });
    rep.series.push(Series { name: "lz78".to_string(), rows: lz_rows });
    Ok(rep)
}

/// Flips the middle symbol of zone `Y₁` in section `n`, then checks that the
/// machine sits in the error state and copies the remaining stream. (The
/// first `Y₁` symbol is a `0` that also ends the flag; flipping it would only
/// lengthen the flag.)
pub fn corruption_check(zone: &PdcSpec, stream: &CheckpointedStream, n: usize) -> Result<(bool, String), RunError> {
    let pos_of = |label: String| stream.checkpoints().iter().find(|c| c.label == label).map(|c| c.position);
    let (Some(flag_end), Some(y_end)) = (pos_of(format!("S{n}:F1")), pos_of(format!("S{n}:Y1"))) else {
        return Ok((false, format!("section S{n} has no Y1 zone")));
    };
    let start = flag_end + (y_end - flag_end) / 2;
    let mut w = stream.to_vec();
    w[start as usize] ^= 1;
    let mut r = Runner::new(zone)?;
    r.feed_all(&w[..=start as usize])?;
    let err = zone.state_id(zone_error_state());
    if Some(r.state()) != err {
        return Ok((false, format!("state {} after the flipped symbol", zone.state_name(r.state()))));
    }
    let before = r.output_len() as usize;
    let tail = &w[start as usize + 1..];
    r.feed_all(tail)?;
    let copied = &r.output()[before..] == tail;
    Ok((
        copied && Some(r.state()) == err,
        format!("flipped position {start}; error state reached, {} following symbols copied: {copied}", tail.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::sequences::{Block, RepetitionRecipe};
    use crate::zoo::{make_identity, make_walker};

    fn random_stream(len: usize, every: usize) -> CheckpointedStream {
        let w = random_word(len, 3);
        let mut s = CheckpointedStream::new();
        for chunk in w.chunks(every) {
            s.push_literal(chunk);
            s.mark(format!("c{}", s.len()));
        }
        s
    }

    #[test]
    fn identity_rows_are_one() {
        let id = make_identity(Alphabet::binary());
        let s = random_stream(500, 37);
        let rows = ratio_series(Compressor::Pdc(&id), &s, 500).unwrap();
        assert!(rows.iter().all(|r| r.ratio == 1.0));
        assert_eq!(rows.last().unwrap().position, 500);
        assert!(rows.windows(2).all(|p| p[0].position < p[1].position));
    }

    #[test]
    fn final_row_added_at_limit() {
        let id = make_identity(Alphabet::binary());
        let s = random_stream(100, 30);
        let rows = ratio_series(Compressor::Pdc(&id), &s, 75).unwrap();
        let pos: Vec<u64> = rows.iter().map(|r| r.position).collect();
        assert_eq!(pos, vec![30, 60, 75]);
        assert_eq!(rows[2].label, None);
        let rows = ratio_series(Compressor::Pdc(&id), &s, 1000).unwrap();
        assert_eq!(rows.last().unwrap().position, 100);
        assert_eq!(rows.last().unwrap().label.as_deref(), Some("c100"));
    }

    #[test]
    fn incremental_rows_match_fresh_runs() {
        let s = random_stream(400, 23);
        let w = s.to_vec();
        for m in [make_walker(), make_unary_squeezer(3)] {
            let rows = ratio_series(Compressor::Pdc(&m), &s, 400).unwrap();
            for r in &rows {
                let fresh = crate::pdc::ratio_at(&m, &w[..r.position as usize]).unwrap();
                assert_eq!(r.output_bits, fresh.output_len, "{} at {}", m.name(), r.position);
            }
        }
        let rows = ratio_series(Compressor::Lz { sigma: 2 }, &s, 400).unwrap();
        for r in &rows {
            assert_eq!(r.output_bits, crate::lz78::lz_output_length(&w[..r.position as usize], 2));
        }
    }

    #[test]
    fn lz_on_repetition_non_increasing_at_block_ends() {
        let r = RepetitionRecipe {
            blocks: vec![
                Block { t: vec![1], u: vec![0], n: 64 },
                Block { t: vec![1, 1], u: vec![0, 1], n: 512 },
                Block { t: vec![0, 1, 1], u: vec![1, 1, 0], n: 4096 },
            ],
        };
        let s = repetitive_stream(&r).unwrap();
        let rows = ratio_series(Compressor::Lz { sigma: 2 }, &s, s.len()).unwrap();
        let ends: Vec<f64> = rows.iter().filter(|r| r.label.as_deref().is_some_and(|l| l.ends_with(":end"))).map(|r| r.ratio).collect();
        assert_eq!(ends.len(), 3);
        assert!(ends.windows(2).all(|p| p[1] <= p[0]), "{ends:?}");
        assert!(*ends.last().unwrap() <= 1.0);
    }

    #[test]
    fn tail_estimates_behave() {
        let rows: Vec<RatioRow> = (1..=10)
            .map(|i| RatioRow { position: i * 10, output_bits: 0, ratio: 1.0 / i as f64, label: None })
            .collect();
        let t = tail_estimates(&rows, 0.5).unwrap();
        assert_eq!((t.liminf_estimate, t.limsup_estimate), (0.1, 0.2));
        let narrow = tail_estimates(&rows, 0.9).unwrap();
        assert!(narrow.liminf_estimate >= t.liminf_estimate && narrow.limsup_estimate <= t.limsup_estimate);
        let flat: Vec<RatioRow> = rows.iter().map(|r| RatioRow { ratio: 0.5, ..r.clone() }).collect();
        let f = tail_estimates(&flat, 0.3).unwrap();
        assert_eq!(f.liminf_estimate, f.limsup_estimate);
        assert!(tail_estimates(&[], 0.5).is_none());
    }

    #[test]
    fn csv_format() {
        let rows = vec![
            RatioRow { position: 4, output_bits: 2, ratio: 0.5, label: Some("a".into()) },
            RatioRow { position: 8, output_bits: 8, ratio: 1.0, label: None },
        ];
        assert_eq!(rows_csv(&rows), "n,bits,ratio,label\n4,2,0.500000,a\n8,8,1.000000,\n");
    }

    #[test]
    fn flag_labels() {
        assert!(is_flag_after_x("S7:F1"));
        assert!(is_flag_after_x("S16:F4"));
        assert!(!is_flag_after_x("S7:F0"));
        assert!(!is_flag_after_x("S7:X1"));
        assert!(!is_flag_after_x("early:1^4"));
    }

    #[test]
    fn squeezer_limit_preset_passes_small() {
        let rep = Preset::Lemma2Limit { ks: vec![2, 3], n: 100_000 }.run().unwrap();
        assert!(rep.passed(), "{}", rep.render());
        assert!(rep.render().ends_with("PASS\n"));
    }

    #[test]
    fn reports_are_deterministic() {
        let p = Preset::LzBeatsPd { family: "identity".into(), stages: 2, word_len: 512, min_block: 4096, seed: 5 };
        assert_eq!(p.run().unwrap().render(), p.run().unwrap().render());
    }
}
