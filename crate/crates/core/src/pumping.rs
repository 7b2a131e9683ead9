//! Pumping decompositions for finite families of compressors.
//!
//! Two positions `c < c′` of a word are equivalent for a machine when the
//! λ-closed configurations there share state and top symbol and the stack
//! never drops below its height at `c` in between. The run on `w[c..c′]`
//! then reads nothing below that level, so it can be replayed from `c′`
//! any number of times with the same output. A split `w = t·u·v` with
//! `t = w[..c]`, `u = w[c..c′]` is pumpable for a family when the positions
//! are equivalent for every member simultaneously.

use std::fmt;

use thiserror::Error;

use crate::alphabet::Sym;
use crate::pdc::{ColumnProfile, Diagram, Input, Mode, PdcSpec, RunError, Runner};

/// `p`: product of `|Q|·|Γ|` over the family (saturating), `k_push`: longest
/// push string, `family_size`: `|F|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyConstants {
    pub p: u128,
    pub k_push: usize,
    pub family_size: usize,
}

pub fn family_constants(family: &[PdcSpec]) -> FamilyConstants {
    let p = family
        .iter()
        .map(|m| (m.state_count() * m.stack_alphabet().len()) as u128)
        .fold(1u128, |acc, x| acc.saturating_mul(x));
    let k_push = family.iter().map(PdcSpec::max_push_len).max().unwrap_or(1).max(1);
    FamilyConstants { p, k_push, family_size: family.len() }
}

/// Largest `r` with `r^e ≤ n`.
fn integer_root(n: u64, e: u128) -> u64 {
    if n <= 1 || e == 1 {
        return n;
    }
    if e >= 64 {
        return 1;
    }
    let fits = |r: u64| r.checked_pow(e as u32).is_some_and(|x| x <= n);
    let (mut lo, mut hi) = (1u64, n);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `⌊|w|^{1/(p+1)} / (k_push·|F|)⌋`.
pub fn default_dmin(c: &FamilyConstants, word_len: usize) -> usize {
    let root = integer_root(word_len as u64, c.p.saturating_add(1));
    (root / (c.k_push * c.family_size).max(1) as u64) as usize
}

/// Death column of every column: the first later column with a strictly
/// lower stack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnStats {
    pub deaths: Vec<Option<usize>>,
}

impl ColumnStats {
    pub fn lifetime(&self, column: usize) -> Option<usize> {
        self.deaths[column].map(|d| d - column)
    }
}

pub fn column_stats(d: &Diagram) -> ColumnStats {
    let heights = d.heights();
    let mut deaths = vec![None; heights.len()];
    let mut open: Vec<usize> = Vec::new();
    for (j, &h) in heights.iter().enumerate() {
        while let Some(&i) = open.last() {
            if heights[i] > h {
                deaths[i] = Some(j);
                open.pop();
            } else {
                break;
            }
        }
        open.push(j);
    }
    ColumnStats { deaths }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `C(t·uⁿ) = x·yⁿ`.
    Plain { x: Vec<Sym>, y: Vec<Sym> },
    /// `C(t·uⁿ·v⊣) = x·yⁿ·z·y′^{n-c}·x′` for `n ≥ c`.
    Endmarked { x: Vec<Sym>, y: Vec<Sym>, z: Vec<Sym>, y_prime: Vec<Sym>, x_prime: Vec<Sym>, c: usize },
}

impl Witness {
    fn xy(&self) -> (&[Sym], &[Sym]) {
        match self {
            Witness::Plain { x, y } | Witness::Endmarked { x, y, .. } => (x, y),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpDecomposition {
    pub t: Vec<Sym>,
    pub u: Vec<Sym>,
    pub v: Vec<Sym>,
    /// One per family member, in family order.
    pub witnesses: Vec<Witness>,
}

struct Trace {
    columns: Vec<ColumnProfile>,
    output: Vec<Sym>,
    output_at: Vec<usize>,
}

fn trace(spec: &PdcSpec, w: &[Sym]) -> Result<Trace, RunError> {
    let mut r = Runner::new(spec)?;
    let mut columns = Vec::with_capacity(w.len() + 1);
    let mut output_at = Vec::with_capacity(w.len() + 1);
    let snap = |r: &Runner| ColumnProfile {
        state: r.state(),
        top: r.top(),
        height: r.height(),
        min_height: r.last_min_height(),
    };
    columns.push(snap(&r));
    output_at.push(0);
    for &b in w {
        r.feed(b)?;
        columns.push(snap(&r));
        output_at.push(r.output().len());
    }
    Ok(Trace { columns, output: r.into_result().output, output_at })
}

/// All equivalent pairs `(c, c′)` with `c′ - c ≥ max(d_min, 1)`, in
/// lexicographic order.
fn equivalent_pairs(traces: &[Trace], d_min: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
    let last = traces[0].columns.len() - 1;
    let d = d_min.max(1);
    (0..=last).flat_map(move |c| {
        let base: Vec<ColumnProfile> = traces.iter().map(|t| t.columns[c]).collect();
        let mut c2 = c;
        std::iter::from_fn(move || {
            while c2 < last {
                c2 += 1;
                let mut all_equal = true;
                for (t, b) in traces.iter().zip(&base) {
                    let col = t.columns[c2];
                    if col.min_height < b.height {
                        c2 = last;
                        return None;
                    }
                    all_equal &= col.state == b.state && col.top == b.top && col.height >= b.height;
                }
                if all_equal && c2 - c >= d {
                    return Some((c, c2));
                }
            }
            None
        })
    })
}

fn plain_split(traces: &[Trace], w: &[Sym], c: usize, c2: usize) -> PumpDecomposition {
    let witnesses = traces
        .iter()
        .map(|t| Witness::Plain {
            x: t.output[..t.output_at[c]].to_vec(),
            y: t.output[t.output_at[c]..t.output_at[c2]].to_vec(),
        })
        .collect();
    PumpDecomposition { t: w[..c].to_vec(), u: w[c..c2].to_vec(), v: w[c2..].to_vec(), witnesses }
}

/// First pumpable split of `w` for the whole family with `|u| ≥ max(d_min, 1)`,
/// with plain witnesses `x = C(t)`, `y` = output on `u` after `t`.
pub fn find_pumpable(family: &[PdcSpec], w: &[Sym], d_min: usize) -> Result<Option<PumpDecomposition>, RunError> {
    if family.is_empty() {
        return Ok(None);
    }
    let traces = family.iter().map(|m| trace(m, w)).collect::<Result<Vec<_>, _>>()?;
    let first = equivalent_pairs(&traces, d_min).next();
    Ok(first.map(|(c, c2)| plain_split(&traces, w, c, c2)))
}

/// Scans equivalent pairs in order and returns the first whose endmarker
/// witnesses fit (see [`fit_and_verify_endmarked`]). At most `max_tries`
/// pairs are examined.
pub fn find_pumpable_endmarked(
    family: &[PdcSpec],
    w: &[Sym],
    d_min: usize,
    n_max: usize,
    c_max: usize,
    max_tries: usize,
) -> Result<Option<PumpDecomposition>, RunError> {
    if family.is_empty() {
        return Ok(None);
    }
    let traces = family.iter().map(|m| trace(m, w)).collect::<Result<Vec<_>, _>>()?;
    for (c, c2) in equivalent_pairs(&traces, d_min).take(max_tries) {
        let dec = plain_split(&traces, w, c, c2);
        match fit_and_verify_endmarked(family, &dec, n_max, c_max) {
            Ok(fitted) => return Ok(Some(fitted)),
            Err(FitError::Run(e)) => return Err(e),
            Err(FitError::NoFit { .. }) => {}
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PumpVerdict {
    Pass,
    Mismatch { machine: usize, n: usize },
}

impl PumpVerdict {
    pub fn passed(&self) -> bool {
        *self == PumpVerdict::Pass
    }
}

impl fmt::Display for PumpVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PumpVerdict::Pass => write!(f, "pass"),
            PumpVerdict::Mismatch { machine, n } => write!(f, "mismatch: machine {machine} at n={n}"),
        }
    }
}

/// Checks `C(t·uⁿ) = x·yⁿ` for every machine and `n ≤ n_max` by running
/// `t` and then `u` repeatedly.
pub fn verify_pump_plain(family: &[PdcSpec], dec: &PumpDecomposition, n_max: usize) -> Result<PumpVerdict, RunError> {
    for (i, (m, wit)) in family.iter().zip(&dec.witnesses).enumerate() {
        let (x, y) = wit.xy();
        let mut r = Runner::new(m)?;
        r.feed_all(&dec.t)?;
        if r.output() != x {
            return Ok(PumpVerdict::Mismatch { machine: i, n: 0 });
        }
        for n in 1..=n_max {
            let before = r.output().len();
            r.feed_all(&dec.u)?;
            if &r.output()[before..] != y {
                return Ok(PumpVerdict::Mismatch { machine: i, n });
            }
        }
    }
    Ok(PumpVerdict::Pass)
}

/// Outputs `C(t·uⁿ·v⊣)` for `n = 0..=n_max`, split into the part produced
/// while reading `t·uⁿ` and the rest.
fn endmarked_outputs(m: &PdcSpec, dec: &PumpDecomposition, n_max: usize) -> Result<Vec<(Vec<Sym>, Vec<Sym>)>, RunError> {
    let mut r = Runner::new(m)?;
    r.feed_all(&dec.t)?;
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n > 0 {
            r.feed_all(&dec.u)?;
        }
        let mut tail = r.clone();
        tail.feed_all(&dec.v)?;
        tail.end()?;
        let plain = r.output().to_vec();
        let rest = tail.output()[plain.len()..].to_vec();
        out.push((plain, rest));
    }
    Ok(out)
}

/// Checks `C(t·uⁿ·v⊣) = x·yⁿ·z·y′^{n-c}·x′` for every machine and
/// `c ≤ n ≤ n_max`. Plain witnesses are rejected.
pub fn verify_pump_endmarked(family: &[PdcSpec], dec: &PumpDecomposition, n_max: usize) -> Result<PumpVerdict, RunError> {
    for (i, (m, wit)) in family.iter().zip(&dec.witnesses).enumerate() {
        let Witness::Endmarked { x, y, z, y_prime, x_prime, c } = wit else {
            return Ok(PumpVerdict::Mismatch { machine: i, n: 0 });
        };
        let mut r = Runner::new(m)?;
        r.feed_all(&dec.t)?;
        for n in 0..=n_max {
            if n > 0 {
                r.feed_all(&dec.u)?;
            }
            if n < *c {
                continue;
            }
            let mut tail = r.clone();
            tail.feed_all(&dec.v)?;
            tail.end()?;
            let expected = [x.clone(), y.repeat(n), z.clone(), y_prime.repeat(n - c), x_prime.clone()].concat();
            if tail.output() != expected.as_slice() {
                return Ok(PumpVerdict::Mismatch { machine: i, n });
            }
        }
    }
    Ok(PumpVerdict::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("no endmarker witness within bounds for machine {machine}")]
    NoFit { machine: usize },
    #[error(transparent)]
    Run(#[from] RunError),
}

fn common_prefix(a: &[Sym], b: &[Sym]) -> usize {
    a.iter().zip(b).take_while(|(p, q)| p == q).count()
}

fn common_suffix(a: &[Sym], b: &[Sym]) -> usize {
    a.iter().rev().zip(b.iter().rev()).take_while(|(p, q)| p == q).count()
}

/// `(c, z, y′, x′)` with `tails[c+m] = z·y′^m·x′` for all `c+m ≤ n_max`.
fn fit_tail(tails: &[Vec<Sym>], c_max: usize) -> Option<(usize, Vec<Sym>, Vec<Sym>, Vec<Sym>)> {
    let n_max = tails.len() - 1;
    for c in 0..=c_max.min(n_max.saturating_sub(1)) {
        let (r0, r1) = (&tails[c], &tails[c + 1]);
        let Some(grow) = r1.len().checked_sub(r0.len()) else { continue };
        let lcp = common_prefix(r0, r1);
        let lcs = common_suffix(r0, r1);
        let lo = r0.len().saturating_sub(lcs);
        let hi = lcp.min(r0.len());
        for p in lo..=hi {
            let (z, x_prime) = r0.split_at(p);
            let y_prime = &r1[p..p + grow];
            let fits = (c..=n_max).all(|n| {
                let r = &tails[n];
                let m = n - c;
                r.len() == r0.len() + m * grow
                    && r.starts_with(z)
                    && r.ends_with(x_prime)
                    && r[p..r.len() - x_prime.len()].chunks(grow.max(1)).all(|ch| grow == 0 || ch == y_prime)
            });
            if fits {
                return Some((c, z.to_vec(), y_prime.to_vec(), x_prime.to_vec()));
            }
        }
    }
    None
}

/// Fits endmarker witnesses for a split whose plain part pumps: outputs for
/// `n = 0..=n_max` are computed directly, `c ≤ c_max` and the tail parts are
/// recovered from consecutive outputs, and the five-part identity is then
/// checked for every `n ∈ [c, n_max]`. All machines share the largest `c`.
pub fn fit_and_verify_endmarked(
    family: &[PdcSpec],
    dec: &PumpDecomposition,
    n_max: usize,
    c_max: usize,
) -> Result<PumpDecomposition, FitError> {
    let n_max = n_max.max(c_max + 1).max(2);
    let mut fits = Vec::with_capacity(family.len());
    for (i, m) in family.iter().enumerate() {
        if m.mode() != Mode::Endmark {
            return Err(FitError::NoFit { machine: i });
        }
        let outs = endmarked_outputs(m, dec, n_max)?;
        let x = outs[0].0.clone();
        let y = outs[1].0[x.len()..].to_vec();
        let plain_ok = outs.iter().enumerate().all(|(n, (p, _))| {
            p.len() == x.len() + n * y.len() && p.starts_with(&x) && p[x.len()..].chunks(y.len().max(1)).all(|ch| y.is_empty() || ch == y.as_slice())
        });
        if !plain_ok {
            return Err(FitError::NoFit { machine: i });
        }
        let tails: Vec<Vec<Sym>> = outs.into_iter().map(|(_, r)| r).collect();
        let (c, z, y_prime, x_prime) = fit_tail(&tails, c_max).ok_or(FitError::NoFit { machine: i })?;
        fits.push((x, y, z, y_prime, x_prime, c));
    }
    let c_all = fits.iter().map(|f| f.5).max().unwrap_or(0);
    let witnesses = fits
        .into_iter()
        .map(|(x, y, z, y_prime, x_prime, c)| {
            let z = [z, y_prime.repeat(c_all - c)].concat();
            Witness::Endmarked { x, y, z, y_prime, x_prime, c: c_all }
        })
        .collect();
    let fitted = PumpDecomposition { witnesses, ..dec.clone() };
    match verify_pump_endmarked(family, &fitted, n_max)? {
        PumpVerdict::Pass => Ok(fitted),
        PumpVerdict::Mismatch { machine, .. } => Err(FitError::NoFit { machine }),
    }
}

/// Part lengths of a decomposition, enough to rebuild it from the word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpRecord {
    pub t: usize,
    pub u: usize,
    pub v: usize,
    pub witnesses: Vec<WitnessLengths>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessLengths {
    Plain { x: usize, y: usize },
    Endmarked { c: usize, x: usize, y: usize, z: usize, y_prime: usize, x_prime: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("record does not fit the word or family: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Run(#[from] RunError),
}

impl PumpDecomposition {
    pub fn record(&self) -> PumpRecord {
        let witnesses = self
            .witnesses
            .iter()
            .map(|w| match w {
                Witness::Plain { x, y } => WitnessLengths::Plain { x: x.len(), y: y.len() },
                Witness::Endmarked { x, y, z, y_prime, x_prime, c } => WitnessLengths::Endmarked {
                    c: *c,
                    x: x.len(),
                    y: y.len(),
                    z: z.len(),
                    y_prime: y_prime.len(),
                    x_prime: x_prime.len(),
                },
            })
            .collect();
        PumpRecord { t: self.t.len(), u: self.u.len(), v: self.v.len(), witnesses }
    }
}

impl fmt::Display for PumpRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pump t={} u={} v={}", self.t, self.u, self.v)?;
        for (i, w) in self.witnesses.iter().enumerate() {
            match w {
                WitnessLengths::Plain { x, y } => writeln!(f, "plain {i} x={x} y={y}")?,
                WitnessLengths::Endmarked { c, x, y, z, y_prime, x_prime } => {
                    writeln!(f, "endmark {i} c={c} x={x} y={y} z={z} y'={y_prime} x'={x_prime}")?
                }
            }
        }
        Ok(())
    }
}

fn fields(tokens: &[&str], names: &[&str], line: usize) -> Result<Vec<usize>, RecordError> {
    if tokens.len() != names.len() {
        return Err(RecordError::Syntax { line, message: format!("expected {} fields", names.len()) });
    }
    tokens
        .iter()
        .zip(names)
        .map(|(tok, name)| {
            tok.strip_prefix(name)
                .and_then(|s| s.strip_prefix('='))
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| RecordError::Syntax { line, message: format!("expected `{name}=<length>`, found `{tok}`") })
        })
        .collect()
}

pub fn parse_record(text: &str) -> Result<PumpRecord, RecordError> {
    let mut head: Option<(usize, usize, usize)> = None;
    let mut witnesses = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let Some((&kind, rest)) = tokens.split_first() else { continue };
        match kind {
            "pump" => {
                let v = fields(rest, &["t", "u", "v"], line)?;
                head = Some((v[0], v[1], v[2]));
            }
            "plain" | "endmark" => {
                let index: usize = rest
                    .first()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| RecordError::Syntax { line, message: "missing machine index".to_string() })?;
                if index != witnesses.len() {
                    return Err(RecordError::Syntax { line, message: format!("expected machine {}", witnesses.len()) });
                }
                witnesses.push(if kind == "plain" {
                    let v = fields(&rest[1..], &["x", "y"], line)?;
                    WitnessLengths::Plain { x: v[0], y: v[1] }
                } else {
                    let v = fields(&rest[1..], &["c", "x", "y", "z", "y'", "x'"], line)?;
                    WitnessLengths::Endmarked { c: v[0], x: v[1], y: v[2], z: v[3], y_prime: v[4], x_prime: v[5] }
                });
            }
            other => return Err(RecordError::Syntax { line, message: format!("unknown record line `{other}`") }),
        }
    }
    let (t, u, v) = head.ok_or(RecordError::Syntax { line: 1, message: "missing `pump` line".to_string() })?;
    Ok(PumpRecord { t, u, v, witnesses })
}

fn take(out: &[Sym], from: usize, len: usize, what: &str) -> Result<Vec<Sym>, RecordError> {
    out.get(from..from + len)
        .map(<[Sym]>::to_vec)
        .ok_or_else(|| RecordError::Mismatch(format!("output too short for {what}")))
}

/// Rebuilds a decomposition of `word` from its record by re-running the
/// family to recover the witness strings.
pub fn reconstruct(family: &[PdcSpec], word: &[Sym], rec: &PumpRecord) -> Result<PumpDecomposition, RecordError> {
    if rec.t + rec.u + rec.v != word.len() {
        return Err(RecordError::Mismatch(format!("t+u+v = {} but the word has length {}", rec.t + rec.u + rec.v, word.len())));
    }
    if rec.witnesses.len() != family.len() {
        return Err(RecordError::Mismatch(format!("{} witnesses for {} machines", rec.witnesses.len(), family.len())));
    }
    let (t, rest) = word.split_at(rec.t);
    let (u, v) = rest.split_at(rec.u);
    let mut dec = PumpDecomposition { t: t.to_vec(), u: u.to_vec(), v: v.to_vec(), witnesses: Vec::new() };
    for (m, wl) in family.iter().zip(&rec.witnesses) {
        let mut r = Runner::new(m)?;
        r.feed_all(&dec.t)?;
        let x = r.output().to_vec();
        r.feed_all(&dec.u)?;
        let y = r.output()[x.len()..].to_vec();
        let witness = match *wl {
            WitnessLengths::Plain { x: xl, y: yl } => {
                if (xl, yl) != (x.len(), y.len()) {
                    return Err(RecordError::Mismatch(format!("plain witness lengths differ for {}", m.name())));
                }
                Witness::Plain { x, y }
            }
            WitnessLengths::Endmarked { c, x: xl, y: yl, z: zl, y_prime: ypl, x_prime: xpl } => {
                if (xl, yl) != (x.len(), y.len()) {
                    return Err(RecordError::Mismatch(format!("x/y lengths differ for {}", m.name())));
                }
                let run_n = |n: usize| -> Result<Vec<Sym>, RunError> {
                    let mut r = Runner::new(m)?;
                    r.feed_all(&dec.t)?;
                    for _ in 0..n {
                        r.feed_all(&dec.u)?;
                    }
                    r.feed_all(&dec.v)?;
                    r.end()?;
                    Ok(r.into_result().output)
                };
                let base = xl + c * yl;
                let oc = run_n(c)?;
                let z = take(&oc, base, zl, "z")?;
                let x_prime = take(&oc, base + zl, xpl, "x'")?;
                if oc.len() != base + zl + xpl {
                    return Err(RecordError::Mismatch(format!("x' length differs for {}", m.name())));
                }
                let y_prime = take(&run_n(c + 1)?, base + yl + zl, ypl, "y'")?;
                Witness::Endmarked { x, y, z, y_prime, x_prime, c }
            }
        };
        dec.witnesses.push(witness);
    }
    Ok(dec)
}

/// Whether any rule of the machine reads ⊣.
pub fn uses_endmarker(m: &PdcSpec) -> bool {
    m.rules().iter().any(|r| r.input == Input::End)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{binary_word, Alphabet};
    use crate::pdc::{run_traced, PdcBuilder};
    use crate::sequences::random_word;
    use crate::zoo::{make_block_counter, make_identity, make_unary_squeezer, make_walker, plain_families};

    fn bw(s: &str) -> Vec<Sym> {
        binary_word(s).unwrap()
    }

    #[test]
    fn constants_examples() {
        // Two states, two stack symbols, a push of length 2.
        let mut b = PdcBuilder::new("m", Alphabet::binary());
        let q0 = b.state("q0");
        let q1 = b.state("q1");
        let z = b.stack_symbol('Z');
        let a = b.stack_symbol('A');
        b.rule(q0, Input::Sym(0), z, q1, &[a, z], &[0]).unwrap();
        b.rule(q1, Input::Sym(0), a, q0, &[a], &[0]).unwrap();
        let m = b.build(q0, z, Mode::Plain).unwrap();
        let c = family_constants(std::slice::from_ref(&m));
        assert_eq!((c.p, c.k_push, c.family_size), (4, 2, 1));
        assert_eq!(default_dmin(&c, 3125), 2);
        assert_eq!(default_dmin(&c, 1), 0);
        let two = family_constants(&[m.clone(), m]);
        assert_eq!((two.p, two.family_size), (16, 2));
        let id = family_constants(&[make_identity(Alphabet::binary())]);
        assert_eq!((id.p, id.k_push), (1, 1));
    }

    #[test]
    fn default_dmin_is_monotone() {
        let c = family_constants(&[make_walker()]);
        let mut prev = 0;
        for len in 0..5000 {
            let d = default_dmin(&c, len);
            assert!(d >= prev);
            prev = d;
        }
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(3125, 5), 5);
        assert_eq!(integer_root(3124, 5), 4);
        assert_eq!(integer_root(1 << 40, 100), 1);
        assert_eq!(integer_root(0, 3), 0);
    }

    #[test]
    fn column_stats_examples() {
        let id = make_identity(Alphabet::binary());
        let s = column_stats(&run_traced(&id, &bw("0110")).unwrap());
        assert!(s.deaths.iter().all(Option::is_none));
        let w = make_walker();
        let s = column_stats(&run_traced(&w, &bw("01")).unwrap());
        assert_eq!(s.deaths[1], Some(2));
        assert_eq!(s.lifetime(1), Some(1));
        let s = column_stats(&run_traced(&w, &bw("0011")).unwrap());
        assert_eq!(s.deaths[1], Some(4));
        assert_eq!(s.deaths[2], Some(3));
        assert_eq!(s.deaths[0], None);
    }

    #[test]
    fn identity_pumps_at_the_start() {
        let fam = [make_identity(Alphabet::binary())];
        let dec = find_pumpable(&fam, &bw("0101"), 2).unwrap().unwrap();
        assert_eq!((dec.t.clone(), dec.u.clone()), (vec![], bw("01")));
        assert_eq!(dec.witnesses[0], Witness::Plain { x: vec![], y: bw("01") });
        assert!(verify_pump_plain(&fam, &dec, 100).unwrap().passed());
    }

    #[test]
    fn walker_pumps_even_blocks() {
        let fam = [make_walker()];
        let w = bw(&"01".repeat(32));
        let dec = find_pumpable(&fam, &w, 4).unwrap().unwrap();
        assert!(dec.u.len() >= 4 && dec.u.len().is_multiple_of(2));
        assert!(verify_pump_plain(&fam, &dec, 50).unwrap().passed());
    }

    #[test]
    fn preset_splits_verify_on_random_words() {
        for fam in plain_families() {
            let c = family_constants(&fam.members);
            for seed in 0..10 {
                let w = random_word(600, seed);
                let d = default_dmin(&c, w.len());
                let dec = find_pumpable(&fam.members, &w, d).unwrap().expect("split exists");
                assert!(dec.u.len() >= d.max(1));
                assert_eq!([dec.t.clone(), dec.u.clone(), dec.v.clone()].concat(), w);
                assert!(verify_pump_plain(&fam.members, &dec, 50).unwrap().passed(), "{} seed {seed}", fam.name);
            }
        }
    }

    #[test]
    fn shifted_split_fails() {
        let fam = [make_block_counter(3)];
        let w = vec![0; 64];
        let dec = find_pumpable(&fam, &w, 3).unwrap().unwrap();
        assert_eq!(dec.u.len(), 3);
        assert!(verify_pump_plain(&fam, &dec, 20).unwrap().passed());
        let mut shifted = dec.clone();
        shifted.u = vec![0; 4];
        shifted.witnesses = vec![Witness::Plain { x: vec![], y: vec![0] }];
        assert_eq!(verify_pump_plain(&fam, &shifted, 20).unwrap(), PumpVerdict::Mismatch { machine: 0, n: 3 });
    }

    #[test]
    fn squeezer_fit_on_zero_blocks() {
        let fam = [make_unary_squeezer(2)];
        let dec = PumpDecomposition {
            t: vec![],
            u: vec![0; 4],
            v: vec![],
            witnesses: vec![Witness::Plain { x: vec![], y: vec![] }],
        };
        let fitted = fit_and_verify_endmarked(&fam, &dec, 40, 8).unwrap();
        let Witness::Endmarked { x, y, z, y_prime, x_prime, c } = &fitted.witnesses[0] else { panic!() };
        assert_eq!(*c, 0);
        assert_eq!(y.len() + y_prime.len(), 1);
        assert_eq!(x.len() + z.len() + x_prime.len(), 1);
        assert!(verify_pump_endmarked(&fam, &fitted, 40).unwrap().passed());
    }

    #[test]
    fn endmarked_identity_fit_has_empty_y_prime() {
        let mut b = PdcBuilder::new("identity-end", Alphabet::binary());
        let q = b.state("q");
        let e = b.state("e");
        let z = b.stack_symbol('Z');
        for s in 0..2 {
            b.rule(q, Input::Sym(s), z, q, &[z], &[s]).unwrap();
        }
        b.rule(q, Input::End, z, e, &[z], &[]).unwrap();
        let m = b.build(q, z, Mode::Endmark).unwrap();
        let fam = [m];
        let dec = find_pumpable_endmarked(&fam, &bw("0110101"), 2, 40, 8, 100).unwrap().unwrap();
        let Witness::Endmarked { y, y_prime, .. } = &fitted_witness(&dec) else { panic!() };
        assert_eq!(*y, dec.u);
        assert!(y_prime.is_empty());
    }

    fn fitted_witness(dec: &PumpDecomposition) -> Witness {
        dec.witnesses[0].clone()
    }

    #[test]
    fn endmarked_search_on_zero_word_needs_period_k_squared() {
        let fam = [make_unary_squeezer(2)];
        let dec = find_pumpable_endmarked(&fam, &[0; 200], 1, 40, 8, 10_000).unwrap().unwrap();
        assert_eq!(dec.u.len() % 4, 0);
        assert!(verify_pump_endmarked(&fam, &dec, 40).unwrap().passed());
    }

    #[test]
    fn record_round_trip() {
        let fam = vec![make_unary_squeezer(3), make_block_counter(2)];
        let w = random_word(300, 9);
        let dec = find_pumpable_endmarked(&fam, &w, 1, 40, 8, 1000).unwrap().unwrap();
        let text = dec.record().to_string();
        let rec = parse_record(&text).unwrap();
        assert_eq!(rec, dec.record());
        assert_eq!(reconstruct(&fam, &w, &rec).unwrap(), dec);

        let plain = vec![make_walker()];
        let dec = find_pumpable(&plain, &w, 3).unwrap().unwrap();
        let rec = parse_record(&dec.record().to_string()).unwrap();
        assert_eq!(reconstruct(&plain, &w, &rec).unwrap(), dec);
        assert!(parse_record("pump t=1 u=x v=2").is_err());
        assert!(reconstruct(&plain, &w[1..], &rec).is_err());
    }
}
