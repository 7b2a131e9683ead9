//! Concrete compressors: a copying baseline, the unary squeezer, a
//! finite-state block counter, a stack walker and the zone compressor that
//! beats LZ78 on the zone sequence.

use std::fmt;

use crate::alphabet::{Alphabet, Sym};
use crate::lz78::ceil_log2;
use crate::pdc::{Input, Mode, PdcBuilder, PdcSpec, StackSym, StateId};

fn zeros(n: usize) -> Vec<Sym> {
    vec![0; n]
}

fn ones(n: usize) -> Vec<Sym> {
    vec![1; n]
}

fn cat(parts: &[&[Sym]]) -> Vec<Sym> {
    parts.concat()
}

// Rules built here are well-formed by construction.
fn rule(b: &mut PdcBuilder, q: StateId, input: Input, top: StackSym, next: StateId, push: &[StackSym], out: &[Sym]) {
    b.rule(q, input, top, next, push, out).expect("zoo rule is well-formed");
}

/// One state, copies its input, never touches the stack.
pub fn make_identity(alphabet: Alphabet) -> PdcSpec {
    let sigma = alphabet.len();
    let mut b = PdcBuilder::new("identity", alphabet);
    let q = b.state("q");
    let z = b.stack_symbol('Z');
    for s in 0..sigma as Sym {
        rule(&mut b, q, Input::Sym(s), z, q, &[z], &[s]);
    }
    b.build(q, z, Mode::Plain).expect("identity builds")
}

/// Endmarker machine squeezing `0ⁿ` to about `n/k²` symbols.
///
/// While reading zeros it counts modulo `k` in its state and pushes one `S`
/// per `k` zeros. At ⊣ it writes `0 1^i` (`i` = zeros not yet on the stack),
/// then pops the `S`s counting modulo `k`, writing one `0` per `k` pops, and
/// finally writes `1^j` for the leftover pops. The leftover count also selects
/// the final state, which keeps `0 1^i 1^j` outputs apart. On the first `1`
/// it writes `1` followed by every zero read so far and copies from then on,
/// so any word containing a `1` maps to `1·w`.
pub fn make_unary_squeezer(k: usize) -> PdcSpec {
    assert!(k >= 2, "k must be at least 2");
    let mut b = PdcBuilder::new(format!("unary-squeezer-{k}"), Alphabet::binary());
    let q: Vec<StateId> = (0..k).map(|i| b.state(&format!("q{i}"))).collect();
    let r: Vec<StateId> = (0..k).map(|j| b.state(&format!("r{j}"))).collect();
    let d: Vec<StateId> = (0..k).map(|j| b.state(&format!("d{j}"))).collect();
    let p = b.state("p");
    let c = b.state("c");
    let e = b.state("e");
    let z = b.stack_symbol('Z');
    let s = b.stack_symbol('S');

    for top in [z, s] {
        for i in 0..k {
            if i + 1 < k {
                rule(&mut b, q[i], Input::Sym(0), top, q[i + 1], &[top], &[]);
            } else {
                rule(&mut b, q[i], Input::Sym(0), top, q[0], &[s, top], &[]);
            }
            rule(&mut b, q[i], Input::Sym(1), top, p, &[top], &cat(&[&[1], &zeros(i)]));
            rule(&mut b, q[i], Input::End, top, r[0], &[top], &cat(&[&[0], &ones(i)]));
        }
        for bit in 0..2 {
            rule(&mut b, c, Input::Sym(bit), top, c, &[top], &[bit]);
        }
        rule(&mut b, c, Input::End, top, e, &[top], &[]);
    }
    for j in 0..k {
        let out: &[Sym] = if j + 1 == k { &[0] } else { &[] };
        rule(&mut b, r[j], Input::Lambda, s, r[(j + 1) % k], &[], out);
        rule(&mut b, r[j], Input::Lambda, z, d[j], &[z], &ones(j));
    }
    rule(&mut b, p, Input::Lambda, s, p, &[], &zeros(k));
    rule(&mut b, p, Input::Lambda, z, c, &[z], &[1]);
    b.build(q[0], z, Mode::Endmark).expect("squeezer builds")
}

/// Finite-state endmarker machine writing one `0` per `k` zeros of a leading
/// zero run. The run's remainder `i < k` is written as `1 0^i`, followed by
/// `1` and a copy of the rest if the word continues.
pub fn make_block_counter(k: usize) -> PdcSpec {
    assert!(k >= 2, "k must be at least 2");
    let mut b = PdcBuilder::new(format!("block-counter-{k}"), Alphabet::binary());
    let cs: Vec<StateId> = (0..k).map(|i| b.state(&format!("c{i}"))).collect();
    let copy = b.state("copy");
    let end = b.state("end");
    let z = b.stack_symbol('Z');
    for i in 0..k {
        if i + 1 < k {
            rule(&mut b, cs[i], Input::Sym(0), z, cs[i + 1], &[z], &[]);
        } else {
            rule(&mut b, cs[i], Input::Sym(0), z, cs[0], &[z], &[0]);
        }
        rule(&mut b, cs[i], Input::Sym(1), z, copy, &[z], &cat(&[&[1], &zeros(i), &[1]]));
        rule(&mut b, cs[i], Input::End, z, end, &[z], &cat(&[&[1], &zeros(i)]));
    }
    for bit in 0..2 {
        rule(&mut b, copy, Input::Sym(bit), z, copy, &[z], &[bit]);
    }
    rule(&mut b, copy, Input::End, z, end, &[z], &[]);
    b.build(cs[0], z, Mode::Endmark).expect("block counter builds")
}

/// Copies its input while pushing `A` on each `0` and popping on each `1`
/// (a `1` on the bare bottom leaves the stack alone).
pub fn make_walker() -> PdcSpec {
    let mut b = PdcBuilder::new("walker", Alphabet::binary());
    let q = b.state("q");
    let z = b.stack_symbol('Z');
    let a = b.stack_symbol('A');
    rule(&mut b, q, Input::Sym(0), z, q, &[a, z], &[0]);
    rule(&mut b, q, Input::Sym(0), a, q, &[a, a], &[0]);
    rule(&mut b, q, Input::Sym(1), z, q, &[z], &[1]);
    rule(&mut b, q, Input::Sym(1), a, q, &[], &[1]);
    b.build(q, z, Mode::Plain).expect("walker builds")
}

/// Parameters of the zone compressor: flag threshold `k`, zone pairs `v`, and
/// `v_prime` input bits per output bit on matching Y zones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZoneCompressorParams {
    pub k: usize,
    pub v: usize,
    pub v_prime: usize,
}

impl ZoneCompressorParams {
    pub fn new(k: usize, v: usize, v_prime: usize) -> Result<Self, String> {
        if k < 2 {
            return Err(format!("k must be at least 2, got {k}"));
        }
        if v < 1 || v_prime < 1 {
            return Err("v and v' must be positive".to_string());
        }
        Ok(Self { k, v, v_prime })
    }

    /// Length of the prefix before the first zoned section: all words of
    /// length `1..k` followed by the flags `1^k … 1^(2k-1)`.
    pub fn early_count(&self) -> usize {
        let k = self.k;
        (1..k).map(|n| n << n).sum::<usize>() + (k..2 * k).sum::<usize>()
    }
}

impl fmt::Display for ZoneCompressorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k{}-v{}-w{}", self.k, self.v, self.v_prime)
    }
}

/// Name of the zone compressor's error state.
pub fn zone_error_state() -> &'static str {
    "e"
}

/// The zone compressor (plain mode, stack alphabet `{Z, 0, 1}`).
///
/// It copies the early prefix, the A zones, X zones and flags. Each X zone is
/// pushed on the stack; the following Y zone is checked against it bit by
/// bit and costs one output bit per `v′` matching input bits. A mismatch
/// writes `1` and the phase of the mismatch in `⌈log₂ v′⌉` bits, then moves
/// to an error state that copies forever. Leaving a Y zone on the bare
/// bottom writes `0` and the bit read. Flags are detected as runs of `k`
/// ones; the `k` flag ones pushed at the end of an X zone are popped again,
/// the last step of that correction being a λ-move so that a flag of `2k+1`
/// ones suffices.
pub fn make_zone_compressor(p: ZoneCompressorParams) -> PdcSpec {
    let ZoneCompressorParams { k, v, v_prime } = p;
    let w = p.early_count();
    let mut b = PdcBuilder::new(format!("zone-compressor-{p}"), Alphabet::binary());
    let early: Vec<StateId> = (0..=w).map(|i| b.state(&format!("q{i}"))).collect();
    let a: Vec<StateId> = (0..=k).map(|i| b.state(&format!("a{i}"))).collect();
    let f: Vec<StateId> = (1..=v + 1).map(|j| b.state(&format!("f{j}"))).collect();
    let x: Vec<Vec<StateId>> =
        (1..=v).map(|j| (0..=k).map(|i| b.state(&format!("x{j}_{i}"))).collect()).collect();
    let r: Vec<Vec<StateId>> =
        (2..=v + 1).map(|j| (0..=k).map(|i| b.state(&format!("r{j}_{i}"))).collect()).collect();
    let y: Vec<Vec<StateId>> =
        (1..=v).map(|j| (1..=v_prime).map(|i| b.state(&format!("y{j}_{i}"))).collect()).collect();
    let e = b.state(zone_error_state());
    let z = b.stack_symbol('Z');
    let s0 = b.stack_symbol('0');
    let s1 = b.stack_symbol('1');
    let bit_sym = |bit: Sym| if bit == 0 { s0 } else { s1 };
    let tops = [z, s0, s1];
    let phase_bits = ceil_log2(v_prime as u64) as usize;

    for top in tops {
        for bit in 0..2 as Sym {
            let read = Input::Sym(bit);
            for i in 0..w {
                rule(&mut b, early[i], read, top, early[i + 1], &[top], &[bit]);
            }
            rule(&mut b, early[w], read, top, a[0], &[top], &[bit]);

            for i in 0..k {
                let next = if bit == 1 { a[i + 1] } else { a[0] };
                rule(&mut b, a[i], read, top, next, &[top], &[bit]);
            }
            rule(&mut b, a[k], read, top, f[0], &[top], &[bit]);

            // Flags: stay on ones; a zero starts X1 (after the A flag) or Yj.
            for (j, &fj) in f.iter().enumerate() {
                if bit == 1 {
                    rule(&mut b, fj, read, top, fj, &[top], &[1]);
                } else if j == 0 {
                    rule(&mut b, fj, read, top, x[0][0], &[s0, top], &[0]);
                } else if top == z {
                    rule(&mut b, fj, read, top, y[j - 1][0], &[z], &[0]);
                } else {
                    rule(&mut b, fj, read, top, y[j - 1][0], &[], &[0]);
                }
            }

            for j in 0..v {
                for i in 0..k {
                    let next = if bit == 1 { x[j][i + 1] } else { x[j][0] };
                    rule(&mut b, x[j][i], read, top, next, &[bit_sym(bit), top], &[bit]);
                }
                rule(&mut b, x[j][k], read, top, r[j][0], &[top], &[bit]);
                for i in 0..k {
                    let push: &[StackSym] = if top == z { &[z] } else { &[] };
                    rule(&mut b, r[j][i], read, top, r[j][i + 1], push, &[bit]);
                }
            }

            for j in 0..v {
                for i in 0..v_prime {
                    let q = y[j][i];
                    if top == z {
                        // Bottom reached: the next X zone (or A zone) begins with this bit.
                        let next = if j + 1 < v {
                            x[j + 1][usize::from(bit)]
                        } else {
                            a[usize::from(bit)]
                        };
                        let push: Vec<StackSym> = if j + 1 < v { vec![bit_sym(bit), z] } else { vec![z] };
                        rule(&mut b, q, read, top, next, &push, &[0, bit]);
                    } else if top == bit_sym(bit) {
                        let (next, out): (StateId, &[Sym]) =
                            if i + 1 == v_prime { (y[j][0], &[0]) } else { (y[j][i + 1], &[]) };
                        rule(&mut b, q, read, top, next, &[], out);
                    } else {
                        let mut out = vec![1];
                        out.extend((0..phase_bits).rev().map(|t| ((i >> t) & 1) as Sym));
                        rule(&mut b, q, read, top, e, &[], &out);
                    }
                }
            }

            rule(&mut b, e, read, top, e, &[top], &[bit]);
        }
        for j in 0..v {
            rule(&mut b, r[j][k], Input::Lambda, top, f[j + 1], &[top], &[]);
        }
    }
    b.build(early[0], z, Mode::Plain).expect("zone compressor builds")
}

/// Every machine shipped with the crate.
pub fn builtin_machines() -> Vec<PdcSpec> {
    vec![
        make_identity(Alphabet::binary()),
        make_walker(),
        make_unary_squeezer(2),
        make_unary_squeezer(3),
        make_unary_squeezer(4),
        make_block_counter(2),
        make_block_counter(3),
        make_zone_compressor(ZoneCompressorParams { k: 2, v: 1, v_prime: 2 }),
        make_zone_compressor(ZoneCompressorParams { k: 4, v: 4, v_prime: 16 }),
    ]
}

/// A named list of compressors used by the pumping and separation experiments.
#[derive(Debug, Clone)]
pub struct Family {
    pub name: &'static str,
    pub members: Vec<PdcSpec>,
}

impl Family {
    pub fn mode(&self) -> Mode {
        self.members[0].mode()
    }
}

/// Plain-mode families.
pub fn plain_families() -> Vec<Family> {
    vec![
        Family { name: "identity", members: vec![make_identity(Alphabet::binary())] },
        Family { name: "identity+walker", members: vec![make_identity(Alphabet::binary()), make_walker()] },
        Family {
            name: "zone+walker",
            members: vec![make_zone_compressor(ZoneCompressorParams { k: 2, v: 1, v_prime: 2 }), make_walker()],
        },
    ]
}

/// Endmarker families.
pub fn endmarked_families() -> Vec<Family> {
    vec![
        Family { name: "squeezer2", members: vec![make_unary_squeezer(2)] },
        Family { name: "block3", members: vec![make_block_counter(3)] },
        Family { name: "squeezer3+block2", members: vec![make_unary_squeezer(3), make_block_counter(2)] },
    ]
}

pub fn family_by_name(name: &str) -> Option<Family> {
    plain_families().into_iter().chain(endmarked_families()).find(|f| f.name == name)
}

/// Looks up a builtin machine by name.
pub fn machine_by_name(name: &str) -> Option<PdcSpec> {
    builtin_machines().into_iter().find(|m| m.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{binary_string, binary_word};
    use crate::format::{parse_pdc, print_pdc};
    use crate::pdc::{il_check, run, run_endmarked, validate_spec};

    fn bw(s: &str) -> Vec<Sym> {
        binary_word(s).unwrap()
    }

    /// Closed form of the squeezer output on `0ⁿ`.
    fn squeezer_formula(n: usize, k: usize) -> String {
        let q = n / (k * k);
        let rest = n - k * k * q;
        let (i, j) = (rest % k, rest / k);
        format!("0{}{}{}", "1".repeat(i), "0".repeat(q), "1".repeat(j))
    }

    #[test]
    fn early_count_values() {
        assert_eq!(ZoneCompressorParams { k: 4, v: 4, v_prime: 16 }.early_count(), 56);
        assert_eq!(ZoneCompressorParams { k: 2, v: 1, v_prime: 2 }.early_count(), 7);
        assert!(ZoneCompressorParams::new(1, 1, 1).is_err());
    }

    #[test]
    fn builtins_validate_without_errors() {
        for m in builtin_machines() {
            let rep = validate_spec(&m);
            assert!(rep.is_ok(), "{}: {rep}", m.name());
            assert!(
                !rep.warnings.iter().any(|w| matches!(w, crate::pdc::Finding::NonTotal { .. })),
                "{} is not total: {rep}",
                m.name()
            );
        }
    }

    #[test]
    fn builtins_round_trip_through_text() {
        for m in builtin_machines() {
            assert_eq!(parse_pdc(&print_pdc(&m)).unwrap(), m, "{}", m.name());
        }
    }

    #[test]
    fn squeezer_examples() {
        let m = make_unary_squeezer(2);
        let out = |s: &str| binary_string(&run_endmarked(&m, &bw(s)).unwrap().output);
        assert_eq!(out("000000000"), "0100");
        assert_eq!(out("0000"), "00");
        assert_eq!(out("010"), "1010");
        assert_eq!(out(""), "0");
    }

    #[test]
    fn squeezer_matches_closed_form() {
        for k in 2..=4 {
            let m = make_unary_squeezer(k);
            for n in 0..200 {
                let out = run_endmarked(&m, &zeros(n)).unwrap().output;
                assert_eq!(binary_string(&out), squeezer_formula(n, k), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn squeezer_prefixes_one_to_words_with_a_one() {
        let m = make_unary_squeezer(3);
        for w in ["1", "0001", "00000001101", "0100000000"] {
            let out = run_endmarked(&m, &bw(w)).unwrap().output;
            assert_eq!(binary_string(&out), format!("1{w}"));
        }
    }

    #[test]
    fn block_counter_compresses_zero_runs() {
        let m = make_block_counter(3);
        let out = |s: &str| binary_string(&run_endmarked(&m, &bw(s)).unwrap().output);
        assert_eq!(out("000000"), "001");
        assert_eq!(out("0000000"), "0010");
        assert_eq!(out("00001"), "0101");
        assert_eq!(run_endmarked(&m, &zeros(3000)).unwrap().output.len(), 1001);
    }

    #[test]
    fn endmarked_builtins_are_lossless_to_length_10() {
        for m in [make_unary_squeezer(2), make_unary_squeezer(3), make_block_counter(2), make_block_counter(3)] {
            assert!(il_check(&m, 10).unwrap().is_lossless(), "{}", m.name());
        }
    }

    #[test]
    fn small_zone_compressor_is_lossless_to_length_16() {
        let m = make_zone_compressor(ZoneCompressorParams { k: 2, v: 1, v_prime: 2 });
        let rep = il_check(&m, 16).unwrap();
        assert!(rep.is_lossless(), "{:?}", rep.verdict);
    }

    #[test]
    fn zone_compressor_two_zones_is_lossless() {
        for (v, vp) in [(2, 2), (2, 3), (1, 4)] {
            let m = make_zone_compressor(ZoneCompressorParams { k: 2, v, v_prime: vp });
            let rep = il_check(&m, 15).unwrap();
            assert!(rep.is_lossless(), "v={v} v'={vp}: {:?}", rep.verdict);
        }
    }

    #[test]
    fn zone_compressor_squeezes_matching_y_zone() {
        let p = ZoneCompressorParams { k: 2, v: 1, v_prime: 2 };
        let m = make_zone_compressor(p);
        let early = "0111111";
        let x = "0010010";
        let y: String = x.chars().rev().collect();
        let word = format!("{early}000{}{x}{}{y}0", "1".repeat(4), "1".repeat(5));
        let out = run(&m, &bw(&word)).unwrap();
        // Everything up to the Y zone is copied; the first Y bit is copied,
        // the remaining six bits cost three zeros, the exit costs two bits.
        let prefix_len = word.len() - y.len() - 1;
        assert_eq!(out.output.len(), prefix_len + 1 + 3 + 2);
        assert_eq!(binary_string(&out.output[..prefix_len]), word[..prefix_len]);
        assert_eq!(m.state_name(out.final_state), "a0");
    }

    #[test]
    fn zone_compressor_mismatch_enters_error_state() {
        let p = ZoneCompressorParams { k: 2, v: 1, v_prime: 2 };
        let m = make_zone_compressor(p);
        let tail = "0110100111";
        let word = format!("0111111000{}0010010{}00{tail}", "1".repeat(4), "1".repeat(5));
        let out = run(&m, &bw(&word)).unwrap();
        assert_eq!(m.state_name(out.final_state), zone_error_state());
        assert!(binary_string(&out.output).ends_with(tail));
    }

    #[test]
    fn walker_copies() {
        let r = run(&make_walker(), &bw("0010111")).unwrap();
        assert_eq!(binary_string(&r.output), "0010111");
        assert_eq!(r.final_stack.len(), 1);
    }

    #[test]
    fn families_share_a_mode() {
        for fam in plain_families().into_iter().chain(endmarked_families()) {
            assert!(fam.members.iter().all(|m| m.mode() == fam.mode()), "{}", fam.name);
        }
        assert!(family_by_name("zone+walker").is_some());
        assert!(machine_by_name("walker").is_some());
    }
}
