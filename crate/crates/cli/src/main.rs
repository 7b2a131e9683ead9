use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use pdlab::harness::{rows_csv, Preset};
use pdlab::lz78::{bits_from_str, bits_to_string, lz_decode, lz_encode, lz_parse};
use pdlab::pdc::{il_check, validate_spec, IlVerdict, Mode, PdcSpec, Runner};
use pdlab::pumping::{
    default_dmin, family_constants, find_pumpable, find_pumpable_endmarked, parse_record, reconstruct,
    verify_pump_endmarked, verify_pump_plain, PumpVerdict, Witness,
};
use pdlab::sequences::{
    build_s, choose_repetition_counts, enumerate_t, pd_hard_blocks, random_word, repetitive_stream, CheckpointedStream,
};
use pdlab::zoo::{builtin_machines, family_by_name, machine_by_name};
use pdlab::{parse_pdc, print_pdc, Alphabet, CompressionRatio, Sym};

/// Pushdown compressors against LZ78.
#[derive(Parser)]
#[command(name = "pdlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a machine file for determinism, totality and endmarker rules.
    Validate { file: PathBuf },
    /// Run a machine on a word and print its output.
    Run {
        file: PathBuf,
        /// Append the endmarker after the input.
        #[arg(long)]
        endmark: bool,
        /// Also print the final state and stack.
        #[arg(long)]
        config: bool,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Search for two words with the same output and final state.
    Ilcheck {
        file: PathBuf,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
    /// LZ78 coding.
    Lz {
        #[command(subcommand)]
        op: LzOp,
    },
    /// Generate sequence prefixes (symbols on stdout or --out, checkpoints as CSV).
    Seq {
        #[command(subcommand)]
        op: SeqOp,
    },
    /// Find or verify pumping decompositions.
    Pump {
        #[command(subcommand)]
        op: PumpOp,
    },
    /// Run a preset experiment and print its report.
    Experiment(ExperimentArgs),
    /// List, print or write the builtin machines.
    Zoo {
        #[command(subcommand)]
        op: Option<ZooOp>,
    },
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Read the word from a file.
    #[arg(long, group = "src")]
    input: Option<PathBuf>,
    /// Read the word from standard input.
    #[arg(long, group = "src")]
    stdin: bool,
    /// The word itself.
    #[arg(long, group = "src")]
    word: Option<String>,
}

#[derive(Subcommand)]
enum LzOp {
    /// Print the code as a bit string.
    Encode {
        #[arg(long, default_value = "01")]
        alphabet: String,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Decode a bit string.
    Decode {
        #[arg(long, default_value = "01")]
        alphabet: String,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print phrase count, code length and ratio.
    Ratio {
        #[arg(long, default_value = "01")]
        alphabet: String,
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args)]
struct SeqOut {
    /// Write symbols here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write `position,label` checkpoint lines here.
    #[arg(long)]
    checkpoints: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SeqOp {
    /// Blocks t_i u_i^{n_i} with counts chosen so LZ78's ratio keeps falling.
    Repeat {
        /// Comma-separated `t:u` pairs, e.g. `1:0,11:01`.
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 1 << 24)]
        cap: u64,
        #[command(flatten)]
        out: SeqOut,
    },
    /// The zone sequence up to section n_max.
    #[command(name = "buildS")]
    BuildS {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        out: SeqOut,
    },
    /// Words of length n without a run of k ones, one per line.
    #[command(name = "Tn")]
    Tn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// A seeded pseudorandom binary word.
    Random {
        #[arg(long)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: SeqOut,
    },
    /// Pumped blocks that defeat a plain family.
    Pdhard {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 3)]
        stages: usize,
        #[arg(long, default_value_t = 2048)]
        word_len: usize,
        #[arg(long, default_value_t = 1 << 14)]
        min_block: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        out: SeqOut,
    },
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Machine file (repeat for a family).
    #[arg(long = "family")]
    files: Vec<PathBuf>,
    /// A builtin family instead of files.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum PumpOp {
    /// Print the record of the first pumpable split.
    Find {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        input: InputArgs,
        /// Minimum |u|; defaults to the family's bound for this word length.
        #[arg(long)]
        dmin: Option<usize>,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
        #[arg(long, default_value_t = 8)]
        c_max: usize,
    },
    /// Rebuild a split from its record and check it.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        record: PathBuf,
        #[arg(long, default_value_t = 50)]
        n_max: usize,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// lemma1-floor, lemma2-limit, lz-beats-pd or pd-beats-lz.
    preset: String,
    /// Squeezer k (lemma2-limit, repeatable) or flag threshold (pd-beats-lz).
    #[arg(long)]
    k: Vec<usize>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    v: Option<usize>,
    #[arg(long)]
    v_prime: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    stages: Option<usize>,
    #[arg(long)]
    word_len: Option<usize>,
    #[arg(long)]
    min_block: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write one `n,bits,ratio,label` CSV per series into this directory.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ZooOp {
    List,
    Show { name: String },
    /// Write every builtin machine to DIR/<name>.pdc.
    Write { dir: PathBuf },
}

fn read_word_text(input: &InputArgs) -> Result<String> {
    let text = match (&input.input, input.stdin, &input.word) {
        (Some(p), _, _) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        (_, true, _) => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
        (_, _, Some(w)) => w.clone(),
        _ => bail!("no input: give --input, --stdin or --word"),
    };
    Ok(text.chars().filter(|c| !c.is_whitespace()).collect())
}

fn read_word(input: &InputArgs, alphabet: &Alphabet) -> Result<Vec<Sym>> {
    alphabet.encode(&read_word_text(input)?).map_err(|e| anyhow!("{e}"))
}

fn load_machine(path: &Path) -> Result<PdcSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_pdc(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_family(f: &FamilyArgs) -> Result<Vec<PdcSpec>> {
    match (&f.preset, f.files.is_empty()) {
        (Some(name), true) => family_by_name(name).map(|f| f.members).ok_or_else(|| anyhow!("unknown family `{name}`")),
        (None, false) => {
            let fam = f.files.iter().map(|p| load_machine(p)).collect::<Result<Vec<_>>>()?;
            if fam.iter().any(|m| m.mode() != fam[0].mode() || m.alphabet() != fam[0].alphabet()) {
                bail!("family members must share mode and alphabet");
            }
            Ok(fam)
        }
        _ => bail!("give either --family <file>... or --preset <name>"),
    }
}

fn alphabet_from(chars: &str) -> Result<Alphabet> {
    Alphabet::new(chars.chars()).map_err(|e| anyhow!("{e}"))
}

/// Writes to stdout; a closed pipe (`pdlab seq ... | head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn write_stream(s: &CheckpointedStream, out: &SeqOut) -> Result<()> {
    let text: String = s.iter().map(|b| char::from(b'0' + b)).chain(std::iter::once('\n')).collect();
    match &out.out {
        Some(p) => fs::write(p, text)?,
        None => emit(&text)?,
    }
    if let Some(p) = &out.checkpoints {
        fs::write(p, s.checkpoints_csv())?;
    }
    Ok(())
}

fn verdict_code(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pdlab: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Validate { file } => {
            let m = load_machine(&file)?;
            let rep = validate_spec(&m);
            for e in &rep.errors {
                println!("error: {e}");
            }
            for w in &rep.warnings {
                println!("warning: {w}");
            }
            println!("{}: {} errors, {} warnings", m.name(), rep.errors.len(), rep.warnings.len());
            Ok(verdict_code(rep.errors.is_empty()))
        }
        Command::Run { file, endmark, config, input } => {
            let m = load_machine(&file)?;
            if endmark && m.mode() != Mode::Endmark {
                bail!("{} is a plain machine; --endmark needs `mode endmark`", m.name());
            }
            let w = read_word(&input, m.alphabet())?;
            let mut r = Runner::new(&m)?;
            r.feed_all(&w)?;
            if endmark {
                r.end()?;
            }
            println!("{}", m.alphabet().decode(r.output()));
            if config {
                println!("state {} stack {}", m.state_name(r.state()), m.stack_string(r.stack()));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Ilcheck { file, maxlen } => {
            let m = load_machine(&file)?;
            let rep = il_check(&m, maxlen)?;
            match rep.verdict {
                IlVerdict::LosslessUpTo(n) => {
                    println!("lossless on all {} words of length <= {n}", rep.words_checked);
                    Ok(ExitCode::SUCCESS)
                }
                IlVerdict::Witness(a, b) => {
                    let show = |w: &[Sym]| if w.is_empty() { "(empty)".to_string() } else { m.alphabet().decode(w) };
                    println!("collision: {} and {} give the same output and final state", show(&a), show(&b));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Lz { op } => lz(op),
        Command::Seq { op } => seq(op),
        Command::Pump { op } => pump(op),
        Command::Experiment(args) => experiment(args),
        Command::Zoo { op } => {
            match op.unwrap_or(ZooOp::List) {
                ZooOp::List => {
                    for m in builtin_machines() {
                        let mode = if m.mode() == Mode::Endmark { "endmark" } else { "plain" };
                        println!("{:<28} {mode:<8} {} states", m.name(), m.state_count());
                    }
                }
                ZooOp::Show { name } => {
                    let m = machine_by_name(&name).ok_or_else(|| anyhow!("no builtin machine `{name}`"))?;
                    print!("{}", print_pdc(&m));
                }
                ZooOp::Write { dir } => {
                    fs::create_dir_all(&dir)?;
                    for m in builtin_machines() {
                        fs::write(dir.join(format!("{}.pdc", m.name())), print_pdc(&m))?;
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn lz(op: LzOp) -> Result<ExitCode> {
    match op {
        LzOp::Encode { alphabet, input } => {
            let a = alphabet_from(&alphabet)?;
            let w = read_word(&input, &a)?;
            println!("{}", bits_to_string(&lz_encode(&w, a.len())));
        }
        LzOp::Decode { alphabet, input } => {
            let a = alphabet_from(&alphabet)?;
            let bits = bits_from_str(&read_word_text(&input)?).ok_or_else(|| anyhow!("code must be a 0/1 string"))?;
            match lz_decode(&bits, a.len()) {
                Ok(w) => println!("{}", a.decode(&w)),
                Err(e) => {
                    println!("{e}");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        LzOp::Ratio { alphabet, input } => {
            let a = alphabet_from(&alphabet)?;
            let w = read_word(&input, &a)?;
            if w.is_empty() {
                bail!("empty input has no ratio");
            }
            let parse = lz_parse(&w, a.len());
            let bits = lz_encode(&w, a.len()).len() as u64;
            println!("phrases {} bits {} ratio {}", parse.phrase_count(), bits, CompressionRatio::new(bits, w.len() as u64, a.len()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_pairs(text: &str) -> Result<Vec<(Vec<Sym>, Vec<Sym>)>> {
    let bin = Alphabet::binary();
    text.split(',')
        .map(|p| {
            let (t, u) = p.split_once(':').ok_or_else(|| anyhow!("pair `{p}` is not `t:u`"))?;
            Ok((bin.encode(t.trim()).map_err(|e| anyhow!("{e}"))?, bin.encode(u.trim()).map_err(|e| anyhow!("{e}"))?))
        })
        .collect()
}

fn seq(op: SeqOp) -> Result<ExitCode> {
    match op {
        SeqOp::Repeat { pairs, depth, cap, out } => {
            let pairs = parse_pairs(&pairs)?;
            let depth = depth.unwrap_or(pairs.len());
            let recipe = choose_repetition_counts(&pairs, depth, 2, cap)?;
            for (i, b) in recipe.blocks.iter().enumerate() {
                eprintln!("block {}: n={}", i + 1, b.n);
            }
            write_stream(&repetitive_stream(&recipe)?, &out)?;
        }
        SeqOp::BuildS { k, v, n_max, out } => write_stream(&build_s(k, v, n_max)?, &out)?,
        SeqOp::Tn { n, k } => {
            let text: String = enumerate_t(n, k).iter().map(|w| Alphabet::binary().decode(w) + "\n").collect();
            emit(&text)?;
        }
        SeqOp::Random { len, seed, out } => {
            let mut s = CheckpointedStream::new();
            s.push_literal(&random_word(len, seed));
            s.mark("end");
            write_stream(&s, &out)?;
        }
        SeqOp::Pdhard { family, stages, word_len, min_block, seed, out } => {
            let fam = load_family(&family)?;
            let recipe = pd_hard_blocks(&fam, stages, word_len, min_block, seed)?;
            write_stream(&repetitive_stream(&recipe)?, &out)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn pump(op: PumpOp) -> Result<ExitCode> {
    match op {
        PumpOp::Find { family, input, dmin, n_max, c_max } => {
            let fam = load_family(&family)?;
            let w = read_word(&input, fam[0].alphabet())?;
            let d = dmin.unwrap_or_else(|| default_dmin(&family_constants(&fam), w.len()));
            let found = match fam[0].mode() {
                Mode::Plain => find_pumpable(&fam, &w, d)?,
                Mode::Endmark => find_pumpable_endmarked(&fam, &w, d, n_max, c_max, 10_000)?,
            };
            match found {
                Some(dec) => {
                    print!("{}", dec.record());
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("no pumpable split with |u| >= {}", d.max(1));
                    Ok(ExitCode::from(1))
                }
            }
        }
        PumpOp::Verify { family, input, record, n_max } => {
            let fam = load_family(&family)?;
            let w = read_word(&input, fam[0].alphabet())?;
            let rec = parse_record(&fs::read_to_string(&record).with_context(|| format!("reading {}", record.display()))?)?;
            let dec = match reconstruct(&fam, &w, &rec) {
                Ok(d) => d,
                Err(e) => {
                    println!("{e}");
                    return Ok(ExitCode::from(1));
                }
            };
            let endmarked = dec.witnesses.iter().any(|x| matches!(x, Witness::Endmarked { .. }));
            let verdict =
                if endmarked { verify_pump_endmarked(&fam, &dec, n_max)? } else { verify_pump_plain(&fam, &dec, n_max)? };
            println!("{verdict}");
            Ok(verdict_code(verdict == PumpVerdict::Pass))
        }
    }
}

fn experiment(a: ExperimentArgs) -> Result<ExitCode> {
    let preset = match a.preset.as_str() {
        "lemma1-floor" => {
            let Preset::Lemma1Floor { max_len, samples, seed } = Preset::lemma1_floor() else { unreachable!() };
            Preset::Lemma1Floor {
                max_len: a.max_len.unwrap_or(max_len),
                samples: a.samples.unwrap_or(samples),
                seed: a.seed.unwrap_or(seed),
            }
        }
        "lemma2-limit" => Preset::Lemma2Limit {
            ks: if a.k.is_empty() { vec![2, 3] } else { a.k.clone() },
            n: a.n.unwrap_or(100_000),
        },
        "lz-beats-pd" => {
            let Preset::LzBeatsPd { family, stages, word_len, min_block, seed } = Preset::lz_beats_pd() else { unreachable!() };
            Preset::LzBeatsPd {
                family: a.family.clone().unwrap_or(family),
                stages: a.stages.unwrap_or(stages),
                word_len: a.word_len.unwrap_or(word_len),
                min_block: a.min_block.unwrap_or(min_block),
                seed: a.seed.unwrap_or(seed),
            }
        }
        "pd-beats-lz" => {
            let Preset::PdBeatsLz { k, v, v_prime, n_max } = Preset::pd_beats_lz() else { unreachable!() };
            Preset::PdBeatsLz {
                k: a.k.first().copied().unwrap_or(k),
                v: a.v.unwrap_or(v),
                v_prime: a.v_prime.unwrap_or(v_prime),
                n_max: a.n_max.unwrap_or(n_max),
            }
        }
        other => bail!("unknown preset `{other}`; expected one of {}", pdlab::harness::PRESET_NAMES.join(", ")),
    };
    let rep = preset.run()?;
    print!("{}", rep.render());
    if let Some(dir) = &a.csv_dir {
        fs::create_dir_all(dir)?;
        for s in &rep.series {
            fs::write(dir.join(format!("{}-{}.csv", preset.name(), s.name)), rows_csv(&s.rows))?;
        }
    }
    Ok(verdict_code(rep.passed()))
}
