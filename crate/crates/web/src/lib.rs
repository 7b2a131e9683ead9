//! Browser bindings for the demo page in `www/`. Every export takes plain
//! strings and numbers and returns a JSON string; the `*_json` functions
//! are the same operations for native callers and tests.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use pdlab::harness::{ratio_series, Compressor};
use pdlab::lz78::{bits_to_string, lz_encode, LzMeter};
use pdlab::pdc::{Mode, Runner};
use pdlab::sequences::{build_s, repetitive_stream, Block, CheckpointedStream, RepetitionRecipe};
use pdlab::zoo::{builtin_machines, machine_by_name};
use pdlab::{parse_pdc, PdcSpec};

#[derive(Serialize)]
struct MachineInfo {
    name: String,
    mode: &'static str,
    states: usize,
}

#[derive(Serialize)]
struct Step {
    symbol: String,
    state: String,
    height: usize,
    output: String,
}

#[derive(Serialize)]
struct RunView {
    machine: String,
    output: String,
    final_state: String,
    stack: String,
    steps: Vec<Step>,
}

#[derive(Serialize)]
struct Curve {
    name: String,
    points: Vec<(u64, f64)>,
}

#[derive(Serialize)]
struct Marker {
    position: u64,
    label: String,
}

#[derive(Serialize)]
struct CurvesView {
    length: u64,
    curves: Vec<Curve>,
    markers: Vec<Marker>,
}

#[derive(Serialize)]
struct PhraseView {
    index: usize,
    back_ref: usize,
    literal: Option<char>,
    text: String,
}

#[derive(Serialize)]
struct LzView {
    phrases: Vec<PhraseView>,
    code: String,
    bits: usize,
    ratio: f64,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn machine_from(source: &str) -> Result<PdcSpec, String> {
    match machine_by_name(source.trim()) {
        Some(m) => Ok(m),
        None => parse_pdc(source).map_err(|e| format!("not a builtin name, and not a machine: {e}")),
    }
}

pub fn machines_json() -> Result<String, String> {
    let list: Vec<MachineInfo> = builtin_machines()
        .iter()
        .map(|m| MachineInfo {
            name: m.name().to_string(),
            mode: if m.mode() == Mode::Endmark { "endmark" } else { "plain" },
            states: m.state_count(),
        })
        .collect();
    to_json(&list)
}

/// Runs a builtin (by name) or a machine given as text, recording state,
/// stack height and output after each symbol. Endmarked machines also read
/// `⊣` at the end, shown as a final `$` step.
pub fn run_json(source: &str, word: &str) -> Result<String, String> {
    let m = machine_from(source)?;
    let a = m.alphabet();
    let w = a.encode(word.trim()).map_err(|e| e.to_string())?;
    let mut r = Runner::new(&m).map_err(|e| e.to_string())?;
    let mut steps = vec![Step { symbol: String::new(), state: m.state_name(r.state()).to_string(), height: r.height(), output: a.decode(r.output()) }];
    for &b in &w {
        let before = r.output().len();
        r.feed(b).map_err(|e| e.to_string())?;
        steps.push(Step {
            symbol: a.char_of(b).to_string(),
            state: m.state_name(r.state()).to_string(),
            height: r.height(),
            output: a.decode(&r.output()[before..]),
        });
    }
    if m.mode() == Mode::Endmark {
        let before = r.output().len();
        r.end().map_err(|e| e.to_string())?;
        steps.push(Step {
            symbol: "$".to_string(),
            state: m.state_name(r.state()).to_string(),
            height: r.height(),
            output: a.decode(&r.output()[before..]),
        });
    }
    to_json(&RunView {
        machine: m.name().to_string(),
        output: a.decode(r.output()),
        final_state: m.state_name(r.state()).to_string(),
        stack: m.stack_string(r.stack()),
        steps,
    })
}

fn curves(stream: &CheckpointedStream, machines: &[PdcSpec]) -> Result<CurvesView, String> {
    let mut curves = Vec::new();
    let mut comps: Vec<Compressor> = machines.iter().map(Compressor::Pdc).collect();
    comps.push(Compressor::Lz { sigma: 2 });
    for c in comps {
        let rows = ratio_series(c, stream, stream.len()).map_err(|e| e.to_string())?;
        curves.push(Curve { name: c.name(), points: rows.iter().map(|r| (r.position, r.ratio)).collect() });
    }
    let markers = stream.checkpoints().iter().map(|c| Marker { position: c.position, label: c.label.clone() }).collect();
    Ok(CurvesView { length: stream.len(), curves, markers })
}

/// Ratio curves of the zone compressor and LZ78 along the zone sequence.
pub fn zone_curves_json(k: usize, v: usize, v_prime: usize, n_max: usize) -> Result<String, String> {
    let params = pdlab::zoo::ZoneCompressorParams::new(k, v, v_prime)?;
    let zone = pdlab::zoo::make_zone_compressor(params);
    let stream = build_s(k, v, n_max).map_err(|e| e.to_string())?;
    to_json(&curves(&stream, &[zone])?)
}

/// Ratio curves of a builtin machine and LZ78 on `t·u^n`.
pub fn repeat_curves_json(machine: &str, t: &str, u: &str, n: u64) -> Result<String, String> {
    let m = machine_from(machine)?;
    let a = m.alphabet();
    let t = a.encode(t.trim()).map_err(|e| e.to_string())?;
    let u = a.encode(u.trim()).map_err(|e| e.to_string())?;
    let recipe = RepetitionRecipe { blocks: vec![Block { t, u, n }] };
    let mut stream = repetitive_stream(&recipe).map_err(|e| e.to_string())?;
    if stream.checkpoints().len() < 32 {
        // Too few checkpoints for a curve: resample at 64 evenly spaced points.
        let word = stream.to_vec();
        stream = CheckpointedStream::new();
        let step = (word.len() / 64).max(1);
        for chunk in word.chunks(step) {
            stream.push_literal(chunk);
            stream.mark(format!("{}", stream.len()));
        }
    }
    to_json(&curves(&stream, &[m])?)
}

/// LZ78 phrases of a word (over `alphabet`, one character per symbol) with
/// the code the encoder writes for it.
pub fn lz_json(word: &str, alphabet: &str) -> Result<String, String> {
    let a = pdlab::Alphabet::new(alphabet.chars()).map_err(|e| e.to_string())?;
    let w = a.encode(word.trim()).map_err(|e| e.to_string())?;
    let mut meter = LzMeter::new(a.len());
    meter.extend(&w);
    let parse = meter.parse();
    let expanded = parse.expansions(meter.dictionary());
    let phrases = parse
        .phrases
        .iter()
        .zip(expanded)
        .enumerate()
        .map(|(i, (p, text))| PhraseView {
            index: i + 1,
            back_ref: p.back_ref,
            literal: p.literal.map(|b| a.char_of(b)),
            text: a.decode(&text),
        })
        .collect();
    let code = lz_encode(&w, a.len());
    let ratio = if w.is_empty() { 0.0 } else { code.len() as f64 / (w.len() as f64 * a.log2_size()) };
    to_json(&LzView { phrases, code: bits_to_string(&code), bits: code.len(), ratio })
}

#[wasm_bindgen]
pub fn machines() -> Result<String, JsValue> {
    machines_json().map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn run_machine(source: &str, word: &str) -> Result<String, JsValue> {
    run_json(source, word).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn zone_curves(k: usize, v: usize, v_prime: usize, n_max: usize) -> Result<String, JsValue> {
    zone_curves_json(k, v, v_prime, n_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn repeat_curves(machine: &str, t: &str, u: &str, n: u32) -> Result<String, JsValue> {
    repeat_curves_json(machine, t, u, n as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lz_phrases(word: &str, alphabet: &str) -> Result<String, JsValue> {
    lz_json(word, alphabet).map_err(|e| JsValue::from_str(&e))
}
