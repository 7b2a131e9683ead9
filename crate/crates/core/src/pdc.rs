//! Deterministic pushdown compressors: definition, execution, tracing,
//! validation and an exhaustive information-losslessness check.
//!
//! A machine is the tuple `(Q, Σ, Γ, δ, ν, q₀, z₀)` plus an endmarker flag.
//! Transitions and outputs live together in [`Rule`]s keyed by
//! `(state, input, top-of-stack)`, where the input is a symbol of Σ, λ, or the
//! endmarker ⊣. A rule replaces the top stack symbol by its push string,
//! written top-first: pushing `"AZ"` on top `Z` leaves `A` on top of `Z`, and
//! the empty push string pops.
//!
//! λ-rules are applied exhaustively before the first symbol and after every
//! consumed symbol, so every observable configuration is λ-closed.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::alphabet::{Alphabet, Sym};
use crate::ratio::CompressionRatio;

pub type StateId = usize;
pub type StackSym = u16;

const NO_RULE: u32 = u32::MAX;

/// What a rule reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Input {
    Sym(Sym),
    Lambda,
    End,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// No endmarker: the output on `w` is whatever was emitted while reading `w`.
    Plain,
    /// The input is followed by ⊣, which the machine may use to flush its stack.
    Endmark,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub state: StateId,
    pub input: Input,
    pub top: StackSym,
    pub next: StateId,
    /// Replacement for the top symbol, top-first.
    pub push: Vec<StackSym>,
    pub output: Vec<Sym>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("duplicate rule for state {state}, input {input}, stack symbol {top:?}")]
    DuplicateRule { state: String, input: String, top: char },
    #[error("unknown state id {0}")]
    UnknownState(StateId),
    #[error("unknown stack symbol id {0}")]
    UnknownStackSymbol(StackSym),
    #[error("output symbol {0} is outside the input alphabet")]
    UnknownOutputSymbol(Sym),
    #[error("stack alphabet is empty")]
    EmptyStackAlphabet,
    #[error("machine has no states")]
    NoStates,
}

/// Incremental constructor for [`PdcSpec`].
#[derive(Debug, Clone)]
pub struct PdcBuilder {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    state_index: HashMap<String, StateId>,
    stack: Vec<char>,
    rules: Vec<Rule>,
    keys: HashSet<(StateId, Input, StackSym)>,
}

impl PdcBuilder {
    pub fn new(name: impl Into<String>, alphabet: Alphabet) -> Self {
        Self {
            name: name.into(),
            alphabet,
            states: Vec::new(),
            state_index: HashMap::new(),
            stack: Vec::new(),
            rules: Vec::new(),
            keys: HashSet::new(),
        }
    }

    /// Returns the id of `name`, declaring it if needed.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.state_index.get(name) {
            return id;
        }
        let id = self.states.len();
        self.states.push(name.to_string());
        self.state_index.insert(name.to_string(), id);
        id
    }

    /// Returns the id of stack symbol `c`, declaring it if needed.
    pub fn stack_symbol(&mut self, c: char) -> StackSym {
        if let Some(i) = self.stack.iter().position(|&x| x == c) {
            return i as StackSym;
        }
        self.stack.push(c);
        (self.stack.len() - 1) as StackSym
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rule(
        &mut self,
        state: StateId,
        input: Input,
        top: StackSym,
        next: StateId,
        push: &[StackSym],
        output: &[Sym],
    ) -> Result<(), SpecError> {
        for &s in [state, next].iter() {
            if s >= self.states.len() {
                return Err(SpecError::UnknownState(s));
            }
        }
        for &z in push.iter().chain(std::iter::once(&top)) {
            if z as usize >= self.stack.len() {
                return Err(SpecError::UnknownStackSymbol(z));
            }
        }
        if let Some(&b) = output.iter().find(|&&b| b as usize >= self.alphabet.len()) {
            return Err(SpecError::UnknownOutputSymbol(b));
        }
        if let Input::Sym(b) = input {
            if b as usize >= self.alphabet.len() {
                return Err(SpecError::UnknownOutputSymbol(b));
            }
        }
        if !self.keys.insert((state, input, top)) {
            return Err(SpecError::DuplicateRule {
                state: self.states[state].clone(),
                input: input_label(&self.alphabet, input),
                top: self.stack[top as usize],
            });
        }
        self.rules.push(Rule { state, input, top, next, push: push.to_vec(), output: output.to_vec() });
        Ok(())
    }

    pub fn build(self, start: StateId, bottom: StackSym, mode: Mode) -> Result<PdcSpec, SpecError> {
        if self.states.is_empty() {
            return Err(SpecError::NoStates);
        }
        if self.stack.is_empty() {
            return Err(SpecError::EmptyStackAlphabet);
        }
        if start >= self.states.len() {
            return Err(SpecError::UnknownState(start));
        }
        if bottom as usize >= self.stack.len() {
            return Err(SpecError::UnknownStackSymbol(bottom));
        }
        let mut spec = PdcSpec {
            name: self.name,
            alphabet: self.alphabet,
            states: self.states,
            stack_alphabet: self.stack,
            start,
            bottom,
            mode,
            rules: self.rules,
            table: Vec::new(),
        };
        spec.reindex();
        Ok(spec)
    }
}

fn input_label(alphabet: &Alphabet, input: Input) -> String {
    match input {
        Input::Sym(b) => alphabet.char_of(b).to_string(),
        Input::Lambda => "λ".to_string(),
        Input::End => "⊣".to_string(),
    }
}

/// A complete pushdown compressor definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PdcSpec {
    name: String,
    alphabet: Alphabet,
    states: Vec<String>,
    stack_alphabet: Vec<char>,
    start: StateId,
    bottom: StackSym,
    mode: Mode,
    rules: Vec<Rule>,
    table: Vec<u32>,
}

impl PdcSpec {
    fn slots(&self) -> usize {
        self.alphabet.len() + 2
    }

    fn slot(&self, input: Input) -> usize {
        match input {
            Input::Sym(b) => b as usize,
            Input::Lambda => self.alphabet.len(),
            Input::End => self.alphabet.len() + 1,
        }
    }

    fn key(&self, state: StateId, input: Input, top: StackSym) -> usize {
        (state * self.slots() + self.slot(input)) * self.stack_alphabet.len() + top as usize
    }

    fn reindex(&mut self) {
        let size = self.states.len() * self.slots() * self.stack_alphabet.len();
        self.table = vec![NO_RULE; size];
        for i in 0..self.rules.len() {
            let r = &self.rules[i];
            let k = self.key(r.state, r.input, r.top);
            self.table[k] = i as u32;
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn stack_alphabet(&self) -> &[char] {
        &self.stack_alphabet
    }

    pub fn start_state(&self) -> StateId {
        self.start
    }

    pub fn stack_bottom(&self) -> StackSym {
        self.bottom
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule_for(&self, state: StateId, input: Input, top: StackSym) -> Option<&Rule> {
        match self.table[self.key(state, input, top)] {
            NO_RULE => None,
            i => Some(&self.rules[i as usize]),
        }
    }

    fn rule_index(&self, state: StateId, input: Input, top: StackSym) -> Option<usize> {
        match self.table[self.key(state, input, top)] {
            NO_RULE => None,
            i => Some(i as usize),
        }
    }

    /// Longest push string over all rules (at least 1).
    pub fn max_push_len(&self) -> usize {
        self.rules.iter().map(|r| r.push.len()).max().unwrap_or(0).max(1)
    }

    pub fn input_label(&self, input: Input) -> String {
        input_label(&self.alphabet, input)
    }

    pub fn stack_string(&self, stack: &[StackSym]) -> String {
        stack.iter().map(|&z| self.stack_alphabet[z as usize]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("no rule for state {state}, input {input}, stack top {top:?} after {position} symbols")]
    Undefined { state: String, input: String, top: char, position: usize },
    #[error("λ-rules fired more than {budget} times in state {state} after {position} symbols")]
    LambdaBudgetExceeded { state: String, budget: usize, position: usize },
    #[error("the stack became empty after {position} symbols")]
    StackExhausted { position: usize },
    #[error("machine {0} is not in endmarker mode")]
    NotEndmarked(String),
    #[error("input continues after the endmarker")]
    AfterEnd,
    #[error("symbol {0} is outside the input alphabet")]
    BadSymbol(Sym),
    #[error("compression ratio of the empty word is undefined")]
    EmptyInput,
}

/// Final configuration and output of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub output: Vec<Sym>,
    pub final_state: StateId,
    /// Bottom-first; starts with z₀.
    pub final_stack: Vec<StackSym>,
    pub consumed: usize,
}

/// Step-by-step executor. Each call to [`Runner::feed`] consumes one symbol
/// and then λ-closes the configuration.
#[derive(Debug, Clone)]
pub struct Runner<'a> {
    spec: &'a PdcSpec,
    state: StateId,
    stack: Vec<StackSym>,
    output: Vec<Sym>,
    output_len: u64,
    keep_output: bool,
    consumed: usize,
    ended: bool,
    min_height: usize,
}

impl<'a> Runner<'a> {
    /// Starts at `(q₀, z₀)` and applies the initial λ-closure.
    pub fn new(spec: &'a PdcSpec) -> Result<Self, RunError> {
        Self::with_output(spec, true)
    }

    /// Like [`Runner::new`] but only counts output symbols.
    pub fn counting(spec: &'a PdcSpec) -> Result<Self, RunError> {
        Self::with_output(spec, false)
    }

    fn with_output(spec: &'a PdcSpec, keep_output: bool) -> Result<Self, RunError> {
        let mut r = Runner {
            spec,
            state: spec.start,
            stack: vec![spec.bottom],
            output: Vec::new(),
            output_len: 0,
            keep_output,
            consumed: 0,
            ended: false,
            min_height: 1,
        };
        r.close()?;
        Ok(r)
    }

    pub fn spec(&self) -> &'a PdcSpec {
        self.spec
    }

    pub fn state(&self) -> StateId {
        self.state
    }

    pub fn stack(&self) -> &[StackSym] {
        &self.stack
    }

    pub fn height(&self) -> usize {
        self.stack.len()
    }

    pub fn top(&self) -> StackSym {
        *self.stack.last().expect("stack holds z₀")
    }

    /// Output so far; empty for counting runners.
    pub fn output(&self) -> &[Sym] {
        &self.output
    }

    pub fn output_len(&self) -> u64 {
        self.output_len
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    /// Lowest stack height seen during the most recent step (including both
    /// of its endpoints).
    pub fn last_min_height(&self) -> usize {
        self.min_height
    }

    pub fn feed(&mut self, b: Sym) -> Result<(), RunError> {
        if self.ended {
            return Err(RunError::AfterEnd);
        }
        if b as usize >= self.spec.alphabet.len() {
            return Err(RunError::BadSymbol(b));
        }
        self.min_height = self.stack.len();
        self.step(Input::Sym(b))?;
        self.consumed += 1;
        self.close()
    }

    pub fn feed_all(&mut self, word: &[Sym]) -> Result<(), RunError> {
        word.iter().try_for_each(|&b| self.feed(b))
    }

    /// Consumes ⊣ and applies the final λ-closure.
    pub fn end(&mut self) -> Result<(), RunError> {
        if self.spec.mode != Mode::Endmark {
            return Err(RunError::NotEndmarked(self.spec.name.clone()));
        }
        if self.ended {
            return Err(RunError::AfterEnd);
        }
        self.min_height = self.stack.len();
        self.step(Input::End)?;
        self.ended = true;
        self.close()
    }

    fn step(&mut self, input: Input) -> Result<(), RunError> {
        let top = self.top();
        let idx = self.spec.rule_index(self.state, input, top).ok_or_else(|| RunError::Undefined {
            state: self.spec.states[self.state].clone(),
            input: self.spec.input_label(input),
            top: self.spec.stack_alphabet[top as usize],
            position: self.consumed,
        })?;
        self.apply(idx)
    }

    fn apply(&mut self, idx: usize) -> Result<(), RunError> {
        let rule = &self.spec.rules[idx];
        self.stack.pop();
        self.stack.extend(rule.push.iter().rev());
        self.min_height = self.min_height.min(self.stack.len());
        self.state = rule.next;
        self.output_len += rule.output.len() as u64;
        if self.keep_output {
            self.output.extend_from_slice(&rule.output);
        }
        if self.stack.is_empty() {
            return Err(RunError::StackExhausted { position: self.consumed });
        }
        Ok(())
    }

    fn close(&mut self) -> Result<(), RunError> {
        let q = self.spec.state_count();
        let budget = self.stack.len() * q + q;
        let mut fired = 0;
        while let Some(idx) = self.spec.rule_index(self.state, Input::Lambda, self.top()) {
            if fired == budget {
                return Err(RunError::LambdaBudgetExceeded {
                    state: self.spec.states[self.state].clone(),
                    budget,
                    position: self.consumed,
                });
            }
            fired += 1;
            self.apply(idx)?;
        }
        Ok(())
    }

    pub fn into_result(self) -> RunResult {
        RunResult {
            output: self.output,
            final_state: self.state,
            final_stack: self.stack,
            consumed: self.consumed,
        }
    }
}

/// Runs `spec` on `word` without an endmarker.
pub fn run(spec: &PdcSpec, word: &[Sym]) -> Result<RunResult, RunError> {
    let mut r = Runner::new(spec)?;
    r.feed_all(word)?;
    Ok(r.into_result())
}

/// Runs `spec` on `word·⊣`, including the closing λ-phase.
pub fn run_endmarked(spec: &PdcSpec, word: &[Sym]) -> Result<RunResult, RunError> {
    if spec.mode != Mode::Endmark {
        return Err(RunError::NotEndmarked(spec.name.clone()));
    }
    let mut r = Runner::new(spec)?;
    r.feed_all(word)?;
    r.end()?;
    Ok(r.into_result())
}

/// Output of the machine on `word` in its own mode: plain machines run on
/// `word`, endmarker machines on `word·⊣`.
pub fn compress(spec: &PdcSpec, word: &[Sym]) -> Result<RunResult, RunError> {
    match spec.mode {
        Mode::Plain => run(spec, word),
        Mode::Endmark => run_endmarked(spec, word),
    }
}

/// The λ-closed configuration after some number of input symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub state: StateId,
    /// Bottom-first.
    pub stack: Vec<StackSym>,
    pub output_len: u64,
    /// Lowest stack height on the micro-steps leading to this column,
    /// endpoints included.
    pub min_height: usize,
}

impl Column {
    pub fn height(&self) -> usize {
        self.stack.len()
    }

    pub fn top(&self) -> StackSym {
        *self.stack.last().expect("stack holds z₀")
    }
}

/// One column per prefix of the input, `|w| + 1` in total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub columns: Vec<Column>,
}

impl Diagram {
    pub fn heights(&self) -> Vec<usize> {
        self.columns.iter().map(Column::height).collect()
    }
}

pub fn run_traced(spec: &PdcSpec, word: &[Sym]) -> Result<Diagram, RunError> {
    let mut r = Runner::counting(spec)?;
    let mut columns = Vec::with_capacity(word.len() + 1);
    let snapshot = |r: &Runner| Column {
        state: r.state(),
        stack: r.stack().to_vec(),
        output_len: r.output_len(),
        min_height: r.last_min_height(),
    };
    columns.push(snapshot(&r));
    for &b in word {
        r.feed(b)?;
        columns.push(snapshot(&r));
    }
    Ok(Diagram { columns })
}

/// Stack-free summary of a column: enough to compare partial configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColumnProfile {
    pub state: StateId,
    pub top: StackSym,
    pub height: usize,
    pub min_height: usize,
}

/// Like [`run_traced`] without copying stacks.
pub fn run_profile(spec: &PdcSpec, word: &[Sym]) -> Result<Vec<ColumnProfile>, RunError> {
    let mut r = Runner::counting(spec)?;
    let mut out = Vec::with_capacity(word.len() + 1);
    let snapshot = |r: &Runner| ColumnProfile {
        state: r.state(),
        top: r.top(),
        height: r.height(),
        min_height: r.last_min_height(),
    };
    out.push(snapshot(&r));
    for &b in word {
        r.feed(b)?;
        out.push(snapshot(&r));
    }
    Ok(out)
}

/// `|C(prefix)| / (|prefix| · log₂|Σ|)` in the machine's own mode.
pub fn ratio_at(spec: &PdcSpec, prefix: &[Sym]) -> Result<CompressionRatio, RunError> {
    if prefix.is_empty() {
        return Err(RunError::EmptyInput);
    }
    let mut r = Runner::counting(spec)?;
    r.feed_all(prefix)?;
    if spec.mode == Mode::Endmark {
        r.end()?;
    }
    Ok(CompressionRatio::new(r.output_len(), prefix.len() as u64, spec.alphabet.len()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Finding {
    /// Both a λ-rule and a reading rule exist for `(state, top)`.
    Nondeterministic { state: String, top: char },
    /// A rule on z₀ whose push string does not end in z₀.
    BottomRemoved { state: String, input: String },
    /// λ-closure from a single-symbol stack did not terminate within budget.
    LambdaBudget { state: String, top: char, budget: usize },
    /// An endmarker rule in a plain-mode machine.
    EndmarkerInPlainMode { state: String, top: char },
    /// A rule used after ⊣ that grows the stack.
    GrowthAfterEndmarker { state: String, input: String, top: char },
    UnreachableState { state: String },
    /// No rule applies for some input symbol at `(state, top)`.
    NonTotal { state: String, top: char, input: String },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::Nondeterministic { state, top } => {
                write!(f, "nondeterministic: state {state} on {top:?} has both λ and reading rules")
            }
            Finding::BottomRemoved { state, input } => {
                write!(f, "bottom removed: rule ({state}, {input}, z0) does not keep z0 at the bottom")
            }
            Finding::LambdaBudget { state, top, budget } => {
                write!(f, "λ-budget: closure from ({state}, {top:?}) exceeds {budget} steps")
            }
            Finding::EndmarkerInPlainMode { state, top } => {
                write!(f, "endmarker rule ({state}, $, {top:?}) in a plain-mode machine")
            }
            Finding::GrowthAfterEndmarker { state, input, top } => {
                write!(f, "rule ({state}, {input}, {top:?}) grows the stack after the endmarker")
            }
            Finding::UnreachableState { state } => write!(f, "unreachable state {state}"),
            Finding::NonTotal { state, top, input } => {
                write!(f, "non-total: no rule for ({state}, {input}, {top:?})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<Finding>,
    pub warnings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(f, "error: {e}")?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        Ok(())
    }
}

pub fn validate_spec(spec: &PdcSpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let gamma = spec.stack_alphabet.len() as StackSym;
    let sigma = spec.alphabet.len() as Sym;
    let name = |q: StateId| spec.states[q].clone();
    let zchar = |z: StackSym| spec.stack_alphabet[z as usize];

    for q in 0..spec.state_count() {
        for z in 0..gamma {
            if spec.rule_for(q, Input::Lambda, z).is_some() {
                let reads = (0..sigma).any(|b| spec.rule_for(q, Input::Sym(b), z).is_some())
                    || spec.rule_for(q, Input::End, z).is_some();
                if reads {
                    report.errors.push(Finding::Nondeterministic { state: name(q), top: zchar(z) });
                }
            }
        }
    }

    for r in &spec.rules {
        if r.top == spec.bottom && r.push.last() != Some(&spec.bottom) {
            report.errors.push(Finding::BottomRemoved { state: name(r.state), input: spec.input_label(r.input) });
        }
        if r.input == Input::End && spec.mode == Mode::Plain {
            report.errors.push(Finding::EndmarkerInPlainMode { state: name(r.state), top: zchar(r.top) });
        }
    }

    // λ-closure from every single-symbol seed.
    let q_count = spec.state_count();
    let budget = 2 * q_count;
    for q in 0..q_count {
        for z in 0..gamma {
            if spec.rule_for(q, Input::Lambda, z).is_none() {
                continue;
            }
            let mut state = q;
            let mut stack = vec![z];
            let mut fired = 0;
            let mut exceeded = false;
            while let Some(&top) = stack.last() {
                let Some(rule) = spec.rule_for(state, Input::Lambda, top) else { break };
                if fired == budget {
                    exceeded = true;
                    break;
                }
                fired += 1;
                stack.pop();
                stack.extend(rule.push.iter().rev());
                state = rule.next;
            }
            if exceeded {
                report.errors.push(Finding::LambdaBudget { state: name(q), top: zchar(z), budget });
            }
        }
    }

    // States reachable before the endmarker, and states entered after it.
    let mut succ: Vec<Vec<(Input, StateId)>> = vec![Vec::new(); q_count];
    for r in &spec.rules {
        succ[r.state].push((r.input, r.next));
    }
    let closure = |seeds: Vec<StateId>, follow: &dyn Fn(Input) -> bool| {
        let mut seen = vec![false; q_count];
        let mut queue: VecDeque<StateId> = seeds.into_iter().collect();
        for &s in &queue {
            seen[s] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &(inp, t) in &succ[s] {
                if follow(inp) && !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    };
    let pre_end = closure(vec![spec.start], &|i| i != Input::End);
    let end_targets: Vec<StateId> = spec.rules.iter().filter(|r| r.input == Input::End).map(|r| r.next).collect();
    let post_end = closure(end_targets, &|i| i == Input::Lambda);
    let any = closure(vec![spec.start], &|_| true);

    for r in &spec.rules {
        let after_end = r.input == Input::End || (r.input == Input::Lambda && post_end[r.state]);
        if after_end && r.push.len() > 1 {
            report.errors.push(Finding::GrowthAfterEndmarker {
                state: name(r.state),
                input: spec.input_label(r.input),
                top: zchar(r.top),
            });
        }
    }

    for q in 0..q_count {
        if !any[q] {
            report.warnings.push(Finding::UnreachableState { state: name(q) });
        }
    }
    for q in (0..q_count).filter(|&q| pre_end[q]) {
        for z in 0..gamma {
            if spec.rule_for(q, Input::Lambda, z).is_some() {
                continue;
            }
            let mut missing: Vec<Input> = (0..sigma).map(Input::Sym).collect();
            if spec.mode == Mode::Endmark {
                missing.push(Input::End);
            }
            for inp in missing {
                if spec.rule_for(q, inp, z).is_none() {
                    report.warnings.push(Finding::NonTotal {
                        state: name(q),
                        top: zchar(z),
                        input: spec.input_label(inp),
                    });
                }
            }
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IlVerdict {
    /// No collision among words of length at most the given bound.
    LosslessUpTo(usize),
    /// Two distinct words with the same output and final state.
    Witness(Vec<Sym>, Vec<Sym>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlReport {
    pub verdict: IlVerdict,
    pub words_checked: usize,
}

impl IlReport {
    pub fn is_lossless(&self) -> bool {
        matches!(self.verdict, IlVerdict::LosslessUpTo(_))
    }
}

/// Exhaustive injectivity check of `w ↦ (C(w), final state)` over all words
/// of length at most `max_len`, in shortlex order. Endmarker machines are
/// checked on `w·⊣`.
pub fn il_check(spec: &PdcSpec, max_len: usize) -> Result<IlReport, RunError> {
    let sigma = spec.alphabet.len() as Sym;
    let mut seen: HashMap<(Vec<Sym>, StateId), Vec<Sym>> = HashMap::new();
    let mut level: Vec<(Vec<Sym>, Runner)> = vec![(Vec::new(), Runner::new(spec)?)];
    let mut checked = 0;
    for len in 0..=max_len {
        for (word, runner) in &level {
            let key = match spec.mode {
                Mode::Plain => (runner.output().to_vec(), runner.state()),
                Mode::Endmark => {
                    let mut done = runner.clone();
                    done.end()?;
                    (done.output().to_vec(), done.state())
                }
            };
            checked += 1;
            if let Some(prev) = seen.insert(key, word.clone()) {
                return Ok(IlReport { verdict: IlVerdict::Witness(prev, word.clone()), words_checked: checked });
            }
        }
        if len == max_len {
            break;
        }
        let mut next = Vec::with_capacity(level.len() * sigma as usize);
        for (word, runner) in &level {
            for b in 0..sigma {
                let mut r = runner.clone();
                r.feed(b)?;
                let mut w = word.clone();
                w.push(b);
                next.push((w, r));
            }
        }
        level = next;
    }
    Ok(IlReport { verdict: IlVerdict::LosslessUpTo(max_len), words_checked: checked })
}
