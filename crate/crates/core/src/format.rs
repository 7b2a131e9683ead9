//! Line-based text format for pushdown compressors.
//!
//! ```text
//! # comments start with '#'
//! pdc identity
//! alphabet 01
//! stack Z
//! start q Z
//! mode plain
//! states q
//! rule q 0 Z -> q Z out 0
//! rule q 1 Z -> q Z out 1
//! ```
//!
//! Input symbols, stack symbols and output symbols are single characters.
//! In a rule the input is a symbol of the alphabet, `-` for λ or `$` for the
//! endmarker. Push strings are written top-first and `''` stands for the empty
//! string. The `states` line is optional and fixes the state order; otherwise
//! states are numbered by first appearance. The `start` line names z₀.

use std::fmt::Write as _;

use thiserror::Error;

use crate::alphabet::Alphabet;
use crate::pdc::{Input, Mode, PdcBuilder, PdcSpec, StackSym};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

const EMPTY: &str = "''";

pub fn parse_pdc(text: &str) -> Result<PdcSpec, ParseError> {
    let mut name: Option<String> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut stack: Option<Vec<char>> = None;
    let mut start: Option<(String, char, usize)> = None;
    let mut mode: Option<Mode> = None;
    let mut states: Option<Vec<String>> = None;
    let mut rules: Vec<(Vec<&str>, usize)> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let once = |seen: bool, what: &str| {
            if seen {
                Err(err(line_no, format!("duplicate `{what}` line")))
            } else {
                Ok(())
            }
        };
        match tokens[0] {
            "pdc" => {
                once(name.is_some(), "pdc")?;
                if tokens.len() != 2 {
                    return Err(err(line_no, "expected `pdc <name>`"));
                }
                name = Some(tokens[1].to_string());
            }
            "alphabet" => {
                once(alphabet.is_some(), "alphabet")?;
                if tokens.len() != 2 {
                    return Err(err(line_no, "expected `alphabet <symbols>`"));
                }
                alphabet = Some(Alphabet::new(tokens[1].chars()).map_err(|e| err(line_no, e.to_string()))?);
            }
            "stack" => {
                once(stack.is_some(), "stack")?;
                if tokens.len() != 2 {
                    return Err(err(line_no, "expected `stack <symbols>`"));
                }
                let syms: Vec<char> = tokens[1].chars().collect();
                for (j, c) in syms.iter().enumerate() {
                    if syms[..j].contains(c) {
                        return Err(err(line_no, format!("stack symbol {c:?} appears twice")));
                    }
                    if *c == '\'' {
                        return Err(err(line_no, "stack symbol ' is reserved"));
                    }
                }
                stack = Some(syms);
            }
            "start" => {
                once(start.is_some(), "start")?;
                if tokens.len() != 3 || tokens[2].chars().count() != 1 {
                    return Err(err(line_no, "expected `start <state> <stack-symbol>`"));
                }
                start = Some((tokens[1].to_string(), tokens[2].chars().next().unwrap(), line_no));
            }
            "mode" => {
                once(mode.is_some(), "mode")?;
                mode = Some(match tokens.get(1..) {
                    Some(["plain"]) => Mode::Plain,
                    Some(["endmark"]) => Mode::Endmark,
                    _ => return Err(err(line_no, "expected `mode plain` or `mode endmark`")),
                });
            }
            "states" => {
                once(states.is_some(), "states")?;
                states = Some(tokens[1..].iter().map(|s| s.to_string()).collect());
            }
            "rule" => rules.push((tokens, line_no)),
            other => return Err(err(line_no, format!("unknown directive `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| err(last_line, "missing `pdc` line"))?;
    let alphabet = alphabet.ok_or_else(|| err(last_line, "missing `alphabet` line"))?;
    let stack = stack.ok_or_else(|| err(last_line, "missing `stack` line"))?;
    let (start_state, bottom, start_line) = start.ok_or_else(|| err(last_line, "missing `start` line"))?;
    let mode = mode.ok_or_else(|| err(last_line, "missing `mode` line"))?;

    let mut b = PdcBuilder::new(name, alphabet);
    for &c in &stack {
        b.stack_symbol(c);
    }
    for st in states.iter().flatten() {
        b.state(st);
    }
    let q0 = b.state(&start_state);
    for (tokens, line_no) in &rules {
        parse_rule(&mut b, &stack, tokens, *line_no)?;
    }
    let bottom_id = stack
        .iter()
        .position(|&c| c == bottom)
        .ok_or_else(|| err(start_line, format!("bottom symbol {bottom:?} is not in the stack alphabet")))?;
    b.build(q0, bottom_id as StackSym, mode).map_err(|e| err(last_line, e.to_string()))
}

fn parse_rule(b: &mut PdcBuilder, stack: &[char], tokens: &[&str], line: usize) -> Result<(), ParseError> {
    // rule <state> <input> <top> -> <state> <push> out <output>
    if tokens.len() != 9 || tokens[4] != "->" || tokens[7] != "out" {
        return Err(err(line, "expected `rule <state> <input|-|$> <top> -> <state> <push|''> out <output|''>`"));
    }
    let stack_id = |c: char| -> Result<StackSym, ParseError> {
        stack
            .iter()
            .position(|&x| x == c)
            .map(|i| i as StackSym)
            .ok_or_else(|| err(line, format!("unknown stack symbol {c:?}")))
    };
    let input = match tokens[2] {
        "-" => Input::Lambda,
        "$" => Input::End,
        s if s.chars().count() == 1 => {
            let c = s.chars().next().unwrap();
            Input::Sym(b.alphabet().index_of(c).ok_or_else(|| err(line, format!("unknown input symbol {c:?}")))?)
        }
        s => return Err(err(line, format!("bad input symbol `{s}`"))),
    };
    if tokens[3].chars().count() != 1 {
        return Err(err(line, format!("bad stack symbol `{}`", tokens[3])));
    }
    let top = stack_id(tokens[3].chars().next().unwrap())?;
    let push: Vec<StackSym> = if tokens[6] == EMPTY {
        Vec::new()
    } else {
        tokens[6].chars().map(stack_id).collect::<Result<_, _>>()?
    };
    let output = if tokens[8] == EMPTY {
        Vec::new()
    } else {
        b.alphabet().encode(tokens[8]).map_err(|e| err(line, e.to_string()))?
    };
    let from = b.state(tokens[1]);
    let to = b.state(tokens[5]);
    b.rule(from, input, top, to, &push, &output).map_err(|e| err(line, e.to_string()))
}

/// Renders a machine in the text format; [`parse_pdc`] inverts it.
pub fn print_pdc(spec: &PdcSpec) -> String {
    let mut out = String::new();
    let stack = spec.stack_alphabet();
    let _ = writeln!(out, "pdc {}", spec.name());
    let _ = writeln!(out, "alphabet {}", spec.alphabet());
    let _ = writeln!(out, "stack {}", stack.iter().collect::<String>());
    let _ = writeln!(out, "start {} {}", spec.state_name(spec.start_state()), stack[spec.stack_bottom() as usize]);
    let mode = match spec.mode() {
        Mode::Plain => "plain",
        Mode::Endmark => "endmark",
    };
    let _ = writeln!(out, "mode {mode}");
    let _ = writeln!(out, "states {}", spec.states().join(" "));
    for r in spec.rules() {
        let input = match r.input {
            Input::Sym(b) => spec.alphabet().char_of(b).to_string(),
            Input::Lambda => "-".to_string(),
            Input::End => "$".to_string(),
        };
        let push = if r.push.is_empty() { EMPTY.to_string() } else { spec.stack_string(&r.push) };
        let output = if r.output.is_empty() { EMPTY.to_string() } else { spec.alphabet().decode(&r.output) };
        let _ = writeln!(
            out,
            "rule {} {} {} -> {} {} out {}",
            spec.state_name(r.state),
            input,
            stack[r.top as usize],
            spec.state_name(r.next),
            push,
            output
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::binary_word;
    use crate::pdc::{run, run_endmarked};

    const IDENTITY: &str = "\
# copies its input
pdc identity
alphabet 01
stack Z
start q Z
mode plain
rule q 0 Z -> q Z out 0
rule q 1 Z -> q Z out 1
";

    #[test]
    fn parses_identity() {
        let m = parse_pdc(IDENTITY).unwrap();
        assert_eq!(m.name(), "identity");
        assert_eq!(m.rules().len(), 2);
        let r = run(&m, &binary_word("0110").unwrap()).unwrap();
        assert_eq!(r.output, binary_word("0110").unwrap());
    }

    #[test]
    fn round_trip() {
        let m = parse_pdc(IDENTITY).unwrap();
        assert_eq!(parse_pdc(&print_pdc(&m)).unwrap(), m);
    }

    #[test]
    fn lambda_and_endmarker_rules() {
        let text = "\
pdc flush
alphabet 01
stack ZA
start q Z
mode endmark
rule q 0 Z -> q AZ out ''
rule q 0 A -> q AA out ''
rule q 1 Z -> q Z out 1
rule q 1 A -> q A out 1
rule q $ Z -> e Z out ''
rule q $ A -> p A out ''
rule p - A -> p '' out 0
rule p - Z -> e Z out 1
";
        let m = parse_pdc(text).unwrap();
        assert_eq!(parse_pdc(&print_pdc(&m)).unwrap(), m);
        let r = run_endmarked(&m, &binary_word("001").unwrap()).unwrap();
        assert_eq!(r.output, binary_word("1001").unwrap());
    }

    #[test]
    fn duplicate_rule_is_an_error() {
        let text = format!("{IDENTITY}rule q 0 Z -> q Z out 1\n");
        let e = parse_pdc(&text).unwrap_err();
        assert_eq!(e.line, 9);
        assert!(e.message.contains("duplicate"));
    }

    #[test]
    fn reports_missing_headers_and_bad_symbols() {
        assert!(parse_pdc("pdc x\nalphabet 01\nstack Z\nmode plain\n").unwrap_err().message.contains("start"));
        let bad = IDENTITY.replace("out 1", "out 2");
        assert!(parse_pdc(&bad).unwrap_err().message.contains("'2'"));
        let bad = IDENTITY.replace("rule q 0 Z -> q Z", "rule q 0 Y -> q Z");
        assert!(parse_pdc(&bad).is_err());
    }

    #[test]
    fn alphabet_order_fixes_symbol_indices() {
        let text = IDENTITY.replace("alphabet 01", "alphabet 10");
        let m = parse_pdc(&text).unwrap();
        assert_eq!(m.alphabet().index_of('1'), Some(0));
    }
}
