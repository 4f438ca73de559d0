//! Line-oriented DFA text format and DOT export.
//!
//! ```text
//! dfa v1
//! alphabet 0 1
//! states 2
//! start 0
//! accepting 0
//! trans 0 0 1
//! trans 0 1 0
//! trans 1 0 1
//! trans 1 1 1
//! ```
//!
//! One `trans <state> <symbol> <state>` line per (state, symbol) pair, in
//! state-major, symbol-index order.

use std::fmt::Write as _;

use super::{Alphabet, Dfa};
use crate::error::{Error, Result};

impl Dfa {
    /// Serializes to the `dfa v1` text format. Round-trips through
    /// [`Dfa::from_text`] for any valid automaton.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("dfa v1\n");
        out.push_str("alphabet");
        for s in self.alphabet.symbols() {
            out.push(' ');
            out.push_str(s);
        }
        out.push('\n');
        let _ = writeln!(out, "states {}", self.state_count());
        let _ = writeln!(out, "start {}", self.start);
        out.push_str("accepting");
        for s in self.accepting_states() {
            let _ = write!(out, " {s}");
        }
        out.push('\n');
        for state in 0..self.state_count() {
            for sym in 0..self.alphabet.size() {
                let _ = writeln!(
                    out,
                    "trans {state} {} {}",
                    self.alphabet.symbol(sym),
                    self.delta[state][sym]
                );
            }
        }
        out
    }

    /// Parses the `dfa v1` text format, reporting the offending line on
    /// malformed input.
    pub fn from_text(text: &str) -> Result<Dfa> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let mut next_line = move || -> Option<(usize, &str)> { lines.find(|(_, l)| !l.is_empty()) };

        let (ln, header) = next_line().ok_or_else(|| Error::parse(1, "empty input"))?;
        if header != "dfa v1" {
            return Err(Error::parse(ln, format!("expected `dfa v1`, got {header:?}")));
        }

        let (ln, alpha_line) = next_line().ok_or_else(|| Error::parse(ln, "missing alphabet"))?;
        let mut toks = alpha_line.split_whitespace();
        if toks.next() != Some("alphabet") {
            return Err(Error::parse(ln, "expected `alphabet ...`"));
        }
        let alphabet = Alphabet::new(toks.map(str::to_string))
            .map_err(|e| Error::parse(ln, e.to_string()))?;

        let (ln, states_line) = next_line().ok_or_else(|| Error::parse(ln, "missing states"))?;
        let n: usize = parse_kv(ln, states_line, "states")?;

        let (ln, start_line) = next_line().ok_or_else(|| Error::parse(ln, "missing start"))?;
        let start: usize = parse_kv(ln, start_line, "start")?;

        let (ln, acc_line) = next_line().ok_or_else(|| Error::parse(ln, "missing accepting"))?;
        let mut toks = acc_line.split_whitespace();
        if toks.next() != Some("accepting") {
            return Err(Error::parse(ln, "expected `accepting ...`"));
        }
        let mut accepting = vec![false; n];
        for t in toks {
            let idx: usize = t
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad accepting index {t:?}")))?;
            if idx >= n {
                return Err(Error::parse(ln, format!("accepting index {idx} out of range")));
            }
            accepting[idx] = true;
        }

        let i = alphabet.size();
        let mut delta = vec![vec![usize::MAX; i]; n];
        let mut seen = vec![vec![false; i]; n];
        let mut last_ln = ln;
        for _ in 0..n * i {
            let (ln, trans_line) = next_line()
                .ok_or_else(|| Error::parse(last_ln, format!("expected {} trans lines", n * i)))?;
            last_ln = ln;
            let toks: Vec<&str> = trans_line.split_whitespace().collect();
            if toks.len() != 4 || toks[0] != "trans" {
                return Err(Error::parse(ln, "expected `trans <state> <symbol> <state>`"));
            }
            let from: usize = toks[1]
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad state {:?}", toks[1])))?;
            let sym = alphabet
                .index_of(toks[2])
                .ok_or_else(|| Error::parse(ln, format!("unknown symbol {:?}", toks[2])))?;
            let to: usize = toks[3]
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad state {:?}", toks[3])))?;
            if from >= n || to >= n {
                return Err(Error::parse(ln, "transition state out of range"));
            }
            if seen[from][sym] {
                return Err(Error::parse(
                    ln,
                    format!("duplicate transition for state {from} symbol {:?}", toks[2]),
                ));
            }
            seen[from][sym] = true;
            delta[from][sym] = to;
        }
        if let Some((ln, extra)) = next_line() {
            return Err(Error::parse(ln, format!("unexpected trailing line {extra:?}")));
        }

        Dfa::new(alphabet, start, accepting, delta)
            .map_err(|e| Error::parse(last_ln, e.to_string()))
    }

    /// Graphviz export: one labeled edge per (state, symbol) pair.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  __start [shape=point];\n");
        let _ = writeln!(out, "  __start -> q{};", self.start);
        for s in 0..self.state_count() {
            let shape = if self.accepting[s] { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  q{s} [shape={shape}];");
        }
        for s in 0..self.state_count() {
            for sym in 0..self.alphabet.size() {
                let _ = writeln!(
                    out,
                    "  q{s} -> q{} [label=\"{}\"];",
                    self.delta[s][sym],
                    self.alphabet.symbol(sym)
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

fn parse_kv(ln: usize, line: &str, key: &str) -> Result<usize> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 2 || toks[0] != key {
        return Err(Error::parse(ln, format!("expected `{key} <n>`")));
    }
    toks[1]
        .parse()
        .map_err(|_| Error::parse(ln, format!("bad {key} value {:?}", toks[1])))
}
