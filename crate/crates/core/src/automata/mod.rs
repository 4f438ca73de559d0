//! Deterministic finite acceptors with a total transition function, their
//! per-symbol transition matrices, and builders for the grammar families used
//! throughout the crate.

mod build;
mod io;
mod minimize;

pub use build::{build_random, build_sl, build_sp, build_tomita, sl4_benchmark, sp8_benchmark};
pub use build::FactorPattern;

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Ordered, duplicate-free list of printable symbol tokens. The position of a
/// token is the symbol index used by every other structure in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::invalid("alphabet must not be empty"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::invalid(format!(
                    "symbol {i:?} must be non-empty and whitespace-free"
                )));
            }
            if symbols[..i].contains(s) {
                return Err(Error::invalid(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The binary alphabet `0`, `1`.
    pub fn binary() -> Self {
        Alphabet::new(["0", "1"]).unwrap()
    }

    /// One single-character symbol per char of `chars`, in order.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Alphabet::new(chars.chars().map(|c| c.to_string()))
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == token)
    }

    /// True when every symbol is a single character, which selects the
    /// concatenated string rendering.
    pub fn single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Parses a rendered string into symbol indices. Single-character
    /// alphabets read one char per symbol; otherwise tokens are
    /// whitespace-separated. The empty string parses to the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Vec<u8>> {
        if text.is_empty() {
            return Ok(Vec::new());
        }
        let mut word = Vec::new();
        if self.single_char() && !text.contains(char::is_whitespace) {
            for ch in text.chars() {
                let tok = ch.to_string();
                let idx = self
                    .index_of(&tok)
                    .ok_or_else(|| Error::invalid(format!("unknown symbol {tok:?}")))?;
                word.push(idx as u8);
            }
        } else {
            for tok in text.split_whitespace() {
                let idx = self
                    .index_of(tok)
                    .ok_or_else(|| Error::invalid(format!("unknown symbol {tok:?}")))?;
                word.push(idx as u8);
            }
        }
        Ok(word)
    }

    /// Inverse of [`parse_word`](Self::parse_word).
    pub fn render_word(&self, word: &[u8]) -> String {
        let sep = if self.single_char() { "" } else { " " };
        word.iter()
            .map(|&i| self.symbols[i as usize].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }
}

/// A deterministic finite acceptor. `delta` is total: one successor per
/// (state, symbol) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    start: usize,
    accepting: Vec<bool>,
    /// delta[state][symbol index] = successor state
    delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn new(
        alphabet: Alphabet,
        start: usize,
        accepting: Vec<bool>,
        delta: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::invalid("a DFA needs at least one state"));
        }
        if accepting.len() != n {
            return Err(Error::invalid("accepting flags must cover every state"));
        }
        if start >= n {
            return Err(Error::invalid(format!("start state {start} out of range")));
        }
        for (s, row) in delta.iter().enumerate() {
            if row.len() != alphabet.size() {
                return Err(Error::invalid(format!(
                    "state {s} defines {} transitions, alphabet has {}",
                    row.len(),
                    alphabet.size()
                )));
            }
            for (i, &t) in row.iter().enumerate() {
                if t >= n {
                    return Err(Error::invalid(format!(
                        "transition ({s}, {}) targets missing state {t}",
                        alphabet.symbol(i)
                    )));
                }
            }
        }
        Ok(Dfa {
            alphabet,
            start,
            accepting,
            delta,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.state_count()).filter(|&s| self.accepting[s])
    }

    #[inline]
    pub fn step(&self, state: usize, symbol: usize) -> usize {
        self.delta[state][symbol]
    }

    /// Runs the automaton over a word of symbol indices.
    pub fn accepts_word(&self, word: &[u8]) -> bool {
        let mut state = self.start;
        for &sym in word {
            state = self.delta[state][sym as usize];
        }
        self.accepting[state]
    }

    /// Runs the automaton over a rendered string; unknown symbols are an
    /// invalid-argument error. The empty string reports the start state's
    /// acceptance.
    pub fn accepts(&self, text: &str) -> Result<bool> {
        Ok(self.accepts_word(&self.alphabet.parse_word(text)?))
    }

    /// States reachable from the start state (BFS in symbol order).
    pub fn reachable_states(&self) -> Vec<usize> {
        let mut seen = vec![false; self.state_count()];
        let mut order = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        seen[self.start] = true;
        queue.push_back(self.start);
        while let Some(s) = queue.pop_front() {
            order.push(s);
            for &t in &self.delta[s] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Drops unreachable states and renumbers the rest in BFS order from the
    /// start state.
    pub fn trim(&self) -> Dfa {
        let order = self.reachable_states();
        let mut remap = vec![usize::MAX; self.state_count()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let delta = order
            .iter()
            .map(|&old| self.delta[old].iter().map(|&t| remap[t]).collect())
            .collect();
        let accepting = order.iter().map(|&old| self.accepting[old]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            start: 0,
            accepting,
            delta,
        }
    }

    /// Number of states from which some accepting state is reachable. For a
    /// trimmed automaton this is the state count minus the rejecting sink,
    /// when one exists.
    pub fn live_state_count(&self) -> usize {
        let n = self.state_count();
        let mut live = self.accepting.clone();
        // fixed point: a state is live if any successor is
        loop {
            let mut changed = false;
            for s in 0..n {
                if !live[s] && self.delta[s].iter().any(|&t| live[t]) {
                    live[s] = true;
                    changed = true;
                }
            }
            if !changed {
                return live.iter().filter(|&&l| l).count();
            }
        }
    }

    /// Per-symbol 0/1 transition matrices and their sum. Column `j` of `T_i`
    /// carries a single 1 in row `delta(j, i)`.
    pub fn transition_matrices(&self) -> TransitionMatrices {
        let n = self.state_count();
        let mut per_symbol = Vec::with_capacity(self.alphabet.size());
        for sym in 0..self.alphabet.size() {
            let mut t = IntMatrix::zeros(n, n);
            for j in 0..n {
                t.set(self.delta[j][sym], j, 1);
            }
            per_symbol.push(t);
        }
        let mut summed = IntMatrix::zeros(n, n);
        for t in &per_symbol {
            summed = summed.add(t);
        }
        TransitionMatrices { per_symbol, summed }
    }
}

/// The per-symbol transition matrices `T_i` of a DFA together with their sum
/// `T`. Entries of `T` lie in `[0, I]` and every column of `T` sums to the
/// alphabet size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrices {
    pub per_symbol: Vec<IntMatrix>,
    pub summed: IntMatrix,
}

impl TransitionMatrices {
    pub fn alphabet_size(&self) -> usize {
        self.per_symbol.len()
    }

    pub fn state_count(&self) -> usize {
        self.summed.n_rows()
    }
}

/// Number of absorbing states: diagonal entries of the summed matrix equal to
/// the alphabet size, i.e. states that self-loop on every symbol.
pub fn absorbing_count(tm: &TransitionMatrices) -> usize {
    let i = tm.alphabet_size() as i64;
    tm.summed.diagonal().iter().filter(|&&d| d == i).count()
}
