//! Builders for the grammar families: the seven Tomita grammars, strictly
//! local / strictly piecewise avoiders, and seeded random machines. Builder
//! output is trimmed but not minimized; callers minimize.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Alphabet, Dfa};
use crate::error::{Error, Result};

/// Left / right string-boundary markers accepted by [`FactorPattern::parse`].
const LEFT_ANCHOR: char = '\u{22c9}'; // ⋉
const RIGHT_ANCHOR: char = '\u{22ca}'; // ⋊

/// A forbidden factor, optionally anchored at the start and/or end of the
/// string. Anchors are compiled into the automaton and are never alphabet
/// symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorPattern {
    pub anchor_start: bool,
    pub anchor_end: bool,
    pub factor: Vec<u8>,
}

impl FactorPattern {
    pub fn new(anchor_start: bool, anchor_end: bool, factor: Vec<u8>) -> Result<Self> {
        if factor.is_empty() {
            return Err(Error::invalid("forbidden factor must be non-empty"));
        }
        Ok(FactorPattern {
            anchor_start,
            anchor_end,
            factor,
        })
    }

    /// Parses `⋉bbb`, `aaaa`, `aaa⋊`, … against an alphabet. ASCII `^` / `$`
    /// are accepted as anchor aliases.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut rest = text.trim();
        let mut anchor_start = false;
        let mut anchor_end = false;
        if let Some(r) = rest.strip_prefix(LEFT_ANCHOR).or_else(|| rest.strip_prefix('^')) {
            anchor_start = true;
            rest = r;
        }
        if let Some(r) = rest.strip_suffix(RIGHT_ANCHOR).or_else(|| rest.strip_suffix('$')) {
            anchor_end = true;
            rest = r;
        }
        let factor = alphabet.parse_word(rest)?;
        FactorPattern::new(anchor_start, anchor_end, factor)
    }
}

/// Builds one of the seven Tomita grammars over `{0, 1}`. The constructions
/// are explicit run-tracking / parity machines; they need not be minimal.
pub fn build_tomita(k: u8) -> Result<Dfa> {
    let al = Alphabet::binary();
    let dfa = match k {
        // 1* — anything but 1 kills the string
        1 => Dfa::new(
            al,
            0,
            vec![true, false],
            vec![vec![1, 0], vec![1, 1]],
        )?,
        // (10)*
        2 => Dfa::new(
            al,
            0,
            vec![true, false, false],
            vec![vec![2, 1], vec![0, 2], vec![2, 2]],
        )?,
        // An odd run of 1s must not be followed by an odd run of 0s that is
        // itself followed by a 1. States: clean, odd-1s, even-1s, odd-1s then
        // odd-0s, odd-1s then even-0s, dead.
        3 => Dfa::new(
            al,
            0,
            vec![true, true, true, true, true, false],
            vec![
                vec![0, 1], // clean
                vec![3, 2], // odd run of 1s
                vec![0, 1], // even run of 1s
                vec![4, 5], // odd 1s then odd 0s: another 1 is fatal
                vec![3, 1], // odd 1s then even 0s: constraint discharged
                vec![5, 5],
            ],
        )?,
        // no "000" substring: count trailing zeros
        4 => Dfa::new(
            al,
            0,
            vec![true, true, true, false],
            vec![vec![1, 0], vec![2, 0], vec![3, 0], vec![3, 3]],
        )?,
        // even number of 0s and even number of 1s: product of two parities,
        // state = 2 * parity(#0) + parity(#1)
        5 => {
            let delta = (0..4usize)
                .map(|s| {
                    let (p0, p1) = (s >> 1, s & 1);
                    vec![((1 - p0) << 1) | p1, (p0 << 1) | (1 - p1)]
                })
                .collect();
            Dfa::new(al, 0, vec![true, false, false, false], delta)?
        }
        // #0 - #1 divisible by 3: a 0 adds one, a 1 subtracts one (mod 3)
        6 => {
            let delta = (0..3usize).map(|d| vec![(d + 1) % 3, (d + 2) % 3]).collect();
            Dfa::new(al, 0, vec![true, false, false], delta)?
        }
        // 0*1*0*1*
        7 => Dfa::new(
            al,
            0,
            vec![true, true, true, true, false],
            vec![
                vec![0, 1],
                vec![2, 1],
                vec![2, 3],
                vec![4, 3],
                vec![4, 4],
            ],
        )?,
        _ => {
            return Err(Error::invalid(format!(
                "Tomita grammar id must be in 1..=7, got {k}"
            )))
        }
    };
    Ok(dfa)
}

/// One constraint automaton per forbidden factor; the returned DFA is their
/// reachable product.
pub fn build_sl(patterns: &[FactorPattern], alphabet: &Alphabet) -> Result<Dfa> {
    if patterns.is_empty() {
        return Err(Error::invalid("need at least one forbidden factor"));
    }
    let machines = patterns
        .iter()
        .map(|p| factor_avoider(p, alphabet))
        .collect::<Result<Vec<_>>>()?;
    Ok(product(&machines, alphabet))
}

/// DFA rejecting exactly the strings that contain one of the listed
/// subsequences (not necessarily contiguous). Built as a progress automaton:
/// the state is the longest matched prefix of each subsequence.
pub fn build_sp(subsequences: &[Vec<u8>], alphabet: &Alphabet) -> Result<Dfa> {
    if subsequences.is_empty() {
        return Err(Error::invalid("need at least one forbidden subsequence"));
    }
    let mut machines = Vec::with_capacity(subsequences.len());
    for w in subsequences {
        if w.is_empty() {
            return Err(Error::invalid("forbidden subsequence must be non-empty"));
        }
        check_symbols(w, alphabet)?;
        let m = w.len();
        // states 0..=m, state m is the rejecting sink
        let mut delta = Vec::with_capacity(m + 1);
        for i in 0..m {
            let row = (0..alphabet.size())
                .map(|c| if c as u8 == w[i] { i + 1 } else { i })
                .collect();
            delta.push(row);
        }
        delta.push(vec![m; alphabet.size()]);
        let mut accepting = vec![true; m + 1];
        accepting[m] = false;
        machines.push(Machine { delta, accepting });
    }
    Ok(product(&machines, alphabet))
}

/// Seeded random DFA: uniform transitions, each state accepting independently
/// with probability `accept_fraction`. Deterministic in the seed; returned
/// after trim, so the state count may come out below `n_states`.
pub fn build_random(
    n_states: usize,
    alphabet: &Alphabet,
    accept_fraction: f64,
    seed: u64,
) -> Result<Dfa> {
    if n_states == 0 {
        return Err(Error::invalid("n_states must be at least 1"));
    }
    if !(accept_fraction > 0.0 && accept_fraction <= 1.0) {
        return Err(Error::invalid(
            "accept_fraction must lie in (0, 1] (1 is the accept-everything boundary)",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = (0..n_states)
        .map(|_| {
            (0..alphabet.size())
                .map(|_| rng.gen_range(0..n_states))
                .collect()
        })
        .collect();
    let accepting = (0..n_states)
        .map(|_| rng.gen::<f64>() < accept_fraction)
        .collect();
    Ok(Dfa::new(alphabet.clone(), 0, accepting, delta)?.trim())
}

/// The strictly-local benchmark grammar: forbidden factors ⋉bbb, aaaa, bbbb,
/// aaa⋊ over `{a, b, c, d}`.
pub fn sl4_benchmark() -> (Vec<FactorPattern>, Alphabet) {
    let al = Alphabet::from_chars("abcd").unwrap();
    let pats = ["\u{22c9}bbb", "aaaa", "bbbb", "aaa\u{22ca}"]
        .iter()
        .map(|p| FactorPattern::parse(p, &al).unwrap())
        .collect();
    (pats, al)
}

/// The strictly-piecewise benchmark grammar: forbidden subsequence abbaabba
/// over `{a, b, c, d}`.
pub fn sp8_benchmark() -> (Vec<Vec<u8>>, Alphabet) {
    let al = Alphabet::from_chars("abcd").unwrap();
    let w = al.parse_word("abbaabba").unwrap();
    (vec![w], al)
}

struct Machine {
    delta: Vec<Vec<usize>>,
    accepting: Vec<bool>,
}

fn check_symbols(word: &[u8], alphabet: &Alphabet) -> Result<()> {
    for &s in word {
        if (s as usize) >= alphabet.size() {
            return Err(Error::invalid(format!(
                "symbol index {s} outside alphabet of size {}",
                alphabet.size()
            )));
        }
    }
    Ok(())
}

/// Constraint automaton for a single anchored factor. The accepting states
/// are exactly those where the factor has not (yet irrevocably) occurred.
fn factor_avoider(pattern: &FactorPattern, alphabet: &Alphabet) -> Result<Machine> {
    check_symbols(&pattern.factor, alphabet)?;
    let w = &pattern.factor;
    let m = w.len();
    let i = alphabet.size();

    let machine = match (pattern.anchor_start, pattern.anchor_end) {
        (false, false) => {
            // substring matcher with an absorbing fail state at m
            let mut delta = Vec::with_capacity(m + 1);
            for st in 0..m {
                let row = (0..i).map(|c| kmp_step(w, st, c as u8)).collect();
                delta.push(row);
            }
            delta.push(vec![m; i]);
            let mut accepting = vec![true; m + 1];
            accepting[m] = false;
            Machine { delta, accepting }
        }
        (true, false) => {
            // exact prefix progress; divergence is permanently safe
            // states: 0..m-1 progress, m dead, m+1 safe
            let dead = m;
            let safe = m + 1;
            let mut delta = Vec::with_capacity(m + 2);
            for st in 0..m {
                let row = (0..i)
                    .map(|c| {
                        if c as u8 == w[st] {
                            if st + 1 == m {
                                dead
                            } else {
                                st + 1
                            }
                        } else {
                            safe
                        }
                    })
                    .collect();
                delta.push(row);
            }
            delta.push(vec![dead; i]);
            delta.push(vec![safe; i]);
            let mut accepting = vec![true; m + 2];
            accepting[dead] = false;
            Machine { delta, accepting }
        }
        (false, true) => {
            // suffix matcher: plain KMP state, rejecting only while the full
            // factor is the current suffix
            let mut delta = Vec::with_capacity(m + 1);
            for st in 0..=m {
                let row = (0..i).map(|c| kmp_step(w, st, c as u8)).collect();
                delta.push(row);
            }
            let mut accepting = vec![true; m + 1];
            accepting[m] = false;
            Machine { delta, accepting }
        }
        (true, true) => {
            // the factor is forbidden only as the entire string
            let safe = m + 1;
            let mut delta = Vec::with_capacity(m + 2);
            for st in 0..m {
                let row = (0..i)
                    .map(|c| if c as u8 == w[st] { st + 1 } else { safe })
                    .collect();
                delta.push(row);
            }
            delta.push(vec![safe; i]); // extending past the exact factor is fine
            delta.push(vec![safe; i]);
            let mut accepting = vec![true; m + 2];
            accepting[m] = false;
            Machine { delta, accepting }
        }
    };
    Ok(machine)
}

/// Longest k such that w[..k] is a suffix of w[..state] followed by `c`.
/// Factors are short, so the quadratic scan is fine.
fn kmp_step(w: &[u8], state: usize, c: u8) -> usize {
    let mut cur: Vec<u8> = w[..state].to_vec();
    cur.push(c);
    for k in (0..=w.len().min(cur.len())).rev() {
        if cur.ends_with(&w[..k]) {
            return k;
        }
    }
    0
}

/// Reachable product of constraint machines; accepts where every component
/// accepts.
fn product(machines: &[Machine], alphabet: &Alphabet) -> Dfa {
    let i = alphabet.size();
    let start: Vec<usize> = machines.iter().map(|_| 0).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut queue = std::collections::VecDeque::from([start]);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut accepting: Vec<bool> = Vec::new();

    while let Some(tuple) = queue.pop_front() {
        accepting.push(
            machines
                .iter()
                .zip(&tuple)
                .all(|(m, &s)| m.accepting[s]),
        );
        let mut row = Vec::with_capacity(i);
        for c in 0..i {
            let next: Vec<usize> = machines
                .iter()
                .zip(&tuple)
                .map(|(m, &s)| m.delta[s][c])
                .collect();
            let next_len = index.len();
            let id = *index.entry(next.clone()).or_insert_with(|| {
                queue.push_back(next);
                next_len
            });
            row.push(id);
        }
        delta.push(row);
    }
    Dfa::new(alphabet.clone(), 0, accepting, delta)
        .expect("product construction yields a valid DFA")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn accepts(dfa: &Dfa, s: &str) -> bool {
        dfa.accepts(s).unwrap()
    }

    #[test]
    fn tomita_1_membership() {
        let d = build_tomita(1).unwrap();
        assert!(accepts(&d, ""));
        assert!(accepts(&d, "111"));
        assert!(!accepts(&d, "10"));
    }

    #[test]
    fn tomita_out_of_range() {
        assert!(build_tomita(0).is_err());
        assert!(build_tomita(8).is_err());
    }

    #[test]
    fn tomita_4_no_000() {
        let d = build_tomita(4).unwrap();
        assert!(!accepts(&d, "1000"));
        assert!(accepts(&d, "00100"));
        assert!(!accepts(&d, "000"));
    }

    #[test]
    fn tomita_5_parities() {
        let d = build_tomita(5).unwrap();
        assert!(accepts(&d, ""));
        assert!(accepts(&d, "0011"));
        assert!(!accepts(&d, "001"));
        // brute check against counting on all strings of length 6
        for v in 0..(1u32 << 6) {
            let s: String = (0..6).map(|b| if v >> b & 1 == 1 { '1' } else { '0' }).collect();
            let zeros = s.chars().filter(|&c| c == '0').count();
            let ones = 6 - zeros;
            assert_eq!(accepts(&d, &s), zeros % 2 == 0 && ones % 2 == 0);
        }
    }

    #[test]
    fn tomita_3_brute_force_against_run_semantics() {
        // reject iff some maximal odd run of 1s is followed by an odd run of
        // 0s that is itself followed by a 1
        fn reference(s: &str) -> bool {
            let b: Vec<char> = s.chars().collect();
            let n = b.len();
            let mut i = 0;
            while i < n {
                if b[i] == '1' {
                    let run_start = i;
                    while i < n && b[i] == '1' {
                        i += 1;
                    }
                    if (i - run_start) % 2 == 1 {
                        let zero_start = i;
                        let mut j = i;
                        while j < n && b[j] == '0' {
                            j += 1;
                        }
                        if (j - zero_start) % 2 == 1 && j < n {
                            return false;
                        }
                    }
                } else {
                    i += 1;
                }
            }
            true
        }
        let d = build_tomita(3).unwrap();
        for len in 0..=10usize {
            for v in 0..(1u32 << len) {
                let s: String = (0..len)
                    .map(|b| if v >> b & 1 == 1 { '1' } else { '0' })
                    .collect();
                assert_eq!(accepts(&d, &s), reference(&s), "string {s:?}");
            }
        }
    }

    #[test]
    fn sl_unanchored_substring() {
        let al = Alphabet::from_chars("ab").unwrap();
        let pat = FactorPattern::parse("aa", &al).unwrap();
        let d = build_sl(&[pat], &al).unwrap();
        assert!(!accepts(&d, "baab"));
        assert!(accepts(&d, "abab"));
    }

    #[test]
    fn sl4_anchoring() {
        let (pats, al) = sl4_benchmark();
        let d = build_sl(&pats, &al).unwrap();
        assert!(!accepts(&d, "bbbc")); // start-anchored ⋉bbb
        assert!(accepts(&d, "cbbbc")); // same factor away from the start is fine
        assert!(!accepts(&d, "caaa")); // end-anchored aaa⋊
        assert!(accepts(&d, "caaac"));
        assert!(!accepts(&d, "cbbbbc")); // bbbb anywhere
        assert!(!accepts(&d, "aaaa"));
    }

    #[test]
    fn sl_rejects_foreign_symbols() {
        let al = Alphabet::from_chars("ab").unwrap();
        assert!(FactorPattern::parse("ax", &al).is_err());
    }

    #[test]
    fn sp_subsequence_semantics() {
        let al = Alphabet::from_chars("ab").unwrap();
        let w = al.parse_word("ab").unwrap();
        let d = build_sp(&[w], &al).unwrap();
        assert!(!accepts(&d, "aab"));
        assert!(accepts(&d, "ba"));
        assert!(accepts(&d, "bbaa"));
    }

    #[test]
    fn sp8_short_strings_always_accepted() {
        let (ws, al) = sp8_benchmark();
        let d = build_sp(&ws, &al).unwrap();
        // length 7 cannot contain a length-8 subsequence
        assert!(accepts(&d, "abbaabb"));
        assert!(!accepts(&d, "abbaabba"));
        assert!(!accepts(&d, "acbcbcacacbcbca")); // abbaabba spread out
    }

    #[test]
    fn random_dfa_is_seed_deterministic() {
        let al = Alphabet::from_chars("abcd").unwrap();
        let a = build_random(12, &al, 0.5, 7).unwrap();
        let b = build_random(12, &al, 0.5, 7).unwrap();
        assert_eq!(a, b);
        let c = build_random(12, &al, 0.5, 8).unwrap();
        assert_ne!(a, c); // overwhelmingly likely, and pinned by the seed
    }

    #[test]
    fn random_dfa_accept_everything_boundary() {
        let al = Alphabet::binary();
        let d = build_random(1, &al, 1.0, 3).unwrap();
        assert_eq!(d.state_count(), 1);
        assert!(accepts(&d, ""));
        assert!(accepts(&d, "0110"));
    }

    #[test]
    fn random_dfa_validates_arguments() {
        let al = Alphabet::binary();
        assert!(build_random(0, &al, 0.5, 1).is_err());
        assert!(build_random(3, &al, 0.0, 1).is_err());
        assert!(build_random(3, &al, 1.5, 1).is_err());
    }
}
