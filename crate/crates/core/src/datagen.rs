//! Labeled string datasets: per-length uniform sampling (with optional class
//! balancing driven by exact path counts), the three experiment protocols,
//! and a line-oriented dataset file format.

use std::collections::HashSet;
use std::path::Path;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automata::{Alphabet, Dfa};
use crate::error::{Error, Result};

/// Provenance carried alongside a dataset. The file format persists only the
/// DFA reference; the rest is runtime metadata.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetMeta {
    pub source: String,
    pub split: String,
    pub seed: u64,
    pub length_profile: String,
    pub balanced: bool,
    /// Path recorded on the `dfa` header line; None writes `-`.
    pub dfa_ref: Option<String>,
}

/// Strings over an alphabet with binary labels. Items are kept in canonical
/// order (by length, then lexicographically) and are duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDataset {
    pub alphabet: Alphabet,
    pub items: Vec<(Vec<u8>, bool)>,
    pub meta: DatasetMeta,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.items.iter().filter(|(_, l)| *l).count()
    }

    fn canonicalize(&mut self) {
        self.items
            .sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        self.items.dedup_by(|a, b| a.0 == b.0);
    }
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 finalizer over seed xor salted golden ratio
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// acc[t][s] = number of length-t completions from state s that end in an
/// accepting state. Drives balanced sampling and pruned enumeration.
fn suffix_counts(dfa: &Dfa, max_len: usize) -> Vec<Vec<BigUint>> {
    let n = dfa.state_count();
    let i = dfa.alphabet().size();
    let mut acc = Vec::with_capacity(max_len + 1);
    acc.push(
        (0..n)
            .map(|s| BigUint::from(u32::from(dfa.is_accepting(s))))
            .collect::<Vec<_>>(),
    );
    for t in 1..=max_len {
        let prev = &acc[t - 1];
        let row = (0..n)
            .map(|s| (0..i).map(|sym| prev[dfa.step(s, sym)].clone()).sum())
            .collect();
        acc.push(row);
    }
    acc
}

/// All length-`len` words with the requested label, lexicographic, up to
/// `limit`. DFS pruned by the suffix counts, so cost is proportional to the
/// output, not to I^len.
fn enumerate_label(
    dfa: &Dfa,
    len: usize,
    want: bool,
    limit: usize,
    acc: &[Vec<BigUint>],
) -> Vec<Vec<u8>> {
    let i = dfa.alphabet().size();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(len);
    fn remaining(acc: &[Vec<BigUint>], want: bool, rem: usize, state: usize, i: usize) -> BigUint {
        if want {
            acc[rem][state].clone()
        } else {
            BigUint::from(i).pow(rem as u32) - &acc[rem][state]
        }
    }
    fn dfs(
        dfa: &Dfa,
        state: usize,
        rem: usize,
        want: bool,
        limit: usize,
        acc: &[Vec<BigUint>],
        word: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
        i: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if rem == 0 {
            if dfa.is_accepting(state) == want {
                out.push(word.clone());
            }
            return;
        }
        for sym in 0..i {
            let next = dfa.step(state, sym);
            if remaining(acc, want, rem - 1, next, i).is_zero() {
                continue;
            }
            word.push(sym as u8);
            dfs(dfa, next, rem - 1, want, limit, acc, word, out, i);
            word.pop();
            if out.len() >= limit {
                return;
            }
        }
    }
    dfs(dfa, dfa.start(), len, want, limit, acc, &mut word, &mut out, i);
    out
}

/// One uniform draw among the length-`len` words with the requested label,
/// via a count-weighted walk.
fn sample_label(
    dfa: &Dfa,
    len: usize,
    want: bool,
    acc: &[Vec<BigUint>],
    rng: &mut ChaCha8Rng,
) -> Vec<u8> {
    let i = dfa.alphabet().size();
    let count_from = |rem: usize, state: usize| -> BigUint {
        if want {
            acc[rem][state].clone()
        } else {
            BigUint::from(i).pow(rem as u32) - &acc[rem][state]
        }
    };
    let mut word = Vec::with_capacity(len);
    let mut state = dfa.start();
    for pos in 0..len {
        let rem = len - pos - 1;
        let weights: Vec<BigUint> = (0..i).map(|sym| count_from(rem, dfa.step(state, sym))).collect();
        let total: BigUint = weights.iter().sum();
        debug_assert!(!total.is_zero(), "walk entered a label-dead region");
        let mut draw = rng.gen_biguint_below(&total);
        let mut chosen = i - 1;
        for (sym, w) in weights.iter().enumerate() {
            if &draw < w {
                chosen = sym;
                break;
            }
            draw -= w;
        }
        word.push(chosen as u8);
        state = dfa.step(state, chosen as u8 as usize);
    }
    word
}

fn uniform_word(len: usize, i: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    (0..len).map(|_| rng.gen_range(0..i) as u8).collect()
}

/// When the per-label population is at most this multiple of the request,
/// enumerate and shuffle instead of rejection-sampling (avoids coupon-collector
/// stalls near exhaustion).
const ENUMERATE_SLACK: usize = 4;

/// Draws up to `per_length_cap` distinct strings for every requested length,
/// uniformly without replacement. With `balance` set, up to cap/2 per label
/// where the language permits, padding from the other label when one side
/// runs out. Deterministic in `seed`; output in canonical order.
pub fn sample_split(
    dfa: &Dfa,
    lengths: &[usize],
    per_length_cap: usize,
    balance: bool,
    seed: u64,
) -> Result<LabeledDataset> {
    if per_length_cap == 0 {
        return Err(Error::invalid("per-length cap must be at least 1"));
    }
    let i = dfa.alphabet().size();
    let max_len = lengths.iter().copied().max().unwrap_or(0);
    let acc = suffix_counts(dfa, max_len);
    let mut items: Vec<(Vec<u8>, bool)> = Vec::new();

    for &len in lengths {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, len as u64));
        let total = BigUint::from(i).pow(len as u32);
        let cap_big = BigUint::from(per_length_cap);

        if total <= cap_big {
            // everything fits: take the whole length slice
            for want in [true, false] {
                for w in enumerate_label(dfa, len, want, usize::MAX, &acc) {
                    items.push((w, want));
                }
            }
            continue;
        }

        let m_p = acc[len][dfa.start()].clone();
        let m_n = &total - &m_p;
        let want_counts: Vec<(bool, BigUint, usize)> = if balance {
            let pos_target = per_length_cap / 2;
            let take_pos = m_p.to_usize().map_or(pos_target, |a| a.min(pos_target));
            let neg_target = per_length_cap - take_pos;
            let take_neg = m_n.to_usize().map_or(neg_target, |a| a.min(neg_target));
            // pad positives back up if negatives ran out
            let take_pos = if take_pos + take_neg < per_length_cap {
                let want = per_length_cap - take_neg;
                m_p.to_usize().map_or(want, |a| a.min(want))
            } else {
                take_pos
            };
            vec![(true, m_p, take_pos), (false, m_n, take_neg)]
        } else {
            // one uniform draw over all strings: split the cap by sampling
            let mut pos = 0usize;
            for _ in 0..per_length_cap {
                let r = rng.gen_biguint_below(&total);
                if r < m_p {
                    pos += 1;
                }
            }
            let take_pos = m_p.to_usize().map_or(pos, |a| a.min(pos));
            let want_neg = per_length_cap - take_pos;
            let take_neg = m_n.to_usize().map_or(want_neg, |a| a.min(want_neg));
            vec![(true, m_p, take_pos), (false, m_n, take_neg)]
        };

        for (want, avail, take) in want_counts {
            if take == 0 {
                continue;
            }
            let enumerable = avail
                .to_usize()
                .is_some_and(|a| a <= take.saturating_mul(ENUMERATE_SLACK));
            if enumerable {
                let mut all = enumerate_label(dfa, len, want, usize::MAX, &acc);
                shuffle(&mut all, &mut rng);
                for w in all.into_iter().take(take) {
                    items.push((w, want));
                }
            } else {
                let mut seen: HashSet<Vec<u8>> = HashSet::new();
                while seen.len() < take {
                    let w = sample_label(dfa, len, want, &acc, &mut rng);
                    seen.insert(w);
                }
                for w in seen {
                    items.push((w, want));
                }
            }
        }
    }

    let mut ds = LabeledDataset {
        alphabet: dfa.alphabet().clone(),
        items,
        meta: DatasetMeta {
            source: String::new(),
            split: String::new(),
            seed,
            length_profile: format!("{lengths:?}"),
            balanced: balance,
            dfa_ref: None,
        },
    };
    ds.canonicalize();
    Ok(ds)
}

fn shuffle<T>(v: &mut [T], rng: &mut ChaCha8Rng) {
    for idx in (1..v.len()).rev() {
        let j = rng.gen_range(0..=idx);
        v.swap(idx, j);
    }
}

/// Sampling protocol for the Tomita experiments: balanced training strings of
/// lengths {0..13, 16, 19, 22}, uniform test strings of lengths {1, 4, ...,
/// 28} capped at 1000 per length, train/test overlap removed from test.
pub fn tomita_protocol(dfa: &Dfa, seed: u64) -> Result<(LabeledDataset, LabeledDataset)> {
    let train_lengths: Vec<usize> = (0..=13).chain([16, 19, 22]).collect();
    let test_lengths: Vec<usize> = (1..=28).step_by(3).collect();

    let mut train = sample_split(dfa, &train_lengths, 1000, true, mix_seed(seed, 1))?;
    let mut test = sample_split(dfa, &test_lengths, 1000, false, mix_seed(seed, 2))?;

    let train_words: HashSet<&Vec<u8>> = train.items.iter().map(|(w, _)| w).collect();
    test.items.retain(|(w, _)| !train_words.contains(w));

    train.meta.split = "train".into();
    test.meta.split = "test".into();
    train.meta.seed = seed;
    test.meta.seed = seed;
    Ok((train, test))
}

/// Sampling protocol for the SL/SP experiments: a 100k training set of
/// lengths 1..=25 (10k under `desk_scale`), and two 2000-string test sets
/// with lengths 1..=25 (T-1) and 26..=50 (T-2), disjoint from train.
pub fn slsp_protocol(
    dfa: &Dfa,
    seed: u64,
    desk_scale: bool,
) -> Result<(LabeledDataset, LabeledDataset, LabeledDataset)> {
    let train_size = if desk_scale { 10_000 } else { 100_000 };
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 3));
    let i = dfa.alphabet().size();

    let mut draw_block = |size: usize,
                          lo: usize,
                          hi: usize,
                          exclude: &HashSet<Vec<u8>>|
     -> Result<HashSet<Vec<u8>>> {
        let mut words: HashSet<Vec<u8>> = HashSet::new();
        let mut attempts = 0usize;
        let budget = size.saturating_mul(200);
        while words.len() < size {
            attempts += 1;
            if attempts > budget {
                return Err(Error::invalid(format!(
                    "could not draw {size} distinct strings of lengths {lo}..={hi}"
                )));
            }
            let len = rng.gen_range(lo..=hi);
            let w = uniform_word(len, i, &mut rng);
            if !exclude.contains(&w) {
                words.insert(w);
            }
        }
        Ok(words)
    };

    let train_words = draw_block(train_size, 1, 25, &HashSet::new())?;
    let t1_words = draw_block(2000, 1, 25, &train_words)?;
    let t2_words = draw_block(2000, 26, 50, &HashSet::new())?;

    let build = |words: HashSet<Vec<u8>>, split: &str, profile: &str| {
        let items = words
            .into_iter()
            .map(|w| {
                let label = dfa.accepts_word(&w);
                (w, label)
            })
            .collect();
        let mut ds = LabeledDataset {
            alphabet: dfa.alphabet().clone(),
            items,
            meta: DatasetMeta {
                source: String::new(),
                split: split.into(),
                seed,
                length_profile: profile.into(),
                balanced: false,
                dfa_ref: None,
            },
        };
        ds.canonicalize();
        ds
    };
    Ok((
        build(train_words, "train", "uniform 1..=25"),
        build(t1_words, "t1", "uniform 1..=25"),
        build(t2_words, "t2", "uniform 26..=50"),
    ))
}

/// Target-surrogate protocol with controllable sparsity: a pool scaled
/// linearly by `sparsity` (20000 at full), half live-biased walks over the
/// DFA graph and half uniform negatives, split 8:2 into train/test.
pub fn sparse_protocol(
    dfa: &Dfa,
    sparsity: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    const ALLOWED: [f64; 4] = [0.125, 0.25, 0.5, 1.0];
    if !ALLOWED.iter().any(|&s| (s - sparsity).abs() < 1e-12) {
        return Err(Error::invalid(format!(
            "sparsity must be one of {ALLOWED:?}, got {sparsity}"
        )));
    }
    let pool_size = (20_000.0 * sparsity).round() as usize;
    let i = dfa.alphabet().size();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 4));

    // live[s]: some accepting state is reachable from s
    let n = dfa.state_count();
    let mut live = vec![false; n];
    for s in 0..n {
        live[s] = dfa.is_accepting(s);
    }
    loop {
        let mut changed = false;
        for s in 0..n {
            if !live[s] && (0..i).any(|sym| live[dfa.step(s, sym)]) {
                live[s] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut pool: HashSet<Vec<u8>> = HashSet::new();
    let mut items: Vec<(Vec<u8>, bool)> = Vec::new();
    let walk_target = pool_size / 2;
    let mut attempts = 0usize;
    while items.len() < walk_target && attempts < walk_target * 100 {
        attempts += 1;
        let len = rng.gen_range(1..=30);
        let mut w = Vec::with_capacity(len);
        let mut state = dfa.start();
        for _ in 0..len {
            let live_syms: Vec<usize> = (0..i).filter(|&sym| live[dfa.step(state, sym)]).collect();
            let sym = if live_syms.is_empty() {
                rng.gen_range(0..i)
            } else {
                live_syms[rng.gen_range(0..live_syms.len())]
            };
            w.push(sym as u8);
            state = dfa.step(state, sym);
        }
        if pool.insert(w.clone()) {
            let label = dfa.accepts_word(&w);
            items.push((w, label));
        }
    }
    let mut attempts = 0usize;
    while items.len() < pool_size && attempts < pool_size * 100 {
        attempts += 1;
        let len = rng.gen_range(1..=30);
        let w = uniform_word(len, i, &mut rng);
        if !dfa.accepts_word(&w) && pool.insert(w.clone()) {
            items.push((w, false));
        }
    }

    shuffle(&mut items, &mut rng);
    let train_len = (items.len() * 8).div_ceil(10);
    let test_items = items.split_off(train_len);

    let mk = |items: Vec<(Vec<u8>, bool)>, split: &str| {
        let mut ds = LabeledDataset {
            alphabet: dfa.alphabet().clone(),
            items,
            meta: DatasetMeta {
                source: String::new(),
                split: split.into(),
                seed,
                length_profile: "walks <=30".into(),
                balanced: false,
                dfa_ref: None,
            },
        };
        ds.canonicalize();
        ds
    };
    Ok((mk(items, "train"), mk(test_items, "test")))
}

/// Writes the `dataset v1` format: header (version, alphabet, DFA reference),
/// then one `<label>\t<string>` row per item, with `ε` for the empty string.
pub fn write_dataset(ds: &LabeledDataset, path: &Path) -> Result<()> {
    let mut out = String::from("dataset v1\n");
    out.push_str("alphabet");
    for s in ds.alphabet.symbols() {
        out.push(' ');
        out.push_str(s);
    }
    out.push('\n');
    out.push_str("dfa ");
    out.push_str(ds.meta.dfa_ref.as_deref().unwrap_or("-"));
    out.push('\n');
    for (w, label) in &ds.items {
        let rendered = if w.is_empty() {
            "\u{03b5}".to_string()
        } else {
            ds.alphabet.render_word(w)
        };
        out.push_str(if *label { "1\t" } else { "0\t" });
        out.push_str(&rendered);
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads the `dataset v1` format back; parse failures name the line.
pub fn read_dataset(path: &Path) -> Result<LabeledDataset> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    if header.trim() != "dataset v1" {
        return Err(Error::parse(ln + 1, "expected `dataset v1`"));
    }
    let (ln, alpha) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing alphabet line"))?;
    let mut toks = alpha.split_whitespace();
    if toks.next() != Some("alphabet") {
        return Err(Error::parse(ln + 1, "expected `alphabet ...`"));
    }
    let alphabet = Alphabet::new(toks.map(str::to_string))
        .map_err(|e| Error::parse(ln + 1, e.to_string()))?;
    let (ln, dfa_line) = lines
        .next()
        .ok_or_else(|| Error::parse(3, "missing dfa line"))?;
    let dfa_ref = match dfa_line.strip_prefix("dfa") {
        Some(rest) => {
            let rest = rest.trim();
            if rest == "-" || rest.is_empty() {
                None
            } else {
                Some(rest.to_string())
            }
        }
        None => return Err(Error::parse(ln + 1, "expected `dfa <path or ->`")),
    };

    let mut items = Vec::new();
    for (idx, line) in lines {
        let ln = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (label_s, word_s) = line
            .split_once('\t')
            .ok_or_else(|| Error::parse(ln, "expected `<0|1>\\t<string>`"))?;
        let label = match label_s.trim() {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(ln, format!("bad label {other:?}"))),
        };
        let word_s = word_s.trim();
        let word = if word_s == "\u{03b5}" {
            Vec::new()
        } else {
            alphabet
                .parse_word(word_s)
                .map_err(|e| Error::parse(ln, e.to_string()))?
        };
        items.push((word, label));
    }
    Ok(LabeledDataset {
        alphabet,
        items,
        meta: DatasetMeta {
            dfa_ref,
            ..DatasetMeta::default()
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{build_tomita, sl4_benchmark};
    use crate::complexity::count_accepted;

    #[test]
    fn tomita1_len5_takes_all_strings() {
        let d = build_tomita(1).unwrap();
        let ds = sample_split(&d, &[5], 1000, true, 9).unwrap();
        assert_eq!(ds.len(), 32);
        assert_eq!(ds.positives(), 1);
    }

    #[test]
    fn empty_string_row() {
        let d = build_tomita(5).unwrap();
        let ds = sample_split(&d, &[0], 1, true, 0).unwrap();
        assert_eq!(ds.items, vec![(vec![], true)]);
    }

    #[test]
    fn balanced_split_pads_from_majority() {
        // Tomita-1 at length 10 has exactly one positive among 1024 strings
        let d = build_tomita(1).unwrap();
        let ds = sample_split(&d, &[10], 100, true, 5).unwrap();
        assert_eq!(ds.len(), 100);
        assert_eq!(ds.positives(), 1);
        // Tomita-5 at length 10 is half positive: full 50/50
        let d5 = build_tomita(5).unwrap();
        let ds5 = sample_split(&d5, &[10], 100, true, 5).unwrap();
        assert_eq!(ds5.len(), 100);
        assert_eq!(ds5.positives(), 50);
    }

    #[test]
    fn labels_are_sound_and_runs_deterministic() {
        let (pats, al) = sl4_benchmark();
        let d = crate::automata::build_sl(&pats, &al).unwrap();
        let a = sample_split(&d, &[3, 7, 11], 200, false, 42).unwrap();
        let b = sample_split(&d, &[3, 7, 11], 200, false, 42).unwrap();
        assert_eq!(a, b);
        for (w, label) in &a.items {
            assert_eq!(d.accepts_word(w), *label);
        }
        let c = sample_split(&d, &[3, 7, 11], 200, false, 43).unwrap();
        assert_ne!(a.items, c.items);
    }

    #[test]
    fn unbalanced_positive_rate_tracks_language_density() {
        // L large enough that 2^L >> cap; mean positive fraction over 10
        // seeds within 3 standard errors of m_p / 2^L
        let d = build_tomita(3).unwrap();
        let len = 14usize;
        let cap = 500usize;
        let m_p = count_accepted(&d, len);
        let r = m_p.to_f64().unwrap() / (1u64 << len) as f64;
        let mut mean = 0.0;
        let seeds = 10;
        for seed in 0..seeds {
            let ds = sample_split(&d, &[len], cap, false, seed).unwrap();
            assert_eq!(ds.len(), cap);
            mean += ds.positives() as f64 / cap as f64;
        }
        mean /= seeds as f64;
        let se = (r * (1.0 - r) / (cap as f64 * seeds as f64)).sqrt();
        assert!(
            (mean - r).abs() <= 3.0 * se,
            "mean {mean:.4} vs rate {r:.4} (se {se:.5})"
        );
    }

    #[test]
    fn tomita_protocol_length_profile() {
        let d = build_tomita(3).unwrap();
        let (train, test) = tomita_protocol(&d, 7).unwrap();
        assert!(train.items.iter().all(|(w, _)| {
            let l = w.len();
            l <= 13 || l == 16 || l == 19 || l == 22
        }));
        let test_lengths: HashSet<usize> = test.items.iter().map(|(w, _)| w.len()).collect();
        let allowed: HashSet<usize> = (1..=28).step_by(3).collect();
        assert!(test_lengths.is_subset(&allowed));
        for &l in &allowed {
            let at_l = test.items.iter().filter(|(w, _)| w.len() == l).count();
            assert!(at_l <= 1000, "length {l} has {at_l} items");
        }
        // overlap removed
        let train_words: HashSet<_> = train.items.iter().map(|(w, _)| w).collect();
        assert!(test.items.iter().all(|(w, _)| !train_words.contains(w)));
    }

    #[test]
    fn slsp_protocol_sizes_and_lengths() {
        let (pats, al) = sl4_benchmark();
        let d = crate::automata::build_sl(&pats, &al).unwrap();
        let (train, t1, t2) = slsp_protocol(&d, 3, true).unwrap();
        assert_eq!(train.len(), 10_000);
        assert_eq!(t1.len(), 2000);
        assert_eq!(t2.len(), 2000);
        assert!(train.items.iter().all(|(w, _)| (1..=25).contains(&w.len())));
        assert!(t2.items.iter().all(|(w, _)| (26..=50).contains(&w.len())));
        let train_words: HashSet<_> = train.items.iter().map(|(w, _)| w).collect();
        assert!(t1.items.iter().all(|(w, _)| !train_words.contains(w)));
    }

    #[test]
    fn sparse_protocol_ratio_and_scaling() {
        let al = Alphabet::from_chars("abcd").unwrap();
        let d = crate::automata::build_random(20, &al, 0.3, 11).unwrap();
        let (train_full, test_full) = sparse_protocol(&d, 1.0, 5).unwrap();
        let total = train_full.len() + test_full.len();
        assert_eq!(total, 20_000);
        let ratio = train_full.len() as f64 / test_full.len() as f64;
        assert!((ratio - 4.0).abs() < 0.01, "ratio {ratio}");

        let (train_8th, test_8th) = sparse_protocol(&d, 0.125, 5).unwrap();
        assert_eq!(train_8th.len() + test_8th.len(), 2500);

        let train_words: HashSet<_> = train_full.items.iter().map(|(w, _)| w).collect();
        assert!(test_full.items.iter().all(|(w, _)| !train_words.contains(w)));

        assert!(sparse_protocol(&d, 0.3, 5).is_err());
    }

    #[test]
    fn dataset_file_round_trip() {
        let d = build_tomita(2).unwrap();
        let mut ds = sample_split(&d, &[0, 1, 2, 5], 50, true, 1).unwrap();
        ds.meta.dfa_ref = Some("tomita2.dfa".into());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t2.ds");
        write_dataset(&ds, &path).unwrap();
        let back = read_dataset(&path).unwrap();
        assert_eq!(back.items, ds.items);
        assert_eq!(back.alphabet, ds.alphabet);
        assert_eq!(back.meta.dfa_ref.as_deref(), Some("tomita2.dfa"));

        // identical seeds write identical bytes
        let ds2 = sample_split(&d, &[0, 1, 2, 5], 50, true, 1).unwrap();
        let path2 = dir.path().join("t2b.ds");
        let mut ds2 = ds2;
        ds2.meta.dfa_ref = Some("tomita2.dfa".into());
        write_dataset(&ds2, &path2).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&path2).unwrap()
        );
    }

    #[test]
    fn dataset_parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.ds");
        std::fs::write(&path, "dataset v1\nalphabet 0 1\ndfa -\n1\t01\n0\t0x1\n").unwrap();
        match read_dataset(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
