//! Grammar complexity, measured two independent ways: exact counting of
//! accepted strings per length (data-driven entropy), and the spectrum of the
//! summed transition matrix of the minimal DFA. The two classifiers are
//! cross-validated against each other in the test suite.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

use crate::automata::{absorbing_count, Dfa};
use crate::eigen::eigen_moduli as eigen_moduli_f64;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Exact accepted-string counts per length, `counts[N]` for N in `0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountCurve {
    alphabet_size: usize,
    counts: Vec<BigUint>,
}

impl CountCurve {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn max_len(&self) -> usize {
        self.counts.len() - 1
    }

    /// m_p(N)
    pub fn count(&self, n: usize) -> &BigUint {
        &self.counts[n]
    }

    /// I^N
    pub fn total(&self, n: usize) -> BigUint {
        BigUint::from(self.alphabet_size).pow(n as u32)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().enumerate()
    }
}

/// Number of length-`n` strings the DFA accepts, exactly. One pass of the
/// count vector `v <- T v` per symbol position, in integer arithmetic.
pub fn count_accepted(dfa: &Dfa, n: usize) -> BigUint {
    count_curve(dfa, n).counts.swap_remove(n)
}

/// Accepted-string counts for every length up to `n_max`.
pub fn count_curve(dfa: &Dfa, n_max: usize) -> CountCurve {
    let tm = dfa.transition_matrices();
    let t = &tm.summed;
    let n_states = dfa.state_count();
    let mut v: Vec<BigUint> = vec![BigUint::zero(); n_states];
    v[dfa.start()] = BigUint::from(1u32);

    let tally = |v: &[BigUint]| -> BigUint { dfa.accepting_states().map(|s| v[s].clone()).sum() };

    let mut counts = Vec::with_capacity(n_max + 1);
    counts.push(tally(&v));
    for _ in 0..n_max {
        let mut next = vec![BigUint::zero(); n_states];
        for (r, slot) in next.iter_mut().enumerate() {
            for c in 0..n_states {
                let k = t.get(r, c);
                if k > 0 {
                    *slot += &v[c] * (k as u64);
                }
            }
        }
        v = next;
        counts.push(tally(&v));
    }
    CountCurve {
        alphabet_size: dfa.alphabet().size(),
        counts,
    }
}

/// Independent counting oracle: walks every length-`n` string explicitly (an
/// odometer over symbol indices, one `accepts_word` run each). Guarded so the
/// enumeration stays desk-scale.
pub fn count_accepted_bruteforce(dfa: &Dfa, n: usize) -> Result<BigUint> {
    let i = dfa.alphabet().size();
    if n > 20 || (i as f64).powi(n as i32) > (1u64 << 26) as f64 {
        return Err(Error::invalid(format!(
            "brute-force enumeration refused: {i}^{n} strings is too many"
        )));
    }
    if n == 0 {
        return Ok(BigUint::from(u32::from(dfa.accepts_word(&[]))));
    }
    let mut word = vec![0u8; n];
    let mut hits: u64 = 0;
    loop {
        if dfa.accepts_word(&word) {
            hits += 1;
        }
        // lexicographic odometer
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(BigUint::from(hits));
            }
            pos -= 1;
            if (word[pos] as usize) + 1 < i {
                word[pos] += 1;
                for w in &mut word[pos + 1..] {
                    *w = 0;
                }
                break;
            }
        }
    }
}

/// log2 of an arbitrary-precision integer, exact to f64 precision at any
/// magnitude. Zero maps to -inf.
fn log2_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("fits f64 range").log2()
    } else {
        let shift = bits - 53;
        let top = (x >> shift).to_f64().expect("53 bits fit");
        top.log2() + shift as f64
    }
}

/// Expected number of label boundaries between lexicographically adjacent
/// length-`n` strings: `2 * m_p * m_n / I^n`. Log-space rescaling keeps large
/// `n` finite wherever the value itself fits an f64.
pub fn expected_flips(m_p: &BigUint, n: usize, i: usize) -> Result<f64> {
    if i < 2 {
        return Err(Error::invalid("alphabet size must be at least 2"));
    }
    let total = BigUint::from(i).pow(n as u32);
    if m_p > &total {
        return Err(Error::invalid("m_p exceeds the number of strings"));
    }
    let m_n = &total - m_p;
    let num: BigUint = (m_p * &m_n) << 1u32;
    if num.is_zero() {
        return Ok(0.0);
    }
    match (num.to_f64(), total.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => Ok(a / b),
        _ => Ok((log2_big(&num) - log2_big(&total)).exp2()),
    }
}

/// Per-length entropy H^N = (1/N) log_I E[F_N]; None where the length is
/// degenerate (m_p is 0 or I^N) or N = 0.
pub fn entropy_point(m_p: &BigUint, n: usize, i: usize) -> Result<Option<f64>> {
    let total = BigUint::from(i).pow(n as u32);
    if m_p > &total {
        return Err(Error::invalid("m_p exceeds the number of strings"));
    }
    if n == 0 || m_p.is_zero() || *m_p == total {
        return Ok(None);
    }
    let m_n = &total - m_p;
    // log2 E[F] = 1 + log2 m_p + log2 m_n - N log2 I
    let log2_e = 1.0 + log2_big(m_p) + log2_big(&m_n) - log2_big(&total);
    Ok(Some(log2_e / ((i as f64).log2() * n as f64)))
}

/// Count curve plus the entropy value at every length.
pub fn entropy_curve(dfa: &Dfa, n_max: usize) -> Result<(CountCurve, Vec<Option<f64>>)> {
    if n_max < 2 {
        return Err(Error::invalid("n_max must be at least 2"));
    }
    let curve = count_curve(dfa, n_max);
    let i = curve.alphabet_size;
    let h = curve
        .counts
        .iter()
        .enumerate()
        .map(|(n, m_p)| entropy_point(m_p, n, i))
        .collect::<Result<Vec<_>>>()?;
    Ok((curve, h))
}

/// The three-way grammar classification by accepted-count growth, plus the
/// degenerate bucket for empty/universal languages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrammarClass {
    Polynomial,
    Exponential { base: f64 },
    Proportional,
    Degenerate,
}

impl GrammarClass {
    pub fn name(&self) -> &'static str {
        match self {
            GrammarClass::Polynomial => "polynomial",
            GrammarClass::Exponential { .. } => "exponential",
            GrammarClass::Proportional => "proportional",
            GrammarClass::Degenerate => "degenerate",
        }
    }

    /// Class identity ignoring the exponential base.
    pub fn same_class(&self, other: &GrammarClass) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }

    /// The entropy value the class pins down, when it pins one down.
    pub fn entropy(&self, alphabet_size: usize) -> Option<f64> {
        match self {
            GrammarClass::Polynomial => Some(0.0),
            GrammarClass::Exponential { base } => Some(base.log2() / (alphabet_size as f64).log2()),
            GrammarClass::Proportional => Some(1.0),
            GrammarClass::Degenerate => None,
        }
    }
}

impl std::fmt::Display for GrammarClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GrammarClass::Exponential { base } => write!(f, "exponential(base {base:.6})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Growth-rate classifier over two anchor lengths.
///
/// The headline statistic is the two-point slope of log_I m_p. Slopes below
/// 0.05 are polynomial, above 0.95 proportional. In between, polynomial and
/// exponential growth are separated by how the slope moves across the two
/// half-windows: a pure power of N decays its log-slope by
/// log(N2/mid)/log(mid/N1) per half (prefactor-free), while geometric growth
/// holds it constant.
pub fn classify_empirical(curve: &CountCurve, n1: usize, n2: usize) -> Result<GrammarClass> {
    if !(n2 > n1 && n1 >= 8) {
        return Err(Error::invalid("need N2 > N1 >= 8"));
    }
    if n2 > curve.max_len() {
        return Err(Error::invalid("curve does not extend to N2"));
    }
    let i = curve.alphabet_size;
    let m1 = curve.count(n1);
    let m2 = curve.count(n2);
    let degenerate = |m: &BigUint, n: usize| m.is_zero() || *m == curve.total(n);
    if degenerate(m1, n1) && degenerate(m2, n2) {
        return Ok(GrammarClass::Degenerate);
    }
    if m1.is_zero() {
        return Err(Error::invalid("m_p(N1) must be positive"));
    }
    if m2.is_zero() {
        // oscillating acceptance collapsed to zero at N2
        return Ok(GrammarClass::Degenerate);
    }

    let log_i = (i as f64).log2();
    let slope = |na: usize, nb: usize| -> f64 {
        (log2_big(curve.count(nb)) - log2_big(curve.count(na))) / (log_i * (nb - na) as f64)
    };
    let b_hat = slope(n1, n2);
    if b_hat < 0.05 {
        return Ok(GrammarClass::Polynomial);
    }
    if b_hat > 0.95 {
        return Ok(GrammarClass::Proportional);
    }

    // pick an interior anchor with positive count, matching parity preferred
    let mid = (n1 + n2) / 2;
    let interior = [mid, mid.wrapping_sub(1), mid + 1]
        .into_iter()
        .find(|&m| m > n1 && m < n2 && !curve.count(m).is_zero());
    if let Some(mid) = interior {
        let first = slope(n1, mid);
        let second = slope(mid, n2);
        if first > 0.0 && second / first < 0.85 {
            return Ok(GrammarClass::Polynomial);
        }
    }
    Ok(GrammarClass::Exponential {
        base: (i as f64).powf(b_hat),
    })
}

/// Eigenvalue moduli of an integer matrix, sorted descending.
pub fn eigen_moduli(t: &IntMatrix) -> Result<Vec<f64>> {
    eigen_moduli_f64(&t.to_f64())
}

/// Outcome of the spectral classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub class: GrammarClass,
    /// In [0, 1]; None marks the degenerate case.
    pub entropy: Option<f64>,
    pub moduli: Vec<f64>,
    pub absorbing: usize,
}

const MODULUS_TOL: f64 = 1e-8;

/// Classifies a grammar from the spectrum of its minimal DFA's summed
/// transition matrix (the automaton is minimized internally).
///
/// The exact statement covers binary alphabets; `generalized` opts in to the
/// base-I reading (absorbing diagonal = I, modulus set {1, I}, entropy
/// log_I), which is validated only empirically against the counting
/// classifier.
pub fn classify_spectral(dfa: &Dfa, generalized: bool) -> Result<SpectralReport> {
    let i = dfa.alphabet().size();
    if i != 2 && !generalized {
        return Err(Error::invalid(format!(
            "spectral classification is exact for binary alphabets; pass --generalized for I = {i}"
        )));
    }
    let m = dfa.minimize();
    let tm = m.transition_matrices();
    let k = absorbing_count(&tm);
    let moduli = eigen_moduli(&tm.summed)?;
    let perron = i as f64;

    let near = |x: f64, target: f64| (x - target).abs() <= MODULUS_TOL;
    let (class, entropy) = match k {
        0 | 2 => (GrammarClass::Proportional, Some(1.0)),
        1 => {
            let in_set = moduli.iter().all(|&x| near(x, 1.0) || near(x, perron));
            let has_one = moduli.iter().any(|&x| near(x, 1.0));
            let has_perron = moduli.iter().any(|&x| near(x, perron));
            if in_set && has_one && has_perron {
                (GrammarClass::Polynomial, Some(0.0))
            } else {
                match moduli.get(1) {
                    Some(&l2) if l2 > 1.0 + MODULUS_TOL => (
                        GrammarClass::Exponential { base: l2 },
                        Some(l2.log2() / perron.log2()),
                    ),
                    Some(_) => (GrammarClass::Polynomial, Some(0.0)),
                    None => (GrammarClass::Degenerate, None),
                }
            }
        }
        _ => {
            return Err(Error::Numerical(format!(
                "{k} absorbing states survived minimization; equivalent sinks should have merged"
            )))
        }
    };
    Ok(SpectralReport {
        class,
        entropy,
        moduli,
        absorbing: k,
    })
}

/// k-class generalization of the entropy: `E[F_N] = I^N - (1/I^N) sum m_i^2`,
/// reported as `(1/N) log_I E[F_N]`. None when the expectation vanishes.
pub fn entropy_kclass(counts: &[BigUint], n: usize, i: usize) -> Result<Option<f64>> {
    if counts.len() < 2 {
        return Err(Error::invalid("need at least two classes"));
    }
    let total = BigUint::from(i).pow(n as u32);
    let sum: BigUint = counts.iter().sum();
    if sum != total {
        return Err(Error::invalid(format!(
            "class counts sum to {sum}, expected {total}"
        )));
    }
    let sum_sq: BigUint = counts.iter().map(|m| m * m).sum();
    let num = &total * &total - sum_sq; // I^N * E[F_N]
    if num.is_zero() {
        return Ok(None);
    }
    let log2_e = log2_big(&num) - log2_big(&total);
    Ok(Some(log2_e / ((i as f64).log2() * n as f64)))
}

/// Acceptance bitmaps per length, strings in lexicographic order. Refused
/// when the enumeration would leave desk scale.
pub fn ring_data(dfa: &Dfa, n_max: usize) -> Result<Vec<Vec<bool>>> {
    let i = dfa.alphabet().size();
    if n_max > 16 || (i as f64).powi(n_max as i32) > (1u64 << 24) as f64 {
        return Err(Error::invalid(format!(
            "ring data refused: {i}^{n_max} strings per ring is too many"
        )));
    }
    let mut rings = Vec::with_capacity(n_max + 1);
    // breadth-first in symbol order *is* lexicographic order per ring
    let mut frontier = vec![dfa.start()];
    rings.push(vec![dfa.is_accepting(dfa.start())]);
    for _ in 1..=n_max {
        let mut next = Vec::with_capacity(frontier.len() * i);
        for &state in &frontier {
            for sym in 0..i {
                next.push(dfa.step(state, sym));
            }
        }
        rings.push(next.iter().map(|&s| dfa.is_accepting(s)).collect());
        frontier = next;
    }
    Ok(rings)
}

/// CSV rendering of [`ring_data`]: `N,bits` with one 0/1 character per
/// string.
pub fn rings_to_csv(rings: &[Vec<bool>]) -> String {
    let mut out = String::from("N,bits\n");
    for (n, ring) in rings.iter().enumerate() {
        let bits: String = ring.iter().map(|&b| if b { '1' } else { '0' }).collect();
        out.push_str(&format!("{n},{bits}\n"));
    }
    out
}

/// Everything the `entropy` CLI emits: the exact curve, per-length entropy,
/// both classifications, and the spectrum.
#[derive(Debug, Clone)]
pub struct EntropyReport {
    pub curve: CountCurve,
    pub h: Vec<Option<f64>>,
    pub empirical_class: GrammarClass,
    /// lim sup estimate: max of H^N over the last ceil(n_max/4) defined lengths.
    pub empirical_entropy: Option<f64>,
    pub spectral: Option<SpectralReport>,
}

pub fn entropy_report(
    dfa: &Dfa,
    n_max: usize,
    n1: usize,
    n2: usize,
    generalized: bool,
) -> Result<EntropyReport> {
    let (curve, h) = entropy_curve(dfa, n_max)?;
    let empirical_class = classify_empirical(&curve, n1, n2)?;
    let defined: Vec<f64> = h.iter().flatten().copied().collect();
    let window = n_max.div_ceil(4).max(1);
    let empirical_entropy = defined
        .iter()
        .rev()
        .take(window)
        .copied()
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    let spectral = if dfa.alphabet().size() == 2 || generalized {
        Some(classify_spectral(dfa, generalized)?)
    } else {
        None
    };
    Ok(EntropyReport {
        curve,
        h,
        empirical_class,
        empirical_entropy,
        spectral,
    })
}

impl EntropyReport {
    pub fn to_json(&self) -> serde_json::Value {
        let curve: Vec<serde_json::Value> = self
            .curve
            .iter()
            .map(|(n, m_p)| {
                json!({
                    "N": n,
                    "m_p": m_p.to_string(),
                    "hN": self.h[n],
                })
            })
            .collect();
        let class = self
            .spectral
            .as_ref()
            .map(|s| s.class)
            .unwrap_or(self.empirical_class);
        json!({
            "class": class.name(),
            "spectral_entropy": self.spectral.as_ref().and_then(|s| s.entropy),
            "lambda_moduli": self.spectral.as_ref().map(|s| s.moduli.clone()).unwrap_or_default(),
            "curve": curve,
            "class_empirical": self.empirical_class.name(),
            "empirical_entropy": self.empirical_entropy,
        })
    }
}
